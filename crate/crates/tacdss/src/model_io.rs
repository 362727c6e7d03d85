//! Model documents (JSON), datasets and training traces (CSV).
//!
//! The exact grammars are documented in `docs/formats.md`.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use tacdss_core::domain::{FACTOR_NAMES, OUTPUT_NAME};
use tacdss_core::{
    Aggregation, Defuzzifier, FuzzyRule, FuzzySystem, Implication, InferenceConfig, LinguisticVariable, TNorm,
    TrainingSample, WeightMode,
};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format_version: u32,
    pub inputs: Vec<VariableDoc>,
    pub output: VariableDoc,
    pub rules: Vec<RuleDoc>,
    pub inference: InferenceDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDoc {
    pub name: String,
    pub domain_min: f64,
    pub domain_max: f64,
    pub centers: Vec<f64>,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    pub antecedent: Vec<usize>,
    pub consequent: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TNormDoc {
    Min,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AggregationDoc {
    Max,
    WeightedSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DefuzzifierDoc {
    Centroid { resolution: usize },
    CenterAverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightModeDoc {
    ScaleFiring,
    Ignore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InferenceDoc {
    pub tnorm: TNormDoc,
    pub implication: TNormDoc,
    pub aggregation: AggregationDoc,
    pub defuzzifier: DefuzzifierDoc,
    pub weight_mode: WeightModeDoc,
}

impl From<&LinguisticVariable> for VariableDoc {
    fn from(v: &LinguisticVariable) -> Self {
        Self {
            name: v.name().to_string(),
            domain_min: v.domain_min(),
            domain_max: v.domain_max(),
            centers: v.centers().to_vec(),
            labels: v.labels().to_vec(),
        }
    }
}

impl VariableDoc {
    fn to_variable(&self) -> Result<LinguisticVariable> {
        LinguisticVariable::new(
            self.name.clone(),
            self.domain_min,
            self.domain_max,
            self.centers.clone(),
            self.labels.clone(),
        )
        .map_err(Error::InvalidModel)
    }
}

impl From<&InferenceConfig> for InferenceDoc {
    fn from(c: &InferenceConfig) -> Self {
        Self {
            tnorm: match c.tnorm {
                TNorm::Min => TNormDoc::Min,
                TNorm::Product => TNormDoc::Product,
            },
            implication: match c.implication {
                Implication::Min => TNormDoc::Min,
                Implication::Product => TNormDoc::Product,
            },
            aggregation: match c.aggregation {
                Aggregation::Max => AggregationDoc::Max,
                Aggregation::WeightedSum => AggregationDoc::WeightedSum,
            },
            defuzzifier: match c.defuzzifier {
                Defuzzifier::Centroid { resolution } => DefuzzifierDoc::Centroid { resolution },
                Defuzzifier::CenterAverage => DefuzzifierDoc::CenterAverage,
            },
            weight_mode: match c.weight_mode {
                WeightMode::ScaleFiring => WeightModeDoc::ScaleFiring,
                WeightMode::Ignore => WeightModeDoc::Ignore,
            },
        }
    }
}

impl From<&InferenceDoc> for InferenceConfig {
    fn from(d: &InferenceDoc) -> Self {
        Self {
            tnorm: match d.tnorm {
                TNormDoc::Min => TNorm::Min,
                TNormDoc::Product => TNorm::Product,
            },
            implication: match d.implication {
                TNormDoc::Min => Implication::Min,
                TNormDoc::Product => Implication::Product,
            },
            aggregation: match d.aggregation {
                AggregationDoc::Max => Aggregation::Max,
                AggregationDoc::WeightedSum => Aggregation::WeightedSum,
            },
            defuzzifier: match d.defuzzifier {
                DefuzzifierDoc::Centroid { resolution } => Defuzzifier::Centroid { resolution },
                DefuzzifierDoc::CenterAverage => Defuzzifier::CenterAverage,
            },
            weight_mode: match d.weight_mode {
                WeightModeDoc::ScaleFiring => WeightMode::ScaleFiring,
                WeightModeDoc::Ignore => WeightMode::Ignore,
            },
        }
    }
}

impl From<&FuzzySystem> for ModelFile {
    fn from(s: &FuzzySystem) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            inputs: s.inputs().iter().map(VariableDoc::from).collect(),
            output: s.output().into(),
            rules: s
                .rules()
                .iter()
                .map(|r| RuleDoc {
                    antecedent: r.antecedent.clone(),
                    consequent: r.consequent,
                    weight: r.weight,
                })
                .collect(),
            inference: s.config().into(),
        }
    }
}

impl ModelFile {
    pub fn to_system(&self) -> Result<FuzzySystem> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(self.format_version));
        }
        let inputs = self
            .inputs
            .iter()
            .map(VariableDoc::to_variable)
            .collect::<Result<Vec<_>>>()?;
        let output = self.output.to_variable()?;
        let rules = self
            .rules
            .iter()
            .map(|r| FuzzyRule::new(r.antecedent.clone(), r.consequent, r.weight))
            .collect();
        FuzzySystem::new(inputs, output, rules, (&self.inference).into()).map_err(Error::InvalidModel)
    }
}

/// Canonical text of a model: pretty-printed JSON with a trailing newline.
/// Rules are written in lexicographic antecedent order.
pub fn model_to_string(system: &FuzzySystem) -> String {
    let mut doc = ModelFile::from(system);
    doc.rules.sort_by(|a, b| a.antecedent.cmp(&b.antecedent));
    let mut text = serde_json::to_string_pretty(&doc).expect("model documents always serialize");
    text.push('\n');
    text
}

pub fn model_from_str(text: &str) -> Result<FuzzySystem> {
    let doc: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.to_system()
}

pub fn save_model(system: &FuzzySystem, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_string(system)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<FuzzySystem> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text)
}

/// Header line of dataset files.
pub fn dataset_header() -> String {
    let mut cols: Vec<&str> = FACTOR_NAMES.to_vec();
    cols.push(OUTPUT_NAME);
    cols.join(",")
}

const DATASET_COLUMNS: usize = FACTOR_NAMES.len() + 1;

pub fn write_dataset_to<W: Write>(data: &[TrainingSample], out: W) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(out);
    writeln!(w, "{}", dataset_header())?;
    for s in data {
        let mut cells: Vec<String> = s.inputs.iter().map(|v| format!("{v:?}")).collect();
        cells.push(format!("{:?}", s.target));
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

pub fn write_dataset(data: &[TrainingSample], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_dataset_to(data, file).map_err(|e| Error::io(path, e))
}

/// Parses a dataset. Rows are numbered from 1, counting data rows only.
pub fn read_dataset_from<R: Read>(input: R) -> Result<Vec<TrainingSample>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader
        .headers()
        .map_err(|e| Error::DatasetHeader(e.to_string()))?
        .clone();
    if header.is_empty() || header.iter().all(str::is_empty) {
        return Err(Error::DatasetHeader("missing header row".into()));
    }
    if header.len() != DATASET_COLUMNS {
        return Err(Error::DatasetHeader(format!(
            "header has {} columns, expected {DATASET_COLUMNS}",
            header.len()
        )));
    }
    if header.iter().any(|h| h.parse::<f64>().is_ok()) {
        return Err(Error::DatasetHeader("first line is numeric; a header row is required".into()));
    }

    let mut data = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Dataset {
            row,
            message: e.to_string(),
        })?;
        if record.len() != DATASET_COLUMNS {
            return Err(Error::Dataset {
                row,
                message: format!("expected {DATASET_COLUMNS} columns, found {}", record.len()),
            });
        }
        let mut values = Vec::with_capacity(DATASET_COLUMNS);
        for (col, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Dataset {
                row,
                message: format!("column `{}` is not a number: {cell:?}", &header[col]),
            })?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Dataset {
                    row,
                    message: format!("column `{}` value {v} is outside [0, 1]", &header[col]),
                });
            }
            values.push(v);
        }
        let target = values.pop().expect("five columns");
        data.push(TrainingSample::new(values, target));
    }
    Ok(data)
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<Vec<TrainingSample>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_dataset_from(file)
}

pub fn write_trace_to<W: Write>(rows: &[(usize, f64)], out: W) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(out);
    writeln!(w, "step,rmse")?;
    for (step, rmse) in rows {
        writeln!(w, "{step},{rmse:?}")?;
    }
    w.flush()
}

/// Two-column `step,rmse` file, one row per epoch or generation.
pub fn write_trace(rows: &[(usize, f64)], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_trace_to(rows, file).map_err(|e| Error::io(path, e))
}
