//! Rule base, inference operators and the deployable [`FuzzySystem`].

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::variable::LinguisticVariable;

/// Smallest allowed centroid sample count.
pub const MIN_CENTROID_RESOLUTION: usize = 11;

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRule {
    pub antecedent: Vec<usize>,
    pub consequent: usize,
    pub weight: f64,
}

impl FuzzyRule {
    pub fn new(antecedent: Vec<usize>, consequent: usize, weight: f64) -> Self {
        Self {
            antecedent,
            consequent,
            weight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TNorm {
    Min,
    Product,
}

impl TNorm {
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            TNorm::Min => a.min(b),
            TNorm::Product => a * b,
        }
    }
}

/// How a rule's firing strength shapes its consequent set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Implication {
    /// Clip the consequent at the firing strength.
    Min,
    /// Scale the consequent by the firing strength.
    Product,
}

impl Implication {
    pub fn apply(self, firing: f64, degree: f64) -> f64 {
        match self {
            Implication::Min => firing.min(degree),
            Implication::Product => firing * degree,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    Max,
    WeightedSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defuzzifier {
    /// Center of gravity of the aggregated set, integrated with the
    /// trapezoidal rule over `resolution` uniform samples of the output
    /// domain.
    Centroid { resolution: usize },
    /// Firing-weighted mean of the consequent centers.
    CenterAverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Firing strength is multiplied by the rule weight.
    ScaleFiring,
    Ignore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InferenceConfig {
    pub tnorm: TNorm,
    pub implication: Implication,
    pub aggregation: Aggregation,
    pub defuzzifier: Defuzzifier,
    pub weight_mode: WeightMode,
}

impl InferenceConfig {
    /// min / min / max / centroid(201).
    pub fn classic() -> Self {
        Self {
            tnorm: TNorm::Min,
            implication: Implication::Min,
            aggregation: Aggregation::Max,
            defuzzifier: Defuzzifier::Centroid { resolution: 201 },
            weight_mode: WeightMode::ScaleFiring,
        }
    }

    /// product / product / weighted-sum / center-average. The crisp output
    /// is a closed-form differentiable function of every center.
    pub fn trainable() -> Self {
        Self {
            tnorm: TNorm::Product,
            implication: Implication::Product,
            aggregation: Aggregation::WeightedSum,
            defuzzifier: Defuzzifier::CenterAverage,
            weight_mode: WeightMode::ScaleFiring,
        }
    }

    /// Whether the crisp output is differentiable in the centers.
    ///
    /// Center-average ignores implication and aggregation, so only the
    /// t-norm and the defuzzifier matter here.
    pub fn is_differentiable(&self) -> bool {
        self.tnorm == TNorm::Product && self.defuzzifier == Defuzzifier::CenterAverage
    }

    pub fn validate(&self) -> Result<()> {
        if let Defuzzifier::Centroid { resolution } = self.defuzzifier {
            if resolution < MIN_CENTROID_RESOLUTION {
                return Err(Error::Config(format!(
                    "centroid resolution {resolution} is below the minimum of {MIN_CENTROID_RESOLUTION}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for InferenceConfig {
    fn default() -> Self {
        Self::classic()
    }
}

/// Variables, rules and operator configuration. Immutable once built;
/// modifications produce new systems.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySystem {
    inputs: Vec<LinguisticVariable>,
    output: LinguisticVariable,
    rules: Vec<FuzzyRule>,
    config: InferenceConfig,
}

impl FuzzySystem {
    pub fn new(
        inputs: Vec<LinguisticVariable>,
        output: LinguisticVariable,
        rules: Vec<FuzzyRule>,
        config: InferenceConfig,
    ) -> Result<Self> {
        let system = Self {
            inputs,
            output,
            rules,
            config,
        };
        system.validate()?;
        Ok(system)
    }

    fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if self.inputs.is_empty() {
            return Err(Error::Config("a system needs at least one input".into()));
        }
        if self.rules.is_empty() {
            return Err(Error::NoRules);
        }
        for (r, rule) in self.rules.iter().enumerate() {
            if rule.antecedent.len() != self.inputs.len() {
                return Err(Error::InvalidRule {
                    rule: r,
                    reason: format!(
                        "antecedent has {} terms for {} inputs",
                        rule.antecedent.len(),
                        self.inputs.len()
                    ),
                });
            }
            for (var, &idx) in self.inputs.iter().zip(&rule.antecedent) {
                if idx >= var.mf_count() {
                    return Err(Error::InvalidRule {
                        rule: r,
                        reason: format!("antecedent index {idx} is invalid for input `{}`", var.name()),
                    });
                }
            }
            if rule.consequent >= self.output.mf_count() {
                return Err(Error::InvalidRule {
                    rule: r,
                    reason: format!(
                        "consequent index {} is invalid for output `{}`",
                        rule.consequent,
                        self.output.name()
                    ),
                });
            }
            if !(rule.weight > 0.0 && rule.weight <= 1.0) {
                return Err(Error::InvalidRule {
                    rule: r,
                    reason: format!("weight {} is outside (0, 1]", rule.weight),
                });
            }
        }
        let mut order: Vec<usize> = (0..self.rules.len()).collect();
        order.sort_by(|&a, &b| self.rules[a].antecedent.cmp(&self.rules[b].antecedent).then(a.cmp(&b)));
        for w in order.windows(2) {
            if self.rules[w[0]].antecedent == self.rules[w[1]].antecedent {
                return Err(Error::DuplicateAntecedent {
                    first: w[0],
                    second: w[1],
                });
            }
        }
        Ok(())
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &LinguisticVariable {
        &self.output
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn config(&self) -> &InferenceConfig {
        &self.config
    }

    pub fn with_config(&self, config: InferenceConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            ..self.clone()
        })
    }

    pub fn with_rules(&self, rules: Vec<FuzzyRule>) -> Result<Self> {
        Self::new(self.inputs.clone(), self.output.clone(), rules, self.config)
    }

    /// Replaces every variable at once; rules and config are kept.
    pub fn with_variables(&self, inputs: Vec<LinguisticVariable>, output: LinguisticVariable) -> Result<Self> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.inputs.len(),
                found: inputs.len(),
            });
        }
        let counts_match = inputs.iter().zip(&self.inputs).all(|(a, b)| a.mf_count() == b.mf_count())
            && output.mf_count() == self.output.mf_count();
        if !counts_match {
            return Err(Error::Config("membership function counts must not change".into()));
        }
        Ok(Self {
            inputs,
            output,
            ..self.clone()
        })
    }

    /// Number of membership centers across all variables.
    pub fn center_count(&self) -> usize {
        self.inputs.iter().map(|v| v.mf_count()).sum::<usize>() + self.output.mf_count()
    }

    /// All centers in one vector: input variables in order, then the output.
    pub fn flat_centers(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.center_count());
        for v in self.inputs.iter().chain(core::iter::once(&self.output)) {
            out.extend_from_slice(v.centers());
        }
        out
    }

    /// Inverse of [`flat_centers`](Self::flat_centers). With `repair`, each
    /// variable's slice is projected back onto valid centers first;
    /// otherwise invalid slices are rejected.
    pub fn with_flat_centers(&self, genes: &[f64], repair: bool) -> Result<Self> {
        if genes.len() != self.center_count() {
            return Err(Error::LengthMismatch {
                expected: self.center_count(),
                found: genes.len(),
            });
        }
        let mut offset = 0;
        let mut rebuild = |v: &LinguisticVariable| {
            let slice = &genes[offset..offset + v.mf_count()];
            offset += v.mf_count();
            if repair {
                v.with_repaired_centers(slice)
            } else {
                v.with_centers(slice.to_vec())
            }
        };
        let inputs = self.inputs.iter().map(&mut rebuild).collect::<Result<Vec<_>>>()?;
        let output = rebuild(&self.output)?;
        Ok(Self {
            inputs,
            output,
            ..self.clone()
        })
    }

    /// Overwrites centers without validation. Only for probing the loss
    /// surface slightly outside the valid set (finite differences).
    pub(crate) fn with_flat_centers_unchecked(&self, genes: &[f64]) -> Self {
        let mut out = self.clone();
        let mut offset = 0;
        for v in out.inputs.iter_mut().chain(core::iter::once(&mut out.output)) {
            let n = v.mf_count();
            v.set_centers_unchecked(&genes[offset..offset + n]);
            offset += n;
        }
        out
    }
}

/// Variables and configuration without rules; the input to structure
/// learning.
#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    pub inputs: Vec<LinguisticVariable>,
    pub output: LinguisticVariable,
    pub config: InferenceConfig,
}

impl Skeleton {
    pub fn new(inputs: Vec<LinguisticVariable>, output: LinguisticVariable, config: InferenceConfig) -> Result<Self> {
        config.validate()?;
        if inputs.is_empty() {
            return Err(Error::Config("a system needs at least one input".into()));
        }
        Ok(Self { inputs, output, config })
    }

    pub fn with_rules(&self, rules: Vec<FuzzyRule>) -> Result<FuzzySystem> {
        FuzzySystem::new(self.inputs.clone(), self.output.clone(), rules, self.config)
    }
}

impl From<&FuzzySystem> for Skeleton {
    fn from(s: &FuzzySystem) -> Self {
        Self {
            inputs: s.inputs.clone(),
            output: s.output.clone(),
            config: s.config,
        }
    }
}
