//! Tactical air-combat decision factors.
//!
//! Four factors drive the decision score: fuel available to perform the
//! intercept, time needed to reach the hostile, weapon status and the danger
//! level of the situation. Models work on factors normalized to `[0, 1]`.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::inference::TrainingSample;
use crate::system::{InferenceConfig, Skeleton};
use crate::variable::LinguisticVariable;

pub const FUEL_LITRES_MAX: f64 = 1000.0;
pub const INTERRUPT_MINUTES_MAX: f64 = 60.0;
pub const WEAPON_PERCENT_MAX: f64 = 100.0;
pub const DANGER_POINTS_MAX: f64 = 10.0;

/// Input variable names, in model input order.
pub const FACTOR_NAMES: [&str; 4] = ["fuel", "time", "weapon", "danger"];
pub const OUTPUT_NAME: &str = "score";

/// Raw factor readings in operator units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionFactors {
    pub fuel_litres: f64,
    pub interrupt_minutes: f64,
    pub weapon_percent: f64,
    pub danger_points: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedFactors {
    pub fuel: f64,
    pub time: f64,
    pub weapon: f64,
    pub danger: f64,
}

fn check_range(field: &'static str, value: f64, max: f64) -> Result<()> {
    if (0.0..=max).contains(&value) {
        Ok(())
    } else {
        Err(Error::FactorOutOfRange {
            field,
            value,
            min: 0.0,
            max,
        })
    }
}

impl DecisionFactors {
    pub fn validate(&self) -> Result<()> {
        check_range("fuel", self.fuel_litres, FUEL_LITRES_MAX)?;
        check_range("time", self.interrupt_minutes, INTERRUPT_MINUTES_MAX)?;
        check_range("weapon", self.weapon_percent, WEAPON_PERCENT_MAX)?;
        check_range("danger", self.danger_points, DANGER_POINTS_MAX)
    }
}

impl NormalizedFactors {
    pub fn new(fuel: f64, time: f64, weapon: f64, danger: f64) -> Result<Self> {
        let n = Self {
            fuel,
            time,
            weapon,
            danger,
        };
        n.validate()?;
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in FACTOR_NAMES.iter().zip(self.to_array()) {
            check_range(field, v, 1.0)?;
        }
        Ok(())
    }

    /// Builds from a slice in model input order.
    pub fn from_slice(values: &[f64]) -> Result<Self> {
        match values {
            &[fuel, time, weapon, danger] => Self::new(fuel, time, weapon, danger),
            _ => Err(Error::DimensionMismatch {
                expected: 4,
                found: values.len(),
            }),
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.fuel, self.time, self.weapon, self.danger]
    }
}

/// Linear map of each factor onto `[0, 1]` by its unit range.
pub fn normalize(f: &DecisionFactors) -> Result<NormalizedFactors> {
    f.validate()?;
    Ok(NormalizedFactors {
        fuel: f.fuel_litres / FUEL_LITRES_MAX,
        time: f.interrupt_minutes / INTERRUPT_MINUTES_MAX,
        weapon: f.weapon_percent / WEAPON_PERCENT_MAX,
        danger: f.danger_points / DANGER_POINTS_MAX,
    })
}

pub fn denormalize(n: &NormalizedFactors) -> Result<DecisionFactors> {
    n.validate()?;
    Ok(DecisionFactors {
        fuel_litres: n.fuel * FUEL_LITRES_MAX,
        interrupt_minutes: n.time * INTERRUPT_MINUTES_MAX,
        weapon_percent: n.weapon * WEAPON_PERCENT_MAX,
        danger_points: n.danger * DANGER_POINTS_MAX,
    })
}

/// Crisp stand-in for expert judgement: high fuel and weapons raise the
/// score, long intercept times and danger lower it, all with equal weight.
pub fn expert_score(n: &NormalizedFactors) -> f64 {
    let s = (n.fuel + (1.0 - n.time) + n.weapon + (1.0 - n.danger)) / 4.0;
    s.clamp(0.0, 1.0)
}

/// `n` samples with inputs uniform in `[0, 1]^4` and targets equal to the
/// expert score plus clamped Gaussian noise. Deterministic per seed.
pub fn generate_dataset(n: usize, noise_sigma: f64, seed: u64) -> Result<Vec<TrainingSample>> {
    if n == 0 {
        return Err(Error::Config("dataset size must be at least 1".into()));
    }
    let bad_sigma = || Error::Config(alloc::format!("noise sigma {noise_sigma} must be finite and non-negative"));
    if !(noise_sigma.is_finite() && noise_sigma >= 0.0) {
        return Err(bad_sigma());
    }
    let noise = Normal::new(0.0, noise_sigma).map_err(|_| bad_sigma())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(n);
    for _ in 0..n {
        let x: [f64; 4] = [rng.random(), rng.random(), rng.random(), rng.random()];
        let score = expert_score(&NormalizedFactors {
            fuel: x[0],
            time: x[1],
            weapon: x[2],
            danger: x[3],
        });
        let target = (score + noise.sample(&mut rng)).clamp(0.0, 1.0);
        data.push(TrainingSample::new(x.to_vec(), target));
    }
    Ok(data)
}

/// Operator vocabulary for three-term partitions of each factor.
pub fn three_term_labels(factor: &str) -> Option<[&'static str; 3]> {
    match factor {
        "fuel" | "weapon" => Some(["empty", "half", "full"]),
        "time" => Some(["fast", "normal", "slow"]),
        "danger" => Some(["low", "medium", "high"]),
        _ => None,
    }
}

/// Variables for the four factors (normalized domains) and the score.
pub fn skeleton(input_mfs: &[usize], output_mfs: usize, config: InferenceConfig) -> Result<Skeleton> {
    if input_mfs.len() != FACTOR_NAMES.len() {
        return Err(Error::DimensionMismatch {
            expected: FACTOR_NAMES.len(),
            found: input_mfs.len(),
        });
    }
    let inputs = FACTOR_NAMES
        .iter()
        .zip(input_mfs)
        .map(|(name, &k)| {
            let v = LinguisticVariable::uniform(*name, 0.0, 1.0, k)?;
            match three_term_labels(name) {
                Some(labels) if k == 3 => LinguisticVariable::new(
                    *name,
                    0.0,
                    1.0,
                    v.centers().to_vec(),
                    labels.iter().map(|l| String::from(*l)).collect(),
                ),
                _ => Ok(v),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let output = LinguisticVariable::uniform(OUTPUT_NAME, 0.0, 1.0, output_mfs)?;
    Skeleton::new(inputs, output, config)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioPreset {
    pub name: &'static str,
    pub factors: NormalizedFactors,
    /// Score reported for the reference model. Informational only, never a
    /// training target.
    pub recorded_score: Option<f64>,
    /// Score an expert expected for this situation, when one was given.
    pub expected_score: Option<f64>,
}

pub fn presets() -> Vec<ScenarioPreset> {
    alloc::vec![
        ScenarioPreset {
            name: "bad",
            factors: NormalizedFactors {
                fuel: 0.05,
                time: 0.95,
                weapon: 0.05,
                danger: 0.95,
            },
            recorded_score: Some(0.416),
            expected_score: None,
        },
        ScenarioPreset {
            name: "good",
            factors: NormalizedFactors {
                fuel: 0.95,
                time: 0.05,
                weapon: 0.95,
                danger: 0.05,
            },
            recorded_score: Some(0.503),
            expected_score: None,
        },
        ScenarioPreset {
            name: "test",
            factors: NormalizedFactors {
                fuel: 0.938,
                time: 0.05167,
                weapon: 0.975,
                danger: 0.124,
            },
            recorded_score: Some(0.498),
            expected_score: Some(0.939),
        },
    ]
}
