//! Mamdani inference with a full explanation trace.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::system::{Aggregation, Defuzzifier, FuzzyRule, FuzzySystem, InferenceConfig, WeightMode};
use crate::variable::mf_degree;

/// One input vector with its desired crisp output.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSample {
    pub inputs: Vec<f64>,
    pub target: f64,
}

impl TrainingSample {
    pub fn new(inputs: Vec<f64>, target: f64) -> Self {
        Self { inputs, target }
    }
}

/// A consequent center and the firing strength it was averaged with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedCenter {
    pub rule: usize,
    pub firing: f64,
    pub center: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DefuzzDetail {
    /// Aggregated output set sampled on a uniform grid.
    Sampled { points: Vec<f64>, values: Vec<f64> },
    /// Terms of the center-average, one per rule with non-zero firing.
    CenterAverage { terms: Vec<WeightedCenter> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceTrace {
    /// `memberships[i][k]` is the degree of input `i` in its function `k`.
    pub memberships: Vec<Vec<f64>>,
    /// Firing strength per rule, in rule-base order.
    pub firings: Vec<f64>,
    pub crisp_output: f64,
    /// Set when nothing fired and the output midpoint was returned.
    pub fallback: bool,
    pub defuzz_detail: DefuzzDetail,
}

/// Degrees of every input component in every membership function of its
/// variable.
pub fn fuzzify(system: &FuzzySystem, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    check_inputs(system, x)?;
    system.inputs().iter().zip(x).map(|(var, &xi)| var.degrees(xi)).collect()
}

fn check_inputs(system: &FuzzySystem, x: &[f64]) -> Result<()> {
    if x.len() != system.inputs().len() {
        return Err(Error::DimensionMismatch {
            expected: system.inputs().len(),
            found: x.len(),
        });
    }
    for (var, &xi) in system.inputs().iter().zip(x) {
        var.check_value(xi)?;
    }
    Ok(())
}

/// T-norm over the rule's antecedent degrees, scaled by the rule weight
/// under [`WeightMode::ScaleFiring`].
pub fn fire_rule(rule: &FuzzyRule, memberships: &[Vec<f64>], config: &InferenceConfig) -> f64 {
    let strength = rule
        .antecedent
        .iter()
        .zip(memberships)
        .fold(1.0, |acc, (&k, degrees)| config.tnorm.apply(acc, degrees[k]));
    match config.weight_mode {
        WeightMode::ScaleFiring => strength * rule.weight,
        WeightMode::Ignore => strength,
    }
}

/// Crisp output and trace for one input vector.
pub fn infer(system: &FuzzySystem, x: &[f64]) -> Result<(f64, InferenceTrace)> {
    let memberships = fuzzify(system, x)?;
    let firings: Vec<f64> = system
        .rules()
        .iter()
        .map(|r| fire_rule(r, &memberships, system.config()))
        .collect();
    let (crisp, fallback, detail) = defuzzify(system, &firings);
    let trace = InferenceTrace {
        memberships,
        firings,
        crisp_output: crisp,
        fallback,
        defuzz_detail: detail,
    };
    Ok((crisp, trace))
}

/// Crisp output only. Produces exactly the value [`infer`] would.
pub fn evaluate(system: &FuzzySystem, x: &[f64]) -> Result<f64> {
    check_inputs(system, x)?;
    let config = system.config();
    let inputs = system.inputs();
    let mut firings = Vec::with_capacity(system.rules().len());
    for rule in system.rules() {
        let mut strength = 1.0;
        for ((var, &xi), &k) in inputs.iter().zip(x).zip(&rule.antecedent) {
            strength = config.tnorm.apply(strength, mf_degree(var.centers(), k, xi));
        }
        if config.weight_mode == WeightMode::ScaleFiring {
            strength *= rule.weight;
        }
        firings.push(strength);
    }
    Ok(crisp_from_firings(system, &firings).0)
}

/// Turns per-rule firing strengths into a crisp output. Returns the value,
/// whether the midpoint fallback was used, and the defuzzification detail.
pub fn defuzzify(system: &FuzzySystem, firings: &[f64]) -> (f64, bool, DefuzzDetail) {
    let output = system.output();
    match system.config().defuzzifier {
        Defuzzifier::CenterAverage => {
            let terms: Vec<WeightedCenter> = system
                .rules()
                .iter()
                .zip(firings)
                .enumerate()
                .filter(|(_, (_, &f))| f > 0.0)
                .map(|(rule, (r, &firing))| WeightedCenter {
                    rule,
                    firing,
                    center: output.centers()[r.consequent],
                })
                .collect();
            let (crisp, fallback) = crisp_from_firings(system, firings);
            (crisp, fallback, DefuzzDetail::CenterAverage { terms })
        }
        Defuzzifier::Centroid { resolution } => {
            let points = sample_points(output.domain_min(), output.domain_max(), resolution);
            let values: Vec<f64> = points.iter().map(|&y| aggregate_at(system, firings, y)).collect();
            let (crisp, fallback) = centroid(system, &points, &values);
            (crisp, fallback, DefuzzDetail::Sampled { points, values })
        }
    }
}

fn crisp_from_firings(system: &FuzzySystem, firings: &[f64]) -> (f64, bool) {
    let output = system.output();
    match system.config().defuzzifier {
        Defuzzifier::CenterAverage => {
            let mut num = 0.0;
            let mut den = 0.0;
            for (r, &f) in system.rules().iter().zip(firings) {
                num += f * output.centers()[r.consequent];
                den += f;
            }
            if den > 0.0 {
                (clamp_to(output, num / den), false)
            } else {
                (output.midpoint(), true)
            }
        }
        Defuzzifier::Centroid { resolution } => {
            let points = sample_points(output.domain_min(), output.domain_max(), resolution);
            let values: Vec<f64> = points.iter().map(|&y| aggregate_at(system, firings, y)).collect();
            centroid(system, &points, &values)
        }
    }
}

fn clamp_to(var: &crate::variable::LinguisticVariable, y: f64) -> f64 {
    y.clamp(var.domain_min(), var.domain_max())
}

fn sample_points(min: f64, max: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|j| if j == n - 1 { max } else { min + (max - min) * (j as f64) / last })
        .collect()
}

/// Aggregated output membership at `y`.
fn aggregate_at(system: &FuzzySystem, firings: &[f64], y: f64) -> f64 {
    let config = system.config();
    let centers = system.output().centers();
    let mut acc: f64 = 0.0;
    for (rule, &f) in system.rules().iter().zip(firings) {
        if f <= 0.0 {
            continue;
        }
        let v = config.implication.apply(f, mf_degree(centers, rule.consequent, y));
        acc = match config.aggregation {
            Aggregation::Max => acc.max(v),
            Aggregation::WeightedSum => acc + v,
        };
    }
    acc
}

/// Trapezoidal center of gravity over uniformly spaced samples.
fn centroid(system: &FuzzySystem, points: &[f64], values: &[f64]) -> (f64, bool) {
    let n = points.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, (&y, &m)) in points.iter().zip(values).enumerate() {
        let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        num += w * y * m;
        den += w * m;
    }
    let output = system.output();
    if den > 0.0 {
        (clamp_to(output, num / den), false)
    } else {
        (output.midpoint(), true)
    }
}

/// Root mean squared error of the crisp outputs against the targets.
pub fn rmse(system: &FuzzySystem, data: &[TrainingSample]) -> Result<f64> {
    Ok(libm::sqrt(sum_squared_error(system, data)? / data.len() as f64))
}

pub(crate) fn sum_squared_error(system: &FuzzySystem, data: &[TrainingSample]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut sse = 0.0;
    for sample in data {
        let e = sample.target - evaluate(system, &sample.inputs)?;
        sse += e * e;
    }
    Ok(sse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{Implication, TNorm};
    use crate::variable::LinguisticVariable;
    use alloc::vec;

    fn var(name: &str, centers: Vec<f64>) -> LinguisticVariable {
        LinguisticVariable::with_default_labels(name, 0.0, 1.0, centers).unwrap()
    }

    fn two_input(rules: Vec<FuzzyRule>, config: InferenceConfig) -> FuzzySystem {
        FuzzySystem::new(
            vec![var("a", vec![0.0, 0.5, 1.0]), var("b", vec![0.0, 0.5, 1.0])],
            var("y", vec![0.0, 0.5, 1.0]),
            rules,
            config,
        )
        .unwrap()
    }

    #[test]
    fn fire_rule_operators() {
        let rule = FuzzyRule::new(vec![0, 0], 0, 0.5);
        let m = vec![vec![0.8], vec![0.2]];
        let mut cfg = InferenceConfig::trainable();
        cfg.weight_mode = WeightMode::Ignore;
        assert!((fire_rule(&rule, &m, &cfg) - 0.16).abs() < 1e-15);
        cfg.tnorm = TNorm::Min;
        assert_eq!(fire_rule(&rule, &m, &cfg), 0.2);
        cfg.tnorm = TNorm::Product;
        cfg.weight_mode = WeightMode::ScaleFiring;
        assert!((fire_rule(&rule, &m, &cfg) - 0.08).abs() < 1e-15);
    }

    #[test]
    fn single_rule_centroid_is_center() {
        let s = two_input(vec![FuzzyRule::new(vec![1, 1], 1, 1.0)], InferenceConfig::classic());
        let (y, trace) = infer(&s, &[0.5, 0.5]).unwrap();
        assert_eq!(trace.firings, vec![1.0]);
        assert!((y - 0.5).abs() < 1e-12);
        assert!(!trace.fallback);
    }

    #[test]
    fn center_average_weighted_mean() {
        let out = var("y", vec![0.0, 0.2, 0.6, 1.0]);
        let s = FuzzySystem::new(
            vec![var("a", vec![0.0, 1.0])],
            out,
            vec![FuzzyRule::new(vec![0], 1, 1.0), FuzzyRule::new(vec![1], 2, 1.0)],
            InferenceConfig::trainable(),
        )
        .unwrap();
        let (y, trace) = infer(&s, &[0.75]).unwrap();
        assert_eq!(trace.firings, vec![0.25, 0.75]);
        assert!((y - 0.5).abs() < 1e-12);
        match trace.defuzz_detail {
            DefuzzDetail::CenterAverage { terms } => assert_eq!(terms.len(), 2),
            _ => panic!("expected center-average detail"),
        }
    }

    #[test]
    fn nothing_fired_falls_back_to_midpoint() {
        let s = two_input(vec![FuzzyRule::new(vec![0, 0], 2, 1.0)], InferenceConfig::classic());
        let (y, trace) = infer(&s, &[1.0, 1.0]).unwrap();
        assert_eq!(y, 0.5);
        assert!(trace.fallback);
        let s = s.with_config(InferenceConfig::trainable()).unwrap();
        let (y, trace) = infer(&s, &[1.0, 1.0]).unwrap();
        assert_eq!(y, 0.5);
        assert!(trace.fallback);
    }

    #[test]
    fn evaluate_matches_infer() {
        let rules = vec![
            FuzzyRule::new(vec![0, 1], 0, 0.7),
            FuzzyRule::new(vec![1, 1], 1, 0.9),
            FuzzyRule::new(vec![2, 0], 2, 0.4),
        ];
        for cfg in [InferenceConfig::classic(), InferenceConfig::trainable()] {
            let s = two_input(rules.clone(), cfg);
            for x in [[0.1, 0.3], [0.6, 0.2], [0.9, 0.9]] {
                assert_eq!(evaluate(&s, &x).unwrap(), infer(&s, &x).unwrap().0);
            }
        }
    }

    #[test]
    fn input_errors() {
        let s = two_input(vec![FuzzyRule::new(vec![0, 0], 0, 1.0)], InferenceConfig::classic());
        assert_eq!(
            fuzzify(&s, &[0.1]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        );
        assert!(matches!(infer(&s, &[0.1, -0.1]), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn rmse_examples() {
        let s = two_input(vec![FuzzyRule::new(vec![1, 1], 1, 1.0)], InferenceConfig::trainable());
        // Every prediction of this system is 0.5.
        let data = vec![TrainingSample::new(vec![0.5, 0.5], 0.5)];
        assert_eq!(rmse(&s, &data).unwrap(), 0.0);
        let data = vec![
            TrainingSample::new(vec![0.5, 0.5], 0.8),
            TrainingSample::new(vec![0.4, 0.6], 0.1),
        ];
        assert!((rmse(&s, &data).unwrap() - libm::sqrt((0.09 + 0.16) / 2.0)).abs() < 1e-12);
        assert_eq!(rmse(&s, &[]), Err(Error::EmptyData));
    }

    #[test]
    fn rmse_one_sample_unit_error() {
        let s = FuzzySystem::new(
            vec![var("a", vec![0.0, 1.0])],
            var("y", vec![0.0, 1.0]),
            vec![FuzzyRule::new(vec![0], 0, 1.0)],
            InferenceConfig::trainable(),
        )
        .unwrap();
        let data = vec![TrainingSample::new(vec![0.0], 1.0)];
        assert_eq!(rmse(&s, &data).unwrap(), 1.0);
    }

    #[test]
    fn min_implication_clips() {
        let mut cfg = InferenceConfig::classic();
        cfg.implication = Implication::Min;
        let s = two_input(vec![FuzzyRule::new(vec![1, 1], 2, 1.0)], cfg);
        let (_, trace) = infer(&s, &[0.25, 0.5]).unwrap();
        if let DefuzzDetail::Sampled { values, .. } = trace.defuzz_detail {
            assert!(values.iter().all(|&v| v <= 0.5 + 1e-15));
        } else {
            panic!("expected sampled detail");
        }
    }
}
