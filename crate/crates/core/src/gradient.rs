//! Gradient-descent tuning of membership centers.
//!
//! The loss is half the summed squared error over the dataset. Gradients
//! are taken with respect to the membership centers in chromosome order
//! (input variables in order, then the output), either in closed form for
//! the differentiable profile or by central differences for any profile.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::inference::{sum_squared_error, TrainingSample};
use crate::system::{FuzzySystem, WeightMode};
use crate::variable::{mf_center_partials, mf_degree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tunable {
    InputCenters,
    OutputCenters,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientMode {
    Analytic,
    FiniteDifference { step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdConfig {
    pub learning_rate: f64,
    pub momentum: f64,
    pub epochs: usize,
    pub tunable: Tunable,
    pub gradient_mode: GradientMode,
}

impl Default for GdConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            momentum: 0.8,
            epochs: 10,
            tunable: Tunable::Both,
            gradient_mode: GradientMode::Analytic,
        }
    }
}

impl GdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config(format!("momentum must lie in [0, 1), got {}", self.momentum)));
        }
        if let GradientMode::FiniteDifference { step } = self.gradient_mode {
            if !(step.is_finite() && step > 0.0) {
                return Err(Error::Config(format!("finite-difference step must be positive, got {step}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossReport {
    /// Half the summed squared error.
    pub e: f64,
    pub rmse: f64,
    /// `(epoch, rmse)` after each epoch, starting at epoch 1.
    pub per_epoch: Vec<(usize, f64)>,
}

pub fn loss(system: &FuzzySystem, data: &[TrainingSample]) -> Result<LossReport> {
    let sse = sum_squared_error(system, data)?;
    Ok(LossReport {
        e: 0.5 * sse,
        rmse: libm::sqrt(sse / data.len() as f64),
        per_epoch: Vec::new(),
    })
}

/// Index range of the tunable centers inside the flat center vector.
fn tunable_range(system: &FuzzySystem, tunable: Tunable) -> core::ops::Range<usize> {
    let total = system.center_count();
    let n_out = system.output().mf_count();
    match tunable {
        Tunable::InputCenters => 0..total - n_out,
        Tunable::OutputCenters => total - n_out..total,
        Tunable::Both => 0..total,
    }
}

/// ∂E/∂center over the tunable centers, in chromosome order.
pub fn gradient(
    system: &FuzzySystem,
    data: &[TrainingSample],
    tunable: Tunable,
    mode: GradientMode,
) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let range = tunable_range(system, tunable);
    match mode {
        GradientMode::Analytic => {
            if !system.config().is_differentiable() {
                return Err(Error::Config(
                    "analytic gradients need the product t-norm with center-average defuzzification; \
                     use finite-difference mode for this profile"
                        .to_string(),
                ));
            }
            let full = analytic_gradient(system, data)?;
            Ok(full[range].to_vec())
        }
        GradientMode::FiniteDifference { step } => {
            if !(step.is_finite() && step > 0.0) {
                return Err(Error::Config(format!("finite-difference step must be positive, got {step}")));
            }
            let base = system.flat_centers();
            range
                .map(|k| {
                    let mut up = base.clone();
                    let mut down = base.clone();
                    up[k] += step;
                    down[k] -= step;
                    let e_up = 0.5 * sum_squared_error(&system.with_flat_centers_unchecked(&up), data)?;
                    let e_down = 0.5 * sum_squared_error(&system.with_flat_centers_unchecked(&down), data)?;
                    Ok((e_up - e_down) / (2.0 * step))
                })
                .collect()
        }
    }
}

/// Closed-form gradient for product t-norm + center-average. Samples are
/// accumulated in dataset order so the result is reproducible bit for bit.
fn analytic_gradient(system: &FuzzySystem, data: &[TrainingSample]) -> Result<Vec<f64>> {
    let inputs = system.inputs();
    let output = system.output();
    let rules = system.rules();
    let scale = system.config().weight_mode == WeightMode::ScaleFiring;

    let mut offsets = Vec::with_capacity(inputs.len());
    let mut acc = 0;
    for v in inputs {
        offsets.push(acc);
        acc += v.mf_count();
    }
    let out_offset = acc;

    let mut grad = vec![0.0; system.center_count()];
    let mut degrees = vec![0.0; inputs.len()];
    let mut firings = vec![0.0; rules.len()];

    for sample in data {
        if sample.inputs.len() != inputs.len() {
            return Err(Error::DimensionMismatch {
                expected: inputs.len(),
                found: sample.inputs.len(),
            });
        }
        for (v, &x) in inputs.iter().zip(&sample.inputs) {
            v.check_value(x)?;
        }
        let mut total = 0.0;
        let mut weighted = 0.0;
        for (r, rule) in rules.iter().enumerate() {
            let mut f = rule
                .antecedent
                .iter()
                .zip(inputs.iter().zip(&sample.inputs))
                .fold(1.0, |p, (&k, (v, &x))| p * mf_degree(v.centers(), k, x));
            if scale {
                f *= rule.weight;
            }
            firings[r] = f;
            total += f;
            weighted += f * output.centers()[rule.consequent];
        }
        if total <= 0.0 {
            // Midpoint fallback is locally constant.
            continue;
        }
        let y = (weighted / total).clamp(output.domain_min(), output.domain_max());
        let d_e_d_y = -(sample.target - y);

        for (r, rule) in rules.iter().enumerate() {
            let f = firings[r];
            grad[out_offset + rule.consequent] += d_e_d_y * f / total;

            let d_y_d_f = (output.centers()[rule.consequent] - y) / total;
            let w = if scale { rule.weight } else { 1.0 };
            for (i, (v, &x)) in inputs.iter().zip(&sample.inputs).enumerate() {
                degrees[i] = mf_degree(v.centers(), rule.antecedent[i], x);
            }
            for (i, v) in inputs.iter().enumerate() {
                let k = rule.antecedent[i];
                let partials = mf_center_partials(v.centers(), k, sample.inputs[i]);
                if partials.iter().all(|&(_, d)| d == 0.0) {
                    continue;
                }
                let others = degrees
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(w, |p, (_, &m)| p * m);
                let coeff = d_e_d_y * d_y_d_f * others;
                for (c, d) in partials {
                    grad[offsets[i] + c] += coeff * d;
                }
            }
        }
    }
    if grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("gradient".to_string()));
    }
    Ok(grad)
}

/// Full-batch gradient descent with momentum. After every step each
/// variable's centers are repaired (clamped, sorted, minimum gap), and the
/// epoch's RMSE is recorded.
pub fn train_gd(
    system: &FuzzySystem,
    data: &[TrainingSample],
    config: &GdConfig,
) -> Result<(FuzzySystem, LossReport)> {
    config.validate()?;
    if config.gradient_mode == GradientMode::Analytic && !system.config().is_differentiable() {
        return Err(Error::Config(
            "analytic gradients need the product t-norm with center-average defuzzification; \
             use finite-difference mode for this profile"
                .to_string(),
        ));
    }
    let range = tunable_range(system, config.tunable);
    let mut current = system.clone();
    let mut velocity = vec![0.0; range.len()];
    let mut per_epoch = Vec::with_capacity(config.epochs);
    let n = data.len() as f64;

    for epoch in 1..=config.epochs {
        let g = gradient(&current, data, config.tunable, config.gradient_mode)?;
        let mut centers = current.flat_centers();
        for ((v, gk), c) in velocity.iter_mut().zip(&g).zip(&mut centers[range.clone()]) {
            *v = config.momentum * *v - config.learning_rate * gk / n;
            *c += *v;
        }
        if centers.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("centers after epoch {epoch}")));
        }
        current = current.with_flat_centers(&centers, true)?;
        let report = loss(&current, data)?;
        if !report.rmse.is_finite() {
            return Err(Error::NonFinite(format!("loss after epoch {epoch}")));
        }
        per_epoch.push((epoch, report.rmse));
    }

    let mut report = loss(&current, data)?;
    report.per_epoch = per_epoch;
    Ok((current, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::evaluate;
    use crate::system::{FuzzyRule, InferenceConfig};
    use crate::variable::LinguisticVariable;

    fn small_system(config: InferenceConfig) -> FuzzySystem {
        let v = |n: &str, c: Vec<f64>| LinguisticVariable::with_default_labels(n, 0.0, 1.0, c).unwrap();
        let mut rules = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                rules.push(FuzzyRule::new(vec![a, b], (a + 2 * b) % 3, 0.3 + 0.07 * (a + b) as f64));
            }
        }
        FuzzySystem::new(
            vec![v("a", vec![0.0, 0.45, 1.0]), v("b", vec![0.1, 0.6, 0.9])],
            v("y", vec![0.05, 0.5, 0.95]),
            rules,
            config,
        )
        .unwrap()
    }

    fn data() -> Vec<TrainingSample> {
        [[0.12, 0.33, 0.2], [0.7, 0.81, 0.9], [0.44, 0.05, 0.5], [0.91, 0.58, 0.1], [0.3, 0.97, 0.65]]
            .iter()
            .map(|r| TrainingSample::new(vec![r[0], r[1]], r[2]))
            .collect()
    }

    #[test]
    fn loss_identities() {
        let s = small_system(InferenceConfig::trainable());
        let d = data();
        let r = loss(&s, &d).unwrap();
        assert!((r.e - d.len() as f64 * r.rmse * r.rmse / 2.0).abs() < 1e-12);
        assert_eq!(loss(&s, &[]), Err(Error::EmptyData));
    }

    #[test]
    fn one_sample_half_error() {
        let s = small_system(InferenceConfig::trainable());
        let x = vec![0.3, 0.4];
        let y = evaluate(&s, &x).unwrap();
        let r = loss(&s, &[TrainingSample::new(x, y + 0.5)]).unwrap();
        assert!((r.e - 0.125).abs() < 1e-12);
        assert!((r.rmse - 0.5).abs() < 1e-12);
    }

    #[test]
    fn analytic_matches_finite_differences() {
        let s = small_system(InferenceConfig::trainable());
        let d = data();
        let a = gradient(&s, &d, Tunable::Both, GradientMode::Analytic).unwrap();
        let f = gradient(&s, &d, Tunable::Both, GradientMode::FiniteDifference { step: 1e-6 }).unwrap();
        assert_eq!(a.len(), 9);
        for (x, y) in a.iter().zip(&f) {
            assert!((x - y).abs() < 1e-6, "{a:?} vs {f:?}");
        }
        let out = gradient(&s, &d, Tunable::OutputCenters, GradientMode::Analytic).unwrap();
        assert_eq!(out, a[6..].to_vec());
        let inp = gradient(&s, &d, Tunable::InputCenters, GradientMode::Analytic).unwrap();
        assert_eq!(inp, a[..6].to_vec());
    }

    #[test]
    fn zero_residuals_give_zero_gradient() {
        let s = small_system(InferenceConfig::trainable());
        let d: Vec<_> = data()
            .into_iter()
            .map(|mut x| {
                x.target = evaluate(&s, &x.inputs).unwrap();
                x
            })
            .collect();
        let g = gradient(&s, &d, Tunable::Both, GradientMode::Analytic).unwrap();
        assert!(g.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn duplicated_data_doubles_gradient() {
        let s = small_system(InferenceConfig::trainable());
        let d = data();
        let mut dd = d.clone();
        dd.extend(d.iter().cloned());
        let g1 = gradient(&s, &d, Tunable::Both, GradientMode::Analytic).unwrap();
        let g2 = gradient(&s, &dd, Tunable::Both, GradientMode::Analytic).unwrap();
        for (a, b) in g1.iter().zip(&g2) {
            assert!((2.0 * a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn analytic_rejected_for_classic_profile() {
        let s = small_system(InferenceConfig::classic());
        assert!(matches!(
            gradient(&s, &data(), Tunable::Both, GradientMode::Analytic),
            Err(Error::Config(_))
        ));
        let g = gradient(&s, &data(), Tunable::Both, GradientMode::FiniteDifference { step: 1e-6 }).unwrap();
        assert_eq!(g.len(), 9);
    }

    #[test]
    fn zero_epochs_is_identity() {
        let s = small_system(InferenceConfig::trainable());
        let cfg = GdConfig {
            epochs: 0,
            ..GdConfig::default()
        };
        let (t, r) = train_gd(&s, &data(), &cfg).unwrap();
        assert_eq!(t, s);
        assert!(r.per_epoch.is_empty());
    }

    #[test]
    fn config_validation() {
        let bad_lr = GdConfig {
            learning_rate: -1.0,
            ..GdConfig::default()
        };
        assert!(bad_lr.validate().is_err());
        let bad_m = GdConfig {
            momentum: 1.0,
            ..GdConfig::default()
        };
        assert!(bad_m.validate().is_err());
    }

    #[test]
    fn training_keeps_centers_valid_and_reduces_error() {
        let s = small_system(InferenceConfig::trainable());
        let d = data();
        let cfg = GdConfig {
            learning_rate: 0.05,
            momentum: 0.5,
            epochs: 20,
            ..GdConfig::default()
        };
        let (t, r) = train_gd(&s, &d, &cfg).unwrap();
        assert_eq!(r.per_epoch.len(), 20);
        assert!(r.rmse <= loss(&s, &d).unwrap().rmse);
        for v in t.inputs().iter().chain(core::iter::once(t.output())) {
            assert!(v.centers().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn classic_profile_trains_by_differences() {
        let s = small_system(InferenceConfig::classic());
        let cfg = GdConfig {
            epochs: 2,
            gradient_mode: GradientMode::FiniteDifference { step: 1e-4 },
            ..GdConfig::default()
        };
        let (_, r) = train_gd(&s, &data(), &cfg).unwrap();
        assert_eq!(r.per_epoch.len(), 2);
        let analytic = GdConfig {
            epochs: 2,
            ..GdConfig::default()
        };
        assert!(train_gd(&s, &data(), &analytic).is_err());
    }
}
