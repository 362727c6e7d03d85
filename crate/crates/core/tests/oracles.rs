use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tacdss_core::genetic::{evolve, GaConfig};
use tacdss_core::wang_mendel::learn_rules;
use tacdss_core::{domain, infer, FuzzyRule, FuzzySystem, InferenceConfig, LinguisticVariable};

fn spaced_centers(rng: &mut ChaCha8Rng, k: usize, gap: f64) -> Vec<f64> {
    let span = 1.0 - gap * (k - 1) as f64;
    let mut c: Vec<f64> = (0..k).map(|_| rng.random::<f64>() * span).collect();
    c.sort_by(f64::total_cmp);
    c.iter().enumerate().map(|(i, x)| x + gap * i as f64).collect()
}

/// Triangle/shoulder degree written out independently of the library.
fn tri(c: &[f64], j: usize, x: f64) -> f64 {
    let left = if j == 0 { None } else { Some(c[j - 1]) };
    let right = c.get(j + 1).copied();
    if x <= c[j] {
        match left {
            None => 1.0,
            Some(l) if x <= l => 0.0,
            Some(l) => (x - l) / (c[j] - l),
        }
    } else {
        match right {
            None => 1.0,
            Some(r) if x >= r => 0.0,
            Some(r) => (r - x) / (r - c[j]),
        }
    }
}

#[test]
fn classic_centroid_matches_dense_trapezoid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..40 {
        let ca = spaced_centers(&mut rng, 3, 0.05);
        let cb = spaced_centers(&mut rng, 3, 0.05);
        let cy = spaced_centers(&mut rng, 5, 0.05);
        let mut rules = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                rules.push(FuzzyRule::new(vec![i, j], rng.random_range(0..5), rng.random_range(0.1..=1.0)));
            }
        }
        let s = FuzzySystem::new(
            vec![
                LinguisticVariable::with_default_labels("a", 0.0, 1.0, ca.clone()).unwrap(),
                LinguisticVariable::with_default_labels("b", 0.0, 1.0, cb.clone()).unwrap(),
            ],
            LinguisticVariable::with_default_labels("y", 0.0, 1.0, cy.clone()).unwrap(),
            rules.clone(),
            InferenceConfig::classic(),
        )
        .unwrap();
        for _ in 0..5 {
            let (a, b) = (rng.random::<f64>(), rng.random::<f64>());
            let firing: Vec<f64> = rules
                .iter()
                .map(|r| tri(&ca, r.antecedent[0], a).min(tri(&cb, r.antecedent[1], b)) * r.weight)
                .collect();
            let n = 100_001;
            let (mut num, mut den) = (0.0, 0.0);
            for k in 0..n {
                let y = k as f64 / (n - 1) as f64;
                let mu = rules
                    .iter()
                    .zip(&firing)
                    .map(|(r, &f)| f.min(tri(&cy, r.consequent, y)))
                    .fold(0.0, f64::max);
                let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                num += w * y * mu;
                den += w * mu;
            }
            let (got, trace) = infer(&s, &[a, b]).unwrap();
            if den == 0.0 {
                assert!(trace.fallback);
                continue;
            }
            assert!((got - num / den).abs() < 1e-3, "{got} vs {}", num / den);
        }
    }
}

#[test]
fn rule_count_equals_distinct_occupied_cells() {
    let data = domain::generate_dataset(500, 0.02, 42).unwrap();
    let sk = domain::skeleton(&[3, 3, 3, 3], 5, InferenceConfig::trainable()).unwrap();
    let centers = [0.0, 0.5, 1.0];
    let nearest = |x: f64| {
        let mut best = 0;
        for j in 1..3 {
            if (x - centers[j]).abs() < (x - centers[best]).abs() {
                best = j;
            }
        }
        best
    };
    let cells: BTreeSet<Vec<usize>> = data
        .iter()
        .map(|d| d.inputs.iter().map(|&x| nearest(x)).collect())
        .collect();
    assert_eq!(learn_rules(&sk, &data).unwrap().rules().len(), cells.len());
}

fn ga_fixture() -> (FuzzySystem, Vec<tacdss_core::TrainingSample>) {
    let data = domain::generate_dataset(120, 0.02, 3).unwrap();
    let sk = domain::skeleton(&[3, 3, 3, 3], 5, InferenceConfig::trainable()).unwrap();
    (learn_rules(&sk, &data).unwrap(), data)
}

#[test]
fn evolution_is_seed_deterministic_and_elitist() {
    let (initial, data) = ga_fixture();
    let cfg = GaConfig {
        population_size: 12,
        generations: 15,
        seed: 99,
        ..GaConfig::default()
    };
    let a = evolve(&initial, &data, &cfg).unwrap();
    let b = evolve(&initial, &data, &cfg).unwrap();
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.best, b.best);
    assert_eq!(a.trace.len(), 15);
    assert!(a.trace.windows(2).all(|w| w[1].1 <= w[0].1));
    assert!(a.best_rmse <= a.initial_rmse);
    let other = evolve(&initial, &data, &GaConfig { seed: 100, ..cfg }).unwrap();
    assert_ne!(a.trace, other.trace);
}

#[test]
fn evolved_model_keeps_structure() {
    let (initial, data) = ga_fixture();
    let cfg = GaConfig {
        population_size: 8,
        generations: 6,
        mutation_rate: 0.5,
        ..GaConfig::default()
    };
    let out = evolve(&initial, &data, &cfg).unwrap();
    assert_eq!(out.best.rules(), initial.rules());
    assert_eq!(out.best.center_count(), initial.center_count());
    for v in out.best.inputs().iter().chain(std::iter::once(out.best.output())) {
        assert!(v.centers().windows(2).all(|w| w[0] < w[1]));
    }
}
