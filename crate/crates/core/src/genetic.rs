//! Real-coded genetic tuning of membership centers.
//!
//! A chromosome is the flat vector of every membership center: input
//! variables in order, each in ascending slots, then the output variable.
//! The rule base is fixed; only centers evolve. Fitness is the training
//! RMSE, minimized.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::inference::{rmse, TrainingSample};
use crate::system::FuzzySystem;

#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<f64>,
}

impl Chromosome {
    pub fn new(genes: Vec<f64>) -> Self {
        Self { genes }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    /// Standard deviation of the Gaussian perturbation, as a fraction of the
    /// gene's domain width.
    pub mutation_sigma: f64,
    pub tournament_size: usize,
    pub elitism: usize,
    pub crossover_rate: f64,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 50,
            generations: 50,
            mutation_rate: 0.01,
            mutation_sigma: 0.1,
            tournament_size: 2,
            elitism: 1,
            crossover_rate: 0.9,
            seed: 7,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: alloc::string::String| Err(Error::Config(msg));
        if self.population_size == 0 {
            return fail("population size must be positive".into());
        }
        if self.elitism >= self.population_size {
            return fail(format!(
                "elitism {} must be smaller than the population size {}",
                self.elitism, self.population_size
            ));
        }
        if self.tournament_size < 2 {
            return fail(format!("tournament size must be at least 2, got {}", self.tournament_size));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return fail(format!("mutation rate must lie in [0, 1], got {}", self.mutation_rate));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return fail(format!("crossover rate must lie in [0, 1], got {}", self.crossover_rate));
        }
        if !(self.mutation_sigma.is_finite() && self.mutation_sigma >= 0.0) {
            return fail(format!("mutation sigma must be non-negative, got {}", self.mutation_sigma));
        }
        Ok(())
    }
}

pub fn encode(system: &FuzzySystem) -> Chromosome {
    Chromosome::new(system.flat_centers())
}

/// Writes `genes` into a copy of `skeleton`, repairing each variable's
/// slice (clamp, sort, minimum gap). Rules and config come from the
/// skeleton.
pub fn decode(genes: &Chromosome, skeleton: &FuzzySystem) -> Result<FuzzySystem> {
    skeleton.with_flat_centers(&genes.genes, true)
}

/// `child1 = a[..cut] ++ b[cut..]`, `child2 = b[..cut] ++ a[cut..]`.
pub fn one_point_crossover(a: &Chromosome, b: &Chromosome, cut: usize) -> Result<(Chromosome, Chromosome)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if cut == 0 || cut >= a.len() {
        return Err(Error::InvalidCut { cut, len: a.len() });
    }
    let mut c1 = a.genes[..cut].to_vec();
    c1.extend_from_slice(&b.genes[cut..]);
    let mut c2 = b.genes[..cut].to_vec();
    c2.extend_from_slice(&a.genes[cut..]);
    Ok((Chromosome::new(c1), Chromosome::new(c2)))
}

/// Domain width of the variable each gene belongs to.
pub fn gene_scales(system: &FuzzySystem) -> Vec<f64> {
    system
        .inputs()
        .iter()
        .chain(core::iter::once(system.output()))
        .flat_map(|v| core::iter::repeat_n(v.width(), v.mf_count()))
        .collect()
}

/// Perturbs each gene with probability `mutation_rate` by Gaussian noise
/// of standard deviation `mutation_sigma * scale`. The result may be out of
/// order or out of domain; [`decode`] repairs it.
pub fn mutate<R: Rng + ?Sized>(c: &Chromosome, config: &GaConfig, scales: &[f64], rng: &mut R) -> Chromosome {
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let genes = c
        .genes
        .iter()
        .zip(scales)
        .map(|(&g, &scale)| {
            if rng.random::<f64>() < config.mutation_rate {
                let z: f64 = unit.sample(rng);
                g + z * config.mutation_sigma * scale
            } else {
                g
            }
        })
        .collect();
    Chromosome::new(genes)
}

/// Draws `tournament_size` indices uniformly with replacement and returns
/// the one with the lowest fitness; the earliest draw wins ties.
pub fn tournament_select<R: Rng + ?Sized>(fitnesses: &[f64], config: &GaConfig, rng: &mut R) -> Result<usize> {
    if fitnesses.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let mut best = rng.random_range(0..fitnesses.len());
    for _ in 1..config.tournament_size {
        let i = rng.random_range(0..fitnesses.len());
        if fitnesses[i] < fitnesses[best] {
            best = i;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaOutcome {
    pub best: FuzzySystem,
    pub best_rmse: f64,
    /// Best RMSE in the initial population.
    pub initial_rmse: f64,
    /// `(generation, best-so-far rmse)`, starting at generation 1.
    pub trace: Vec<(usize, f64)>,
}

fn evaluate(individual: &Chromosome, skeleton: &FuzzySystem, data: &[TrainingSample]) -> Result<f64> {
    let system = decode(individual, skeleton)?;
    let fitness = rmse(&system, data)?;
    if !fitness.is_finite() {
        return Err(Error::NonFinite("fitness evaluation".into()));
    }
    Ok(fitness)
}

fn repaired(c: Chromosome, skeleton: &FuzzySystem) -> Result<Chromosome> {
    Ok(encode(&decode(&c, skeleton)?))
}

fn random_individual<R: Rng + ?Sized>(skeleton: &FuzzySystem, rng: &mut R) -> Result<Chromosome> {
    let mut genes = Vec::with_capacity(skeleton.center_count());
    for v in skeleton.inputs().iter().chain(core::iter::once(skeleton.output())) {
        let start = genes.len();
        for _ in 0..v.mf_count() {
            genes.push(rng.random_range(v.domain_min()..=v.domain_max()));
        }
        genes[start..].sort_by(f64::total_cmp);
    }
    repaired(Chromosome::new(genes), skeleton)
}

/// Generational GA: tournament selection, one-point crossover at gene
/// boundaries, Gaussian mutation, repair, and elites carried unchanged.
/// Individual 0 of the initial population is the skeleton itself.
pub fn evolve(skeleton: &FuzzySystem, data: &[TrainingSample], config: &GaConfig) -> Result<GaOutcome> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let scales = gene_scales(skeleton);
    let len = skeleton.center_count();

    let mut population = Vec::with_capacity(config.population_size);
    population.push(encode(skeleton));
    while population.len() < config.population_size {
        population.push(random_individual(skeleton, &mut rng)?);
    }
    let mut fitness = population
        .iter()
        .map(|c| evaluate(c, skeleton, data))
        .collect::<Result<Vec<_>>>()?;

    let argmin = |f: &[f64]| {
        f.iter()
            .enumerate()
            .fold(0, |best, (i, &v)| if v < f[best] { i } else { best })
    };
    let first = argmin(&fitness);
    let initial_rmse = fitness[first];
    let mut best = (population[first].clone(), initial_rmse);
    let mut trace = Vec::with_capacity(config.generations);

    for generation in 1..=config.generations {
        let mut ranked: Vec<usize> = (0..population.len()).collect();
        ranked.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));

        let mut next = Vec::with_capacity(config.population_size);
        let mut next_fitness = Vec::with_capacity(config.population_size);
        for &e in ranked.iter().take(config.elitism) {
            next.push(population[e].clone());
            next_fitness.push(fitness[e]);
        }
        while next.len() < config.population_size {
            let a = &population[tournament_select(&fitness, config, &mut rng)?];
            let b = &population[tournament_select(&fitness, config, &mut rng)?];
            let (c1, c2) = if len > 1 && rng.random::<f64>() < config.crossover_rate {
                let cut = rng.random_range(1..len);
                one_point_crossover(a, b, cut)?
            } else {
                (a.clone(), b.clone())
            };
            for child in [c1, c2] {
                if next.len() == config.population_size {
                    break;
                }
                let child = repaired(mutate(&child, config, &scales, &mut rng), skeleton)?;
                next_fitness.push(evaluate(&child, skeleton, data)?);
                next.push(child);
            }
        }
        population = next;
        fitness = next_fitness;

        let i = argmin(&fitness);
        if fitness[i] < best.1 {
            best = (population[i].clone(), fitness[i]);
        }
        trace.push((generation, best.1));
    }

    Ok(GaOutcome {
        best: decode(&best.0, skeleton)?,
        best_rmse: best.1,
        initial_rmse,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{FuzzyRule, InferenceConfig};
    use crate::variable::LinguisticVariable;
    use alloc::vec;

    fn system() -> FuzzySystem {
        let v = |n: &str, c: Vec<f64>| LinguisticVariable::with_default_labels(n, 0.0, 1.0, c).unwrap();
        FuzzySystem::new(
            vec![v("a", vec![0.0, 0.5, 1.0]), v("b", vec![0.0, 0.4, 1.0])],
            v("y", vec![0.0, 0.5, 1.0]),
            vec![
                FuzzyRule::new(vec![0, 0], 0, 1.0),
                FuzzyRule::new(vec![1, 1], 1, 1.0),
                FuzzyRule::new(vec![2, 2], 2, 1.0),
            ],
            InferenceConfig::trainable(),
        )
        .unwrap()
    }

    #[test]
    fn encode_concatenates() {
        let s = system();
        assert_eq!(encode(&s).genes, vec![0.0, 0.5, 1.0, 0.0, 0.4, 1.0, 0.0, 0.5, 1.0]);
        assert_eq!(decode(&encode(&s), &s).unwrap(), s);
    }

    #[test]
    fn decode_repairs() {
        let s = system();
        let mut genes = encode(&s).genes;
        genes[0..3].copy_from_slice(&[0.9, 0.1, 0.5]);
        genes[3..6].copy_from_slice(&[0.5, 0.5, 0.5]);
        let d = decode(&Chromosome::new(genes), &s).unwrap();
        assert_eq!(d.inputs()[0].centers(), &[0.1, 0.5, 0.9]);
        let c = d.inputs()[1].centers();
        assert!(c[0] < c[1] && c[1] < c[2] && c[2] <= 1.0);
        assert!((c[1] - c[0] - 1e-4).abs() < 1e-12);
        assert!(matches!(
            decode(&Chromosome::new(vec![0.0; 4]), &s),
            Err(Error::LengthMismatch { expected: 9, found: 4 })
        ));
    }

    #[test]
    fn crossover_examples() {
        let a = Chromosome::new(vec![1.0, 2.0, 3.0, 4.0]);
        let b = Chromosome::new(vec![5.0, 6.0, 7.0, 8.0]);
        let (c1, c2) = one_point_crossover(&a, &b, 2).unwrap();
        assert_eq!(c1.genes, vec![1.0, 2.0, 7.0, 8.0]);
        assert_eq!(c2.genes, vec![5.0, 6.0, 3.0, 4.0]);
        let (c1, c2) = one_point_crossover(&a, &a, 3).unwrap();
        assert_eq!((c1, c2), (a.clone(), a.clone()));
        assert!(one_point_crossover(&a, &b, 0).is_err());
        assert!(one_point_crossover(&a, &b, 4).is_err());
        assert!(one_point_crossover(&a, &Chromosome::new(vec![1.0]), 1).is_err());
    }

    #[test]
    fn mutation_edge_rates() {
        let c = Chromosome::new(vec![0.1, 0.2, 0.3]);
        let scales = [1.0; 3];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let off = GaConfig {
            mutation_rate: 0.0,
            ..GaConfig::default()
        };
        assert_eq!(mutate(&c, &off, &scales, &mut rng), c);
        let flat = GaConfig {
            mutation_rate: 1.0,
            mutation_sigma: 0.0,
            ..GaConfig::default()
        };
        assert_eq!(mutate(&c, &flat, &scales, &mut rng), c);
    }

    #[test]
    fn mutation_count_follows_binomial() {
        let cfg = GaConfig::default();
        let c = Chromosome::new(vec![0.5; 17]);
        let scales = [1.0; 17];
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let trials = 100_000usize;
        let mut changed = 0usize;
        for _ in 0..trials {
            let m = mutate(&c, &cfg, &scales, &mut rng);
            changed += m.genes.iter().filter(|&&g| g != 0.5).count();
        }
        let n = (trials * c.len()) as f64;
        let expected = n * cfg.mutation_rate;
        let sd = libm::sqrt(n * cfg.mutation_rate * (1.0 - cfg.mutation_rate));
        assert!((changed as f64 - expected).abs() <= 3.0 * sd, "{changed} vs {expected} ± {sd}");
    }

    #[test]
    fn tournament_examples() {
        let cfg = GaConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            assert_eq!(tournament_select(&[0.3], &cfg, &mut rng).unwrap(), 0);
        }
        assert_eq!(tournament_select(&[], &cfg, &mut rng), Err(Error::EmptyPopulation));
        let all = GaConfig {
            tournament_size: 64,
            ..cfg
        };
        // With many draws the best is almost surely in the tournament.
        let fit = [0.5, 0.2, 0.9, 0.05, 0.4];
        for _ in 0..20 {
            assert_eq!(tournament_select(&fit, &all, &mut rng).unwrap(), 3);
        }
    }

    #[test]
    fn tournament_pressure_matches_enumeration() {
        // Draw pairs (0,0) (0,1) (1,0) (1,1) are equiprobable; index 0 wins
        // in three of them.
        let p = 0.75;
        let cfg = GaConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 10_000;
        let wins = (0..n)
            .filter(|_| tournament_select(&[0.1, 0.9], &cfg, &mut rng).unwrap() == 0)
            .count();
        let sd = libm::sqrt(n as f64 * p * (1.0 - p));
        assert!((wins as f64 - n as f64 * p).abs() <= 3.0 * sd, "{wins}");
    }

    fn data() -> Vec<TrainingSample> {
        (0..30)
            .map(|i| {
                let a = (i as f64 * 0.37) % 1.0;
                let b = (i as f64 * 0.61) % 1.0;
                TrainingSample::new(vec![a, b], 0.5 * (a + b))
            })
            .collect()
    }

    #[test]
    fn zero_generations_returns_initial_best() {
        let s = system();
        let cfg = GaConfig {
            population_size: 1,
            generations: 0,
            elitism: 0,
            ..GaConfig::default()
        };
        let out = evolve(&s, &data(), &cfg).unwrap();
        assert_eq!(out.best, s);
        assert!(out.trace.is_empty());
        assert_eq!(out.best_rmse, out.initial_rmse);
    }

    #[test]
    fn evolve_is_deterministic_and_monotone() {
        let s = system();
        let cfg = GaConfig {
            population_size: 12,
            generations: 15,
            mutation_rate: 0.1,
            ..GaConfig::default()
        };
        let a = evolve(&s, &data(), &cfg).unwrap();
        let b = evolve(&s, &data(), &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trace.len(), 15);
        assert!(a.trace.windows(2).all(|w| w[1].1 <= w[0].1));
        assert!(a.best_rmse <= a.initial_rmse);
    }

    #[test]
    fn config_validation() {
        let ok = GaConfig::default();
        assert!(ok.validate().is_ok());
        assert!(GaConfig { elitism: 50, ..ok }.validate().is_err());
        assert!(GaConfig { tournament_size: 1, ..ok }.validate().is_err());
        assert!(GaConfig { mutation_rate: 1.5, ..ok }.validate().is_err());
        assert!(GaConfig { population_size: 0, ..ok }.validate().is_err());
    }
}
