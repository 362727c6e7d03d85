//! Rule induction from input/output samples.
//!
//! Every sample is mapped to the membership function with the highest
//! degree on each dimension, which yields one candidate rule whose degree is
//! the product of those maximal degrees. Candidates sharing an antecedent
//! form a conflict group; only the one with the largest degree survives and
//! its degree becomes the rule weight.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::inference::TrainingSample;
use crate::system::{FuzzyRule, FuzzySystem, Skeleton};
use crate::variable::LinguisticVariable;

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateRule {
    pub antecedent: Vec<usize>,
    pub consequent: usize,
    pub degree: f64,
}

impl CandidateRule {
    /// Builds a candidate from per-dimension `(mf index, degree)` pairs. The
    /// degree is the product of the input degrees in order, times the output
    /// degree.
    pub fn from_assignments(inputs: &[(usize, f64)], output: (usize, f64)) -> Self {
        let degree = inputs.iter().fold(1.0, |acc, &(_, d)| acc * d) * output.1;
        Self {
            antecedent: inputs.iter().map(|&(k, _)| k).collect(),
            consequent: output.0,
            degree,
        }
    }
}

/// Membership function with the largest degree at `x`; ties go to the
/// lower index.
pub fn assign_region(var: &LinguisticVariable, x: f64) -> Result<(usize, f64)> {
    let degrees = var.degrees(x)?;
    let mut best = (0, degrees[0]);
    for (k, &d) in degrees.iter().enumerate().skip(1) {
        if d > best.1 {
            best = (k, d);
        }
    }
    Ok(best)
}

pub fn candidate_from_sample(skeleton: &Skeleton, sample: &TrainingSample) -> Result<CandidateRule> {
    if sample.inputs.len() != skeleton.inputs.len() {
        return Err(Error::DimensionMismatch {
            expected: skeleton.inputs.len(),
            found: sample.inputs.len(),
        });
    }
    let inputs = skeleton
        .inputs
        .iter()
        .zip(&sample.inputs)
        .map(|(var, &x)| assign_region(var, x))
        .collect::<Result<Vec<_>>>()?;
    let output = assign_region(&skeleton.output, sample.target)?;
    Ok(CandidateRule::from_assignments(&inputs, output))
}

/// One rule per distinct antecedent, weighted by the largest degree in its
/// conflict group (first occurrence wins ties), sorted by antecedent.
pub fn resolve_conflicts(candidates: &[CandidateRule]) -> Result<Vec<FuzzyRule>> {
    if candidates.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut groups: BTreeMap<&[usize], &CandidateRule> = BTreeMap::new();
    for c in candidates {
        groups
            .entry(&c.antecedent)
            .and_modify(|kept| {
                if c.degree > kept.degree {
                    *kept = c;
                }
            })
            .or_insert(c);
    }
    Ok(groups
        .into_values()
        .map(|c| FuzzyRule::new(c.antecedent.clone(), c.consequent, c.degree))
        .collect())
}

/// Induces the rule base for `skeleton` from `data`.
pub fn learn_rules(skeleton: &Skeleton, data: &[TrainingSample]) -> Result<FuzzySystem> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let candidates = data
        .iter()
        .map(|s| candidate_from_sample(skeleton, s))
        .collect::<Result<Vec<_>>>()?;
    skeleton.with_rules(resolve_conflicts(&candidates)?)
}
