//! Linguistic variables and their triangular partitions.
//!
//! A variable's membership functions are fully determined by its ordered
//! center vector. Interior functions are triangles whose feet sit on the
//! neighbouring centers; the first and last functions are shoulders that
//! saturate at 1 toward the domain edge. The family forms a Ruspini
//! partition: the degrees sum to 1 everywhere in the domain.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Minimum spacing between neighbouring centers, as a fraction of the
/// domain width, enforced by [`repair_centers`].
pub const MIN_GAP_FRACTION: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    name: String,
    domain_min: f64,
    domain_max: f64,
    centers: Vec<f64>,
    labels: Vec<String>,
}

/// Shape of one membership function within a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MfShape {
    LeftShoulder,
    Triangle,
    RightShoulder,
}

/// Borrowed view of a single membership function.
#[derive(Debug, Clone, Copy)]
pub struct MembershipFunction<'a> {
    var: &'a LinguisticVariable,
    index: usize,
}

impl<'a> MembershipFunction<'a> {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn shape(&self) -> MfShape {
        if self.index == 0 {
            MfShape::LeftShoulder
        } else if self.index + 1 == self.var.centers.len() {
            MfShape::RightShoulder
        } else {
            MfShape::Triangle
        }
    }

    pub fn center(&self) -> f64 {
        self.var.centers[self.index]
    }

    pub fn label(&self) -> &'a str {
        &self.var.labels[self.index]
    }

    /// Left and right points where the function reaches zero. Shoulders
    /// report the domain edge on their saturated side.
    pub fn support(&self) -> (f64, f64) {
        let c = &self.var.centers;
        let left = if self.index == 0 {
            self.var.domain_min
        } else {
            c[self.index - 1]
        };
        let right = if self.index + 1 == c.len() {
            self.var.domain_max
        } else {
            c[self.index + 1]
        };
        (left, right)
    }

    pub fn eval(&self, x: f64) -> f64 {
        mf_degree(&self.var.centers, self.index, x)
    }
}

impl LinguisticVariable {
    pub fn new(
        name: impl Into<String>,
        domain_min: f64,
        domain_max: f64,
        centers: Vec<f64>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let var = Self {
            name: name.into(),
            domain_min,
            domain_max,
            centers,
            labels,
        };
        var.validate()?;
        Ok(var)
    }

    /// Builds a variable with generated labels (see [`default_labels`]).
    pub fn with_default_labels(
        name: impl Into<String>,
        domain_min: f64,
        domain_max: f64,
        centers: Vec<f64>,
    ) -> Result<Self> {
        let labels = default_labels(centers.len());
        Self::new(name, domain_min, domain_max, centers, labels)
    }

    /// `count` evenly spaced centers spanning the whole domain.
    pub fn uniform(name: impl Into<String>, domain_min: f64, domain_max: f64, count: usize) -> Result<Self> {
        let name = name.into();
        if count < 2 {
            return Err(Error::InvalidVariable {
                variable: name,
                reason: format!("needs at least 2 membership functions, got {count}"),
            });
        }
        let width = domain_max - domain_min;
        let last = (count - 1) as f64;
        let centers = (0..count)
            .map(|i| {
                if i == count - 1 {
                    domain_max
                } else {
                    domain_min + width * (i as f64) / last
                }
            })
            .collect();
        Self::with_default_labels(name, domain_min, domain_max, centers)
    }

    fn invalid(&self, reason: String) -> Error {
        Error::InvalidVariable {
            variable: self.name.clone(),
            reason,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.domain_min.is_finite() && self.domain_max.is_finite()) || self.domain_min >= self.domain_max {
            return Err(self.invalid(format!(
                "domain [{}, {}] is empty or not finite",
                self.domain_min, self.domain_max
            )));
        }
        if self.centers.len() < 2 {
            return Err(self.invalid(format!(
                "needs at least 2 membership functions, got {}",
                self.centers.len()
            )));
        }
        if self.labels.len() != self.centers.len() {
            return Err(self.invalid(format!(
                "{} labels for {} centers",
                self.labels.len(),
                self.centers.len()
            )));
        }
        for (i, &c) in self.centers.iter().enumerate() {
            if !c.is_finite() || c < self.domain_min || c > self.domain_max {
                return Err(self.invalid(format!("center {i} = {c} lies outside the domain")));
            }
        }
        if let Some(i) = self.centers.windows(2).position(|w| w[0] >= w[1]) {
            return Err(self.invalid(format!(
                "centers are not strictly increasing at position {}",
                i + 1
            )));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain_min(&self) -> f64 {
        self.domain_min
    }

    pub fn domain_max(&self) -> f64 {
        self.domain_max
    }

    pub fn width(&self) -> f64 {
        self.domain_max - self.domain_min
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.domain_min + self.domain_max)
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mf_count(&self) -> usize {
        self.centers.len()
    }

    pub fn mf(&self, index: usize) -> Result<MembershipFunction<'_>> {
        self.check_index(index)?;
        Ok(MembershipFunction { var: self, index })
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.domain_min && x <= self.domain_max
    }

    pub fn check_value(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                variable: self.name.clone(),
                value: x,
                min: self.domain_min,
                max: self.domain_max,
            })
        }
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.centers.len() {
            Ok(())
        } else {
            Err(Error::InvalidMfIndex {
                variable: self.name.clone(),
                index,
                count: self.centers.len(),
            })
        }
    }

    /// Degree of `x` in membership function `index`.
    pub fn membership(&self, index: usize, x: f64) -> Result<f64> {
        self.check_value(x)?;
        self.check_index(index)?;
        Ok(mf_degree(&self.centers, index, x))
    }

    /// Degrees of `x` in every membership function, in index order.
    pub fn degrees(&self, x: f64) -> Result<Vec<f64>> {
        self.check_value(x)?;
        Ok((0..self.centers.len()).map(|i| mf_degree(&self.centers, i, x)).collect())
    }

    /// Same variable with new centers; the centers must already be valid.
    pub fn with_centers(&self, centers: Vec<f64>) -> Result<Self> {
        if centers.len() != self.centers.len() {
            return Err(Error::LengthMismatch {
                expected: self.centers.len(),
                found: centers.len(),
            });
        }
        let var = Self {
            centers,
            ..self.clone()
        };
        var.validate()?;
        Ok(var)
    }

    pub(crate) fn set_centers_unchecked(&mut self, centers: &[f64]) {
        self.centers.copy_from_slice(centers);
    }

    /// Same variable with `raw` centers passed through [`repair_centers`].
    pub fn with_repaired_centers(&self, raw: &[f64]) -> Result<Self> {
        let mut centers = raw.to_vec();
        repair_centers(&mut centers, self.domain_min, self.domain_max)?;
        self.with_centers(centers)
    }
}

/// Piecewise-linear degree of `x` in function `j` of the partition defined
/// by `centers`. No bounds checks.
pub(crate) fn mf_degree(centers: &[f64], j: usize, x: f64) -> f64 {
    let c = centers[j];
    if x <= c {
        if j == 0 {
            return 1.0;
        }
        let left = centers[j - 1];
        if x <= left {
            0.0
        } else {
            (x - left) / (c - left)
        }
    } else {
        if j + 1 == centers.len() {
            return 1.0;
        }
        let right = centers[j + 1];
        if x >= right {
            0.0
        } else {
            (right - x) / (right - c)
        }
    }
}

/// Partial derivatives of `mf_degree(centers, j, x)` with respect to the
/// centers it depends on at `x`. At most two centers matter at any point;
/// unused slots carry a zero derivative.
pub(crate) fn mf_center_partials(centers: &[f64], j: usize, x: f64) -> [(usize, f64); 2] {
    let c = centers[j];
    let none = [(j, 0.0), (j, 0.0)];
    if x <= c {
        if j == 0 {
            return none;
        }
        let left = centers[j - 1];
        if x <= left {
            return none;
        }
        let d = c - left;
        let d2 = d * d;
        [(j - 1, (x - c) / d2), (j, -(x - left) / d2)]
    } else {
        if j + 1 == centers.len() {
            return none;
        }
        let right = centers[j + 1];
        if x >= right {
            return none;
        }
        let e = right - c;
        let e2 = e * e;
        [(j + 1, (x - c) / e2), (j, (right - x) / e2)]
    }
}

/// Projects a center vector back onto the valid set: clamp to the domain,
/// sort ascending, then enforce a minimum gap of
/// `MIN_GAP_FRACTION * (max - min)` between neighbours while staying inside
/// the domain.
pub fn repair_centers(centers: &mut [f64], min: f64, max: f64) -> Result<()> {
    if centers.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("membership centers".to_string()));
    }
    let n = centers.len();
    if n == 0 {
        return Ok(());
    }
    let gap = MIN_GAP_FRACTION * (max - min);
    if gap * (n as f64 - 1.0) > max - min {
        return Err(Error::Config(format!(
            "{n} centers cannot be separated by the minimum gap inside [{min}, {max}]"
        )));
    }
    for c in centers.iter_mut() {
        *c = c.clamp(min, max);
    }
    centers.sort_by(f64::total_cmp);
    for i in 1..n {
        if centers[i] < centers[i - 1] + gap {
            centers[i] = centers[i - 1] + gap;
        }
    }
    if centers[n - 1] > max {
        centers[n - 1] = max;
        for i in (0..n - 1).rev() {
            if centers[i] > centers[i + 1] - gap {
                centers[i] = centers[i + 1] - gap;
            }
        }
    }
    Ok(())
}

/// Label set used when a variable is built without explicit labels.
pub fn default_labels(count: usize) -> Vec<String> {
    let named: &[&str] = match count {
        2 => &["low", "high"],
        3 => &["low", "medium", "high"],
        4 => &["very-low", "low", "high", "very-high"],
        5 => &["very-low", "low", "medium", "high", "very-high"],
        7 => &[
            "extremely-low",
            "very-low",
            "low",
            "medium",
            "high",
            "very-high",
            "extremely-high",
        ],
        _ => &[],
    };
    if named.is_empty() {
        (0..count).map(|i| format!("mf{i}")).collect()
    } else {
        named.iter().map(|s| s.to_string()).collect()
    }
}
