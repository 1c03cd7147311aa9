//! Membership functions, strong fuzzy partitions and t-norm conjunction
//! operators.
//!
//! A variable's domain is covered by an ordered list of piecewise-linear
//! fuzzy sets: a left-shoulder trapezoid, zero or more triangles, and a
//! right-shoulder trapezoid. Peaks of adjacent sets coincide with the feet
//! of their neighbours, so membership degrees sum to 1 at every point
//! (a *strong* partition). Inputs outside the domain saturate through the
//! shoulder sets instead of erroring.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of fuzzy sets per variable.
pub const MAX_SETS: usize = 7;
/// Minimum number of fuzzy sets per variable.
pub const MIN_SETS: usize = 2;

/// One fuzzy set over a single variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MembershipFunction {
    /// 1 for `x <= shoulder`, linear down to 0 at `foot`.
    LeftShoulder { shoulder: f64, foot: f64 },
    /// 0 outside `(left, right)`, 1 at `peak`, linear in between.
    Triangle { left: f64, peak: f64, right: f64 },
    /// 0 for `x <= foot`, linear up to 1 at `shoulder` and beyond.
    RightShoulder { foot: f64, shoulder: f64 },
}

impl MembershipFunction {
    /// Membership degree of `x`, always in `[0, 1]`. Total over all reals:
    /// out-of-range inputs saturate through the shoulders.
    pub fn membership(&self, x: f64) -> f64 {
        let d = match *self {
            MembershipFunction::LeftShoulder { shoulder, foot } => {
                if x <= shoulder {
                    1.0
                } else if x >= foot {
                    0.0
                } else {
                    (foot - x) / (foot - shoulder)
                }
            }
            MembershipFunction::Triangle { left, peak, right } => {
                if x == peak {
                    1.0
                } else if x <= left || x >= right {
                    0.0
                } else if x < peak {
                    (x - left) / (peak - left)
                } else {
                    (right - x) / (right - peak)
                }
            }
            MembershipFunction::RightShoulder { foot, shoulder } => {
                if x >= shoulder {
                    1.0
                } else if x <= foot {
                    0.0
                } else {
                    (x - foot) / (shoulder - foot)
                }
            }
        };
        debug_assert!((0.0..=1.0).contains(&d));
        d
    }

    /// The point where the set reaches degree 1. For shoulders this is the
    /// saturation breakpoint.
    pub fn peak(&self) -> f64 {
        match *self {
            MembershipFunction::LeftShoulder { shoulder, .. } => shoulder,
            MembershipFunction::Triangle { peak, .. } => peak,
            MembershipFunction::RightShoulder { shoulder, .. } => shoulder,
        }
    }

    fn breakpoints_ordered(&self) -> bool {
        match *self {
            MembershipFunction::LeftShoulder { shoulder, foot } => shoulder <= foot,
            MembershipFunction::Triangle { left, peak, right } => left <= peak && peak <= right,
            MembershipFunction::RightShoulder { foot, shoulder } => foot <= shoulder,
        }
    }
}

/// Fuzzy AND over membership degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TNorm {
    Minimum,
    Product,
}

impl TNorm {
    /// Conjunction of two degrees already known to lie in `[0, 1]`.
    pub fn combine(self, a: f64, b: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        match self {
            TNorm::Minimum => a.min(b),
            TNorm::Product => a * b,
        }
    }

    /// Checked conjunction: rejects arguments outside `[0, 1]`, which would
    /// mean a membership contract was broken upstream.
    pub fn apply(self, a: f64, b: f64) -> Result<f64> {
        for v in [a, b] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::DegreeOutOfRange(v));
            }
        }
        Ok(self.combine(a, b))
    }
}

impl std::fmt::Display for TNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TNorm::Minimum => write!(f, "minimum"),
            TNorm::Product => write!(f, "product"),
        }
    }
}

impl std::str::FromStr for TNorm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "min" | "minimum" => Ok(TNorm::Minimum),
            "product" | "prod" => Ok(TNorm::Product),
            other => Err(format!("unknown t-norm '{other}' (expected min or product)")),
        }
    }
}

/// An ordered strong partition of one variable's domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyPartition {
    variable_name: String,
    domain: (f64, f64),
    sets: Vec<MembershipFunction>,
}

impl FuzzyPartition {
    /// Builds a partition from explicit sets, validating the strong-partition
    /// shape: shoulders at the edges, triangles inside, strictly increasing
    /// peaks, and every foot coinciding with the neighbouring peak.
    pub fn new(
        variable_name: impl Into<String>,
        domain: (f64, f64),
        sets: Vec<MembershipFunction>,
    ) -> Result<Self> {
        let variable_name = variable_name.into();
        let fail = |reason: &str| Error::InvalidPartition {
            variable: variable_name.clone(),
            reason: reason.to_string(),
        };

        if !(domain.0.is_finite() && domain.1.is_finite() && domain.0 < domain.1) {
            return Err(fail("domain must be a finite interval with min < max"));
        }
        if sets.len() < MIN_SETS || sets.len() > MAX_SETS {
            return Err(Error::InvalidSetCount(sets.len()));
        }
        if !matches!(sets.first(), Some(MembershipFunction::LeftShoulder { .. })) {
            return Err(fail("first set must be a left shoulder"));
        }
        if !matches!(sets.last(), Some(MembershipFunction::RightShoulder { .. })) {
            return Err(fail("last set must be a right shoulder"));
        }
        for mf in &sets[1..sets.len() - 1] {
            if !matches!(mf, MembershipFunction::Triangle { .. }) {
                return Err(fail("interior sets must be triangles"));
            }
        }
        for mf in &sets {
            if !mf.breakpoints_ordered() {
                return Err(fail("breakpoints must be non-decreasing"));
            }
        }
        let peaks: Vec<f64> = sets.iter().map(|s| s.peak()).collect();
        if peaks.windows(2).any(|w| w[0] >= w[1] || w[0].is_nan() || w[1].is_nan()) {
            return Err(fail("adjacent peaks must be strictly increasing"));
        }

        // Feet must sit exactly on neighbour peaks or the degrees stop
        // summing to 1.
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * f64::max(1.0, b.abs().max(a.abs()));
        for (l, mf) in sets.iter().enumerate() {
            match *mf {
                MembershipFunction::LeftShoulder { foot, .. } => {
                    if !close(foot, peaks[1]) {
                        return Err(fail("left shoulder foot must equal the second peak"));
                    }
                }
                MembershipFunction::Triangle { left, right, .. } => {
                    if !close(left, peaks[l - 1]) || !close(right, peaks[l + 1]) {
                        return Err(fail("triangle feet must equal the neighbouring peaks"));
                    }
                }
                MembershipFunction::RightShoulder { foot, .. } => {
                    if !close(foot, peaks[sets.len() - 2]) {
                        return Err(fail("right shoulder foot must equal the second-to-last peak"));
                    }
                }
            }
        }

        Ok(FuzzyPartition {
            variable_name,
            domain,
            sets,
        })
    }

    /// Uniform partition: `num_sets` peaks equally spaced across
    /// `[domain_min, domain_max]`, feet on neighbour peaks.
    pub fn uniform(
        variable_name: impl Into<String>,
        domain_min: f64,
        domain_max: f64,
        num_sets: usize,
    ) -> Result<Self> {
        let variable_name = variable_name.into();
        if !(MIN_SETS..=MAX_SETS).contains(&num_sets) {
            return Err(Error::InvalidSetCount(num_sets));
        }
        if !(domain_min.is_finite() && domain_max.is_finite()) || domain_min > domain_max {
            return Err(Error::InvalidPartition {
                variable: variable_name,
                reason: format!("invalid domain [{domain_min}, {domain_max}]"),
            });
        }
        if domain_min == domain_max {
            return Err(Error::ConstantVariable(variable_name));
        }

        let step = (domain_max - domain_min) / (num_sets - 1) as f64;
        let peak = |i: usize| {
            if i == num_sets - 1 {
                domain_max
            } else {
                domain_min + step * i as f64
            }
        };

        let mut sets = Vec::with_capacity(num_sets);
        sets.push(MembershipFunction::LeftShoulder {
            shoulder: peak(0),
            foot: peak(1),
        });
        for i in 1..num_sets - 1 {
            sets.push(MembershipFunction::Triangle {
                left: peak(i - 1),
                peak: peak(i),
                right: peak(i + 1),
            });
        }
        sets.push(MembershipFunction::RightShoulder {
            foot: peak(num_sets - 2),
            shoulder: peak(num_sets - 1),
        });

        Self::new(variable_name, (domain_min, domain_max), sets)
    }

    pub fn variable_name(&self) -> &str {
        &self.variable_name
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn sets(&self) -> &[MembershipFunction] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Degree of `x` in set `l`.
    pub fn membership(&self, l: usize, x: f64) -> f64 {
        self.sets[l].membership(x)
    }

    /// All degrees of `x`, in set order.
    pub fn memberships(&self, x: f64) -> Vec<f64> {
        self.sets.iter().map(|s| s.membership(x)).collect()
    }

    /// Peak position of set `l` (shoulders: the saturation breakpoint).
    pub fn peak(&self, l: usize) -> f64 {
        self.sets[l].peak()
    }

    /// Peak positions of every set, in order.
    pub fn peaks(&self) -> Vec<f64> {
        self.sets.iter().map(|s| s.peak()).collect()
    }

    /// Index of the set with the highest degree at `x`; ties break to the
    /// lower index.
    pub fn crisp_assignment(&self, x: f64) -> usize {
        let mut best = 0;
        let mut best_degree = self.sets[0].membership(x);
        for (l, set) in self.sets.iter().enumerate().skip(1) {
            let d = set.membership(x);
            if d > best_degree {
                best = l;
                best_degree = d;
            }
        }
        best
    }

    /// Re-checks the structural invariants, for partitions that came from a
    /// serialized model rather than a constructor.
    pub fn validate(&self) -> Result<()> {
        Self::new(
            self.variable_name.clone(),
            self.domain,
            self.sets.clone(),
        )
        .map(|_| ())
    }
}

/// Builds the output partition for the continuous effort target: a uniform
/// strong partition over `[min effort, max effort]`. Class `k`'s
/// representative value is its peak position, available via
/// [`FuzzyPartition::peak`].
pub fn fuzzify_output(efforts: &[f64], num_classes: usize) -> Result<FuzzyPartition> {
    if !(MIN_SETS..=MAX_SETS).contains(&num_classes) {
        return Err(Error::InvalidClassCount(num_classes));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &e in efforts {
        lo = lo.min(e);
        hi = hi.max(e);
    }
    if !(lo.is_finite() && hi.is_finite()) || efforts.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if lo == hi {
        return Err(Error::ConstantTarget);
    }
    FuzzyPartition::uniform("effort", lo, hi, num_classes)
}
