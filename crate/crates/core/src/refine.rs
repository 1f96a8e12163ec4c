//! Cauchy-sequence checks for estimates computed at increasing resolution.

use serde::Serialize;

/// Differences below this fraction of the value are treated as roundoff.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

/// Required contraction of successive differences.
pub const MAX_CAUCHY_RATIO: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementSequence {
    pub resolutions: Vec<usize>,
    pub values: Vec<f64>,
    /// `|v[k+1] − v[k]|`.
    pub differences: Vec<f64>,
    /// `d[k+1]/d[k]`, or `None` once the differences sit at roundoff level.
    pub ratios: Vec<Option<f64>>,
}

impl RefinementSequence {
    pub fn new(resolutions: Vec<usize>, values: Vec<f64>) -> Self {
        let differences: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        let scale = values.last().map_or(0.0, |v| v.abs());
        let floor = ROUNDOFF_FLOOR * scale.max(f64::MIN_POSITIVE);
        let ratios = differences
            .windows(2)
            .map(|d| if d[1] <= floor { None } else { Some(d[1] / d[0]) })
            .collect();
        Self {
            resolutions,
            values,
            differences,
            ratios,
        }
    }

    /// Evaluates `f` at each resolution.
    pub fn from_fn(resolutions: &[usize], mut f: impl FnMut(usize) -> crate::Result<f64>) -> crate::Result<Self> {
        let values = resolutions.iter().map(|&n| f(n)).collect::<crate::Result<Vec<_>>>()?;
        Ok(Self::new(resolutions.to_vec(), values))
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("empty refinement sequence")
    }

    pub fn last_difference(&self) -> f64 {
        self.differences.last().copied().unwrap_or(f64::INFINITY)
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.ratios.iter().flatten().copied().reduce(f64::max)
    }

    /// Every non-roundoff ratio below [`MAX_CAUCHY_RATIO`], and at least two
    /// differences to compare.
    pub fn is_cauchy(&self) -> bool {
        self.differences.len() >= 2 && self.ratios.iter().flatten().all(|&r| r < MAX_CAUCHY_RATIO)
    }

    /// Aitken Δ² extrapolation from the last three values, falling back to
    /// the last value when the differences do not contract.
    pub fn extrapolated(&self) -> f64 {
        let n = self.values.len();
        if n < 3 {
            return self.last();
        }
        let (a, b, c) = (self.values[n - 3], self.values[n - 2], self.values[n - 1]);
        let denom = (c - b) - (b - a);
        let step = (c - b) * (c - b) / denom;
        if denom == 0.0 || !step.is_finite() || step.abs() > (c - b).abs() {
            c
        } else {
            c - step
        }
    }
}
