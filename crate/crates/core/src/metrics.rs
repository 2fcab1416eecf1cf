//! Coverage, difference of coverage and train/test fit statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::weakly_dominates;
use crate::space::TradeoffPoint;

/// Fraction of `y` weakly dominated by at least one point of `x`.
pub fn coverage(x: &[TradeoffPoint], y: &[TradeoffPoint]) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let covered = y.iter().filter(|q| x.iter().any(|p| weakly_dominates(p, q))).count();
    Ok(covered as f64 / y.len() as f64)
}

/// `coverage(x, y) - coverage(y, x)`.
pub fn difference_of_coverage(x: &[TradeoffPoint], y: &[TradeoffPoint]) -> Result<f64> {
    Ok(CoverageReport::compute(x, y)?.doc_xy)
}

/// Both directed coverages of a pair of curves and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub c_xy: f64,
    pub c_yx: f64,
    pub doc_xy: f64,
}

impl CoverageReport {
    pub fn compute(x: &[TradeoffPoint], y: &[TradeoffPoint]) -> Result<Self> {
        Ok(Self::from_coverages(coverage(x, y)?, coverage(y, x)?))
    }

    /// Builds a report from already-known coverage values, e.g. averages
    /// over a benchmark suite.
    pub fn from_coverages(c_xy: f64, c_yx: f64) -> Self {
        Self {
            c_xy,
            c_yx,
            doc_xy: c_xy - c_yx,
        }
    }
}

/// Ordinary least squares fit of `test` on `train`, with the Pearson
/// correlation of the two series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    pub r: f64,
    pub n: usize,
}

pub fn linear_fit_correlation(train: &[f64], test: &[f64]) -> Result<FitReport> {
    if train.len() != test.len() {
        return Err(Error::LengthMismatch {
            left: train.len(),
            right: test.len(),
        });
    }
    let n = train.len();
    if n < 2 {
        return Err(Error::DegenerateFit("at least two samples are required"));
    }
    if train.iter().chain(test).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFit("samples must be finite"));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(train), mean(test));
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in train.iter().zip(test) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("training series has zero variance"));
    }
    if syy == 0.0 {
        return Err(Error::DegenerateFit("test series has zero variance"));
    }
    let slope = sxy / sxx;
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    Ok(FitReport {
        slope,
        intercept: my - slope * mx,
        r,
        n,
    })
}

pub fn arithmetic_mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Harmonic mean; undefined (None) when any value is non-positive.
pub fn harmonic_mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() || values.iter().any(|&v| v <= 0.0) {
        return None;
    }
    Some(values.len() as f64 / values.iter().map(|v| 1.0 / v).sum::<f64>())
}
