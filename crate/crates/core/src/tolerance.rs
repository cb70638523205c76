//! The comparison contract shared by every predicate.

use serde::{Deserialize, Serialize};

/// Absolute/relative thresholds used for every boundary decision.
///
/// `x <= y` holds when `x - y <= abs + rel * max(|x|, |y|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-9,
            rel: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        assert!(
            abs >= 0.0 && rel >= 0.0,
            "tolerance components must be non-negative"
        );
        Self { abs, rel }
    }

    /// Both components zero: plain floating-point comparisons.
    pub fn exact() -> Self {
        Self { abs: 0.0, rel: 0.0 }
    }

    #[inline]
    fn slack(&self, x: f64, y: f64) -> f64 {
        self.abs + self.rel * x.abs().max(y.abs())
    }

    /// `x <= y` within tolerance.
    #[inline]
    pub fn le(&self, x: f64, y: f64) -> bool {
        x - y <= self.slack(x, y)
    }

    /// `x < y` beyond tolerance; the exact negation of `le(y, x)`.
    #[inline]
    pub fn lt(&self, x: f64, y: f64) -> bool {
        !self.le(y, x)
    }

    /// `x == y` within tolerance.
    #[inline]
    pub fn eq(&self, x: f64, y: f64) -> bool {
        self.le(x, y) && self.le(y, x)
    }

    /// Scales the absolute component, leaving the relative one untouched.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs: self.abs * factor,
            rel: self.rel,
        }
    }

    /// The threshold a value near `magnitude` must clear to count as nonzero.
    pub fn threshold_at(&self, magnitude: f64) -> f64 {
        self.abs + self.rel * magnitude.abs()
    }
}
