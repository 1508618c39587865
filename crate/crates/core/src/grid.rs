use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// One-dimensional sample grid on a positive interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn log(lo: f64, hi: f64, points: usize) -> Self {
        Self {
            lo,
            hi,
            points,
            spacing: Spacing::Log,
        }
    }

    pub fn linear(lo: f64, hi: f64, points: usize) -> Self {
        Self {
            lo,
            hi,
            points,
            spacing: Spacing::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::DegenerateGrid(format!(
                "need 0 < lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.points < 2 {
            return Err(Error::DegenerateGrid(format!(
                "need at least 2 points, got {}",
                self.points
            )));
        }
        Ok(())
    }

    /// The `i`-th sample. Log grids symmetric about 1 (`lo * hi == 1`) are
    /// generated from the exponent so that reciprocal points pair up.
    pub fn at(&self, i: usize) -> f64 {
        let n = (self.points - 1) as f64;
        let frac = i as f64 / n;
        match self.spacing {
            Spacing::Linear => {
                if i + 1 == self.points {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * frac
                }
            }
            Spacing::Log => {
                let (a, b) = (self.lo.ln(), self.hi.ln());
                if 2 * i + 1 == self.points && (a + b).abs() < 1e-12 {
                    return 1.0;
                }
                (a + (b - a) * frac).exp()
            }
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.at(i)).collect()
    }
}
