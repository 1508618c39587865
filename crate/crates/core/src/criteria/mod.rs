//! Rank-one convexity criteria for planar isotropic energies.
//!
//! Every check samples a margin on a grid. Margins `< -tol` fail, margins in
//! `[-tol, 0)` are marginal, anything else holds. A failing report carries
//! the grid point where its margin is worst, which is a counterexample.

mod classify;
mod ks;
mod necessary;
mod voliso;

use std::fmt;

use serde::Serialize;

pub use classify::{classification_verdict, classify_structure, Structure, CLASSIFY_SAMPLES};
pub use ks::{ks_check, PairGrid};
pub use necessary::necessary_battery;
pub use voliso::{main_check, voliso_check, InfimumDomain, MainReport, VolisoCoefficients};

use crate::grid::Grid;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_T_GRID: Grid = Grid {
    lo: 1e-4,
    hi: 1e4,
    points: 4001,
    spacing: crate::grid::Spacing::Log,
};
pub const DEFAULT_Z_GRID: Grid = DEFAULT_T_GRID;

/// Margins whose magnitude is below this fraction of the magnitudes of
/// their summands are rounding noise and are set to zero.
pub const ROUNDOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConditionId {
    #[serde(rename = "KS_i")]
    KsI,
    #[serde(rename = "KS_ii")]
    KsIi,
    #[serde(rename = "KS_iii")]
    KsIii,
    #[serde(rename = "KS_iv")]
    KsIv,
    #[serde(rename = "KS_v")]
    KsV,
    A,
    B,
    C,
    D,
    Main1,
    Main2,
    Main3,
    Main4,
    #[serde(rename = "Nec_a")]
    NecA,
    #[serde(rename = "Nec_b")]
    NecB,
    #[serde(rename = "Nec_c")]
    NecC,
    #[serde(rename = "Nec_d")]
    NecD,
    #[serde(rename = "Nec_e")]
    NecE,
    CorollaryBC,
    /// Convexity of the remaining profile after a structural match.
    Structure,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("unit variant"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails,
    Marginal,
    Unbounded,
}

impl Verdict {
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        if margin < -tol {
            Verdict::Fails
        } else if margin < 0.0 {
            Verdict::Marginal
        } else {
            Verdict::Holds
        }
    }

    /// `Fails` or `Unbounded`.
    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fails | Verdict::Unbounded)
    }
}

/// Location of a worst margin. Only the coordinates meaningful for the
/// condition are set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

impl Witness {
    pub fn t(t: f64) -> Self {
        Self {
            t: Some(t),
            ..Self::default()
        }
    }

    pub fn z(z: f64) -> Self {
        Self {
            z: Some(z),
            ..Self::default()
        }
    }

    pub fn tz(t: f64, z: f64) -> Self {
        Self {
            t: Some(t),
            z: Some(z),
            ..Self::default()
        }
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Self {
            x: Some(x),
            y: Some(y),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub id: ConditionId,
    pub verdict: Verdict,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub worst_margin: f64,
    pub witness: Option<Witness>,
    pub samples: usize,
    pub tolerance: f64,
}

impl ConditionReport {
    fn from_worst(id: ConditionId, w: Worst, tol: f64) -> Self {
        Self {
            id,
            verdict: Verdict::from_margin(w.margin, tol),
            worst_margin: w.margin,
            witness: w.witness,
            samples: w.samples,
            tolerance: tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Overall {
    RankOneConvex,
    NotRankOneConvex,
    Inconclusive,
}

impl fmt::Display for Overall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Overall::RankOneConvex => "RankOneConvex",
            Overall::NotRankOneConvex => "NotRankOneConvex",
            Overall::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    #[serde(rename = "KS")]
    Ks,
    Voliso,
    MainTheorem,
    Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankOneVerdict {
    pub overall: Overall,
    pub reports: Vec<ConditionReport>,
    pub route: Route,
}

impl RankOneVerdict {
    pub fn new(route: Route, reports: Vec<ConditionReport>) -> Self {
        Self {
            overall: overall(&reports),
            reports,
            route,
        }
    }

    pub fn report(&self, id: ConditionId) -> Option<&ConditionReport> {
        self.reports.iter().find(|r| r.id == id)
    }
}

pub fn overall(reports: &[ConditionReport]) -> Overall {
    if reports
        .iter()
        .any(|r| r.verdict.is_failure() && r.witness.is_some())
    {
        Overall::NotRankOneConvex
    } else if reports.iter().all(|r| r.verdict == Verdict::Holds) {
        Overall::RankOneConvex
    } else {
        Overall::Inconclusive
    }
}

/// `value` with rounding noise relative to `scale` (the sum of the absolute
/// values of its summands) snapped to zero.
pub fn margin(value: f64, scale: f64) -> f64 {
    if value.abs() <= ROUNDOFF * scale {
        0.0
    } else {
        value
    }
}

/// Running minimum of a margin. Ties keep the earliest observation, so
/// merging partial results in index order is deterministic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Worst {
    pub margin: f64,
    pub witness: Option<Witness>,
    pub samples: usize,
}

impl Default for Worst {
    fn default() -> Self {
        Self {
            margin: f64::INFINITY,
            witness: None,
            samples: 0,
        }
    }
}

impl Worst {
    pub fn observe(&mut self, margin: f64, witness: Witness) {
        self.samples += 1;
        if margin < self.margin || self.witness.is_none() {
            self.margin = margin;
            self.witness = Some(witness);
        }
    }

    pub fn merge(mut self, other: Worst) -> Worst {
        self.samples += other.samples;
        if other.witness.is_some() && (self.witness.is_none() || other.margin < self.margin) {
            self.margin = other.margin;
            self.witness = other.witness;
        }
        self
    }
}
