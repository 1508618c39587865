use serde::Serialize;

use super::{
    ConditionId, ConditionReport, RankOneVerdict, Route, Verdict, Witness, DEFAULT_T_GRID,
    DEFAULT_Z_GRID,
};
use crate::energy::SplitEnergy;
use crate::expr::Expr;
use crate::grid::Grid;
use crate::scalar_inf::{convexity_verdict, Convexity};

pub const CLASSIFY_SAMPLES: usize = 64;
const FIT_RESIDUAL: f64 = 1e-9;

/// Energies whose rank-one convexity reduces to convexity of one profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Structure {
    /// `h = μ·½(t + 1/t) + const`: rank-one convex iff `f` is convex.
    HadamardK {
        mu: f64,
        f_convexity: Convexity,
    },
    /// `h = μ·ĥ`, `f = (κ/2)·ĥ + const` with `ĥ″(1) = 1`: rank-one convex
    /// iff `h` is convex.
    IdealizedSameH {
        mu: f64,
        kappa: f64,
        h_convexity: Convexity,
    },
    General,
}

/// Least-squares `r` with `u ≈ r·v`, accepted when the relative residual is
/// below `FIT_RESIDUAL` and `r > 0`.
fn fit_ratio(u: &[f64], v: &[f64]) -> Option<f64> {
    let vv: f64 = v.iter().map(|v| v * v).sum();
    let uu: f64 = u.iter().map(|u| u * u).sum();
    if vv == 0.0 || uu == 0.0 {
        return None;
    }
    let r = u.iter().zip(v).map(|(u, v)| u * v).sum::<f64>() / vv;
    let res: f64 = u.iter().zip(v).map(|(u, v)| (u - r * v).powi(2)).sum();
    (r > 0.0 && res.sqrt() <= FIT_RESIDUAL * uu.sqrt()).then_some(r)
}

fn offsets(e: &Expr, xs: &[f64]) -> Option<Vec<f64>> {
    let base = e.eval(1.0).ok()?;
    xs.iter()
        .map(|&x| e.eval(x).ok().map(|v| v - base))
        .collect()
}

fn convexity_on(e: &Expr, g: &Grid) -> Option<Convexity> {
    convexity_verdict(e, g.lo, g.hi, g.points, super::DEFAULT_TOL).ok()
}

/// Numeric detection of the two structural forms; `General` when neither
/// fits or anything fails to evaluate.
pub fn classify_structure(e: &SplitEnergy) -> Structure {
    let xs = Grid::log(1e-2, 1e2, CLASSIFY_SAMPLES).values();
    let Some(h) = offsets(&e.h, &xs) else {
        return Structure::General;
    };
    let k: Vec<f64> = xs.iter().map(|t| 0.5 * (t + 1.0 / t) - 1.0).collect();
    if let Some(mu) = fit_ratio(&h, &k) {
        if let Some(f_convexity) = convexity_on(&e.f, &DEFAULT_Z_GRID) {
            return Structure::HadamardK { mu, f_convexity };
        }
    }
    let Some(f) = offsets(&e.f, &xs) else {
        return Structure::General;
    };
    if let (Some(r), Ok(j)) = (fit_ratio(&f, &h), e.h.eval_jet2(1.0)) {
        let mu = j.d2;
        if mu > 0.0 {
            if let Some(h_convexity) = convexity_on(&e.h, &DEFAULT_T_GRID) {
                return Structure::IdealizedSameH {
                    mu,
                    kappa: 2.0 * r * mu,
                    h_convexity,
                };
            }
        }
    }
    Structure::General
}

/// The verdict implied by a structural match; `None` for `General`.
pub fn classification_verdict(s: &Structure, tol: f64) -> Option<RankOneVerdict> {
    let (c, grid, witness): (_, _, fn(f64) -> Witness) = match *s {
        Structure::HadamardK { f_convexity, .. } => (f_convexity, DEFAULT_Z_GRID, Witness::z),
        Structure::IdealizedSameH { h_convexity, .. } => (h_convexity, DEFAULT_T_GRID, Witness::t),
        Structure::General => return None,
    };
    let (second, at) = match c {
        Convexity::Convex { min_second } => (min_second, None),
        Convexity::NonConvex { witness, second } => (second, Some(witness)),
        Convexity::Marginal { at, second } => (second, Some(at)),
    };
    let report = ConditionReport {
        id: ConditionId::Structure,
        verdict: Verdict::from_margin(second, tol),
        worst_margin: second,
        witness: at.map(witness),
        samples: grid.points,
        tolerance: tol,
    };
    Some(RankOneVerdict::new(Route::Classification, vec![report]))
}
