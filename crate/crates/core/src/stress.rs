//! Principal Cauchy stresses of split energies, local invertibility of the
//! stress-stretch law and infinitesimal moduli.

use serde::Serialize;

use crate::criteria::Witness;
use crate::energy::{SingularPair, SplitEnergy};
use crate::error::Result;
use crate::grid::Grid;

pub const DEFAULT_UNIFORM_TOL: f64 = 1e-8;
/// Truncated grids for the invertibility check. Wider windows make
/// `f″ → 0` tails (e.g. `f = z + 1/z`) fall below any fixed tolerance.
pub const DEFAULT_INVERTIBILITY_GRID: Grid = Grid {
    lo: 1e-2,
    hi: 1e2,
    points: 2001,
    spacing: crate::grid::Spacing::Log,
};
pub const STRESS_FREE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StressState {
    pub sigma1: f64,
    pub sigma2: f64,
    /// Deviatoric Kirchhoff magnitude `z·h′(t)/λ₂² = t·h′(t)`.
    pub tau_iso: f64,
    /// `z·f′(z)`.
    pub tau_vol: f64,
    pub det_d_sigma: f64,
}

/// `σ̂₁,₂ = ±h′(t)/λ₂² + f′(z)`.
pub fn principal_cauchy(e: &SplitEnergy, p: SingularPair) -> Result<StressState> {
    let p = SingularPair::new(p.lambda1, p.lambda2)?;
    let c = p.to_coordinates();
    let j = e.jets(c)?;
    let iso = j.h.d1 / (p.lambda2 * p.lambda2);
    Ok(StressState {
        sigma1: iso + j.f.d1,
        sigma2: -iso + j.f.d1,
        tau_iso: c.t * j.h.d1,
        tau_vol: c.z * j.f.d1,
        det_d_sigma: 4.0 * j.f.d2 / (p.lambda2 * p.lambda2) * (c.t * j.h.d2 + j.h.d1),
    })
}

/// `det ∂(σ̂₁, σ̂₂)/∂(λ₁, λ₂) = 4f″(z)/λ₂²·[t·h″(t) + h′(t)]`.
pub fn stress_jacobian_det(e: &SplitEnergy, p: SingularPair) -> Result<f64> {
    Ok(principal_cauchy(e, p)?.det_d_sigma)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Invertibility {
    LocallyInvertible {
        min_f2: f64,
        min_th2_h1: f64,
    },
    NotCertified {
        reason: String,
    },
    /// One factor of the Jacobian determinant is negative at `witness`.
    Degenerate {
        witness: Witness,
        value: f64,
    },
}

fn grid_min(g: &Grid, f: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    g.validate()?;
    let mut best = (f64::INFINITY, g.lo);
    for x in g.values() {
        let v = f(x)?;
        if v < best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

/// Sampled version of: `f″ > 0` uniformly and `t·h″ + h′ > 0`.
///
/// A degenerate factor is reported at the reference state (`z = 1`,
/// resp. `t = 1`) when it already fails there, otherwise at the grid
/// minimizer.
pub fn invertibility_verdict(
    e: &SplitEnergy,
    t_grid: &Grid,
    z_grid: &Grid,
    tol: f64,
) -> Result<Invertibility> {
    let f2_at = |z: f64| Ok(e.f_jet(z)?.d2);
    let q_at = |t: f64| {
        let j = e.h_jet(t)?;
        Ok(t * j.d2 + j.d1)
    };
    let (f2, z_at) = grid_min(z_grid, f2_at)?;
    let (q, t_at) = grid_min(t_grid, q_at)?;
    if f2 <= -tol {
        let reference = f2_at(1.0)?;
        let (z, value) = if reference <= -tol {
            (1.0, reference)
        } else {
            (z_at, f2)
        };
        return Ok(Invertibility::Degenerate {
            witness: Witness::z(z),
            value,
        });
    }
    if q <= -tol {
        let reference = q_at(1.0)?;
        let (t, value) = if reference <= -tol {
            (1.0, reference)
        } else {
            (t_at, q)
        };
        return Ok(Invertibility::Degenerate {
            witness: Witness::t(t),
            value,
        });
    }
    if f2 > tol && q > tol {
        return Ok(Invertibility::LocallyInvertible {
            min_f2: f2,
            min_th2_h1: q,
        });
    }
    let reason = if f2 <= tol {
        format!("f'' reaches {f2:e} at z = {z_at}, not uniformly above {tol:e}")
    } else {
        format!("t h'' + h' reaches {q:e} at t = {t_at}, not above {tol:e}")
    };
    Ok(Invertibility::NotCertified { reason })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfinitesimalModuli {
    pub mu: f64,
    pub kappa: f64,
    pub lame_lambda: f64,
    /// `f′(1) = 0`, i.e. the identity is stress free.
    pub stress_free: bool,
}

pub fn infinitesimal_moduli(e: &SplitEnergy) -> Result<InfinitesimalModuli> {
    let h = e.h_jet(1.0)?;
    let f = e.f_jet(1.0)?;
    Ok(InfinitesimalModuli {
        mu: h.d2,
        kappa: f.d2,
        lame_lambda: f.d2 - h.d2,
        stress_free: f.d1.abs() < STRESS_FREE_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinearVerdict {
    Strict,
    RankOneConvex,
    Not,
}

/// Sign conditions of `W_lin(ξ⊗η) = ½μ|ξ|²|η|² + ½κ⟨ξ,η⟩²`.
pub fn linear_rank_one_check(mu: f64, kappa: f64) -> LinearVerdict {
    if mu > 0.0 && mu + kappa > 0.0 {
        LinearVerdict::Strict
    } else if mu >= 0.0 && mu + kappa >= 0.0 {
        LinearVerdict::RankOneConvex
    } else {
        LinearVerdict::Not
    }
}
