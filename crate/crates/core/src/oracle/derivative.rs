use serde::Serialize;

use super::matrix::{svd2, Mat2, Vec2};
use crate::energy::SplitEnergy;
use crate::error::{Error, Result};

/// Relative step used by the finite-difference routes, scaled by `‖F‖`.
pub const FD_RELATIVE_STEP: f64 = 3e-4;

/// Below this `|t - 1|` the distortion chain rule is replaced by its limit.
const CONFORMAL_BAND: f64 = 1e-5;

/// Unit directions `ξ, η` of a rank-one perturbation `ξ⊗η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankOneDirection {
    pub xi: Vec2,
    pub eta: Vec2,
}

impl RankOneDirection {
    pub fn new(xi: Vec2, eta: Vec2) -> Self {
        Self {
            xi: xi.normalized(),
            eta: eta.normalized(),
        }
    }

    pub fn from_angles(xi: f64, eta: f64) -> Self {
        Self {
            xi: Vec2::from_angle(xi),
            eta: Vec2::from_angle(eta),
        }
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::outer(self.xi, self.eta)
    }
}

/// Derivatives of the isochoric profile written as a function of the
/// distortion `𝕂 = ½‖F‖²/det F`, plus `f″` at `det F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionJets {
    pub psi1: f64,
    pub psi2: f64,
    pub f2: f64,
}

impl DistortionJets {
    /// Chain rule `h(t) = ψ(𝕂(t))`, `𝕂(t) = ½(t + 1/t)`, solved for `ψ′`
    /// and `ψ″`. Near `t = 1` the limit `ψ′ = h″/𝕂″` is used and `ψ″` is
    /// dropped; both errors are `O((t-1)²)`.
    pub fn at(e: &SplitEnergy, t: f64, z: f64) -> Result<Self> {
        let t = if t < 1.0 { 1.0 / t } else { t };
        let h = e.h_jet(t)?;
        let f2 = e.f_jet(z)?.d2;
        let k1 = (t - 1.0) * (t + 1.0) / (2.0 * t * t);
        let k2 = 1.0 / (t * t * t);
        if t - 1.0 < CONFORMAL_BAND {
            return Ok(Self {
                psi1: h.d2 / k2,
                psi2: 0.0,
                f2,
            });
        }
        debug_assert!(
            k1.abs() >= 1e-8,
            "distortion derivative vanished at t = {t}"
        );
        let psi1 = h.d1 / k1;
        let psi2 = (h.d2 - psi1 * k2) / (k1 * k1);
        Ok(Self { psi1, psi2, f2 })
    }
}

/// `D²W(F).(ξ⊗η, ξ⊗η)` together with the sum of the absolute values of its
/// three contributions, used to judge cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondDerivative {
    pub value: f64,
    pub scale: f64,
}

impl SecondDerivative {
    /// Value relative to its scale; `0` when every term vanishes.
    pub fn normalized(&self) -> f64 {
        if self.scale > 0.0 {
            self.value / self.scale
        } else {
            0.0
        }
    }
}

/// Per-matrix quantities reused across directions.
#[derive(Debug, Clone, Copy)]
pub struct MatrixPoint {
    pub f: Mat2,
    pub f_inv_t: Mat2,
    pub det: f64,
    pub norm_sq: f64,
    pub jets: DistortionJets,
}

impl MatrixPoint {
    pub fn new(e: &SplitEnergy, f: Mat2) -> Result<Self> {
        let svd = svd2(&f)?;
        let c = svd.singular.to_coordinates();
        let det = f.det();
        let f_inv_t = f
            .inverse()
            .ok_or(Error::NonPositiveDeterminant { det })?
            .transpose();
        Ok(Self {
            f,
            f_inv_t,
            det,
            norm_sq: f.norm_sq(),
            jets: DistortionJets::at(e, c.t, c.z)?,
        })
    }

    /// Second derivative along `ξ⊗η` in closed form:
    ///
    /// `ψ″(𝕂)·𝕂′² + ψ′(𝕂)·𝕂″ + f″(det F)·(det F)²·⟨F⁻ᵀ, ξ⊗η⟩²` where, with
    /// `a = ⟨F⁻ᵀ, ξ⊗η⟩`,
    /// `𝕂′ = (⟨F, ξ⊗η⟩ - ½‖F‖²a)/det F` and
    /// `𝕂″ = (|ξ|²|η|² - 2⟨F, ξ⊗η⟩a + ‖F‖²a²)/det F`.
    pub fn second_derivative(&self, d: &RankOneDirection) -> SecondDerivative {
        let fh = self.f.bilinear(d.xi, d.eta);
        let a = self.f_inv_t.bilinear(d.xi, d.eta);
        let hh = d.xi.norm_sq() * d.eta.norm_sq();
        let k1 = (fh - 0.5 * self.norm_sq * a) / self.det;
        let k2 = (hh - 2.0 * fh * a + self.norm_sq * a * a) / self.det;
        let iso2 = self.jets.psi2 * k1 * k1;
        let iso1 = self.jets.psi1 * k2;
        let vol = self.jets.f2 * self.det * self.det * a * a;
        SecondDerivative {
            value: iso2 + iso1 + vol,
            scale: iso2.abs() + iso1.abs() + vol.abs(),
        }
    }
}

/// Closed-form rank-one second derivative of a split energy.
pub fn analytic_second_derivative(
    e: &SplitEnergy,
    f: &Mat2,
    d: &RankOneDirection,
) -> Result<SecondDerivative> {
    Ok(MatrixPoint::new(e, *f)?.second_derivative(d))
}

fn default_step(f: &Mat2) -> f64 {
    f.norm() * FD_RELATIVE_STEP
}

/// Five-point central second difference of `s ↦ W(F + s ξ⊗η)` at `s = 0`.
pub fn fd_second_derivative(
    e: &SplitEnergy,
    f: &Mat2,
    d: &RankOneDirection,
    step: Option<f64>,
) -> Result<f64> {
    let h = step.unwrap_or_else(|| default_step(f));
    let dir = d.matrix();
    let w = |s: f64| -> Result<f64> {
        let g = *f + dir.scale(s);
        if g.det().is_nan() || g.det() <= 0.0 {
            return Err(Error::LeftGlPlus);
        }
        e.eval_w_matrix(&g)
    };
    let (wm2, wm1, w0, wp1, wp2) = (w(-2.0 * h)?, w(-h)?, w(0.0)?, w(h)?, w(2.0 * h)?);
    Ok((-wp2 + 16.0 * wp1 - 30.0 * w0 + 16.0 * wm1 - wm2) / (12.0 * h * h))
}

/// Acoustic tensor `Q(F, η)` with `⟨ξ, Qξ⟩ = D²W(F).(ξ⊗η, ξ⊗η)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcousticTensor {
    pub q: [[f64; 2]; 2],
    pub f: Mat2,
    pub eta: Vec2,
}

impl AcousticTensor {
    pub fn quadratic(&self, xi: Vec2) -> f64 {
        let q = &self.q;
        let x = xi.0;
        x[0] * (q[0][0] * x[0] + q[0][1] * x[1]) + x[1] * (q[1][0] * x[0] + q[1][1] * x[1])
    }

    pub fn trace(&self) -> f64 {
        self.q[0][0] + self.q[1][1]
    }

    pub fn det(&self) -> f64 {
        self.q[0][0] * self.q[1][1] - self.q[0][1] * self.q[1][0]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let half_tr = 0.5 * self.trace();
        let diff = 0.5 * (self.q[0][0] - self.q[1][1]);
        half_tr - diff.hypot(self.q[0][1])
    }

    /// Positive semidefinite via trace and determinant, up to `tol`.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }
}

/// Full 4×4 finite-difference Hessian of `W` contracted with `η`.
#[allow(clippy::needless_range_loop)]
pub fn acoustic_tensor(
    e: &SplitEnergy,
    f: &Mat2,
    eta: Vec2,
    step: Option<f64>,
) -> Result<AcousticTensor> {
    let eta = eta.normalized();
    let h = step.unwrap_or_else(|| default_step(f));
    let w = |g: Mat2| -> Result<f64> {
        if g.det().is_nan() || g.det() <= 0.0 {
            return Err(Error::LeftGlPlus);
        }
        e.eval_w_matrix(&g)
    };
    let w0 = w(*f)?;
    let mut hess = [[0.0; 4]; 4];
    for p in 0..4 {
        let at = |s: f64| w(f.with_entry_added(p, s));
        hess[p][p] = (-at(2.0 * h)? + 16.0 * at(h)? - 30.0 * w0 + 16.0 * at(-h)? - at(-2.0 * h)?)
            / (12.0 * h * h);
        for q in (p + 1)..4 {
            let at2 = |i: f64, j: f64| w(f.with_entry_added(p, i * h).with_entry_added(q, j * h));
            // fourth-order mixed stencil
            let near = at2(1.0, 1.0)? - at2(1.0, -1.0)? - at2(-1.0, 1.0)? + at2(-1.0, -1.0)?;
            let cross = at2(1.0, 2.0)? + at2(2.0, 1.0)? + at2(-1.0, -2.0)? + at2(-2.0, -1.0)?
                - at2(1.0, -2.0)?
                - at2(2.0, -1.0)?
                - at2(-1.0, 2.0)?
                - at2(-2.0, 1.0)?;
            let far = at2(2.0, 2.0)? - at2(2.0, -2.0)? - at2(-2.0, 2.0)? + at2(-2.0, -2.0)?;
            let v = (64.0 * near - 8.0 * cross + far) / (144.0 * h * h);
            hess[p][q] = v;
            hess[q][p] = v;
        }
    }
    // Q_ik = Σ_jl ∂²W/∂F_ij∂F_kl η_j η_l, entry index of F_ij is 2i + j
    let mut q = [[0.0; 2]; 2];
    for (i, row) in q.iter_mut().enumerate() {
        for (k, qik) in row.iter_mut().enumerate() {
            let mut s = 0.0;
            for j in 0..2 {
                for l in 0..2 {
                    s += hess[2 * i + j][2 * k + l] * eta.0[j] * eta.0[l];
                }
            }
            *qik = s;
        }
    }
    let off = 0.5 * (q[0][1] + q[1][0]);
    q[0][1] = off;
    q[1][0] = off;
    Ok(AcousticTensor { q, f: *f, eta })
}
