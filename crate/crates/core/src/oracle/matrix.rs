use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::energy::SingularPair;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vec2(pub [f64; 2]);

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Self {
        Vec2([x, y])
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2([c, s])
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1]
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn normalized(self) -> Self {
        let n = self.norm_sq().sqrt();
        Vec2([self.0[0] / n, self.0[1] / n])
    }
}

/// Row-major 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        Self::diag(1.0, 1.0)
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Self::new(a, 0.0, 0.0, d)
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, -s, s, c)
    }

    pub fn outer(xi: Vec2, eta: Vec2) -> Self {
        let (x, e) = (xi.0, eta.0);
        Self::new(x[0] * e[0], x[0] * e[1], x[1] * e[0], x[1] * e[1])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == 0.0 {
            return None;
        }
        let m = &self.0;
        Some(Self::new(
            m[1][1] / d,
            -m[0][1] / d,
            -m[1][0] / d,
            m[0][0] / d,
        ))
    }

    /// Frobenius inner product `⟨A, B⟩ = tr(AᵀB)`.
    pub fn inner(&self, o: &Mat2) -> f64 {
        let (a, b) = (&self.0, &o.0);
        a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1]
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = &self.0;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        let m = &self.0;
        Vec2([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }

    /// `ξᵀ A η`, i.e. `⟨A, ξ⊗η⟩`.
    pub fn bilinear(&self, xi: Vec2, eta: Vec2) -> f64 {
        xi.dot(self.apply(eta))
    }

    pub fn entry(&self, k: usize) -> f64 {
        self.0[k / 2][k % 2]
    }

    pub fn with_entry_added(&self, k: usize, v: f64) -> Self {
        let mut m = *self;
        m.0[k / 2][k % 2] += v;
        m
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + o.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// `F = R(θ_left) · diag(λ₁, λ₂) · R(θ_right)` with `λ₁ ≥ λ₂ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Svd2 {
    pub singular: SingularPair,
    pub theta_left: f64,
    pub theta_right: f64,
}

impl Svd2 {
    pub fn reconstruct(&self) -> Mat2 {
        Mat2::rotation(self.theta_left)
            * Mat2::diag(self.singular.lambda1, self.singular.lambda2)
            * Mat2::rotation(self.theta_right)
    }
}

/// Closed-form SVD of a 2×2 matrix with positive determinant.
///
/// Splits `F` into its conformal part `q·R(α)` and anti-conformal part
/// `r·S(β)` (a reflection). Then `λ₁ = q + r`, `λ₂ = q - r`, and the two
/// rotation angles are the half sum and half difference of `α` and `β`.
pub fn svd2(f: &Mat2) -> Result<Svd2> {
    let det = f.det();
    if det <= 0.0 || !det.is_finite() {
        return Err(Error::NonPositiveDeterminant { det });
    }
    let [[a, b], [c, d]] = f.0;
    let e = 0.5 * (a + d);
    let fq = 0.5 * (a - d);
    let g = 0.5 * (c + b);
    let h = 0.5 * (c - b);
    let q = e.hypot(h);
    let r = fq.hypot(g);
    let lambda1 = q + r;
    let lambda2 = det / lambda1;
    let a1 = g.atan2(fq);
    let a2 = h.atan2(e);
    Ok(Svd2 {
        singular: SingularPair { lambda1, lambda2 },
        theta_left: 0.5 * (a2 + a1),
        theta_right: 0.5 * (a2 - a1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_reconstructs(f: Mat2) {
        let s = svd2(&f).unwrap();
        let err = (s.reconstruct() - f).norm();
        assert!(err < 1e-12 * f.norm().max(1.0), "err {err} for {f:?}");
        assert!(s.singular.lambda1 >= s.singular.lambda2 && s.singular.lambda2 > 0.0);
    }

    #[test]
    fn identity_and_diagonal() {
        let s = svd2(&Mat2::identity()).unwrap();
        assert_eq!((s.singular.lambda1, s.singular.lambda2), (1.0, 1.0));
        assert_eq!((s.theta_left, s.theta_right), (0.0, 0.0));
        let s = svd2(&Mat2::diag(3.0, 2.0)).unwrap();
        assert_eq!((s.singular.lambda1, s.singular.lambda2), (3.0, 2.0));
        assert_eq!((s.theta_left, s.theta_right), (0.0, 0.0));
        assert_reconstructs(Mat2::diag(2.0, 3.0));
    }

    #[test]
    fn simple_shear() {
        let f = Mat2::new(1.0, 1.0, 0.0, 1.0);
        let s = svd2(&f).unwrap().singular;
        assert!((s.lambda1 * s.lambda2 - 1.0).abs() < 1e-15);
        assert!((s.lambda1.powi(2) + s.lambda2.powi(2) - 3.0).abs() < 1e-14);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s.lambda1 - golden).abs() < 1e-15);
        assert_reconstructs(f);
    }

    #[test]
    fn general_matrices() {
        assert_reconstructs(Mat2::new(0.3, -2.0, 1.1, 0.7));
        assert_reconstructs(Mat2::rotation(2.9) * Mat2::diag(1e-3, 40.0) * Mat2::rotation(-1.2));
        assert_reconstructs(Mat2::new(-1.0, 0.0, 0.0, -2.0));
    }

    #[test]
    fn rejects_non_positive_determinant() {
        assert!(matches!(
            svd2(&Mat2::diag(1.0, -1.0)),
            Err(Error::NonPositiveDeterminant { .. })
        ));
        assert!(svd2(&Mat2::new(1.0, 2.0, 2.0, 4.0)).is_err());
    }
}
