//! Planar isotropic energies with additive volumetric-isochoric split,
//! `W(F) = h(λ₁/λ₂) + f(λ₁λ₂)`.

mod catalog;
mod file;
mod general;

use std::collections::BTreeMap;

use serde::Serialize;

pub use catalog::{catalog, CatalogId, CATALOG_NAMES};
pub use file::parse_energy_file;
pub use general::{permutation_asymmetry, FnEnergy, IsotropicEnergy, Partials, SplitGeneral};

use crate::error::{Error, Result};
use crate::expr::{Expr, Jet2};
use crate::grid::Grid;
use crate::oracle::{svd2, Mat2};

/// Number of log-spaced points on `[1e-3, 1e3]` used to validate `h(t) = h(1/t)`.
pub const SYMMETRY_SAMPLES: usize = 64;
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Isochoric ratio `t = λ₁/λ₂` and determinant `z = λ₁λ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitCoordinates {
    pub t: f64,
    pub z: f64,
}

impl SplitCoordinates {
    pub fn new(t: f64, z: f64) -> Result<Self> {
        if !(t > 0.0 && z > 0.0 && t.is_finite() && z.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "split coordinates must be positive, got t = {t}, z = {z}"
            )));
        }
        Ok(Self { t, z })
    }

    pub fn to_singular(self) -> SingularPair {
        SingularPair {
            lambda1: (self.z * self.t).sqrt(),
            lambda2: (self.z / self.t).sqrt(),
        }
    }
}

/// Singular values of a deformation gradient, in either order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularPair {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl SingularPair {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        if !(lambda1 > 0.0 && lambda2 > 0.0 && lambda1.is_finite() && lambda2.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "singular values must be positive, got ({lambda1}, {lambda2})"
            )));
        }
        Ok(Self { lambda1, lambda2 })
    }

    pub fn to_coordinates(self) -> SplitCoordinates {
        SplitCoordinates {
            t: self.lambda1 / self.lambda2,
            z: self.lambda1 * self.lambda2,
        }
    }

    pub fn swapped(self) -> Self {
        Self {
            lambda1: self.lambda2,
            lambda2: self.lambda1,
        }
    }
}

/// `h` and `f` jets at one point of the split coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitJets {
    pub h: Jet2,
    pub f: Jet2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitEnergy {
    pub name: String,
    pub h: Expr,
    pub f: Expr,
    pub params: BTreeMap<String, f64>,
    pub catalog_id: Option<CatalogId>,
}

impl SplitEnergy {
    /// Parse and validate a split energy from source text.
    pub fn new(name: &str, h_source: &str, f_source: &str) -> Result<Self> {
        Self::with_params(name, h_source, f_source, BTreeMap::new())
    }

    pub fn with_params(
        name: &str,
        h_source: &str,
        f_source: &str,
        params: BTreeMap<String, f64>,
    ) -> Result<Self> {
        let h = Expr::parse_with(h_source, "t", &params)?;
        let f = Expr::parse_with(f_source, "z", &params)?;
        let energy = Self {
            name: name.to_string(),
            h,
            f,
            params,
            catalog_id: None,
        };
        energy.validate()?;
        Ok(energy)
    }

    /// Checks `h(t) = h(1/t)` on a log grid and `h'(1) = 0`.
    pub fn validate(&self) -> Result<()> {
        let grid = Grid::log(1e-3, 1e3, SYMMETRY_SAMPLES);
        let mut worst: Option<(f64, f64)> = None;
        for t in grid.values() {
            let a = self.h.eval(t)?;
            let b = self.h.eval(1.0 / t)?;
            let residual = (a - b).abs();
            if residual > SYMMETRY_TOL * (1.0 + a.abs()) && worst.is_none_or(|(_, r)| residual > r)
            {
                worst = Some((t, residual));
            }
        }
        if let Some((t, residual)) = worst {
            return Err(Error::SymmetryViolation { t, residual });
        }
        let slope = self.h.eval_jet2(1.0)?.d1;
        if slope.abs() >= SYMMETRY_TOL {
            return Err(Error::NonStationaryAtOne { value: slope });
        }
        Ok(())
    }

    pub fn h_jet(&self, t: f64) -> Result<Jet2> {
        self.h.eval_jet2(t)
    }

    pub fn f_jet(&self, z: f64) -> Result<Jet2> {
        self.f.eval_jet2(z)
    }

    pub fn jets(&self, c: SplitCoordinates) -> Result<SplitJets> {
        Ok(SplitJets {
            h: self.h_jet(c.t)?,
            f: self.f_jet(c.z)?,
        })
    }

    /// `W = h(λ₁/λ₂) + f(λ₁λ₂)`.
    pub fn eval_w(&self, p: SingularPair) -> Result<f64> {
        let c = p.to_coordinates();
        Ok(self.h.eval(c.t)? + self.f.eval(c.z)?)
    }

    pub fn eval_w_iso(&self, p: SingularPair) -> Result<f64> {
        self.h.eval(p.to_coordinates().t)
    }

    pub fn eval_w_vol(&self, p: SingularPair) -> Result<f64> {
        self.f.eval(p.to_coordinates().z)
    }

    /// `W(F)` through the singular values of `F`.
    pub fn eval_w_matrix(&self, f: &Mat2) -> Result<f64> {
        let svd = svd2(f)?;
        self.eval_w(svd.singular)
    }

    pub fn as_general(&self) -> SplitGeneral<'_> {
        SplitGeneral::new(self)
    }

    /// Same `h` and `f` with additive constants; verdicts must not change.
    pub fn shifted(&self, dh: f64, df: f64) -> Result<Self> {
        let mut e = Self::with_params(
            &self.name,
            &format!("({}) + ({dh:?})", self.h),
            &format!("({}) + ({df:?})", self.f),
            BTreeMap::new(),
        )?;
        e.catalog_id = self.catalog_id;
        Ok(e)
    }

    /// Adds `extra` (an expression in `z`) to the volumetric part.
    pub fn with_extra_volumetric(&self, extra: &str) -> Result<Self> {
        Self::with_params(
            &format!("{} + f~", self.name),
            &self.h.to_string(),
            &format!("({}) + ({extra})", self.f),
            BTreeMap::new(),
        )
    }
}
