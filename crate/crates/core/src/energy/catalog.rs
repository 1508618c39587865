//! Built-in energies.
//!
//! Hencky-type entries are reduced to `(h, f)` form with the planar
//! identities `‖dev₂ log V‖² = ½(log t)²` and `tr log V = log z`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::SplitEnergy;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum CatalogId {
    /// `e^{(log t)²/10} + (z - 1/z)²/60`: isochoric part not rank-one convex,
    /// total energy rank-one convex.
    Example1,
    /// `6/5 (t - 1/t)² + (z - 1/z)⁴ - (z - 1/z)²`: double-well volumetric
    /// part, total energy rank-one convex.
    Example2,
    /// `μ𝕂 + κ/2 (z - 1)²` with the distortion `𝕂 = ½(t + 1/t)`.
    HadamardK { mu: f64, kappa: f64 },
    /// `μ𝕂 - (z - 1)²`, concave volumetric part.
    HadamardKNonConvex { mu: f64 },
    /// Planar Hencky, `μ/2 (log t)² + κ/2 (log z)²`.
    Hencky { mu: f64, kappa: f64 },
    /// Planar exponentiated Hencky,
    /// `μ/k e^{k/2 (log t)²} + κ/(2k̂) e^{k̂ (log z)²}`.
    ExpHencky {
        mu: f64,
        k: f64,
        kappa: f64,
        khat: f64,
    },
    /// Isochoric exponential-log energy `μ e^{k (log t)²}` alone.
    ExpHenckyIso { mu: f64, k: f64 },
    /// `μ e^{k (log t)²} + c (z - 1/z)²`.
    ExpHenckyCoupled { mu: f64, k: f64, c: f64 },
    /// Same-`h` idealization `μ h(t) + κ/2 h(z)` with `h = ½(t + 1/t) - 1`.
    Idealized { mu: f64, kappa: f64 },
}

/// Catalog names accepted by [`CatalogId::from_name`].
pub const CATALOG_NAMES: &[&str] = &[
    "example1",
    "example2",
    "hadamard-k",
    "hadamard-k-nonconvex",
    "hencky",
    "exp-hencky",
    "exp-hencky-iso",
    "exp-hencky-coupled",
    "idealized",
];

impl CatalogId {
    /// Look up an entry by name; missing parameters take their defaults.
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let p = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
        Ok(match name {
            "example1" => CatalogId::Example1,
            "example2" => CatalogId::Example2,
            "hadamard-k" => CatalogId::HadamardK {
                mu: p("mu", 1.0),
                kappa: p("kappa", 1.0),
            },
            "hadamard-k-nonconvex" => CatalogId::HadamardKNonConvex { mu: p("mu", 1.0) },
            "hencky" => CatalogId::Hencky {
                mu: p("mu", 1.0),
                kappa: p("kappa", 1.0),
            },
            "exp-hencky" => CatalogId::ExpHencky {
                mu: p("mu", 1.0),
                k: p("k", 1.0),
                kappa: p("kappa", 1.0),
                khat: p("khat", 1.0),
            },
            "exp-hencky-iso" => CatalogId::ExpHenckyIso {
                mu: p("mu", 1.0),
                k: p("k", 0.1),
            },
            "exp-hencky-coupled" => CatalogId::ExpHenckyCoupled {
                mu: p("mu", 1.0),
                k: p("k", 0.1),
                c: p("c", 1e-3),
            },
            "idealized" => CatalogId::Idealized {
                mu: p("mu", 1.0),
                kappa: p("kappa", 1.0),
            },
            other => return Err(Error::UnknownCatalogId(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            CatalogId::Example1 => "example1",
            CatalogId::Example2 => "example2",
            CatalogId::HadamardK { .. } => "hadamard-k",
            CatalogId::HadamardKNonConvex { .. } => "hadamard-k-nonconvex",
            CatalogId::Hencky { .. } => "hencky",
            CatalogId::ExpHencky { .. } => "exp-hencky",
            CatalogId::ExpHenckyIso { .. } => "exp-hencky-iso",
            CatalogId::ExpHenckyCoupled { .. } => "exp-hencky-coupled",
            CatalogId::Idealized { .. } => "idealized",
        }
    }

    /// Every entry with its default parameters.
    pub fn all_defaults() -> Vec<CatalogId> {
        let none = BTreeMap::new();
        CATALOG_NAMES
            .iter()
            .map(|n| CatalogId::from_name(n, &none).expect("known name"))
            .collect()
    }

    fn sources(&self) -> (&'static str, &'static str, Vec<(&'static str, f64)>) {
        match *self {
            CatalogId::Example1 => ("exp((1/10)*log(t)^2)", "(1/60)*(z - 1/z)^2", vec![]),
            CatalogId::Example2 => ("(6/5)*(t - 1/t)^2", "(z - 1/z)^4 - (z - 1/z)^2", vec![]),
            CatalogId::HadamardK { mu, kappa } => (
                "mu*(1/2)*(t + 1/t)",
                "(kappa/2)*(z - 1)^2",
                vec![("mu", mu), ("kappa", kappa)],
            ),
            CatalogId::HadamardKNonConvex { mu } => {
                ("mu*(1/2)*(t + 1/t)", "-(z - 1)^2", vec![("mu", mu)])
            }
            CatalogId::Hencky { mu, kappa } => (
                "(mu/2)*log(t)^2",
                "(kappa/2)*log(z)^2",
                vec![("mu", mu), ("kappa", kappa)],
            ),
            CatalogId::ExpHencky { mu, k, kappa, khat } => (
                "(mu/k)*exp((k/2)*log(t)^2)",
                "(kappa/(2*khat))*exp(khat*log(z)^2)",
                vec![("mu", mu), ("k", k), ("kappa", kappa), ("khat", khat)],
            ),
            CatalogId::ExpHenckyIso { mu, k } => {
                ("mu*exp(k*log(t)^2)", "0", vec![("mu", mu), ("k", k)])
            }
            CatalogId::ExpHenckyCoupled { mu, k, c } => (
                "mu*exp(k*log(t)^2)",
                "c*(z - 1/z)^2",
                vec![("mu", mu), ("k", k), ("c", c)],
            ),
            CatalogId::Idealized { mu, kappa } => (
                "mu*((1/2)*(t + 1/t) - 1)",
                "(kappa/2)*((1/2)*(z + 1/z) - 1)",
                vec![("mu", mu), ("kappa", kappa)],
            ),
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CatalogId::from_name(s, &BTreeMap::new())
    }
}

/// Build the named catalog energy.
pub fn catalog(id: CatalogId) -> Result<SplitEnergy> {
    let (h, f, params) = id.sources();
    let params: BTreeMap<String, f64> = params
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let mut e = SplitEnergy::with_params(id.name(), h, f, params)?;
    e.catalog_id = Some(id);
    Ok(e)
}
