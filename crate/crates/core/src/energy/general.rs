use serde::Serialize;

use super::{SplitCoordinates, SplitEnergy};
use crate::error::Result;

/// Value and all first and second partials of `g(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Partials {
    pub g: f64,
    pub g_x: f64,
    pub g_y: f64,
    pub g_xx: f64,
    pub g_xy: f64,
    pub g_yy: f64,
}

/// An isotropic energy given through its singular-value representation
/// `W(F) = g(λ₁, λ₂)` with `g` permutation symmetric.
pub trait IsotropicEnergy: Sync {
    fn partials(&self, x: f64, y: f64) -> Result<Partials>;
}

/// Adapter from a closure, mostly for test fixtures.
pub struct FnEnergy<F>(pub F);

impl<F> IsotropicEnergy for FnEnergy<F>
where
    F: Fn(f64, f64) -> Result<Partials> + Sync,
{
    fn partials(&self, x: f64, y: f64) -> Result<Partials> {
        (self.0)(x, y)
    }
}

/// `g(x, y) = h(x/y) + f(xy)` with partials assembled from `h` and `f` jets.
#[derive(Debug, Clone, Copy)]
pub struct SplitGeneral<'a> {
    energy: &'a SplitEnergy,
}

impl<'a> SplitGeneral<'a> {
    pub fn new(energy: &'a SplitEnergy) -> Self {
        Self { energy }
    }
}

impl IsotropicEnergy for SplitGeneral<'_> {
    fn partials(&self, x: f64, y: f64) -> Result<Partials> {
        let c = SplitCoordinates::new(x / y, x * y)?;
        let j = self.energy.jets(c)?;
        let (h, f) = (j.h, j.f);
        let (t, z) = (c.t, c.z);
        let y2 = y * y;
        Ok(Partials {
            g: h.value + f.value,
            g_x: h.d1 / y + y * f.d1,
            g_y: -x / y2 * h.d1 + x * f.d1,
            g_xx: h.d2 / y2 + y2 * f.d2,
            g_xy: -h.d1 / y2 - x / (y2 * y) * h.d2 + f.d1 + z * f.d2,
            g_yy: 2.0 * x / (y2 * y) * h.d1 + t * t / y2 * h.d2 + x * x * f.d2,
        })
    }
}

/// Largest `|g(x, y) - g(y, x)|` over the sampled pairs, with its location.
pub fn permutation_asymmetry(
    g: &dyn IsotropicEnergy,
    pairs: &[(f64, f64)],
) -> Result<(f64, (f64, f64))> {
    let mut worst = (0.0, (1.0, 1.0));
    for &(x, y) in pairs {
        let d = (g.partials(x, y)?.g - g.partials(y, x)?.g).abs();
        if d > worst.0 {
            worst = (d, (x, y));
        }
    }
    Ok(worst)
}
