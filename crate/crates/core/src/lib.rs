//! Rank-one convexity of planar isotropic energies with an additive
//! volumetric-isochoric split `W(F) = h(λ₁/λ₂) + f(λ₁λ₂)`.
//!
//! Energies are given as expressions in `t` and `z` ([`expr`]), checked by
//! several equivalent families of conditions ([`criteria`]) and
//! cross-checked against the matrix-side Legendre-Hadamard condition
//! ([`oracle`], [`scan`]).

pub mod criteria;
pub mod energy;
pub mod error;
pub mod expr;
pub mod grid;
pub mod oracle;
pub mod report;
pub mod scalar_inf;
pub mod scan;
pub mod stress;

pub use criteria::{
    ks_check, main_check, necessary_battery, voliso_check, ConditionId, ConditionReport,
    InfimumDomain, Overall, PairGrid, RankOneVerdict, Route, Verdict, Witness,
};
pub use energy::{catalog, CatalogId, SingularPair, SplitCoordinates, SplitEnergy};
pub use error::{Error, Result};
pub use expr::{Expr, Jet2};
pub use grid::{Grid, Spacing};
pub use oracle::{Mat2, Vec2};
pub use scalar_inf::InfimumResult;
