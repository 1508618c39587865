//! Shared fixtures for the benchmarks.

use voliso::{catalog, CatalogId, SplitEnergy};

/// Energies exercised by every benchmark: the two worked examples and the
/// isochoric exp-Hencky model with its non-elliptic cones.
pub fn fixtures() -> Vec<(&'static str, SplitEnergy)> {
    [
        ("example1", CatalogId::Example1),
        ("example2", CatalogId::Example2),
        (
            "exp-hencky-iso",
            CatalogId::ExpHenckyIso { mu: 1.0, k: 0.1 },
        ),
    ]
    .into_iter()
    .map(|(name, id)| (name, catalog(id).expect("catalog energy")))
    .collect()
}
