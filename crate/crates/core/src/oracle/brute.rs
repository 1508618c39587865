use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::derivative::{MatrixPoint, RankOneDirection, SecondDerivative};
use super::matrix::{Mat2, Vec2};
use crate::energy::SplitEnergy;
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    /// Singular-value grid is `n_lambda × n_lambda` log-spaced points.
    pub n_lambda: usize,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    /// Left and right rotation angles, each on `n_rotations` points of `[0, 2π)`.
    pub n_rotations: usize,
    /// `ξ` and `η` angles, each on `n_angles` points of `[0, π)`.
    pub n_angles: usize,
    pub refinements: usize,
    pub seed: u64,
    /// A direction is a violation when `value < -tol * scale`.
    pub tol: f64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self {
            n_lambda: 20,
            lambda_lo: 1e-2,
            lambda_hi: 1e2,
            n_rotations: 8,
            n_angles: 24,
            refinements: 1000,
            seed: 0x5eed,
            tol: 1e-8,
        }
    }
}

/// One sampled configuration `F = R(α)·diag(λ₁, λ₂)·R(β)` and direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub lambda1: f64,
    pub lambda2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub xi_angle: f64,
    pub eta_angle: f64,
}

impl Sample {
    pub fn matrix(&self) -> Mat2 {
        Mat2::rotation(self.alpha)
            * Mat2::diag(self.lambda1, self.lambda2)
            * Mat2::rotation(self.beta)
    }

    pub fn direction(&self) -> RankOneDirection {
        RankOneDirection::from_angles(self.xi_angle, self.eta_angle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleVerdict {
    NoViolationFound,
    Violation {
        f: Mat2,
        xi: Vec2,
        eta: Vec2,
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceReport {
    pub verdict: OracleVerdict,
    /// Most negative normalized second derivative seen, and where.
    pub min_normalized: f64,
    pub worst: Sample,
    pub worst_value: SecondDerivative,
    pub samples: usize,
    /// Matrices where the energy could not be evaluated.
    pub skipped: usize,
}

#[derive(Clone, Copy)]
struct Best {
    normalized: f64,
    value: SecondDerivative,
    sample: Sample,
}

fn better(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.normalized < x.normalized { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Minimum over a direction grid at one matrix. Ties keep the first index.
fn scan_directions(point: &MatrixPoint, base: Sample, angles: &[f64]) -> Option<Best> {
    let mut best: Option<Best> = None;
    for &a in angles {
        for &b in angles {
            let d = RankOneDirection::from_angles(a, b);
            let value = point.second_derivative(&d);
            let cand = Best {
                normalized: value.normalized(),
                value,
                sample: Sample {
                    xi_angle: a,
                    eta_angle: b,
                    ..base
                },
            };
            best = better(best, Some(cand));
        }
    }
    best
}

/// Sampled search for a Legendre-Hadamard violation on `GL⁺(2)`.
///
/// Deterministic for a fixed `spec`: the grid phase reduces in sample index
/// order and the refinement phase uses a seeded generator.
pub fn brute_force_check(e: &SplitEnergy, spec: &SampleSpec) -> BruteForceReport {
    let lambdas = Grid::log(spec.lambda_lo, spec.lambda_hi, spec.n_lambda.max(2)).values();
    let rot = |k: usize| 2.0 * std::f64::consts::PI * k as f64 / spec.n_rotations.max(1) as f64;
    let angles: Vec<f64> = (0..spec.n_angles.max(1))
        .map(|k| std::f64::consts::PI * k as f64 / spec.n_angles.max(1) as f64)
        .collect();

    let mut bases = Vec::new();
    for &l1 in &lambdas {
        for &l2 in &lambdas {
            for ia in 0..spec.n_rotations.max(1) {
                for ib in 0..spec.n_rotations.max(1) {
                    bases.push(Sample {
                        lambda1: l1,
                        lambda2: l2,
                        alpha: rot(ia),
                        beta: rot(ib),
                        xi_angle: 0.0,
                        eta_angle: 0.0,
                    });
                }
            }
        }
    }

    let per_sample: Vec<Option<Best>> = bases
        .par_iter()
        .map(|base| {
            MatrixPoint::new(e, base.matrix())
                .ok()
                .and_then(|p| scan_directions(&p, *base, &angles))
        })
        .collect();
    let skipped = per_sample.iter().filter(|b| b.is_none()).count();
    let mut samples = (bases.len() - skipped) * angles.len() * angles.len();
    let mut best = per_sample.into_iter().fold(None, better);

    if let Some(start) = best {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut center = start;
        for _ in 0..spec.refinements {
            let s = center.sample;
            let mut jitter = |w: f64| rng.gen_range(-w..=w);
            let cand = Sample {
                lambda1: s.lambda1 * jitter(0.1).exp(),
                lambda2: s.lambda2 * jitter(0.1).exp(),
                alpha: s.alpha + jitter(0.1),
                beta: s.beta + jitter(0.1),
                xi_angle: s.xi_angle + jitter(0.05),
                eta_angle: s.eta_angle + jitter(0.05),
            };
            let Ok(point) = MatrixPoint::new(e, cand.matrix()) else {
                continue;
            };
            samples += 1;
            let value = point.second_derivative(&cand.direction());
            let normalized = value.normalized();
            if normalized < center.normalized {
                center = Best {
                    normalized,
                    value,
                    sample: cand,
                };
            }
        }
        best = Some(center);
    }

    match best {
        Some(b) => {
            let verdict = if b.value.value < -spec.tol * b.value.scale {
                let d = b.sample.direction();
                OracleVerdict::Violation {
                    f: b.sample.matrix(),
                    xi: d.xi,
                    eta: d.eta,
                    value: b.value.value,
                }
            } else {
                OracleVerdict::NoViolationFound
            };
            BruteForceReport {
                verdict,
                min_normalized: b.normalized,
                worst: b.sample,
                worst_value: b.value,
                samples,
                skipped,
            }
        }
        None => BruteForceReport {
            verdict: OracleVerdict::NoViolationFound,
            min_normalized: 0.0,
            worst: bases.first().copied().unwrap_or(Sample {
                lambda1: 1.0,
                lambda2: 1.0,
                alpha: 0.0,
                beta: 0.0,
                xi_angle: 0.0,
                eta_angle: 0.0,
            }),
            worst_value: SecondDerivative {
                value: 0.0,
                scale: 0.0,
            },
            samples,
            skipped,
        },
    }
}
