//! Matrix-side Legendre-Hadamard verification, independent of the
//! singular-value criteria.

mod brute;
mod derivative;
mod matrix;

pub use brute::{brute_force_check, BruteForceReport, OracleVerdict, Sample, SampleSpec};
pub use derivative::{
    acoustic_tensor, analytic_second_derivative, fd_second_derivative, AcousticTensor,
    DistortionJets, MatrixPoint, RankOneDirection, SecondDerivative, FD_RELATIVE_STEP,
};
pub use matrix::{svd2, Mat2, Svd2, Vec2};
