//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by validation, parsing and iterative solvers.
///
/// Infinities arising from support violations in divergences are *values*
/// (`f64::INFINITY`), never errors; only structurally invalid inputs or
/// non-converged solvers surface here.
#[derive(Debug, Error)]
pub enum Error {
    /// Input vector/matrix is not a probability distribution within tolerance.
    #[error("not a distribution: {0}")]
    NotADistribution(String),

    /// An iterative solver hit its iteration cap. Carries the best value
    /// found so far, which is still a valid one-sided bound.
    #[error("solver did not converge after {iterations} iterations (best value {best})")]
    NoConvergence { best: f64, iterations: usize },

    /// Tensorization weights do not satisfy Σ 1/β_i = 1.
    #[error("invalid tensorization weights: sum of 1/beta_i = {0}, expected 1")]
    BadWeights(f64),

    /// Channel fails the symmetry condition required for the uniform-input
    /// capacity shortcut.
    #[error("channel is not alpha-weakly symmetric")]
    NotSymmetric,

    /// Negative target supplied to the binary-divergence inverse.
    #[error("divergence inverse target must be nonnegative, got {0}")]
    InvalidTarget(f64),

    /// A strictly positive test function was required.
    #[error("test function must be strictly positive")]
    NonpositiveFunction,

    /// A model distribution violates the divergence-ball certificate.
    #[error("model {index} violates the divergence ball: D_alpha = {divergence} > {bound}")]
    CenterViolation {
        index: usize,
        divergence: f64,
        bound: f64,
    },

    /// File could not be parsed against any known schema.
    #[error("parse error: {0}")]
    Parse(String),

    /// I/O failure while reading or writing tables.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
