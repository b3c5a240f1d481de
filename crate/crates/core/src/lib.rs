//! Sibson α-mutual information and friends on finite discrete distributions.
//!
//! The crate computes the family of Rényi-type information measures built
//! around `I_α(X,Y) = min_{Q_Y} D_α(P_XY || P_X Q_Y)`:
//!
//! * Rényi entropy, conditional Rényi entropy and Rényi divergence with all
//!   limiting orders (`renyi`),
//! * the Sibson measure itself, its closed form and optimizing marginal,
//!   plus the Arimoto, Csiszár and Lapidoth–Pfister variants and conditional
//!   versions (`sibson`),
//! * variational representations evaluable at arbitrary test functions with
//!   exact equality witnesses, and a tabular gradient-ascent estimator
//!   (`variational`),
//! * channel capacities, error exponents and α-NML universal predictors
//!   (`capacity`),
//! * dependence/Fano/Bayes-risk style bounds together with their tightness
//!   witnesses (`bounds`),
//! * seeded property-check suites shared by the test harness and the CLI
//!   (`checks`).
//!
//! Everything is computed in natural log (nats); conversion to bits is left
//! to presentation layers. Internal arithmetic runs in the log domain
//! (log-sum-exp with the maximum factored out) so that orders as large as
//! α ≈ 10³ neither overflow nor underflow.

pub mod alpha;
pub mod bounds;
pub mod capacity;
pub mod checks;
pub mod error;
pub mod logdomain;
pub mod prob;
pub mod renyi;
pub mod sibson;
pub mod variational;

pub use alpha::AlphaOrder;
pub use error::Error;
pub use logdomain::LogValue;
pub use prob::{Channel, JointPMF, JointTensor, ProbVector};
pub use sibson::SibsonResult;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
