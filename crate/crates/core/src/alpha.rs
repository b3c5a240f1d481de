//! The extended order parameter α ∈ {0} ∪ (0,1) ∪ {1} ∪ (1,∞) ∪ {∞}.
//!
//! The limiting orders carry explicit tags so that every consumer can route
//! them to dedicated continuous-extension code paths. Finite orders within
//! `1e-6` of 1 are normalized to the Shannon tag: evaluating
//! `(1/(α-1))·log(...)` that close to 1 loses all precision to cancellation.

/// Threshold below which a finite order is treated as exactly 1.
pub const SHANNON_EPS: f64 = 1e-6;

/// Extended Rényi order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaOrder {
    /// α = 0 (min-entropy-of-support limit).
    Zero,
    /// α ∈ (0,1) ∪ (1,∞), at least `SHANNON_EPS` away from 1.
    Finite(f64),
    /// α = 1 (Shannon / KL limit).
    One,
    /// α = ∞ (maximal leakage / worst-case limit).
    Infinity,
}

impl AlphaOrder {
    /// Classifies a raw nonnegative order, normalizing values within
    /// `SHANNON_EPS` of 1 to [`AlphaOrder::One`].
    ///
    /// # Panics
    /// Panics on negative or NaN input; negative orders are out of scope.
    pub fn new(alpha: f64) -> Self {
        assert!(
            alpha >= 0.0 && !alpha.is_nan(),
            "order must be a nonnegative real or +inf, got {alpha}"
        );
        if alpha == 0.0 {
            AlphaOrder::Zero
        } else if alpha.is_infinite() {
            AlphaOrder::Infinity
        } else if (alpha - 1.0).abs() < SHANNON_EPS {
            AlphaOrder::One
        } else {
            AlphaOrder::Finite(alpha)
        }
    }

    /// The numeric order (0, the finite value, 1, or +inf).
    pub fn value(self) -> f64 {
        match self {
            AlphaOrder::Zero => 0.0,
            AlphaOrder::Finite(a) => a,
            AlphaOrder::One => 1.0,
            AlphaOrder::Infinity => f64::INFINITY,
        }
    }

    /// The finite value if this is a `Finite` tag.
    pub fn finite(self) -> Option<f64> {
        match self {
            AlphaOrder::Finite(a) => Some(a),
            _ => None,
        }
    }

    /// The Hölder conjugate exponent β = α/(α-1); β = 1 at α = ∞.
    /// Only meaningful away from α = 1.
    pub fn conjugate(self) -> f64 {
        match self {
            AlphaOrder::Zero => 0.0,
            AlphaOrder::Finite(a) => a / (a - 1.0),
            AlphaOrder::One => f64::INFINITY,
            AlphaOrder::Infinity => 1.0,
        }
    }
}

impl From<f64> for AlphaOrder {
    fn from(alpha: f64) -> Self {
        AlphaOrder::new(alpha)
    }
}

impl std::fmt::Display for AlphaOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlphaOrder::Zero => write!(f, "0"),
            AlphaOrder::Finite(a) => write!(f, "{a}"),
            AlphaOrder::One => write!(f, "1"),
            AlphaOrder::Infinity => write!(f, "inf"),
        }
    }
}
