//! Log-domain arithmetic kernels.
//!
//! Probabilities and exponentiated measures are carried as natural logs, with
//! `-inf` representing zero. Sums of the form `log Σ_i w_i · exp(a_i)` are
//! evaluated with the maximum factored out so that exponents of order ±10³
//! (which occur for α up to ~10³) stay in range.
//!
//! Conventions (following the continuous extensions the measures are defined
//! by): `log 0 = -inf` and `0 · (±inf) = 0` inside weighted sums, i.e. terms
//! with zero weight contribute nothing, regardless of the companion factor.

/// A nonnegative real stored as its natural logarithm (`-inf` encodes zero).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    /// Exact zero.
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    /// Exact one.
    pub const ONE: LogValue = LogValue(0.0);

    /// Wraps a linear-domain nonnegative value.
    pub fn from_linear(v: f64) -> Self {
        debug_assert!(v >= 0.0, "LogValue requires a nonnegative input");
        LogValue(v.ln())
    }

    /// Wraps an already-logged value.
    pub fn from_log(l: f64) -> Self {
        LogValue(l)
    }

    /// The stored natural log.
    pub fn ln(self) -> f64 {
        self.0
    }

    /// Back to the linear domain (may underflow to 0.0 or overflow to inf).
    pub fn linear(self) -> f64 {
        self.0.exp()
    }

    /// Raises to a real power (multiplies the log).
    pub fn powf(self, e: f64) -> Self {
        if self.0 == f64::NEG_INFINITY && e == 0.0 {
            // 0^0 = 1 by the empty-product convention.
            return LogValue::ONE;
        }
        LogValue(self.0 * e)
    }

    /// True when the value is exactly zero.
    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl std::ops::Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        // (-inf) + inf would be NaN; zero absorbs.
        if self.is_zero() || rhs.is_zero() {
            return LogValue::ZERO;
        }
        LogValue(self.0 + rhs.0)
    }
}

impl std::ops::Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        if self.is_zero() {
            return LogValue::ZERO;
        }
        LogValue(self.0 - rhs.0)
    }
}

/// `log Σ_i exp(a_i)` with the maximum factored out.
///
/// Returns `-inf` on an empty slice or when every term is `-inf`; returns
/// `+inf` if any term is `+inf`.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for &t in terms {
        if t.is_nan() {
            return f64::NAN;
        }
        if t > m {
            m = t;
        }
    }
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if m == f64::INFINITY {
        return f64::INFINITY;
    }
    let s: f64 = terms.iter().map(|&t| (t - m).exp()).sum();
    m + s.ln()
}

/// `log Σ_i w_i · exp(a_i)` where `w` are linear-domain nonnegative weights.
///
/// Terms with `w_i == 0` are skipped entirely (the `0 · (±inf) = 0`
/// convention), so `a_i` may be ±inf at zero-weight indices.
pub fn log_dot_exp(weights: &[f64], logs: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), logs.len());
    let mut m = f64::NEG_INFINITY;
    for (&w, &a) in weights.iter().zip(logs) {
        if w > 0.0 {
            let t = w.ln() + a;
            if t > m {
                m = t;
            }
        }
    }
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if m == f64::INFINITY {
        return f64::INFINITY;
    }
    let mut s = 0.0;
    for (&w, &a) in weights.iter().zip(logs) {
        if w > 0.0 {
            s += (w.ln() + a - m).exp();
        }
    }
    m + s.ln()
}

/// Log of the weighted L^p "norm" `(Σ_i w_i |v_i|^p)^{1/p}` where `logs` are
/// `log v_i`; `p == 0.0` is the p→0+ limit `exp Σ_i w_i log v_i` (the
/// weighted geometric mean).
///
/// Negative `p` is permitted (quasi-norms): a zero value with positive weight
/// then sends the norm to zero, matching `(E[v^p])^{1/p}` with `v^p = +inf`.
pub fn log_p_norm(weights: &[f64], logs: &[f64], p: f64) -> f64 {
    debug_assert_eq!(weights.len(), logs.len());
    if p == 0.0 {
        let mut s = 0.0;
        for (&w, &a) in weights.iter().zip(logs) {
            if w > 0.0 {
                if a == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                s += w * a;
            }
        }
        return s;
    }
    let scaled: Vec<f64> = logs.iter().map(|&a| a * p).collect();
    let lse = log_dot_exp(weights, &scaled);
    if lse == f64::INFINITY {
        // Σ w v^p = +inf: norm is +inf for p > 0, zero for p < 0.
        return if p > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
    }
    lse / p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn log_sum_exp_matches_direct_sum() {
        let terms = [-1.0f64, 0.5, -3.0];
        let direct: f64 = terms.iter().map(|t| t.exp()).sum();
        assert_relative_eq!(log_sum_exp(&terms), direct.ln(), epsilon = 1e-14);
    }

    #[test]
    fn log_sum_exp_survives_huge_exponents() {
        // A naive sum would overflow at exp(2000).
        let v = log_sum_exp(&[2000.0, 2000.0]);
        assert_relative_eq!(v, 2000.0 + 2.0f64.ln(), epsilon = 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn zero_weight_skips_infinite_terms() {
        // 0 * exp(+inf) must contribute nothing.
        let v = log_dot_exp(&[0.0, 1.0], &[f64::INFINITY, 0.0]);
        assert_relative_eq!(v, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn p_norm_limit_is_geometric_mean() {
        let w = [0.25, 0.75];
        let logs = [1.0f64.ln(), 3.0f64.ln()];
        let gm = 0.25 * 1.0f64.ln() + 0.75 * 3.0f64.ln();
        assert_relative_eq!(log_p_norm(&w, &logs, 0.0), gm, epsilon = 1e-14);
        // Small positive order approaches the same limit.
        assert_relative_eq!(log_p_norm(&w, &logs, 1e-6), gm, epsilon = 1e-5);
    }

    #[test]
    fn log_value_algebra() {
        let a = LogValue::from_linear(0.5);
        let b = LogValue::from_linear(0.25);
        assert_relative_eq!((a * b).linear(), 0.125, epsilon = 1e-15);
        assert_relative_eq!((a / b).linear(), 2.0, epsilon = 1e-15);
        assert!((LogValue::ZERO * LogValue::from_log(f64::INFINITY)).is_zero());
        assert_relative_eq!(a.powf(3.0).linear(), 0.125, epsilon = 1e-15);
        assert_eq!(LogValue::ZERO.powf(0.0).linear(), 1.0);
    }
}
