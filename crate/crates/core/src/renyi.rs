//! Rényi entropy, conditional Rényi entropy, Rényi divergence with all
//! limiting orders, the binary divergence and its numerical inverse,
//! φ-entropy, and the two classical variational lemmas as checkable
//! functionals.
//!
//! Limiting orders (0, 1, ∞) use dedicated continuous-extension code paths;
//! orders within `1e-6` of 1 are routed to the Shannon/KL paths by
//! [`AlphaOrder`] since `(1/(α-1))·log(1+x)` cancellation destroys precision
//! there. Support violations produce `+inf` values, never errors.

use crate::alpha::AlphaOrder;
use crate::error::Error;
use crate::logdomain::{log_dot_exp, log_sum_exp};
use crate::prob::{JointPMF, ProbVector};
use crate::Result;

// ---------------------------------------------------------------------------
// Entropies
// ---------------------------------------------------------------------------

/// Shannon entropy in nats.
pub fn shannon_entropy(p: &ProbVector) -> f64 {
    -p.as_slice()
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.ln())
        .sum::<f64>()
}

/// Rényi entropy `H_α(p) = (1/(1-α)) log Σ p_i^α` in nats, with
/// `H_0 = log |support|`, `H_1` Shannon, `H_∞ = -log max p_i`.
pub fn renyi_entropy(p: &ProbVector, alpha: AlphaOrder) -> f64 {
    match alpha {
        AlphaOrder::Zero => (p.support().len() as f64).ln(),
        AlphaOrder::One => shannon_entropy(p),
        AlphaOrder::Infinity => -p.max_prob().ln(),
        AlphaOrder::Finite(a) => {
            let scaled: Vec<f64> = p
                .log_probs()
                .iter()
                .map(|&l| if l == f64::NEG_INFINITY { f64::NEG_INFINITY } else { a * l })
                .collect();
            log_sum_exp(&scaled) / (1.0 - a)
        }
    }
}

/// Conditional Rényi entropy (Arimoto form)
/// `H_α(X|Y) = (α/(1-α)) log Σ_y (Σ_x P_XY(x,y)^α)^{1/α}`,
/// with the continuous extensions
/// `H_1(X|Y)` Shannon, `H_∞(X|Y) = -log Σ_y max_x P_XY(x,y)`,
/// `H_0(X|Y) = log max_{y: P_Y(y)>0} |support of P_{X|Y=y}|`.
pub fn cond_renyi_entropy(joint: &JointPMF, alpha: AlphaOrder) -> f64 {
    match alpha {
        AlphaOrder::One => {
            // H(X|Y) = H(X,Y) - H(Y).
            let flat: Vec<f64> = joint.cells().iter().flatten().cloned().collect();
            let hxy = -flat
                .iter()
                .filter(|&&v| v > 0.0)
                .map(|&v| v * v.ln())
                .sum::<f64>();
            hxy - shannon_entropy(&joint.y_marginal())
        }
        AlphaOrder::Infinity => {
            let s: f64 = (0..joint.ny())
                .map(|y| {
                    (0..joint.nx())
                        .map(|x| joint.cell(x, y))
                        .fold(0.0, f64::max)
                })
                .sum();
            -s.ln()
        }
        AlphaOrder::Zero => {
            let m = (0..joint.ny())
                .map(|y| (0..joint.nx()).filter(|&x| joint.cell(x, y) > 0.0).count())
                .max()
                .unwrap_or(0);
            (m.max(1) as f64).ln()
        }
        AlphaOrder::Finite(a) => {
            // (α/(1-α)) · log Σ_y exp((1/α)·log Σ_x P^α), all in log domain.
            let mut outer = Vec::with_capacity(joint.ny());
            for y in 0..joint.ny() {
                let col: Vec<f64> = (0..joint.nx())
                    .map(|x| {
                        let p = joint.cell(x, y);
                        if p > 0.0 { a * p.ln() } else { f64::NEG_INFINITY }
                    })
                    .collect();
                outer.push(log_sum_exp(&col) / a);
            }
            a / (1.0 - a) * log_sum_exp(&outer)
        }
    }
}

// ---------------------------------------------------------------------------
// Divergences
// ---------------------------------------------------------------------------

/// Kullback–Leibler divergence in nats; `+inf` on support violation.
pub fn kl_divergence(p: &ProbVector, q: &ProbVector) -> f64 {
    assert_eq!(p.len(), q.len(), "common alphabet required");
    let mut s = 0.0;
    for i in 0..p.len() {
        if p[i] > 0.0 {
            if q[i] == 0.0 {
                return f64::INFINITY;
            }
            s += p[i] * (p[i].ln() - q[i].ln());
        }
    }
    s.max(0.0)
}

/// Rényi divergence `D_α(p‖q) = (1/(α-1)) log Σ p^α q^{1-α}` in nats, with
/// `D_0 = -log q(support of p)`, `D_1` KL,
/// `D_∞ = log max_{i: p_i>0} p_i/q_i`; `+inf` when α ≥ 1 and
/// `support(p) ⊄ support(q)`.
pub fn renyi_divergence(p: &ProbVector, q: &ProbVector, alpha: AlphaOrder) -> f64 {
    assert_eq!(p.len(), q.len(), "common alphabet required");
    match alpha {
        AlphaOrder::One => kl_divergence(p, q),
        AlphaOrder::Zero => {
            let mass = q.mass_where(|i| p[i] > 0.0);
            (-mass.ln()).max(0.0)
        }
        AlphaOrder::Infinity => {
            let mut m = f64::NEG_INFINITY;
            for i in 0..p.len() {
                if p[i] > 0.0 {
                    if q[i] == 0.0 {
                        return f64::INFINITY;
                    }
                    m = m.max(p[i].ln() - q[i].ln());
                }
            }
            m.max(0.0)
        }
        AlphaOrder::Finite(a) => {
            // log Σ_{i: p_i>0} exp(α log p_i + (1-α) log q_i).
            let mut terms = Vec::with_capacity(p.len());
            for i in 0..p.len() {
                if p[i] > 0.0 {
                    if q[i] == 0.0 {
                        if a > 1.0 {
                            return f64::INFINITY;
                        }
                        // α<1: p^α q^{1-α} = 0 on q-null atoms.
                        continue;
                    }
                    terms.push(a * p[i].ln() + (1.0 - a) * q[i].ln());
                }
            }
            let lse = log_sum_exp(&terms);
            if lse == f64::NEG_INFINITY {
                // Mutually singular pair at α<1.
                return f64::INFINITY;
            }
            (lse / (a - 1.0)).max(0.0)
        }
    }
}

/// Binary Rényi divergence `d_α(p‖q)` between Bernoulli(p) and Bernoulli(q).
pub fn binary_d_alpha(p: f64, q: f64, alpha: AlphaOrder) -> f64 {
    assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
    let pv = ProbVector::from_normalized(vec![p, 1.0 - p]);
    let qv = ProbVector::from_normalized(vec![q, 1.0 - q]);
    renyi_divergence(&pv, &qv, alpha)
}

/// The inverse of the nonincreasing map `ε ↦ d_α(ε‖δ)` on `[0, δ]`,
/// computed by bisection to absolute tolerance `1e-10` in ε.
///
/// Since `d_α(0‖δ) = -log(1-δ)` for every order, targets at or above that
/// value fall in the vacuous regime and return 0 by convention.
pub fn binary_d_alpha_inverse(target: f64, delta: f64, alpha: AlphaOrder) -> Result<f64> {
    if target < 0.0 || target.is_nan() {
        return Err(Error::InvalidTarget(target));
    }
    assert!((0.0..1.0).contains(&delta), "delta must lie in [0,1)");
    if target >= -(1.0 - delta).ln() {
        return Ok(0.0);
    }
    if target == 0.0 {
        // d vanishes only at ε = δ; bisection would smear the answer because
        // the map is quadratically flat there.
        return Ok(delta);
    }
    let (mut lo, mut hi) = (0.0f64, delta);
    // d is nonincreasing on [0, delta]: d(lo) >= target >= d(hi) = 0.
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if binary_d_alpha(mid, delta, alpha) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ---------------------------------------------------------------------------
// Phi-entropy and variational lemmas
// ---------------------------------------------------------------------------

/// φ-entropy `E[φ(V)] - φ(E[V])` with `φ(x) = (1/(α-1)) log x` for
/// `α ∈ (0,1)`; nonnegative by Jensen since this φ is convex there.
pub fn phi_entropy(values: &[f64], weights: &ProbVector, alpha: f64) -> f64 {
    assert_eq!(values.len(), weights.len());
    assert!(values.iter().all(|&v| v > 0.0), "values must be positive");
    assert!(alpha > 0.0 && alpha < 1.0);
    let phi = |x: f64| x.ln() / (alpha - 1.0);
    let mean_phi: f64 = values
        .iter()
        .zip(weights.as_slice())
        .filter(|(_, &w)| w > 0.0)
        .map(|(&v, &w)| w * phi(v))
        .sum();
    let mean: f64 = values
        .iter()
        .zip(weights.as_slice())
        .map(|(&v, &w)| w * v)
        .sum();
    mean_phi - phi(mean)
}

/// The objective `α·D(r‖p) + (1-α)·D(r‖q)` whose infimum over `r` equals
/// `(1-α)·D_α(p‖q)`.
pub fn kl_variational_objective(
    r: &ProbVector,
    p: &ProbVector,
    q: &ProbVector,
    alpha: f64,
) -> f64 {
    alpha * kl_divergence(r, p) + (1.0 - alpha) * kl_divergence(r, q)
}

/// The minimizer of [`kl_variational_objective`]: the geometric tilting
/// `r* ∝ p^α q^{1-α}` (restricted to the common support).
pub fn kl_variational_minimizer(p: &ProbVector, q: &ProbVector, alpha: f64) -> Result<ProbVector> {
    let logs: Vec<f64> = (0..p.len())
        .map(|i| {
            if p[i] > 0.0 && q[i] > 0.0 {
                alpha * p[i].ln() + (1.0 - alpha) * q[i].ln()
            } else if alpha > 1.0 && p[i] > 0.0 && q[i] == 0.0 {
                // Objective is +inf anyway; keep the atom out of r*.
                f64::NEG_INFINITY
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    ProbVector::from_log_weights(&logs)
}

/// The Donsker–Varadhan-type Rényi functional
/// `(1/(α-1)) log E_p[e^{(α-1)f}] - (1/α) log E_q[e^{αf}]`,
/// which is at most `D_α(p‖q)/α` for every `f`, with equality at
/// `f = log(p/q)`.
pub fn dv_renyi_functional(f: &[f64], p: &ProbVector, q: &ProbVector, alpha: f64) -> f64 {
    assert_eq!(f.len(), p.len());
    assert_eq!(f.len(), q.len());
    assert!(alpha > 0.0 && (alpha - 1.0).abs() > 1e-12);
    let t1: Vec<f64> = f.iter().map(|&v| (alpha - 1.0) * v).collect();
    let t2: Vec<f64> = f.iter().map(|&v| alpha * v).collect();
    log_dot_exp(p.as_slice(), &t1) / (alpha - 1.0) - log_dot_exp(q.as_slice(), &t2) / alpha
}

/// The equality witness `f = log(p/q)` for [`dv_renyi_functional`]
/// (requires `q` full-support wherever `p` is positive; the value is `-inf`
/// off the support of `p`, which is harmless under zero weights).
pub fn dv_renyi_witness(p: &ProbVector, q: &ProbVector) -> Vec<f64> {
    (0..p.len())
        .map(|i| {
            if p[i] > 0.0 {
                p[i].ln() - q[i].ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{sample_prob_vector, seeded_rng};
    use approx::assert_relative_eq;
    use rand::Rng;

    fn a(x: f64) -> AlphaOrder {
        AlphaOrder::new(x)
    }

    #[test]
    fn entropy_closed_forms() {
        let u = ProbVector::uniform(5);
        for &al in &[0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            assert_relative_eq!(renyi_entropy(&u, a(al)), 5.0f64.ln(), epsilon = 1e-12);
        }
        let d = ProbVector::point_mass(4, 2);
        for &al in &[0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            assert_relative_eq!(renyi_entropy(&d, a(al)), 0.0, epsilon = 1e-12);
        }
        // H_2([0.25, 0.75]) = -log(0.0625 + 0.5625) = -log 0.625.
        let p = ProbVector::new(&[0.25, 0.75], 1e-9).unwrap();
        assert_relative_eq!(renyi_entropy(&p, a(2.0)), -(0.625f64.ln()), epsilon = 1e-12);
    }

    #[test]
    fn entropy_nonincreasing_in_alpha() {
        let mut rng = seeded_rng(5);
        for _ in 0..50 {
            let p = sample_prob_vector(&mut rng, 4);
            let grid = [0.0, 0.1, 0.5, 0.999999, 1.0, 1.5, 3.0, 10.0, f64::INFINITY];
            let mut prev = f64::INFINITY;
            for &al in &grid {
                let h = renyi_entropy(&p, a(al));
                assert!(h <= prev + 1e-10, "H_alpha must be nonincreasing");
                prev = h;
            }
        }
    }

    #[test]
    fn conditional_entropy_cases() {
        // Independence: H_a(X|Y) = H_a(X).
        let px = ProbVector::new(&[0.3, 0.7], 1e-9).unwrap();
        let py = ProbVector::new(&[0.4, 0.6], 1e-9).unwrap();
        let j = JointPMF::product(&px, &py);
        for &al in &[0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            assert_relative_eq!(
                cond_renyi_entropy(&j, a(al)),
                renyi_entropy(&px, a(al)),
                epsilon = 1e-12
            );
        }
        // Deterministic bijection: 0.
        let id = JointPMF::from_channel(&ProbVector::uniform(3), &crate::prob::Channel::identity(3));
        for &al in &[0.5, 1.0, 2.0, f64::INFINITY] {
            assert_relative_eq!(cond_renyi_entropy(&id, a(al)), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn divergence_closed_forms_and_limits() {
        let p = ProbVector::new(&[1.0, 0.0], 1e-9).unwrap();
        let q = ProbVector::uniform(2);
        assert_relative_eq!(
            renyi_divergence(&p, &q, a(f64::INFINITY)),
            2.0f64.ln(),
            epsilon = 1e-12
        );
        // alpha >= 1 support violation: +inf.
        assert_eq!(renyi_divergence(&q, &p, a(2.0)), f64::INFINITY);
        assert_eq!(renyi_divergence(&q, &p, a(1.0)), f64::INFINITY);
        // alpha < 1 stays finite: D_0.5([.5,.5]||[1,0]) = 2 log 2... check:
        // sum = 0.5^0.5 * 1^0.5 -> log/(a-1) = -2 log(1/sqrt 2) = log 2.
        assert_relative_eq!(
            renyi_divergence(&q, &p, a(0.5)),
            2.0f64.ln(),
            epsilon = 1e-12
        );
        // D_0 = -log q(supp p).
        assert_relative_eq!(
            renyi_divergence(&p, &q, a(0.0)),
            2.0f64.ln(),
            epsilon = 1e-12
        );
        // Identical distributions: 0 at all orders.
        let r = ProbVector::new(&[0.2, 0.3, 0.5], 1e-9).unwrap();
        for &al in &[0.0, 0.3, 1.0, 4.0, f64::INFINITY] {
            assert_relative_eq!(renyi_divergence(&r, &r, a(al)), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn divergence_nondecreasing_in_alpha_and_positive() {
        let mut rng = seeded_rng(6);
        for _ in 0..50 {
            let p = sample_prob_vector(&mut rng, 4);
            let q = sample_prob_vector(&mut rng, 4);
            let grid = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, f64::INFINITY];
            let mut prev = -1e-12;
            for &al in &grid {
                let d = renyi_divergence(&p, &q, a(al));
                assert!(d >= prev - 1e-10, "D_alpha must be nondecreasing in alpha");
                assert!(d >= 0.0);
                prev = d;
            }
            // Shannon limit continuity.
            // First-order continuity at the Shannon point.
            let near = renyi_divergence(&p, &q, AlphaOrder::Finite(1.0 + 1e-4));
            let kl = kl_divergence(&p, &q);
            assert!((near - kl).abs() < 1e-3 * kl.max(1.0));
        }
    }

    #[test]
    fn binary_divergence_and_inverse() {
        // d_2(0.1||0.3) = log(0.01/0.3 + 0.81/0.7).
        let expect = (0.01f64 / 0.3 + 0.81 / 0.7).ln();
        assert_relative_eq!(binary_d_alpha(0.1, 0.3, a(2.0)), expect, epsilon = 1e-12);
        assert_relative_eq!(binary_d_alpha(0.4, 0.4, a(3.0)), 0.0, epsilon = 1e-12);
        // d_alpha(0||q) = -log(1-q) for every order.
        for &al in &[0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            assert_relative_eq!(
                binary_d_alpha(0.0, 0.3, a(al)),
                -(0.7f64.ln()),
                epsilon = 1e-12
            );
        }
        // Forward-then-invert round trip.
        let delta = 0.6;
        for &al in &[0.5, 2.0, 5.0] {
            for &eps in &[0.05, 0.3, 0.55] {
                let t = binary_d_alpha(eps, delta, a(al));
                let back = binary_d_alpha_inverse(t, delta, a(al)).unwrap();
                assert!((back - eps).abs() < 1e-9);
            }
        }
        // Vacuous regime and zero target.
        assert_eq!(
            binary_d_alpha_inverse(2.0 * -(0.4f64.ln()), 0.6, a(2.0)).unwrap(),
            0.0
        );
        assert_relative_eq!(
            binary_d_alpha_inverse(0.0, 0.6, a(2.0)).unwrap(),
            0.6,
            epsilon = 1e-9
        );
        assert!(binary_d_alpha_inverse(-0.1, 0.5, a(2.0)).is_err());
        // d nonincreasing in epsilon on [0, delta].
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let eps = 0.6 * i as f64 / 20.0;
            let d = binary_d_alpha(eps, 0.6, a(2.0));
            assert!(d <= prev + 1e-12);
            prev = d;
        }
    }

    #[test]
    fn phi_entropy_examples() {
        let w = ProbVector::uniform(2);
        assert_relative_eq!(phi_entropy(&[2.0, 2.0], &w, 0.5), 0.0, epsilon = 1e-12);
        // values [1,3], alpha = 1/2: -2(0.5 log 3 - log 2) = 2 log(2/sqrt 3).
        let expect = 2.0 * (2.0 / 3.0f64.sqrt()).ln();
        assert_relative_eq!(phi_entropy(&[1.0, 3.0], &w, 0.5), expect, epsilon = 1e-12);
        // Nonnegative on random positive values.
        let mut rng = seeded_rng(9);
        for _ in 0..50 {
            let vals: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() + 0.01).collect();
            let w = sample_prob_vector(&mut rng, 4);
            assert!(phi_entropy(&vals, &w, 0.3) >= -1e-12);
        }
    }

    #[test]
    fn kl_variational_lemma() {
        let mut rng = seeded_rng(10);
        for &al in &[0.5, 2.0] {
            for _ in 0..30 {
                let p = sample_prob_vector(&mut rng, 4);
                let q = sample_prob_vector(&mut rng, 4);
                let target = (1.0 - al) * renyi_divergence(&p, &q, a(al));
                let rstar = kl_variational_minimizer(&p, &q, al).unwrap();
                assert_relative_eq!(
                    kl_variational_objective(&rstar, &p, &q, al),
                    target,
                    epsilon = 1e-10
                );
                // Random r never beats the minimizer.
                for _ in 0..20 {
                    let r = sample_prob_vector(&mut rng, 4);
                    assert!(kl_variational_objective(&r, &p, &q, al) >= target - 1e-10);
                }
            }
        }
    }

    #[test]
    fn dv_renyi_lemma() {
        let mut rng = seeded_rng(12);
        for &al in &[0.5, 2.0, 5.0] {
            for _ in 0..30 {
                let p = sample_prob_vector(&mut rng, 4);
                let q = sample_prob_vector(&mut rng, 4);
                let cap = renyi_divergence(&p, &q, a(al)) / al;
                // Equality witness.
                let w = dv_renyi_witness(&p, &q);
                assert_relative_eq!(
                    dv_renyi_functional(&w, &p, &q, al),
                    cap,
                    epsilon = 1e-10
                );
                // Constants give zero; random f stays below the cap.
                assert_relative_eq!(
                    dv_renyi_functional(&[3.0; 4], &p, &q, al),
                    0.0,
                    epsilon = 1e-12
                );
                for _ in 0..20 {
                    let f: Vec<f64> = (0..4).map(|_| 4.0 * rng.gen::<f64>() - 2.0).collect();
                    assert!(dv_renyi_functional(&f, &p, &q, al) <= cap + 1e-10);
                }
            }
        }
    }
}
