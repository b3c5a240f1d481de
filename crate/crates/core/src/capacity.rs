//! Channel-level optimizations: Sibson capacity, symmetric-channel shortcuts,
//! zero-error feedback capacity, Gallager-style error exponents, and α-NML
//! universal predictors.
//!
//! The capacity `C_α = sup_P I_α(P, W) = inf_Q max_x D_α(W_x‖Q)` is computed
//! with a certified duality gap: the primal side runs entropic mirror ascent
//! on the input distribution (for α > 1 the objective is concave; for α < 1
//! maximizing `I_α` is equivalent to minimizing the convex sum
//! `Σ_y (Σ_x P_x W^α)^{1/α}`, so the ascent is still globally convergent),
//! while the dual side evaluates `max_x D_α(W_x‖Q(P))` at the output tilting
//! of the current iterate. Weak duality makes the pair a two-sided bracket at
//! every iteration, so the reported gap is rigorous, not a stationarity
//! heuristic.
//!
//! First-order ascent alone cannot certify tight gaps: the primal value
//! converges quadratically in the input error while the dual bound only
//! converges linearly, so a `1e-9` gap would need the iterate accurate to
//! `1e-9`, far past where line searches stall in double precision. Both
//! solvers therefore finish with a Newton polish on the equalization
//! conditions (`D_α(W_x‖Q(P))` equal for all inputs in the active support),
//! trying candidate supports and keeping the first whose weak-duality
//! certificate closes. An independent minimax solver over `Q` (annealed
//! soft-max smoothing of the inner maximum followed by the same polish from
//! its own active set) is provided as a cross-check oracle.

use crate::alpha::AlphaOrder;
use crate::error::Error;
use crate::logdomain::log_sum_exp;
use crate::prob::{Channel, JointPMF, ProbVector};
use crate::renyi;
use crate::sibson;
use crate::Result;
use std::collections::HashMap;

/// A certified capacity value with its optimizing pair.
#[derive(Debug, Clone)]
pub struct CapacityResult {
    /// Capacity estimate in nats.
    pub value: f64,
    /// Input distribution with `I_α(optimal_input) ≥ value − gap`.
    pub optimal_input: ProbVector,
    /// Minimax center with `max_x D_α(W_x‖optimal_output) ≤ value + gap`.
    pub optimal_output: ProbVector,
    /// Iterations spent by the solver.
    pub iterations: usize,
    /// Certified two-sided duality gap.
    pub gap: f64,
}

/// Which error-exponent curve to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentKind {
    /// `sup_{ρ ≥ 0} ρ·(C_{1/(1+ρ)} − R)`.
    SpherePacking,
    /// `sup_{ρ ∈ [0,1]} ρ·(C_{1/(1+ρ)} − R)`.
    RandomCoding,
}

/// A rate/exponent table.
#[derive(Debug, Clone)]
pub struct ExponentCurve {
    pub rates: Vec<f64>,
    pub exponents: Vec<f64>,
    pub kind: ExponentKind,
}

// ---------------------------------------------------------------------------
// Sibson capacity
// ---------------------------------------------------------------------------

/// `I_α(P, W)` and the output tilting `Q(P)` for a candidate input.
fn input_value(channel: &Channel, p: &ProbVector, alpha: AlphaOrder) -> (f64, ProbVector) {
    let joint = JointPMF::from_channel(p, channel);
    let r = sibson::sibson_mi(&joint, alpha);
    (r.value, r.q_star)
}

/// `max_x D_α(W_x‖q)` — an upper bound on `C_α` for any output candidate.
fn dual_value(channel: &Channel, q: &ProbVector, alpha: AlphaOrder) -> f64 {
    (0..channel.input_size())
        .map(|x| renyi::renyi_divergence(channel.row(x), q, alpha))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Newton polish on the capacity equalization conditions over a fixed input
/// support: find `P` supported on `support` with `D_α(W_x‖Q(P))` equal for
/// every `x` in the support. The input is parameterized as a soft-max over
/// `support` with the first coordinate pinned to zero (killing the common
/// shift invariance), the Jacobian is formed by central differences, and the
/// step is damped by halving until the residual norm drops. Returns the
/// equalized input, or `None` when the iteration fails to contract — e.g.
/// when the true optimum puts zero mass on part of the candidate support, in
/// which case no equalized point exists and the caller tries another support.
fn equalize_on_support(
    channel: &Channel,
    alpha: AlphaOrder,
    support: &[usize],
    init: Option<&ProbVector>,
) -> Option<ProbVector> {
    let nx = channel.input_size();
    let k = support.len();
    let embed = |theta: &[f64]| -> ProbVector {
        let mut logs = vec![f64::NEG_INFINITY; nx];
        logs[support[0]] = 0.0;
        for i in 1..k {
            logs[support[i]] = theta[i - 1];
        }
        ProbVector::from_log_weights(&logs).expect("nonempty support")
    };
    let residual = |theta: &[f64]| -> Vec<f64> {
        let p = embed(theta);
        let (_, q) = input_value(channel, &p, alpha);
        let d0 = renyi::renyi_divergence(channel.row(support[0]), &q, alpha);
        (1..k)
            .map(|i| renyi::renyi_divergence(channel.row(support[i]), &q, alpha) - d0)
            .collect()
    };

    if k == 1 {
        return Some(ProbVector::point_mass(nx, support[0]));
    }
    // Warm start from the coarse iterate when it covers the support.
    let mut theta: Vec<f64> = match init {
        Some(p) if support.iter().all(|&x| p[x] > 0.0) => {
            let base = p[support[0]].ln();
            (1..k).map(|i| p[support[i]].ln() - base).collect()
        }
        _ => vec![0.0; k - 1],
    };
    let norm = |f: &[f64]| f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut f = residual(&theta);
    for _ in 0..80 {
        if norm(&f) < 1e-14 {
            break;
        }
        // Central-difference Jacobian of the k-1 residuals.
        let h = 1e-6;
        let mut jac = vec![vec![0.0; k - 1]; k - 1];
        for j in 0..k - 1 {
            let mut tp = theta.clone();
            tp[j] += h;
            let mut tm = theta.clone();
            tm[j] -= h;
            let fp = residual(&tp);
            let fm = residual(&tm);
            for i in 0..k - 1 {
                jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let delta = solve_dense(&mut jac, &f)?;
        // Damped update: halve until the residual norm drops.
        let mut scale = 1.0;
        let mut moved = false;
        for _ in 0..40 {
            let trial: Vec<f64> = theta
                .iter()
                .zip(&delta)
                .map(|(t, d)| t - scale * d)
                .collect();
            if trial.iter().any(|v| !v.is_finite()) {
                scale *= 0.5;
                continue;
            }
            let ft = residual(&trial);
            if norm(&ft) < norm(&f) {
                theta = trial;
                f = ft;
                moved = true;
                break;
            }
            scale *= 0.5;
        }
        if !moved {
            break;
        }
    }
    if norm(&f) < 1e-11 {
        Some(embed(&theta))
    } else {
        None
    }
}

/// Gaussian elimination with partial pivoting; `None` on a singular system.
fn solve_dense(a: &mut [Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut x = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        x.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..n).rev() {
        x[col] /= a[col][col];
        for row in 0..col {
            x[row] -= a[row][col] * x[col];
        }
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

/// Candidate supports to try during the polish phase, most promising first:
/// the coarse iterate's numerical support, the full alphabet, then (for small
/// alphabets) every nonempty subset ordered by decreasing coarse mass.
fn candidate_supports(p: &ProbVector) -> Vec<Vec<usize>> {
    let nx = p.len();
    let coarse: Vec<usize> = (0..nx).filter(|&x| p[x] > 1e-7).collect();
    let mut out = vec![coarse, (0..nx).collect()];
    if nx <= 12 {
        let mut order: Vec<usize> = (0..nx).collect();
        order.sort_by(|&i, &j| p[j].partial_cmp(&p[i]).unwrap());
        let mut subsets: Vec<Vec<usize>> = (1u32..(1 << nx))
            .map(|mask| {
                let mut s: Vec<usize> = order
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, &x)| x)
                    .collect();
                s.sort_unstable();
                s
            })
            .collect();
        // Larger subsets first: capacity supports are usually near-full.
        subsets.sort_by_key(|s| std::cmp::Reverse(s.len()));
        out.extend(subsets);
    }
    out.dedup();
    out
}

/// Sibson capacity `sup_P I_α(P, W)` with a certified duality gap.
///
/// α = ∞ is the closed form `log Σ_y max_x W(y|x)` (maximal leakage of any
/// full-support input); finite orders and α = 1 run the primal/dual bracket
/// described in the module docs until `gap ≤ tol`.
pub fn sibson_capacity(channel: &Channel, alpha: AlphaOrder, tol: f64) -> Result<CapacityResult> {
    let nx = channel.input_size();
    let ny = channel.output_size();
    assert!(alpha != AlphaOrder::Zero, "capacity requires alpha > 0");

    if alpha == AlphaOrder::Infinity {
        // Closed form; any full-support input achieves it.
        let col_max: Vec<f64> = (0..ny)
            .map(|y| (0..nx).map(|x| channel.prob(x, y)).fold(0.0, f64::max))
            .collect();
        let s: f64 = col_max.iter().sum();
        return Ok(CapacityResult {
            value: s.ln().max(0.0),
            optimal_input: ProbVector::uniform(nx),
            optimal_output: ProbVector::from_normalized(
                col_max.iter().map(|&v| v / s).collect(),
            ),
            iterations: 0,
            gap: 0.0,
        });
    }

    // Gradient of I_α at P in the log domain (finite α), and D(W_x‖Q) at
    // α = 1 (so that unit-step mirror ascent is the classical fixed point).
    let log_w: Vec<Vec<f64>> = (0..nx)
        .map(|x| channel.row(x).log_probs())
        .collect();
    let gradient = |p: &ProbVector, q: &ProbVector| -> Vec<f64> {
        match alpha {
            AlphaOrder::One => (0..nx)
                .map(|x| renyi::kl_divergence(channel.row(x), q))
                .collect(),
            AlphaOrder::Finite(a) => {
                // ∂I/∂P_x = (1/(α-1)) Σ_y A_y^{(1-α)/α} W(y|x)^α / S with
                // A_y = Σ_x P W^α, S = Σ_y A_y^{1/α}.
                let log_a: Vec<f64> = (0..ny)
                    .map(|y| {
                        let terms: Vec<f64> = (0..nx)
                            .filter(|&x| p[x] > 0.0 && log_w[x][y] > f64::NEG_INFINITY)
                            .map(|x| p[x].ln() + a * log_w[x][y])
                            .collect();
                        log_sum_exp(&terms)
                    })
                    .collect();
                let log_s = log_sum_exp(&log_a.iter().map(|&v| v / a).collect::<Vec<_>>());
                (0..nx)
                    .map(|x| {
                        let terms: Vec<f64> = (0..ny)
                            .filter(|&y| {
                                log_a[y] > f64::NEG_INFINITY && log_w[x][y] > f64::NEG_INFINITY
                            })
                            .map(|y| (1.0 - a) / a * log_a[y] + a * log_w[x][y])
                            .collect();
                        (log_sum_exp(&terms) - log_s).exp() / (a - 1.0)
                    })
                    .collect()
            }
            _ => unreachable!(),
        }
    };

    // Coarse phase: entropic mirror ascent with backtracking on I_α, run
    // until the line search can no longer make strict progress. Its job is
    // only to locate the optimum's basin and support; the polish below closes
    // the certificate.
    let mut p = ProbVector::uniform(nx);
    let (mut lb, mut q) = input_value(channel, &p, alpha);
    let mut ub = dual_value(channel, &q, alpha);
    let mut best = (lb, p.clone(), q.clone());
    let mut step = 1.0;
    let mut it = 0;
    while ub - lb > tol && it < 5_000 {
        it += 1;
        let g = gradient(&p, &q);
        let mut accepted = false;
        for _ in 0..60 {
            let logs: Vec<f64> = (0..nx)
                .map(|x| {
                    if p[x] > 0.0 {
                        p[x].ln() + step * g[x]
                    } else {
                        f64::NEG_INFINITY
                    }
                })
                .collect();
            let trial = ProbVector::from_log_weights(&logs).expect("nonempty support");
            let (val, qt) = input_value(channel, &trial, alpha);
            if val > lb {
                p = trial;
                lb = val;
                q = qt;
                ub = ub.min(dual_value(channel, &q, alpha));
                if lb > best.0 {
                    best = (lb, p.clone(), q.clone());
                }
                step = (step * 1.2).min(64.0);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let (mut lb, mut p, mut q) = best;
    let mut gap = (ub - lb).max(0.0);

    // Polish phase: equalize the active divergences over candidate supports
    // and keep the first input whose weak-duality certificate closes.
    if gap > tol {
        for support in candidate_supports(&p) {
            it += 1;
            let Some(cand) = equalize_on_support(channel, alpha, &support, Some(&p)) else {
                continue;
            };
            let (clb, cq) = input_value(channel, &cand, alpha);
            let cub = dual_value(channel, &cq, alpha);
            let cgap = (cub - clb).max(0.0);
            if cgap < gap {
                gap = cgap;
                lb = clb;
                ub = cub.min(ub);
                p = cand;
                q = cq;
            }
            if gap <= tol {
                break;
            }
        }
    }
    if gap > tol {
        return Err(Error::NoConvergence {
            best: lb,
            iterations: it,
        });
    }
    Ok(CapacityResult {
        value: ub,
        optimal_input: p,
        optimal_output: q,
        iterations: it,
        gap,
    })
}

/// Independent minimax oracle: minimizes `max_x D_α(W_x‖Q)` over output
/// candidates by entropic mirror descent on an annealed soft-max smoothing of
/// the inner maximum, warm-started from the uniform output. The smoothing
/// bias is `log(nx)/T`, so the annealed phase only localizes the solution;
/// the final value comes from equalizing the divergences that are active at
/// the smoothed solution (Newton polish shared with the primal solver) and
/// taking the hard maximum there — an upper bound on `C_α` by weak duality,
/// and tight once the right active set is found.
pub fn minimax_capacity_value(channel: &Channel, alpha: AlphaOrder, tol: f64) -> f64 {
    let nx = channel.input_size();
    let ny = channel.output_size();
    assert!(matches!(alpha, AlphaOrder::Finite(_) | AlphaOrder::One));

    let divergences = |q: &ProbVector| -> Vec<f64> {
        (0..nx)
            .map(|x| renyi::renyi_divergence(channel.row(x), q, alpha))
            .collect()
    };
    let div_gradient = |x: usize, q: &ProbVector| -> Vec<f64> {
        // ∂D_α(W_x‖Q)/∂Q_y = −W^α Q^{-α} / Σ_y W^α Q^{1-α}; at α=1, −W/Q.
        match alpha {
            AlphaOrder::One => (0..ny)
                .map(|y| {
                    let w = channel.prob(x, y);
                    if w > 0.0 { -w / q[y] } else { 0.0 }
                })
                .collect(),
            AlphaOrder::Finite(a) => {
                let terms: Vec<f64> = (0..ny)
                    .filter(|&y| channel.prob(x, y) > 0.0)
                    .map(|y| a * channel.prob(x, y).ln() + (1.0 - a) * q[y].ln())
                    .collect();
                let log_z = log_sum_exp(&terms);
                (0..ny)
                    .map(|y| {
                        let w = channel.prob(x, y);
                        if w > 0.0 {
                            -(a * w.ln() - a * q[y].ln() - log_z).exp()
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
            _ => unreachable!(),
        }
    };
    let smoothed = |d: &[f64], temp: f64| -> f64 {
        log_sum_exp(&d.iter().map(|&v| temp * v).collect::<Vec<_>>()) / temp
    };

    // Annealed coarse phase: one fresh-gradient mirror step per inner
    // iteration with backtracking on the smoothed objective, temperatures
    // doubling until the smoothing bias is comfortably below the coarse
    // target (the polish handles the rest).
    let mut q = ProbVector::uniform(ny);
    let mut temp = 4.0;
    while (nx as f64).ln() / temp > 1e-5 {
        let mut step = 0.5;
        let mut cur = smoothed(&divergences(&q), temp);
        for _ in 0..2_000 {
            let d = divergences(&q);
            let scaled: Vec<f64> = d.iter().map(|&v| temp * v).collect();
            let z = log_sum_exp(&scaled);
            let weights: Vec<f64> = scaled.iter().map(|&s| (s - z).exp()).collect();
            let mut grad = vec![0.0; ny];
            for x in 0..nx {
                if weights[x] > 1e-300 {
                    let gx = div_gradient(x, &q);
                    for y in 0..ny {
                        grad[y] += weights[x] * gx[y];
                    }
                }
            }
            let mut accepted = false;
            for _ in 0..60 {
                let logs: Vec<f64> = (0..ny)
                    .map(|y| q[y].ln() - step * grad[y])
                    .collect();
                let trial = ProbVector::from_log_weights(&logs).expect("positive output");
                let val = smoothed(&divergences(&trial), temp);
                if val < cur {
                    let gain = cur - val;
                    q = trial;
                    cur = val;
                    step = (step * 1.5).min(16.0);
                    accepted = true;
                    if gain < 1e-13 * cur.abs().max(1.0) {
                        // Stationary at this temperature to machine precision.
                        cur = f64::NEG_INFINITY;
                    }
                    break;
                }
                step *= 0.5;
            }
            if !accepted || cur == f64::NEG_INFINITY {
                break;
            }
        }
        temp *= 2.0;
    }

    // Polish: the coarse solution's soft-max weights identify the active
    // inputs; equalizing their divergences pins the minimax center exactly.
    // Any candidate yields a valid upper bound, so take the smallest.
    let hard_max =
        |q: &ProbVector| -> f64 { divergences(q).into_iter().fold(f64::NEG_INFINITY, f64::max) };
    let mut value = hard_max(&q);
    let d = divergences(&q);
    let dmax = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut active_weight = vec![0.0; nx];
    for x in 0..nx {
        if d[x] >= dmax - 1e-3 {
            active_weight[x] = 1.0;
        }
    }
    let pseudo = ProbVector::from_normalized({
        let s: f64 = active_weight.iter().sum();
        active_weight.iter().map(|&v| v / s).collect()
    });
    for support in candidate_supports(&pseudo) {
        if let Some(p) = equalize_on_support(channel, alpha, &support, None) {
            let (lb, cq) = input_value(channel, &p, alpha);
            let ub = hard_max(&cq);
            value = value.min(ub);
            if ub - lb <= tol {
                break;
            }
        }
    }
    value
}

// ---------------------------------------------------------------------------
// Symmetric channels
// ---------------------------------------------------------------------------

/// True iff all rows are permutations of one another (as multisets, within
/// `tol`) and all column α-power sums agree within `tol`.
pub fn is_alpha_weakly_symmetric(channel: &Channel, alpha: f64, tol: f64) -> bool {
    let nx = channel.input_size();
    let ny = channel.output_size();
    let sorted_row = |x: usize| -> Vec<f64> {
        let mut r = channel.row(x).as_slice().to_vec();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        r
    };
    let first = sorted_row(0);
    for x in 1..nx {
        let r = sorted_row(x);
        if r.iter().zip(&first).any(|(a, b)| (a - b).abs() > tol) {
            return false;
        }
    }
    let col_sum = |y: usize| -> f64 {
        (0..nx).map(|x| channel.prob(x, y).powf(alpha)).sum()
    };
    let c0 = col_sum(0);
    (1..ny).all(|y| (col_sum(y) - c0).abs() <= tol)
}

/// Capacity of an α-weakly symmetric channel: `I_α` at the uniform input,
/// closed form, no iteration.
pub fn symmetric_capacity(channel: &Channel, alpha: f64) -> Result<f64> {
    if !is_alpha_weakly_symmetric(channel, alpha, 1e-9) {
        return Err(Error::NotSymmetric);
    }
    let joint = JointPMF::from_channel(&ProbVector::uniform(channel.input_size()), channel);
    Ok(sibson::sibson_mi(&joint, AlphaOrder::new(alpha)).value)
}

// ---------------------------------------------------------------------------
// Zero-error feedback capacity
// ---------------------------------------------------------------------------

/// Zero-error feedback capacity
/// `sup_P min_y −log Σ_{x: W(y|x)>0} P(x) = −log min_P max_y P(S_y)`,
/// where `S_y` is the input support set of output `y`; 0 when no zero-error
/// communication is possible. The inner problem is the linear program
/// `min t` over `{P ∈ Δ, P(S_y) ≤ t ∀y}`, solved exactly by a dense
/// two-phase simplex; the dual variables of the coverage rows give a matching
/// lower-bound certificate `min_x Σ_{y: x ∈ S_y} λ_y`, so the reported gap is
/// machine precision, including at degenerate optima where several coverage
/// constraints tie.
pub fn zero_error_feedback_capacity(channel: &Channel, tol: f64) -> Result<CapacityResult> {
    let nx = channel.input_size();
    let ny = channel.output_size();
    let in_support = |x: usize, y: usize| channel.prob(x, y) > 0.0;

    // LP variables z = (P_0..P_{nx-1}, t, s_0..s_{ny-1}) ≥ 0 with rows
    //   Σ_x P_x = 1   and   Σ_{x ∈ S_y} P_x − t + s_y = 0.
    let n = nx + 1 + ny;
    let m = 1 + ny;
    let mut a = vec![vec![0.0f64; n]; m];
    let mut b = vec![0.0f64; m];
    b[0] = 1.0;
    for x in 0..nx {
        a[0][x] = 1.0;
    }
    for y in 0..ny {
        for x in 0..nx {
            if in_support(x, y) {
                a[1 + y][x] = 1.0;
            }
        }
        a[1 + y][nx] = -1.0;
        a[1 + y][nx + 1 + y] = 1.0;
    }
    let mut c = vec![0.0f64; n];
    c[nx] = 1.0;
    let (z, lambda, it) = simplex_min(&a, &b, &c).ok_or(Error::NoConvergence {
        best: 0.0,
        iterations: 0,
    })?;
    let t_star = z[nx];

    // λ_y ≥ 0 are the duals of the coverage rows; feasibility of the dual
    // (`Σλ = 1`, lower bound `min_x Σ_{y: x∈S_y} λ_y`) certifies t*.
    let lam: Vec<f64> = lambda[1..].iter().map(|&v| (-v).max(0.0)).collect();
    let lam_sum: f64 = lam.iter().sum();
    let dual_bound = if lam_sum > 0.0 {
        (0..nx)
            .map(|x| {
                (0..ny)
                    .filter(|&y| in_support(x, y))
                    .map(|y| lam[y] / lam_sum)
                    .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min)
    } else {
        0.0
    };
    let masses: Vec<f64> = (0..ny)
        .map(|y| (0..nx).filter(|&x| in_support(x, y)).map(|x| z[x]).sum())
        .collect();
    let ub = masses.iter().cloned().fold(0.0, f64::max).max(t_star);
    let gap = ((-dual_bound.max(1e-300).ln()) - (-ub.ln())).max(0.0);
    if gap > tol {
        return Err(Error::NoConvergence {
            best: -ub.ln(),
            iterations: it,
        });
    }
    let s: f64 = masses.iter().sum();
    Ok(CapacityResult {
        value: (-ub.ln()).max(0.0),
        optimal_input: ProbVector::from_normalized(z[..nx].to_vec()),
        optimal_output: ProbVector::from_normalized(masses.iter().map(|&v| v / s).collect()),
        iterations: it,
        gap,
    })
}

/// Two-phase dense simplex for `min c·z` over `{A z = b, z ≥ 0}` with
/// `b ≥ 0`, using Bland's rule (no cycling). Returns the optimal `z`, the
/// row duals `c_B B⁻¹`, and the pivot count; `None` if infeasible/unbounded.
fn simplex_min(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<(Vec<f64>, Vec<f64>, usize)> {
    let m = a.len();
    let n = c.len();
    // Tableau over the original variables plus one artificial per row.
    let total = n + m;
    let mut tab = vec![vec![0.0f64; total + 1]; m];
    for i in 0..m {
        for j in 0..n {
            tab[i][j] = a[i][j];
        }
        tab[i][n + i] = 1.0;
        tab[i][total] = b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let eps = 1e-11;

    let mut pivots = 0usize;
    let mut run = |tab: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, cost: &[f64]| -> Option<()> {
        loop {
            // Reduced costs via row duals y = c_B B⁻¹ (accumulated tableau).
            let mut entering = None;
            for j in 0..total {
                if basis.contains(&j) {
                    continue;
                }
                let zj: f64 = (0..m).map(|i| cost[basis[i]] * tab[i][j]).sum();
                if cost[j] - zj < -eps {
                    entering = Some(j);
                    break; // Bland: smallest index.
                }
            }
            let Some(j) = entering else { return Some(()) };
            // Ratio test, Bland tie-break on basis index.
            let mut leave: Option<usize> = None;
            let mut best = f64::INFINITY;
            for i in 0..m {
                if tab[i][j] > eps {
                    let ratio = tab[i][total] / tab[i][j];
                    if ratio < best - eps
                        || (ratio < best + eps
                            && leave.map_or(true, |l| basis[i] < basis[l]))
                    {
                        best = ratio;
                        leave = Some(i);
                    }
                }
            }
            let i = leave?; // None: unbounded.
            let piv = tab[i][j];
            for v in tab[i].iter_mut() {
                *v /= piv;
            }
            for r in 0..m {
                if r != i && tab[r][j].abs() > 0.0 {
                    let f = tab[r][j];
                    for col in 0..=total {
                        tab[r][col] -= f * tab[i][col];
                    }
                }
            }
            basis[i] = j;
            pivots += 1;
            if pivots > 10_000 {
                return None;
            }
        }
    };

    // Phase 1: drive out the artificials.
    let mut cost1 = vec![0.0f64; total];
    for j in n..total {
        cost1[j] = 1.0;
    }
    run(&mut tab, &mut basis, &cost1)?;
    let phase1: f64 = basis
        .iter()
        .enumerate()
        .map(|(i, &j)| cost1[j] * tab[i][total])
        .sum();
    if phase1 > 1e-8 {
        return None; // Infeasible.
    }
    // Pivot any degenerate basic artificial onto a structural column so the
    // final basis (and hence the extracted duals) involves real variables.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|j| !basis.contains(j) && tab[i][*j].abs() > eps) {
                let piv = tab[i][j];
                for v in tab[i].iter_mut() {
                    *v /= piv;
                }
                for r in 0..m {
                    if r != i && tab[r][j].abs() > 0.0 {
                        let f = tab[r][j];
                        for col in 0..=total {
                            tab[r][col] -= f * tab[i][col];
                        }
                    }
                }
                basis[i] = j;
            }
        }
    }
    // Phase 2 with the real objective (artificials priced out of play).
    let mut cost2 = vec![0.0f64; total];
    cost2[..n].copy_from_slice(c);
    for j in n..total {
        cost2[j] = 1e9; // Keep any degenerate artificial at value zero.
    }
    run(&mut tab, &mut basis, &cost2)?;

    let mut z = vec![0.0f64; n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            z[j] = tab[i][total];
        }
    }
    // Row duals from the artificial columns: y = c_B B⁻¹, and the artificial
    // block of the final tableau is exactly B⁻¹.
    let duals: Vec<f64> = (0..m)
        .map(|r| (0..m).map(|i| cost2[basis[i]] * tab[i][n + r]).sum())
        .collect();
    Some((z, duals, pivots))
}

// ---------------------------------------------------------------------------
// Gallager functional and error exponents
// ---------------------------------------------------------------------------

/// `E₀(ρ, P) = −log Σ_y (Σ_x P(x) W(y|x)^{1/(1+ρ)})^{1+ρ}`, which equals
/// `ρ·I_{1/(1+ρ)}(P, W)` identically — an independent oracle for Sibson
/// values at orders below 1.
pub fn gallager_e0(channel: &Channel, input: &ProbVector, rho: f64) -> f64 {
    assert!(rho >= 0.0);
    if rho == 0.0 {
        return 0.0;
    }
    let s = 1.0 / (1.0 + rho);
    let outer: Vec<f64> = (0..channel.output_size())
        .map(|y| {
            let terms: Vec<f64> = (0..channel.input_size())
                .filter(|&x| input[x] > 0.0 && channel.prob(x, y) > 0.0)
                .map(|x| input[x].ln() + s * channel.prob(x, y).ln())
                .collect();
            (1.0 + rho) * log_sum_exp(&terms)
        })
        .collect();
    -log_sum_exp(&outer)
}

/// Sphere-packing / random-coding exponent curves:
/// `E(R) = sup_ρ ρ·(C_{1/(1+ρ)} − R)` with ρ ranging over `[0, ∞)`
/// (sphere packing, searched on `[10⁻⁶, 10³]`) or `[0, 1]` (random coding).
/// The ρ-search brackets on a 64-point log grid, then refines by golden
/// section; capacities are memoized per ρ.
pub fn error_exponents(
    channel: &Channel,
    rates: &[f64],
    kind: ExponentKind,
    tol: f64,
) -> Result<ExponentCurve> {
    assert!(rates.iter().all(|&r| r >= 0.0));
    let (lo, hi): (f64, f64) = match kind {
        ExponentKind::SpherePacking => (1e-6, 1e3),
        ExponentKind::RandomCoding => (1e-6, 1.0),
    };
    let mut cache: HashMap<u64, f64> = HashMap::new();
    let mut capacity_at = |rho: f64| -> Result<f64> {
        if let Some(&c) = cache.get(&rho.to_bits()) {
            return Ok(c);
        }
        let alpha = AlphaOrder::new(1.0 / (1.0 + rho));
        let c = sibson_capacity(channel, alpha, tol)?.value;
        cache.insert(rho.to_bits(), c);
        Ok(c)
    };

    let mut exponents = Vec::with_capacity(rates.len());
    for &rate in rates {
        let objective = |rho: f64, cap: &mut dyn FnMut(f64) -> Result<f64>| -> Result<f64> {
            Ok(rho * (cap(rho)? - rate))
        };
        // 64-point log grid bracket.
        let grid: Vec<f64> = (0..64)
            .map(|i| {
                (lo.ln() + (hi / lo).ln() * i as f64 / 63.0).exp()
            })
            .collect();
        let mut best = (0usize, 0.0f64);
        for (i, &rho) in grid.iter().enumerate() {
            let v = objective(rho, &mut capacity_at)?;
            if v > best.1 {
                best = (i, v);
            }
        }
        // Golden-section refinement around the best grid point (in log ρ).
        let mut a = grid[best.0.saturating_sub(1)].ln();
        let mut b = grid[(best.0 + 1).min(63)].ln();
        let phi = (5.0f64.sqrt() - 1.0) / 2.0;
        let mut best_val = best.1;
        for _ in 0..80 {
            if b - a < 1e-10 {
                break;
            }
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            let fc = objective(c.exp(), &mut capacity_at)?;
            let fd = objective(d.exp(), &mut capacity_at)?;
            best_val = best_val.max(fc).max(fd);
            if fc > fd {
                b = d;
            } else {
                a = c;
            }
        }
        exponents.push(best_val.max(0.0));
    }
    Ok(ExponentCurve {
        rates: rates.to_vec(),
        exponents,
        kind,
    })
}

// ---------------------------------------------------------------------------
// α-NML universal prediction
// ---------------------------------------------------------------------------

/// The α-regret-optimal predictor for a finite model class (rows of
/// `models`): `p̂_α(x) ∝ (Σ_θ prior(θ) p_θ(x)^α)^{1/α}` with its worst-case
/// regret `max_θ D_α(p_θ‖p̂_α)`. At α = ∞ the predictor is the normalized
/// maximum (Shtarkov) and the regret its log normalizer; at α = 1 the Bayes
/// mixture with worst-case KL regret.
pub fn alpha_nml(models: &Channel, prior: &ProbVector, alpha: AlphaOrder) -> (ProbVector, f64) {
    let n_theta = models.input_size();
    let nx = models.output_size();
    assert_eq!(prior.len(), n_theta);
    assert!(
        alpha.value() >= 1.0,
        "alpha-NML prediction is defined for alpha >= 1"
    );
    let predictor = match alpha {
        AlphaOrder::Infinity => {
            let m: Vec<f64> = (0..nx)
                .map(|x| {
                    (0..n_theta)
                        .filter(|&t| prior[t] > 0.0)
                        .map(|t| models.prob(t, x))
                        .fold(0.0, f64::max)
                })
                .collect();
            let s: f64 = m.iter().sum();
            ProbVector::from_normalized(m.iter().map(|&v| v / s).collect())
        }
        AlphaOrder::One => {
            let m: Vec<f64> = (0..nx)
                .map(|x| (0..n_theta).map(|t| prior[t] * models.prob(t, x)).sum())
                .collect();
            ProbVector::from_normalized(m)
        }
        AlphaOrder::Finite(a) => {
            let logs: Vec<f64> = (0..nx)
                .map(|x| {
                    let terms: Vec<f64> = (0..n_theta)
                        .filter(|&t| prior[t] > 0.0 && models.prob(t, x) > 0.0)
                        .map(|t| prior[t].ln() + a * models.prob(t, x).ln())
                        .collect();
                    log_sum_exp(&terms) / a
                })
                .collect();
            ProbVector::from_log_weights(&logs).expect("some model mass")
        }
        AlphaOrder::Zero => unreachable!(),
    };
    let regret = (0..n_theta)
        .filter(|&t| prior[t] > 0.0)
        .map(|t| renyi::renyi_divergence(models.row(t), &predictor, alpha))
        .fold(0.0, f64::max);
    (predictor, regret)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{sample_channel, sample_prob_vector, seeded_rng};
    use approx::assert_relative_eq;

    fn a(x: f64) -> AlphaOrder {
        AlphaOrder::new(x)
    }

    /// BSC(ε) capacity at order α: log 2 minus the Rényi entropy of (ε, 1-ε),
    /// achieved at the uniform input by symmetry.
    fn bsc_capacity(eps: f64, al: f64) -> f64 {
        let ent = renyi::renyi_entropy(
            &ProbVector::new(&[eps, 1.0 - eps], 1e-9).unwrap(),
            a(al),
        );
        2.0f64.ln() - ent
    }

    #[test]
    fn bsc_and_identity_capacities() {
        for &al in &[0.5, 1.0, 2.0, 5.0] {
            let r = sibson_capacity(&Channel::bsc(0.25), a(al), 1e-9).unwrap();
            assert!(
                (r.value - bsc_capacity(0.25, al)).abs() < 1e-8,
                "BSC capacity at alpha={al}: {} vs {}",
                r.value,
                bsc_capacity(0.25, al)
            );
            assert!(r.gap <= 1e-9);
            // Certified bracket invariants.
            let joint = JointPMF::from_channel(&r.optimal_input, &Channel::bsc(0.25));
            assert!(sibson::sibson_mi(&joint, a(al)).value >= r.value - r.gap - 1e-12);
        }
        for &al in &[0.5, 2.0, f64::INFINITY] {
            let r = sibson_capacity(&Channel::identity(4), a(al), 1e-9).unwrap();
            assert_relative_eq!(r.value, 4.0f64.ln(), epsilon = 1e-8);
        }
    }

    #[test]
    fn minimax_oracle_agrees_with_primal_solver() {
        let mut rng = seeded_rng(41);
        for _ in 0..5 {
            let ch = sample_channel(&mut rng, 3, 3);
            for &al in &[0.5, 2.0] {
                let primal = sibson_capacity(&ch, a(al), 1e-8).unwrap();
                let dual = minimax_capacity_value(&ch, a(al), 1e-7);
                assert!(
                    (primal.value - dual).abs() < 2e-6,
                    "primal {} vs minimax {} at alpha={al}",
                    primal.value,
                    dual
                );
            }
        }
    }

    #[test]
    fn capacity_equalities_across_measures() {
        let mut rng = seeded_rng(42);
        for _ in 0..5 {
            let ch = sample_channel(&mut rng, 3, 3);
            for &al in &[0.5, 2.0] {
                let r = sibson_capacity(&ch, a(al), 1e-9).unwrap();
                // Tilt reparameterization P' ∝ P*^{1/α} turns the Arimoto
                // measure at P' into the Sibson measure at P*.
                let logs: Vec<f64> = r
                    .optimal_input
                    .as_slice()
                    .iter()
                    .map(|&p| if p > 0.0 { p.ln() / al } else { f64::NEG_INFINITY })
                    .collect();
                let tilted = ProbVector::from_log_weights(&logs).unwrap();
                let ja = JointPMF::from_channel(&tilted, &ch);
                assert!(
                    (sibson::arimoto_mi(&ja, a(al)) - r.value).abs() < 1e-7,
                    "Arimoto capacity equality at alpha={al}"
                );
                // The Csiszár value at the capacity-achieving input equals
                // the capacity (all active divergences equal C at optimum).
                let jc = JointPMF::from_channel(&r.optimal_input, &ch);
                let c = sibson::csiszar_mi(&jc, a(al), 1e-12).unwrap();
                assert!(
                    (c - r.value).abs() < 1e-5,
                    "Csiszár capacity equality at alpha={al}: {c} vs {}",
                    r.value
                );
            }
        }
    }

    #[test]
    fn weak_symmetry_detection_and_shortcut() {
        assert!(is_alpha_weakly_symmetric(&Channel::bsc(0.3), 2.0, 1e-9));
        assert!(!is_alpha_weakly_symmetric(&Channel::bec(0.3), 2.0, 1e-9));
        // Permuted rows but unequal column sums.
        let ch = Channel::new(&[vec![0.7, 0.2, 0.1], vec![0.7, 0.1, 0.2]], 1e-9).unwrap();
        assert!(!is_alpha_weakly_symmetric(&ch, 2.0, 1e-9));
        assert!(symmetric_capacity(&ch, 2.0).is_err());

        assert_relative_eq!(
            symmetric_capacity(&Channel::bsc(0.25), 2.0).unwrap(),
            1.25f64.ln(),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            symmetric_capacity(&Channel::identity(5), 3.0).unwrap(),
            5.0f64.ln(),
            epsilon = 1e-12
        );
        // Symmetric ternary channel cross-check against the solver.
        let tern = Channel::new(
            &[
                vec![0.6, 0.3, 0.1],
                vec![0.1, 0.6, 0.3],
                vec![0.3, 0.1, 0.6],
            ],
            1e-9,
        )
        .unwrap();
        let direct = symmetric_capacity(&tern, 2.0).unwrap();
        let solved = sibson_capacity(&tern, a(2.0), 1e-8).unwrap().value;
        assert!((direct - solved).abs() < 1e-6);
    }

    #[test]
    fn zero_error_feedback_cases() {
        // All-positive entries: no zero-error communication.
        let ch = Channel::new(&[vec![0.5, 0.5], vec![0.3, 0.7]], 1e-9).unwrap();
        let r = zero_error_feedback_capacity(&ch, 1e-8).unwrap();
        assert!(r.value.abs() < 1e-8);

        let r = zero_error_feedback_capacity(&Channel::identity(4), 1e-8).unwrap();
        assert_relative_eq!(r.value, 4.0f64.ln(), epsilon = 1e-6);

        // Inputs {0,1} never share an output with input 2.
        let ch = Channel::new(
            &[
                vec![0.5, 0.5, 0.0],
                vec![0.4, 0.6, 0.0],
                vec![0.0, 0.0, 1.0],
            ],
            1e-9,
        )
        .unwrap();
        let r = zero_error_feedback_capacity(&ch, 1e-8).unwrap();
        assert!(r.value >= 2.0f64.ln() - 1e-6);
    }

    #[test]
    fn gallager_identity() {
        let mut rng = seeded_rng(43);
        // BSC spot check.
        let ch = Channel::bsc(0.25);
        let u = ProbVector::uniform(2);
        let j = JointPMF::from_channel(&u, &ch);
        assert_relative_eq!(
            gallager_e0(&ch, &u, 1.0),
            1.0 * sibson::sibson_mi(&j, a(0.5)).value,
            epsilon = 1e-12
        );
        assert_eq!(gallager_e0(&ch, &u, 0.0), 0.0);
        for _ in 0..20 {
            let ch = sample_channel(&mut rng, 3, 4);
            let p = sample_prob_vector(&mut rng, 3);
            let j = JointPMF::from_channel(&p, &ch);
            for &rho in &[0.25, 1.0, 3.0] {
                let want = rho * sibson::sibson_mi(&j, a(1.0 / (1.0 + rho))).value;
                assert!(
                    (gallager_e0(&ch, &p, rho) - want).abs() < 1e-10,
                    "identity at rho={rho}"
                );
            }
        }
    }

    #[test]
    fn exponent_curves() {
        let ch = Channel::bsc(0.1);
        let c1 = sibson_capacity(&ch, AlphaOrder::One, 1e-9).unwrap().value;
        let rates: Vec<f64> = (0..10).map(|i| c1 * (i as f64 + 0.5) / 8.0).collect();
        let rc = error_exponents(&ch, &rates, ExponentKind::RandomCoding, 1e-9).unwrap();
        let sp = error_exponents(&ch, &rates, ExponentKind::SpherePacking, 1e-9).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..rates.len() {
            assert!(rc.exponents[i] <= sp.exponents[i] + 1e-8, "RC ≤ SP");
            assert!(rc.exponents[i] <= prev + 1e-10, "nonincreasing in rate");
            prev = rc.exponents[i];
            if rates[i] >= c1 {
                assert!(sp.exponents[i] < 1e-6, "zero at/beyond capacity");
            }
        }
        // Uniform input is optimal for the BSC: direct E0 optimization oracle.
        let u = ProbVector::uniform(2);
        for (i, &rate) in rates.iter().enumerate() {
            let direct = (0..20_000)
                .map(|k| {
                    let rho = k as f64 / 19_999.0;
                    rho.max(1e-9) * 0.0 + gallager_e0(&ch, &u, rho) - rho * rate
                })
                .fold(f64::NEG_INFINITY, f64::max)
                .max(0.0);
            assert!(
                (rc.exponents[i] - direct).abs() < 1e-6,
                "RC curve vs direct E0 optimization at R={rate}: {} vs {direct}",
                rc.exponents[i]
            );
        }
    }

    #[test]
    fn alpha_nml_predictors() {
        // Single model: predictor is the model, regret zero.
        let m = Channel::new(&[vec![0.2, 0.8]], 1e-9).unwrap();
        let (p, r) = alpha_nml(&m, &ProbVector::uniform(1), a(2.0));
        assert_relative_eq!(p[0], 0.2, epsilon = 1e-12);
        assert!(r.abs() < 1e-12);

        // Shtarkov limit: predictor ∝ max_θ p_θ, regret = log of the sum.
        let m = Channel::new(&[vec![0.2, 0.8], vec![0.8, 0.2]], 1e-9).unwrap();
        let (p, r) = alpha_nml(&m, &ProbVector::uniform(2), AlphaOrder::Infinity);
        assert_relative_eq!(p[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(r, 1.6f64.ln(), epsilon = 1e-12);

        // Capacity-achieving prior: regret equals the capacity.
        let cap = sibson_capacity(&m, a(2.0), 1e-10).unwrap();
        let (_, regret) = alpha_nml(&m, &cap.optimal_input, a(2.0));
        assert!(
            (regret - cap.value).abs() < 1e-6,
            "regret {} vs capacity {}",
            regret,
            cap.value
        );
    }
}
