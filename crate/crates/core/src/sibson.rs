//! Sibson α-mutual information and its relatives.
//!
//! The central quantity is `I_α(X,Y) = min_{Q_Y} D_α(P_XY ‖ P_X Q_Y)`,
//! which on finite alphabets has the closed form
//!
//! ```text
//! I_α(X,Y) = (α/(α-1)) · log Σ_y ( Σ_x P_X(x) P_{Y|X}(y|x)^α )^{1/α}
//! ```
//!
//! with minimizer `Q*_Y(y) ∝ (Σ_x P_X(x) P_{Y|X}(y|x)^α)^{1/α}`. The module
//! provides the closed form with all limiting orders, the Gaussian-channel
//! closed form, the Arimoto (tilted-input), Csiszár (expected-divergence) and
//! Lapidoth–Pfister (product-minimization) variants, conditional versions on
//! rank-3 joints, and the tensorization / independence data-processing
//! comparison helpers.

use crate::alpha::AlphaOrder;
use crate::error::Error;
use crate::logdomain::log_sum_exp;
use crate::prob::{sample_prob_vector, seeded_rng, Channel, JointPMF, JointTensor, ProbVector};
use crate::renyi;
use crate::Result;

/// Value and optimizing output marginal of the Sibson measure.
#[derive(Debug, Clone)]
pub struct SibsonResult {
    /// `I_α(X,Y)` in nats.
    pub value: f64,
    /// The minimizing output marginal `Q*_Y` (a tilting of `P_Y`; at α=0 a
    /// point mass on the binding output).
    pub q_star: ProbVector,
    /// The order the result was computed at.
    pub alpha: AlphaOrder,
}

/// Which conditional Sibson variant to compute on a rank-3 joint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionalVariant {
    /// `I_α^{Y|Z}`: minimize `D_α(P_XYZ ‖ P_{X|Z} Q_{Y|Z} P_Z)` over the
    /// conditional family `Q_{Y|Z}`.
    MinOverQYgZ,
    /// `I_α^{Z}`: minimize `D_α(P_XYZ ‖ P_{X|Z} P_{Y|Z} Q_Z)` over `Q_Z`.
    MinOverQZ,
}

/// The optimizing reference of a conditional Sibson computation.
#[derive(Debug, Clone)]
pub enum ConditionalQStar {
    /// One `Q*_{Y|Z=z}` per z; `None` where `P_Z(z) = 0`.
    PerZ(Vec<Option<ProbVector>>),
    /// A single `Q*_Z`.
    OverZ(ProbVector),
}

// ---------------------------------------------------------------------------
// The closed form
// ---------------------------------------------------------------------------

/// Shannon mutual information in nats.
pub fn shannon_mi(joint: &JointPMF) -> f64 {
    let m = joint.marginals();
    let mut s = 0.0;
    for x in 0..joint.nx() {
        for y in 0..joint.ny() {
            let p = joint.cell(x, y);
            if p > 0.0 {
                s += p * (p.ln() - m.px[x].ln() - m.py[y].ln());
            }
        }
    }
    s.max(0.0)
}

/// Sibson α-mutual information with its optimizing marginal.
///
/// Limiting orders: α=1 is Shannon MI with `q_star = P_Y`; α=∞ is maximal
/// leakage `log Σ_y max_{x: P_X(x)>0} P_{Y|X}(y|x)`; α=0 is
/// `min_{y: P_Y(y)>0} -log P_X({x : P_XY(x,y) > 0})` with `q_star` a point
/// mass on the binding output (lowest index at ties).
pub fn sibson_mi(joint: &JointPMF, alpha: AlphaOrder) -> SibsonResult {
    let m = joint.marginals();
    match alpha {
        AlphaOrder::One => SibsonResult {
            value: shannon_mi(joint),
            q_star: m.py,
            alpha,
        },
        AlphaOrder::Infinity => {
            // max_x over the support of P_X of the conditional P(y|x).
            let mut col_max = vec![0.0f64; joint.ny()];
            for x in 0..joint.nx() {
                if let Some(w) = &m.y_given_x[x] {
                    for y in 0..joint.ny() {
                        col_max[y] = col_max[y].max(w[y]);
                    }
                }
            }
            let s: f64 = col_max.iter().sum();
            SibsonResult {
                value: s.ln().max(0.0),
                q_star: ProbVector::from_normalized(
                    col_max.iter().map(|&v| v / s).collect(),
                ),
                alpha,
            }
        }
        AlphaOrder::Zero => {
            // Essential supremum over outputs of the input-support mass.
            let mut best = (f64::NEG_INFINITY, 0usize);
            for y in 0..joint.ny() {
                if m.py[y] > 0.0 {
                    let mass = m.px.mass_where(|x| joint.cell(x, y) > 0.0);
                    if mass > best.0 {
                        best = (mass, y);
                    }
                }
            }
            SibsonResult {
                value: (-best.0.ln()).max(0.0),
                q_star: ProbVector::point_mass(joint.ny(), best.1),
                alpha,
            }
        }
        AlphaOrder::Finite(a) => {
            let (value, q_log) = sibson_finite_log(joint, &m.px, &m.y_given_x, a);
            SibsonResult {
                value,
                q_star: ProbVector::from_log_weights(&q_log)
                    .expect("finite joint has at least one positive output"),
                alpha,
            }
        }
    }
}

/// Core log-domain evaluation of the finite-α closed form; returns
/// `(I_α, unnormalized log q*)` with `log q*_y = (1/α)·log Σ_x P_X W^α`.
fn sibson_finite_log(
    joint: &JointPMF,
    px: &ProbVector,
    y_given_x: &[Option<ProbVector>],
    a: f64,
) -> (f64, Vec<f64>) {
    let ny = joint.ny();
    let mut q_log = vec![f64::NEG_INFINITY; ny];
    let mut terms = Vec::with_capacity(px.len());
    for (y, slot) in q_log.iter_mut().enumerate() {
        terms.clear();
        for x in 0..px.len() {
            if px[x] > 0.0 {
                let w = y_given_x[x].as_ref().expect("positive P_X row")[y];
                if w > 0.0 {
                    terms.push(px[x].ln() + a * w.ln());
                }
            }
        }
        *slot = log_sum_exp(&terms) / a;
    }
    let value = (a / (a - 1.0)) * log_sum_exp(&q_log);
    (value.max(0.0), q_log)
}

/// The objective `D_α(P_XY ‖ P_X ⊗ Q)` the Sibson measure minimizes,
/// evaluated at an arbitrary output candidate `Q`.
pub fn sibson_objective(joint: &JointPMF, q: &ProbVector, alpha: AlphaOrder) -> f64 {
    assert_eq!(q.len(), joint.ny());
    let px = joint.x_marginal();
    let flat_p: Vec<f64> = joint.cells().iter().flatten().cloned().collect();
    let mut flat_q = Vec::with_capacity(flat_p.len());
    for x in 0..joint.nx() {
        for y in 0..joint.ny() {
            flat_q.push(px[x] * q[y]);
        }
    }
    renyi::renyi_divergence(
        &ProbVector::from_normalized(flat_p),
        &ProbVector::from_normalized(flat_q),
        alpha,
    )
}

/// Gaussian-channel closed form `½ log(1 + α σ²_X / σ²_Y)` for
/// `Y = X + N`, `X ~ N(0, σ²_X)`, `N ~ N(0, σ²_Y)`.
pub fn sibson_mi_gaussian(sigma2_x: f64, sigma2_y: f64, alpha: f64) -> f64 {
    assert!(sigma2_x > 0.0 && sigma2_y > 0.0 && alpha >= 0.0);
    0.5 * (alpha * sigma2_x / sigma2_y).ln_1p()
}

/// Midpoint-rule discretization of the additive Gaussian pair
/// `Y = X + N`, `X ~ N(0, σ²_X)`, `N ~ N(0, σ²_Y)`: X on a `points`-point
/// grid over `±half_width` standard deviations of X, Y over the same
/// multiple of `√(σ²_X + σ²_Y)`. The resulting finite joint feeds the
/// generic [`sibson_mi`] pipeline as a quadrature oracle for
/// [`sibson_mi_gaussian`].
pub fn gaussian_quadrature_joint(
    sigma2_x: f64,
    sigma2_y: f64,
    points: usize,
    half_width: f64,
) -> JointPMF {
    assert!(sigma2_x > 0.0 && sigma2_y > 0.0 && points >= 2 && half_width > 0.0);
    let sx = sigma2_x.sqrt();
    let sn = sigma2_y.sqrt();
    let sy = (sigma2_x + sigma2_y).sqrt();
    let grid = |s: f64| -> Vec<f64> {
        (0..points)
            .map(|i| -half_width * s + 2.0 * half_width * s * i as f64 / (points - 1) as f64)
            .collect()
    };
    let xs = grid(sx);
    let ys = grid(sy);
    // Unnormalized log density φ(x/σ_X)·φ((y−x)/σ_N); constants cancel in
    // the normalization below.
    let mut cells = vec![vec![0.0f64; points]; points];
    let mut total = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let lx = -0.5 * (x / sx).powi(2);
        for (j, &y) in ys.iter().enumerate() {
            let ln = -0.5 * ((y - x) / sn).powi(2);
            let v = (lx + ln).exp();
            cells[i][j] = v;
            total += v;
        }
    }
    for row in &mut cells {
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    JointPMF::new(&cells, 1e-6).expect("normalized by construction")
}

// ---------------------------------------------------------------------------
// Arimoto
// ---------------------------------------------------------------------------

/// Arimoto α-mutual information, computed for finite orders as the Sibson
/// measure of the tilted joint with `P_{X_α}(x) ∝ P_X(x)^α` and the same
/// channel; at the limiting orders via the entropy-difference identity
/// `I_α^A = H_α(X) − H_α(X|Y)`.
pub fn arimoto_mi(joint: &JointPMF, alpha: AlphaOrder) -> f64 {
    let m = joint.marginals();
    match alpha {
        AlphaOrder::One => shannon_mi(joint),
        AlphaOrder::Zero | AlphaOrder::Infinity => {
            renyi::renyi_entropy(&m.px, alpha) - renyi::cond_renyi_entropy(joint, alpha)
        }
        AlphaOrder::Finite(a) => {
            let tilt_log: Vec<f64> = m
                .px
                .as_slice()
                .iter()
                .map(|&p| if p > 0.0 { a * p.ln() } else { f64::NEG_INFINITY })
                .collect();
            let px_a = ProbVector::from_log_weights(&tilt_log).expect("nonempty support");
            let cells: Vec<Vec<f64>> = (0..joint.nx())
                .map(|x| match &m.y_given_x[x] {
                    Some(w) => w.as_slice().iter().map(|&v| px_a[x] * v).collect(),
                    None => vec![0.0; joint.ny()],
                })
                .collect();
            let tilted = JointPMF::new(&cells, 1e-6).expect("tilted joint is normalized");
            sibson_mi(&tilted, alpha).value
        }
    }
}

// ---------------------------------------------------------------------------
// Csiszár
// ---------------------------------------------------------------------------

/// Csiszár α-mutual information `min_{Q_Y} E_{P_X}[D_α(P_{Y|X}(·|X) ‖ Q_Y)]`.
///
/// The objective is convex in `Q_Y`; it is minimized by damped fixed-point
/// iteration on the stationarity condition
/// `Q(y)^α ∝ Σ_x P_X(x) W(y|x)^α / S_x(Q)`, which stays in the simplex
/// interior. Terminates when the objective decrease drops below `tol`.
pub fn csiszar_mi(joint: &JointPMF, alpha: AlphaOrder, tol: f64) -> Result<f64> {
    let m = joint.marginals();
    let a = match alpha {
        AlphaOrder::One => return Ok(shannon_mi(joint)),
        AlphaOrder::Finite(a) => a,
        _ => panic!("csiszar_mi requires a finite positive order"),
    };
    // Active rows: x with P_X(x) > 0.
    let rows: Vec<(f64, Vec<f64>)> = (0..joint.nx())
        .filter(|&x| m.px[x] > 0.0)
        .map(|x| {
            let w = m.y_given_x[x].as_ref().unwrap();
            (m.px[x], w.log_probs())
        })
        .collect();
    let ny = joint.ny();

    // F(log Q) = Σ_x P_X(x) (1/(α-1)) log Σ_y W^α Q^{1-α}.
    let objective = |q_log: &[f64]| -> f64 {
        rows.iter()
            .map(|(px, w_log)| {
                let terms: Vec<f64> = (0..ny)
                    .map(|y| {
                        if w_log[y] == f64::NEG_INFINITY {
                            f64::NEG_INFINITY
                        } else {
                            a * w_log[y] + (1.0 - a) * q_log[y]
                        }
                    })
                    .collect();
                px * log_sum_exp(&terms) / (a - 1.0)
            })
            .sum()
    };
    let normalize = |q_log: &mut Vec<f64>| {
        let z = log_sum_exp(q_log);
        for v in q_log.iter_mut() {
            *v -= z;
        }
    };

    let mut q_log = vec![-(ny as f64).ln(); ny];
    let mut f_cur = objective(&q_log);
    let cap = 100_000usize;
    for it in 0..cap {
        // Stationarity update, computed entirely in the log domain.
        let log_s: Vec<f64> = rows
            .iter()
            .map(|(_, w_log)| {
                let terms: Vec<f64> = (0..ny)
                    .map(|y| {
                        if w_log[y] == f64::NEG_INFINITY {
                            f64::NEG_INFINITY
                        } else {
                            a * w_log[y] + (1.0 - a) * q_log[y]
                        }
                    })
                    .collect();
                log_sum_exp(&terms)
            })
            .collect();
        let mut cand: Vec<f64> = (0..ny)
            .map(|y| {
                let terms: Vec<f64> = rows
                    .iter()
                    .zip(&log_s)
                    .filter(|((_, w_log), _)| w_log[y] > f64::NEG_INFINITY)
                    .map(|((px, w_log), ls)| px.ln() + a * w_log[y] - ls)
                    .collect();
                log_sum_exp(&terms) / a
            })
            .collect();
        normalize(&mut cand);

        // Damped acceptance: geometric interpolation toward the candidate
        // until the (convex) objective decreases.
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..50 {
            let mut trial: Vec<f64> = q_log
                .iter()
                .zip(&cand)
                .map(|(&q, &c)| (1.0 - step) * q + step * c)
                .collect();
            normalize(&mut trial);
            let f_trial = objective(&trial);
            if f_trial <= f_cur {
                let gain = f_cur - f_trial;
                q_log = trial;
                f_cur = f_trial;
                accepted = true;
                if gain < tol {
                    return Ok(f_cur.max(0.0));
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No descent direction left: stationary, hence optimal (convex).
            return Ok(f_cur.max(0.0));
        }
        if it + 1 == cap {
            return Err(Error::NoConvergence {
                best: f_cur.max(0.0),
                iterations: cap,
            });
        }
    }
    Ok(f_cur.max(0.0))
}

// ---------------------------------------------------------------------------
// Lapidoth–Pfister
// ---------------------------------------------------------------------------

/// Lapidoth–Pfister mutual information
/// `min_{Q_X, Q_Y} D_α(P_XY ‖ Q_X ⊗ Q_Y)` by alternating exact one-sided
/// tilting updates (each coordinate minimization has the closed form
/// `Q(y) ∝ (Σ_x P^α Q_X^{1-α})^{1/α}`), restarted from the marginals plus
/// `restarts − 1` seeded Dirichlet points. The joint problem is not convex;
/// the contract is best-of-restarts.
pub fn lapidoth_pfister_mi(
    joint: &JointPMF,
    alpha: AlphaOrder,
    restarts: usize,
    tol: f64,
) -> Result<f64> {
    let a = match alpha {
        AlphaOrder::One => return Ok(shannon_mi(joint)),
        AlphaOrder::Finite(a) => a,
        _ => panic!("lapidoth_pfister_mi requires a finite positive order"),
    };
    let (nx, ny) = (joint.nx(), joint.ny());
    let p_log = joint.log_cells();

    let objective = |qx_log: &[f64], qy_log: &[f64]| -> f64 {
        let mut terms = Vec::with_capacity(nx * ny);
        for x in 0..nx {
            for y in 0..ny {
                if p_log[x][y] > f64::NEG_INFINITY {
                    terms.push(a * p_log[x][y] + (1.0 - a) * (qx_log[x] + qy_log[y]));
                }
            }
        }
        log_sum_exp(&terms) / (a - 1.0)
    };
    let normalize = |v: &mut Vec<f64>| {
        let z = log_sum_exp(v);
        for t in v.iter_mut() {
            *t -= z;
        }
    };

    let m = joint.marginals();
    let mut rng = seeded_rng(0x4c50);
    let mut starts: Vec<(Vec<f64>, Vec<f64>)> = vec![(m.px.log_probs(), m.py.log_probs())];
    for _ in 1..restarts.max(1) {
        starts.push((
            sample_prob_vector(&mut rng, nx).log_probs(),
            sample_prob_vector(&mut rng, ny).log_probs(),
        ));
    }

    let cap = 10_000usize;
    let mut best = f64::INFINITY;
    let mut any_converged = false;
    for (mut qx_log, mut qy_log) in starts {
        let mut f_cur = objective(&qx_log, &qy_log);
        for _ in 0..cap {
            // Exact minimization over Q_Y for fixed Q_X ...
            for y in 0..ny {
                let terms: Vec<f64> = (0..nx)
                    .filter(|&x| p_log[x][y] > f64::NEG_INFINITY)
                    .map(|x| a * p_log[x][y] + (1.0 - a) * qx_log[x])
                    .collect();
                qy_log[y] = log_sum_exp(&terms) / a;
            }
            normalize(&mut qy_log);
            // ... then over Q_X for fixed Q_Y.
            for x in 0..nx {
                let terms: Vec<f64> = (0..ny)
                    .filter(|&y| p_log[x][y] > f64::NEG_INFINITY)
                    .map(|y| a * p_log[x][y] + (1.0 - a) * qy_log[y])
                    .collect();
                qx_log[x] = log_sum_exp(&terms) / a;
            }
            normalize(&mut qx_log);
            let f_next = objective(&qx_log, &qy_log);
            debug_assert!(f_next <= f_cur + 1e-9, "alternating steps must not increase");
            let done = f_cur - f_next < tol;
            f_cur = f_next;
            if done {
                any_converged = true;
                break;
            }
        }
        best = best.min(f_cur);
    }
    if !any_converged {
        return Err(Error::NoConvergence {
            best: best.max(0.0),
            iterations: cap,
        });
    }
    Ok(best.max(0.0))
}

// ---------------------------------------------------------------------------
// Conditional variants
// ---------------------------------------------------------------------------

/// Per-z slices shared by both conditional variants: conditioning weight,
/// conditional joint and its marginals, for z with `P_Z(z) > 0` only.
struct ZSlice {
    z: usize,
    pz: f64,
    jz: JointPMF,
    px_z: ProbVector,
    py_z: ProbVector,
}

fn z_slices(triple: &JointTensor) -> (ProbVector, Vec<ZSlice>) {
    let pz = triple.z_marginal();
    let slices = (0..triple.nz())
        .filter_map(|z| {
            triple.xy_given_z(z).map(|jz| {
                let px_z = jz.x_marginal();
                let py_z = jz.y_marginal();
                ZSlice {
                    z,
                    pz: pz[z],
                    jz,
                    px_z,
                    py_z,
                }
            })
        })
        .collect();
    (pz, slices)
}

/// Shannon conditional mutual information `I(X;Y|Z)` in nats.
pub fn shannon_conditional_mi(triple: &JointTensor) -> f64 {
    let (_, slices) = z_slices(triple);
    slices.iter().map(|s| s.pz * shannon_mi(&s.jz)).sum()
}

/// Conditional Sibson α-mutual information on a rank-3 joint.
///
/// Both variants are exact one-shot minimizations: the reference family is
/// separable per conditioning atom, so each `Q*` row is a closed-form tilting
/// and the value is the nested log-domain expectation it induces. Outputs z
/// with `P_Z(z) = 0` are skipped entirely.
pub fn conditional_sibson_mi(
    triple: &JointTensor,
    alpha: AlphaOrder,
    variant: ConditionalVariant,
) -> (f64, ConditionalQStar) {
    match variant {
        ConditionalVariant::MinOverQYgZ => conditional_y_given_z(triple, alpha),
        ConditionalVariant::MinOverQZ => conditional_over_z(triple, alpha),
    }
}

fn conditional_y_given_z(triple: &JointTensor, alpha: AlphaOrder) -> (f64, ConditionalQStar) {
    let (_, slices) = z_slices(triple);
    let nz = triple.nz();
    let mut q_rows: Vec<Option<ProbVector>> = vec![None; nz];
    match alpha {
        AlphaOrder::One => {
            for s in &slices {
                q_rows[s.z] = Some(s.jz.y_marginal());
            }
            (shannon_conditional_mi(triple), ConditionalQStar::PerZ(q_rows))
        }
        AlphaOrder::Infinity => {
            // Conditional maximal leakage:
            // log max_{z} Σ_y max_{x: P_{X|Z}>0} P_{Y|XZ}(y|x,z).
            let mut best = f64::NEG_INFINITY;
            for s in &slices {
                let mut col_max = vec![0.0f64; s.jz.ny()];
                for x in 0..s.jz.nx() {
                    if s.px_z[x] > 0.0 {
                        for (y, cm) in col_max.iter_mut().enumerate() {
                            *cm = cm.max(s.jz.cell(x, y) / s.px_z[x]);
                        }
                    }
                }
                let sum: f64 = col_max.iter().sum();
                best = best.max(sum.ln());
                q_rows[s.z] = Some(ProbVector::from_normalized(
                    col_max.iter().map(|&v| v / sum).collect(),
                ));
            }
            (best.max(0.0), ConditionalQStar::PerZ(q_rows))
        }
        AlphaOrder::Zero => {
            // -log Σ_z P_Z(z) · max_y P_{X|Z}(support of column y | z).
            let mut total = 0.0;
            for s in &slices {
                let mut best_y = (0.0f64, 0usize);
                for y in 0..s.jz.ny() {
                    if s.py_z[y] > 0.0 {
                        let mass = s.px_z.mass_where(|x| s.jz.cell(x, y) > 0.0);
                        if mass > best_y.0 {
                            best_y = (mass, y);
                        }
                    }
                }
                total += s.pz * best_y.0;
                q_rows[s.z] = Some(ProbVector::point_mass(s.jz.ny(), best_y.1));
            }
            ((-total.ln()).max(0.0), ConditionalQStar::PerZ(q_rows))
        }
        AlphaOrder::Finite(a) => {
            // log B(y,z) = log P_Z + log Σ_x P_{X|Z} P_{Y|XZ}^α;
            // value = (1/(α-1)) log Σ_z (Σ_y B^{1/α})^α, Q*_{Y|Z=z} ∝ B^{1/α}.
            let mut outer = Vec::with_capacity(slices.len());
            for s in &slices {
                let ny = s.jz.ny();
                let mut b_log = vec![f64::NEG_INFINITY; ny];
                for (y, slot) in b_log.iter_mut().enumerate() {
                    let terms: Vec<f64> = (0..s.jz.nx())
                        .filter(|&x| s.px_z[x] > 0.0 && s.jz.cell(x, y) > 0.0)
                        .map(|x| {
                            s.px_z[x].ln() + a * (s.jz.cell(x, y) / s.px_z[x]).ln()
                        })
                        .collect();
                    *slot = s.pz.ln() + log_sum_exp(&terms);
                }
                let scaled: Vec<f64> = b_log.iter().map(|&b| b / a).collect();
                outer.push(a * log_sum_exp(&scaled));
                q_rows[s.z] = Some(
                    ProbVector::from_log_weights(&scaled).expect("positive slice"),
                );
            }
            let value = log_sum_exp(&outer) / (a - 1.0);
            (value.max(0.0), ConditionalQStar::PerZ(q_rows))
        }
    }
}

fn conditional_over_z(triple: &JointTensor, alpha: AlphaOrder) -> (f64, ConditionalQStar) {
    let (pz_full, slices) = z_slices(triple);
    let nz = triple.nz();
    match alpha {
        AlphaOrder::One => (shannon_conditional_mi(triple), ConditionalQStar::OverZ(pz_full)),
        AlphaOrder::Infinity => {
            // log Σ_z P_Z(z) · max_{x,y} P_{XY|Z}/(P_{X|Z} P_{Y|Z}).
            let mut weights = vec![0.0f64; nz];
            for s in &slices {
                let mut ratio_max = 0.0f64;
                for x in 0..s.jz.nx() {
                    for y in 0..s.jz.ny() {
                        let denom = s.px_z[x] * s.py_z[y];
                        if denom > 0.0 {
                            ratio_max = ratio_max.max(s.jz.cell(x, y) / denom);
                        }
                    }
                }
                weights[s.z] = s.pz * ratio_max;
            }
            let sum: f64 = weights.iter().sum();
            (
                sum.ln().max(0.0),
                ConditionalQStar::OverZ(ProbVector::from_normalized(
                    weights.iter().map(|&w| w / sum).collect(),
                )),
            )
        }
        AlphaOrder::Zero => {
            // -log max_z (P_{X|Z} ⊗ P_{Y|Z})(support of P_{XY|Z=z}).
            let mut best = (0.0f64, 0usize);
            for s in &slices {
                let mut cover = 0.0;
                for x in 0..s.jz.nx() {
                    for y in 0..s.jz.ny() {
                        if s.jz.cell(x, y) > 0.0 {
                            cover += s.px_z[x] * s.py_z[y];
                        }
                    }
                }
                if cover > best.0 {
                    best = (cover, s.z);
                }
            }
            (
                (-best.0.ln()).max(0.0),
                ConditionalQStar::OverZ(ProbVector::point_mass(nz, best.1)),
            )
        }
        AlphaOrder::Finite(a) => {
            // log C(z) = α log P_Z + log Σ_xy P_{XY|Z}^α (P_{X|Z}P_{Y|Z})^{1-α};
            // value = (α/(α-1)) log Σ_z C^{1/α}, Q*_Z ∝ C^{1/α}.
            let mut c_scaled = vec![f64::NEG_INFINITY; nz];
            for s in &slices {
                let mut terms = Vec::new();
                for x in 0..s.jz.nx() {
                    for y in 0..s.jz.ny() {
                        let p = s.jz.cell(x, y);
                        let denom = s.px_z[x] * s.py_z[y];
                        if p > 0.0 {
                            terms.push(a * p.ln() + (1.0 - a) * denom.ln());
                        } else if a < 1.0 && denom > 0.0 {
                            // p^α (..)^{1-α} = 0 for α<1; skip.
                        }
                    }
                }
                c_scaled[s.z] = (a * s.pz.ln() + log_sum_exp(&terms)) / a;
            }
            let value = (a / (a - 1.0)) * log_sum_exp(&c_scaled);
            (
                value.max(0.0),
                ConditionalQStar::OverZ(
                    ProbVector::from_log_weights(&c_scaled).expect("positive tensor"),
                ),
            )
        }
    }
}

/// `D_α` of the rank-3 joint against the Markov product reconstructed from a
/// conditional `Q*`, used to certify conditional values.
pub fn conditional_objective(
    triple: &JointTensor,
    q: &ConditionalQStar,
    alpha: AlphaOrder,
) -> f64 {
    let (pz, slices) = z_slices(triple);
    let (nx, ny, nz) = (triple.nx(), triple.ny(), triple.nz());
    let mut flat_p = Vec::with_capacity(nx * ny * nz);
    let mut flat_m = vec![0.0f64; nx * ny * nz];
    for x in 0..nx {
        for y in 0..ny {
            for z in 0..nz {
                flat_p.push(triple.cell(x, y, z));
            }
        }
    }
    for s in &slices {
        for x in 0..nx {
            for y in 0..ny {
                let idx = (x * ny + y) * nz + s.z;
                flat_m[idx] = match q {
                    ConditionalQStar::PerZ(rows) => {
                        let qy = rows[s.z].as_ref().expect("row defined on support");
                        pz[s.z] * s.px_z[x] * qy[y]
                    }
                    ConditionalQStar::OverZ(qz) => qz[s.z] * s.px_z[x] * s.py_z[y],
                };
            }
        }
    }
    renyi::renyi_divergence(
        &ProbVector::from_normalized(flat_p),
        &ProbVector::from_normalized(flat_m),
        alpha,
    )
}

// ---------------------------------------------------------------------------
// Comparison helpers
// ---------------------------------------------------------------------------

/// Tensorization comparison for a bank of conditionally independent channels
/// sharing one input: returns
/// `(lhs, rhs) = ((α-1)·I_α(X, Y^n), Σ_i (α - 1/β_i)·I_{αβ_i}(X, Y_i))`,
/// where the caller asserts `lhs ≤ rhs`. Requires `Σ 1/β_i = 1`.
pub fn tensorization_check(
    channels: &[Channel],
    prior: &ProbVector,
    alpha: f64,
    betas: &[f64],
) -> Result<(f64, f64)> {
    assert_eq!(channels.len(), betas.len());
    assert!(!channels.is_empty());
    assert!(betas.iter().all(|&b| b > 0.0));
    let inv_sum: f64 = betas.iter().map(|&b| 1.0 / b).sum();
    if (inv_sum - 1.0).abs() > 1e-9 {
        return Err(Error::BadWeights(inv_sum));
    }
    let nx = prior.len();
    assert!(channels.iter().all(|c| c.input_size() == nx));

    // Product channel X -> (Y_1, ..., Y_n), row-major composite outputs.
    let ny_total: usize = channels.iter().map(|c| c.output_size()).product();
    let cells: Vec<Vec<f64>> = (0..nx)
        .map(|x| {
            (0..ny_total)
                .map(|mut yc| {
                    let mut p = prior[x];
                    for c in channels.iter().rev() {
                        let m = c.output_size();
                        p *= c.prob(x, yc % m);
                        yc /= m;
                    }
                    p
                })
                .collect()
        })
        .collect();
    let product_joint = JointPMF::new(&cells, 1e-6)?;
    let lhs = (alpha - 1.0) * sibson_mi(&product_joint, AlphaOrder::new(alpha)).value;

    let mut rhs = 0.0;
    for (c, &b) in channels.iter().zip(betas) {
        let ji = JointPMF::from_channel(prior, c);
        rhs += (alpha - 1.0 / b) * sibson_mi(&ji, AlphaOrder::new(alpha * b)).value;
    }
    Ok((lhs, rhs))
}

/// Independence data-processing comparison: for independent `X ⊥ Z` and a
/// coupling channel `(X,Z) → Y` (rows indexed `x·|Z| + z`), returns
/// `(I_α(X, (Y,Z)), I_α((X,Z), Y))`; the caller asserts `lhs ≤ rhs`.
pub fn independence_dpi_check(
    px: &ProbVector,
    pz: &ProbVector,
    coupling: &Channel,
    alpha: f64,
) -> (f64, f64) {
    let (nx, nz) = (px.len(), pz.len());
    assert_eq!(coupling.input_size(), nx * nz);
    let ny = coupling.output_size();
    let al = AlphaOrder::new(alpha);

    // lhs joint: X against the composite (Y,Z), index y·|Z| + z.
    let lhs_cells: Vec<Vec<f64>> = (0..nx)
        .map(|x| {
            let mut row = vec![0.0; ny * nz];
            for z in 0..nz {
                for y in 0..ny {
                    row[y * nz + z] = px[x] * pz[z] * coupling.prob(x * nz + z, y);
                }
            }
            row
        })
        .collect();
    let lhs = sibson_mi(&JointPMF::new(&lhs_cells, 1e-6).unwrap(), al).value;

    // rhs joint: the composite (X,Z) against Y.
    let rhs_cells: Vec<Vec<f64>> = (0..nx * nz)
        .map(|xz| {
            let (x, z) = (xz / nz, xz % nz);
            (0..ny)
                .map(|y| px[x] * pz[z] * coupling.prob(xz, y))
                .collect()
        })
        .collect();
    let rhs = sibson_mi(&JointPMF::new(&rhs_cells, 1e-6).unwrap(), al).value;
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{sample_channel, sample_joint, sample_tensor, InstanceKind};
    use approx::assert_relative_eq;

    fn a(x: f64) -> AlphaOrder {
        AlphaOrder::new(x)
    }

    fn bsc_joint(eps: f64) -> JointPMF {
        JointPMF::from_channel(&ProbVector::uniform(2), &Channel::bsc(eps))
    }

    /// The closed form for the BSC with uniform input:
    /// log 2 + (1/(α-1)) log(ε^α + (1-ε)^α), with its limits.
    fn bsc_closed_form(eps: f64, alpha: AlphaOrder) -> f64 {
        let l2 = 2.0f64.ln();
        match alpha {
            AlphaOrder::Zero => 0.0,
            AlphaOrder::One => {
                l2 + eps * eps.ln() + (1.0 - eps) * (1.0 - eps).ln()
            }
            AlphaOrder::Infinity => l2 + eps.max(1.0 - eps).ln(),
            AlphaOrder::Finite(al) => {
                l2 + (eps.powf(al) + (1.0 - eps).powf(al)).ln() / (al - 1.0)
            }
        }
    }

    #[test]
    fn bsc_matches_closed_form_at_all_orders() {
        let j = bsc_joint(0.25);
        for i in 0..=100 {
            let al = 0.1 + 9.9 * i as f64 / 100.0;
            let got = sibson_mi(&j, a(al)).value;
            assert!(
                (got - bsc_closed_form(0.25, a(al))).abs() < 1e-12,
                "mismatch at alpha={al}"
            );
        }
        for al in [a(0.0), a(1.0), a(f64::INFINITY)] {
            assert_relative_eq!(
                sibson_mi(&j, al).value,
                bsc_closed_form(0.25, al),
                epsilon = 1e-12
            );
        }
        // The spec'd spot value: I_2 = log(5/4).
        assert_relative_eq!(
            sibson_mi(&j, a(2.0)).value,
            1.25f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn independence_gives_zero_and_qstar_is_py() {
        let px = ProbVector::new(&[0.3, 0.7], 1e-9).unwrap();
        let py = ProbVector::new(&[0.2, 0.5, 0.3], 1e-9).unwrap();
        let j = JointPMF::product(&px, &py);
        for &al in &[0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            let r = sibson_mi(&j, a(al));
            assert!(r.value.abs() < 1e-12, "independent joint must give 0");
            if al > 0.0 && al.is_finite() {
                for y in 0..3 {
                    assert_relative_eq!(r.q_star[y], py[y], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn identity_channel_maximal_leakage_is_log_n() {
        let j = JointPMF::from_channel(&ProbVector::uniform(5), &Channel::identity(5));
        assert_relative_eq!(
            sibson_mi(&j, a(f64::INFINITY)).value,
            5.0f64.ln(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn bec_asymmetry() {
        let d = 0.25;
        let j = JointPMF::from_channel(&ProbVector::uniform(2), &Channel::bec(d));
        let rev = j.swap();
        assert_relative_eq!(
            sibson_mi(&j, a(f64::INFINITY)).value,
            (2.0 - d).ln(),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            sibson_mi(&rev, a(f64::INFINITY)).value,
            2.0f64.ln(),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            sibson_mi(&rev, a(0.0)).value,
            (2.0 / (1.0 + d)).ln(),
            epsilon = 1e-12
        );
        assert_relative_eq!(sibson_mi(&j, a(0.0)).value, 0.0, epsilon = 1e-12);
        // Closed forms of the two finite-α curves.
        for i in 0..40 {
            let al = 0.15 + 9.0 * i as f64 / 40.0;
            if (al - 1.0).abs() < 1e-3 {
                continue;
            }
            let fwd = al / (al - 1.0)
                * (d + (1.0 - d) * 2.0f64.powf((al - 1.0) / al)).ln();
            let bwd = (d + (1.0 - d) * 2.0f64.powf(al - 1.0)).ln() / (al - 1.0);
            assert!((sibson_mi(&j, a(al)).value - fwd).abs() < 1e-12);
            assert!((sibson_mi(&rev, a(al)).value - bwd).abs() < 1e-12);
        }
    }

    #[test]
    fn q_star_reproduces_value_through_divergence() {
        let mut rng = seeded_rng(21);
        for _ in 0..25 {
            let j = sample_joint(&mut rng, 3, 4);
            for &al in &[0.0, 0.4, 1.0, 2.5, f64::INFINITY] {
                let r = sibson_mi(&j, a(al));
                let obj = sibson_objective(&j, &r.q_star, a(al));
                assert!(
                    (obj - r.value).abs() < 1e-10,
                    "D_alpha at q_star must equal the value (alpha={al}: {obj} vs {})",
                    r.value
                );
            }
        }
    }

    #[test]
    fn q_star_perturbations_never_improve() {
        let mut rng = seeded_rng(22);
        for _ in 0..10 {
            let j = sample_joint(&mut rng, 3, 3);
            for &al in &[0.5, 2.0] {
                let r = sibson_mi(&j, a(al));
                for _ in 0..100 {
                    let q = sample_prob_vector(&mut rng, 3);
                    assert!(
                        sibson_objective(&j, &q, a(al)) >= r.value - 1e-12,
                        "q_star must be the minimizer"
                    );
                }
            }
        }
    }

    #[test]
    fn gaussian_closed_form() {
        assert_relative_eq!(
            sibson_mi_gaussian(1.0, 1.0, 1.0),
            0.5 * 2.0f64.ln(),
            epsilon = 1e-14
        );
        assert_relative_eq!(
            sibson_mi_gaussian(1.0, 1.0, 2.0),
            0.5 * 3.0f64.ln(),
            epsilon = 1e-14
        );
        assert!(sibson_mi_gaussian(1.0, 1.0, 1e-12) < 1e-12);
    }

    #[test]
    fn arimoto_identity_and_uniform_equality() {
        let mut rng = seeded_rng(23);
        for _ in 0..20 {
            let j = sample_joint(&mut rng, 3, 3);
            for &al in &[0.3, 2.0, 7.0] {
                let ar = arimoto_mi(&j, a(al));
                let ent = renyi::renyi_entropy(&j.x_marginal(), a(al))
                    - renyi::cond_renyi_entropy(&j, a(al));
                assert!(
                    (ar - ent).abs() < 1e-10,
                    "tilted-Sibson and entropy-difference forms must agree"
                );
            }
            // Uniform input: Arimoto equals Sibson.
            let ch = sample_channel(&mut rng, 3, 3);
            let ju = JointPMF::from_channel(&ProbVector::uniform(3), &ch);
            for &al in &[0.5, 2.0, f64::INFINITY] {
                assert!((arimoto_mi(&ju, a(al)) - sibson_mi(&ju, a(al)).value).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn csiszar_ordering_and_brute_force() {
        let mut rng = seeded_rng(24);
        for _ in 0..10 {
            let j = sample_joint(&mut rng, 3, 2);
            for &al in &[0.5, 2.0] {
                let c = csiszar_mi(&j, a(al), 1e-12).unwrap();
                let s = sibson_mi(&j, a(al)).value;
                if al > 1.0 {
                    assert!(c <= s + 1e-9);
                } else {
                    assert!(c >= s - 1e-9);
                }
                // Brute force over the 1-simplex of 2-point outputs.
                let m = j.marginals();
                let mut brute = f64::INFINITY;
                for i in 1..2000 {
                    let q0 = i as f64 / 2000.0;
                    let q = ProbVector::from_normalized(vec![q0, 1.0 - q0]);
                    let mut v = 0.0;
                    for x in 0..j.nx() {
                        v += m.px[x]
                            * renyi::renyi_divergence(
                                m.y_given_x[x].as_ref().unwrap(),
                                &q,
                                a(al),
                            );
                    }
                    brute = brute.min(v);
                }
                assert!((c - brute).abs() < 1e-5, "solver {c} vs grid {brute}");
            }
        }
        // Independence: 0.
        let j = JointPMF::product(&ProbVector::uniform(2), &ProbVector::uniform(3));
        assert!(csiszar_mi(&j, a(2.0), 1e-12).unwrap().abs() < 1e-10);
    }

    #[test]
    fn lapidoth_pfister_bounds_and_stability() {
        let mut rng = seeded_rng(25);
        for _ in 0..10 {
            let j = sample_joint(&mut rng, 2, 2);
            for &al in &[0.5, 2.0] {
                let lp = lapidoth_pfister_mi(&j, a(al), 8, 1e-12).unwrap();
                if al > 1.0 {
                    // LP ≤ Sibson for α > 1.
                    assert!(lp <= sibson_mi(&j, a(al)).value + 1e-8);
                }
                assert!(lp >= -1e-12);
                // Restart stability on small instances.
                let lp2 = lapidoth_pfister_mi(&j, a(al), 3, 1e-12).unwrap();
                assert!((lp - lp2).abs() < 1e-7);
            }
        }
        let j = JointPMF::product(&ProbVector::uniform(2), &ProbVector::uniform(2));
        assert!(lapidoth_pfister_mi(&j, a(2.0), 4, 1e-12).unwrap().abs() < 1e-10);
    }

    #[test]
    fn conditional_degenerate_and_markov_cases() {
        let mut rng = seeded_rng(26);
        // Z constant: both variants equal the unconditional value.
        let j = sample_joint(&mut rng, 3, 3);
        let cells: Vec<Vec<Vec<f64>>> = j
            .cells()
            .iter()
            .map(|row| row.iter().map(|&p| vec![p]).collect())
            .collect();
        let t = JointTensor::new(&cells, 1e-9).unwrap();
        for &al in &[0.0, 0.5, 1.0, 2.0, f64::INFINITY] {
            // The Y|Z variant still minimizes over the output marginal, so it
            // collapses to the unconditional Sibson value; the Z variant has
            // no free marginal left and collapses to D_alpha against the
            // independent product instead (at alpha=1 the two agree).
            let (v1, _) = conditional_sibson_mi(&t, a(al), ConditionalVariant::MinOverQYgZ);
            let (v2, _) = conditional_sibson_mi(&t, a(al), ConditionalVariant::MinOverQZ);
            let want1 = sibson_mi(&j, a(al)).value;
            let m = j.marginals();
            let want2 = sibson_objective(&j, &m.py, a(al));
            assert!((v1 - want1).abs() < 1e-10, "Y|Z variant at alpha={al}");
            assert!((v2 - want2).abs() < 1e-10, "Z variant at alpha={al}");
        }
        // X ⊥ Y given Z: both variants vanish.
        let pz = sample_prob_vector(&mut rng, 2);
        let mut cells = vec![vec![vec![0.0; 2]; 2]; 2];
        for z in 0..2 {
            let px = sample_prob_vector(&mut rng, 2);
            let py = sample_prob_vector(&mut rng, 2);
            for x in 0..2 {
                for y in 0..2 {
                    cells[x][y][z] = pz[z] * px[x] * py[y];
                }
            }
        }
        let t = JointTensor::new(&cells, 1e-9).unwrap();
        for &al in &[0.5, 1.0, 2.0, f64::INFINITY] {
            for variant in [ConditionalVariant::MinOverQYgZ, ConditionalVariant::MinOverQZ] {
                let (v, _) = conditional_sibson_mi(&t, a(al), variant);
                assert!(v.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn conditional_qstar_certifies_value_and_shannon_limit() {
        let mut rng = seeded_rng(27);
        for _ in 0..10 {
            let t = sample_tensor(&mut rng, 2, 2, 2);
            for &al in &[0.4, 2.0, 5.0] {
                for variant in [ConditionalVariant::MinOverQYgZ, ConditionalVariant::MinOverQZ] {
                    let (v, q) = conditional_sibson_mi(&t, a(al), variant);
                    let obj = conditional_objective(&t, &q, a(al));
                    assert!(
                        (obj - v).abs() < 1e-9,
                        "D_alpha against the Q* product must reproduce the value"
                    );
                }
            }
            // α → 1 continuity toward Shannon conditional MI.
            let direct = shannon_conditional_mi(&t);
            for variant in [ConditionalVariant::MinOverQYgZ, ConditionalVariant::MinOverQZ] {
                let (near, _) =
                    conditional_sibson_mi(&t, AlphaOrder::Finite(1.0 + 1e-4), variant);
                // First-order continuity at the Shannon point.
                assert!((near - direct).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn tensorization_and_dpi_comparisons() {
        // Single factor with β = 1: equality.
        let prior = ProbVector::uniform(2);
        let (lhs, rhs) =
            tensorization_check(&[Channel::bsc(0.25)], &prior, 2.0, &[1.0]).unwrap();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
        // Two identical BSC branches, β = (2,2).
        let (lhs, rhs) = tensorization_check(
            &[Channel::bsc(0.25), Channel::bsc(0.25)],
            &prior,
            2.0,
            &[2.0, 2.0],
        )
        .unwrap();
        assert!(lhs <= rhs + 1e-10);
        assert!(tensorization_check(&[Channel::bsc(0.1)], &prior, 2.0, &[3.0]).is_err());

        let mut rng = seeded_rng(28);
        for _ in 0..10 {
            let px = sample_prob_vector(&mut rng, 2);
            let pz = sample_prob_vector(&mut rng, 2);
            let coupling = sample_channel(&mut rng, 4, 2);
            let (lhs, rhs) = independence_dpi_check(&px, &pz, &coupling, 2.0);
            assert!(lhs <= rhs + 1e-10);
        }
    }

    #[test]
    fn additivity_on_products() {
        let mut rng = seeded_rng(29);
        for _ in 0..10 {
            let j1 = sample_joint(&mut rng, 2, 3);
            let j2 = sample_joint(&mut rng, 3, 2);
            let prod = j1.tensor(&j2);
            for &al in &[0.5, 1.0, 2.0, f64::INFINITY] {
                let sum = sibson_mi(&j1, a(al)).value + sibson_mi(&j2, a(al)).value;
                assert!(
                    (sibson_mi(&prod, a(al)).value - sum).abs() < 1e-10,
                    "additivity at alpha={al}"
                );
            }
        }
    }

    #[test]
    fn random_instance_shapes() {
        let j = crate::prob::random_instance(5, 4, 3, InstanceKind::Joint);
        assert_eq!((j.nx(), j.ny()), (4, 3));
    }
}
