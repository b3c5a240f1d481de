//! Estimation-theoretic consequences of the information measures: bounds on
//! event probabilities under a joint versus under independence, expected
//! generalization error, composite hypothesis testing, a transportation-cost
//! inequality, the Fano family of guessing-error bounds with an exact MAP
//! oracle, a generalized Fano method for minimax risk, and Bayesian-risk
//! lower bounds with closed forms for the Bernoulli-bias estimation problem.
//!
//! All probability-valued bounds are clamped to `[0, 1]` on output; the raw
//! formula value is retained in a diagnostics field because the formulas can
//! exceed 1 (or drop below 0) in vacuous regimes, and tests want to see the
//! unclamped number. Every argmax/MAP tie is broken to the lowest index so
//! that results are deterministic.

use crate::alpha::AlphaOrder;
use crate::error::Error;
use crate::logdomain::log_sum_exp;
use crate::prob::{Channel, JointPMF, JointTensor, ProbVector};
use crate::renyi;
use crate::sibson::{self, ConditionalVariant};
use crate::Result;
use statrs::function::gamma::ln_gamma;

/// A measurable event `E ⊆ X × Y`, stored as its indicator.
#[derive(Debug, Clone)]
pub struct EventMask {
    mask: Vec<Vec<bool>>,
}

impl EventMask {
    pub fn new(mask: Vec<Vec<bool>>) -> Self {
        assert!(!mask.is_empty() && mask.iter().all(|r| r.len() == mask[0].len()));
        EventMask { mask }
    }

    /// The diagonal event `{(x, y): x = y}` on an `n × n` alphabet.
    pub fn diagonal(n: usize) -> Self {
        EventMask::new((0..n).map(|x| (0..n).map(|y| x == y).collect()).collect())
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.mask[x][y]
    }

    /// The section `E_y = {x : (x, y) ∈ E}`.
    pub fn section(&self, y: usize) -> Vec<usize> {
        (0..self.mask.len()).filter(|&x| self.mask[x][y]).collect()
    }
}

/// A measurable event `E ⊆ X × Y × Z`, stored as its indicator.
#[derive(Debug, Clone)]
pub struct ConditionalEventMask {
    mask: Vec<Vec<Vec<bool>>>,
}

impl ConditionalEventMask {
    pub fn new(mask: Vec<Vec<Vec<bool>>>) -> Self {
        assert!(!mask.is_empty());
        ConditionalEventMask { mask }
    }

    pub fn contains(&self, x: usize, y: usize, z: usize) -> bool {
        self.mask[x][y][z]
    }
}

/// A bound value clamped to `[0, 1]` with the raw formula value retained.
#[derive(Debug, Clone, Copy)]
pub struct BoundValue {
    /// The clamped, usable bound.
    pub value: f64,
    /// The unclamped formula value (diagnostic; may lie outside `[0, 1]`).
    pub raw: f64,
}

impl BoundValue {
    fn clamped(raw: f64) -> Self {
        BoundValue {
            value: raw.clamp(0.0, 1.0),
            raw,
        }
    }
}

/// `(α−1)/α`, the exponent rate shared by most bounds in this module; 0 at
/// the Shannon order and 1 at α = ∞.
fn rate_coefficient(alpha: AlphaOrder) -> f64 {
    match alpha {
        AlphaOrder::One => 0.0,
        AlphaOrder::Infinity => 1.0,
        AlphaOrder::Finite(a) => (a - 1.0) / a,
        AlphaOrder::Zero => panic!("bounds are not defined at alpha = 0"),
    }
}

// ---------------------------------------------------------------------------
// Dependence vs independence
// ---------------------------------------------------------------------------

/// Upper bound on an event probability under the joint in terms of the
/// worst-case section probability under the marginal:
/// `P_XY(E) ≤ max_y P_X(E_y)^{(α−1)/α} · exp((α−1)/α · I_α)` for α > 1, with
/// the α = ∞ form `P_XY(E) ≤ max_y P_X(E_y) · exp(ML)`. Returns
/// `(lhs, rhs)`; the max ranges over outputs in the support of `P_Y`.
pub fn dependence_bound(joint: &JointPMF, event: &EventMask, alpha: AlphaOrder) -> (f64, f64) {
    assert!(alpha.value() > 1.0, "requires alpha > 1");
    let (nx, ny) = (joint.nx(), joint.ny());
    let px = joint.x_marginal();
    let py = joint.y_marginal();
    let lhs: f64 = (0..nx)
        .flat_map(|x| (0..ny).map(move |y| (x, y)))
        .filter(|&(x, y)| event.contains(x, y))
        .map(|(x, y)| joint.cell(x, y))
        .sum();
    let worst = (0..ny)
        .filter(|&y| py[y] > 0.0)
        .map(|y| event.section(y).iter().map(|&x| px[x]).sum::<f64>())
        .fold(0.0f64, f64::max);
    let info = sibson::sibson_mi(joint, alpha).value;
    let r = rate_coefficient(alpha);
    let rhs = worst.powf(r) * (r * info).exp();
    (lhs, rhs)
}

/// The function form of the dependence bound, for nonnegative `f` indexed
/// `(x, y)`:
/// `E_PXY[f] ≤ max_y E_PX[f(·,y)^β]^{1/β} · exp((α−1)/α · I_α)`, β = α/(α−1);
/// at α = ∞ the inner norm degenerates to a plain expectation.
pub fn dependence_bound_fn(joint: &JointPMF, f: &[Vec<f64>], alpha: AlphaOrder) -> (f64, f64) {
    assert!(alpha.value() > 1.0, "requires alpha > 1");
    let (nx, ny) = (joint.nx(), joint.ny());
    assert!(f.len() == nx && f.iter().all(|r| r.len() == ny));
    assert!(f.iter().flatten().all(|&v| v >= 0.0), "f must be nonnegative");
    let px = joint.x_marginal();
    let py = joint.y_marginal();
    let lhs: f64 = (0..nx)
        .map(|x| (0..ny).map(|y| joint.cell(x, y) * f[x][y]).sum::<f64>())
        .sum();
    let norm_at = |y: usize| -> f64 {
        match alpha {
            AlphaOrder::Infinity => (0..nx).map(|x| px[x] * f[x][y]).sum(),
            AlphaOrder::Finite(a) => {
                let beta = a / (a - 1.0);
                (0..nx)
                    .map(|x| px[x] * f[x][y].powf(beta))
                    .sum::<f64>()
                    .powf(1.0 / beta)
            }
            _ => unreachable!(),
        }
    };
    let worst = (0..ny)
        .filter(|&y| py[y] > 0.0)
        .map(norm_at)
        .fold(0.0f64, f64::max);
    let info = sibson::sibson_mi(joint, alpha).value;
    let rhs = worst * (rate_coefficient(alpha) * info).exp();
    (lhs, rhs)
}

/// Reversed-direction bound for orders below 1 and strictly positive `f`:
/// `E_PXY[f] ≥ min_y E_PX[f(·,y)^β]^{1/β} · exp((α−1)/α · I_α)` with the
/// negative exponent β = α/(α−1) < 0. Indicators are rejected: a zero of `f`
/// on the support makes the norm degenerate instead of bounding anything.
pub fn dependence_lower_bound(
    joint: &JointPMF,
    f: &[Vec<f64>],
    alpha: f64,
) -> Result<(f64, f64)> {
    assert!(alpha > 0.0 && alpha < 1.0, "requires alpha in (0,1)");
    let (nx, ny) = (joint.nx(), joint.ny());
    assert!(f.len() == nx && f.iter().all(|r| r.len() == ny));
    if f.iter().flatten().any(|&v| v <= 0.0) {
        return Err(Error::NonpositiveFunction);
    }
    let px = joint.x_marginal();
    let py = joint.y_marginal();
    let lhs: f64 = (0..nx)
        .map(|x| (0..ny).map(|y| joint.cell(x, y) * f[x][y]).sum::<f64>())
        .sum();
    let beta = alpha / (alpha - 1.0);
    let norm_at = |y: usize| -> f64 {
        (0..nx)
            .map(|x| px[x] * f[x][y].powf(beta))
            .sum::<f64>()
            .powf(1.0 / beta)
    };
    let best = (0..ny)
        .filter(|&y| py[y] > 0.0)
        .map(norm_at)
        .fold(f64::INFINITY, f64::min);
    let info = sibson::sibson_mi(joint, AlphaOrder::new(alpha)).value;
    let rhs = best * ((alpha - 1.0) / alpha * info).exp();
    Ok((lhs, rhs))
}

/// Constructs the input distribution and event that meet the α = ∞
/// dependence bound with equality on an arbitrary channel: pick
/// `g(y) = argmax_x W(y|x)` (lowest index on ties), take `P_X` uniform on the
/// image of `g` and `E = {(x, y): x = g(y)}`. Then every section has mass
/// `1/|image|` and `P_XY(E) = (1/|image|) Σ_y max_x W(y|x)` exactly.
pub fn shattering_witness(channel: &Channel) -> (ProbVector, EventMask) {
    let nx = channel.input_size();
    let ny = channel.output_size();
    let g: Vec<usize> = (0..ny)
        .map(|y| {
            let mut best = 0usize;
            for x in 1..nx {
                if channel.prob(x, y) > channel.prob(best, y) {
                    best = x;
                }
            }
            best
        })
        .collect();
    let mut image: Vec<usize> = g.clone();
    image.sort_unstable();
    image.dedup();
    let mut px = vec![0.0; nx];
    for &x in &image {
        px[x] = 1.0 / image.len() as f64;
    }
    let mask = (0..nx)
        .map(|x| (0..ny).map(|y| g[y] == x).collect())
        .collect();
    (ProbVector::from_normalized(px), EventMask::new(mask))
}

// ---------------------------------------------------------------------------
// Generalization error and hypothesis testing
// ---------------------------------------------------------------------------

/// Upper bound on the probability of a generalization gap exceeding `η` for
/// an algorithm whose output leaks `info = I_α(Zⁿ, A(Zⁿ))` about `n`
/// training samples: `2^{(α−1)/α} exp(−n(α−1)/α · (2η² − info/n))` for
/// finite orders and `2·exp(−n(2η² − info/n))` at α = ∞ (which recovers
/// McDiarmid's inequality at `info = 0`).
pub fn gen_error_bound(n: usize, eta: f64, info: f64, alpha: AlphaOrder) -> BoundValue {
    assert!(n >= 1 && eta > 0.0 && info >= 0.0);
    let n = n as f64;
    let raw = match alpha {
        AlphaOrder::Infinity => 2.0 * (-n * (2.0 * eta * eta - info / n)).exp(),
        _ => {
            let r = rate_coefficient(alpha);
            2.0f64.powf(r) * (-n * r * (2.0 * eta * eta - info / n)).exp()
        }
    };
    BoundValue::clamped(raw)
}

/// Composite independence testing: if every independent alternative is
/// accepted with probability at most `e^{−nR}`, the null's acceptance
/// probability obeys `1 − p¹_n ≤ exp(−(α−1)/α · n·(R − I_α))` for α ≥ 1.
pub fn hypothesis_testing_bound(n: usize, rate: f64, info: f64, alpha: AlphaOrder) -> BoundValue {
    assert!(n >= 1 && rate > 0.0 && info >= 0.0);
    assert!(alpha.value() >= 1.0, "requires alpha >= 1");
    let raw = (-rate_coefficient(alpha) * n as f64 * (rate - info)).exp();
    BoundValue::clamped(raw)
}

// ---------------------------------------------------------------------------
// Transportation-cost inequality
// ---------------------------------------------------------------------------

/// Result of a transportation-cost check: whether the strengthened
/// sub-Gaussianity condition held on the κ-grid, and the slack of the
/// conclusion it licenses.
#[derive(Debug, Clone, Copy)]
pub struct TpcReport {
    /// The condition held for every `y` in the support and every grid κ.
    pub condition_ok: bool,
    /// `√(2c·I_α/α) − (E_PXY[f] − E_{P_X P_Y}[f])`; nonnegative whenever the
    /// condition holds.
    pub gap: f64,
}

/// Verifies, for α ∈ (0,1), the strengthened sub-Gaussianity condition
/// `log E_PX[e^{κ f(·,y)}] ≤ κ²c/2 − Ent_φ^{P_XY}(e^{(α−1)κf})` for every
/// output `y` in the support and every κ on the grid, and reports the slack
/// of the transportation-cost conclusion
/// `E_PXY[f] − E_{P_X P_Y}[f] ≤ √(2c·I_α/α)`.
///
/// The grid check is a necessary-condition filter, not a proof over all κ;
/// [`default_kappa_grid`] gives the standard 101 points on `[−10, 10]` and
/// [`tpc_bounded_constant`] the sufficient constant `c = M²(2−α)` for
/// functions bounded by `M`.
pub fn tpc_check(
    joint: &JointPMF,
    f: &[Vec<f64>],
    alpha: f64,
    c: f64,
    kappa_grid: &[f64],
) -> TpcReport {
    assert!(alpha > 0.0 && alpha < 1.0, "requires alpha in (0,1)");
    assert!(c > 0.0 && !kappa_grid.is_empty());
    let (nx, ny) = (joint.nx(), joint.ny());
    assert!(f.len() == nx && f.iter().all(|r| r.len() == ny));
    let px = joint.x_marginal();
    let py = joint.y_marginal();
    let joint_weights = ProbVector::from_normalized(
        joint.cells().iter().flatten().copied().collect(),
    );

    let mut condition_ok = true;
    'outer: for &kappa in kappa_grid {
        // φ-entropy of e^{(α−1)κ f} under the joint is shared across y.
        let values: Vec<f64> = (0..nx)
            .flat_map(|x| (0..ny).map(move |y| ((alpha - 1.0) * kappa * f[x][y]).exp()))
            .collect();
        let ent = renyi::phi_entropy(&values, &joint_weights, alpha);
        for y in 0..ny {
            if py[y] == 0.0 {
                continue;
            }
            let terms: Vec<f64> = (0..nx)
                .filter(|&x| px[x] > 0.0)
                .map(|x| px[x].ln() + kappa * f[x][y])
                .collect();
            let cgf = log_sum_exp(&terms);
            if cgf > kappa * kappa * c / 2.0 - ent + 1e-12 {
                condition_ok = false;
                break 'outer;
            }
        }
    }

    let mean_joint: f64 = (0..nx)
        .map(|x| (0..ny).map(|y| joint.cell(x, y) * f[x][y]).sum::<f64>())
        .sum();
    let mean_product: f64 = (0..nx)
        .map(|x| (0..ny).map(|y| px[x] * py[y] * f[x][y]).sum::<f64>())
        .sum();
    let info = sibson::sibson_mi(joint, AlphaOrder::new(alpha)).value;
    let gap = (2.0 * c * info / alpha).sqrt() - (mean_joint - mean_product);
    TpcReport { condition_ok, gap }
}

/// The sufficient transportation-cost constant `c = M²(2−α)` for functions
/// with `|f| ≤ M` and α ∈ (0,1).
pub fn tpc_bounded_constant(m: f64, alpha: f64) -> f64 {
    assert!(m > 0.0 && alpha > 0.0 && alpha < 1.0);
    m * m * (2.0 - alpha)
}

/// The default κ-grid for [`tpc_check`]: 101 equispaced points on `[−10, 10]`.
pub fn default_kappa_grid() -> Vec<f64> {
    (0..101).map(|i| -10.0 + 0.2 * i as f64).collect()
}

// ---------------------------------------------------------------------------
// Fano family
// ---------------------------------------------------------------------------

/// The exact MAP error `ε_{X|Y} = 1 − Σ_y max_x P_XY(x,y)` and the MAP rule
/// itself (lowest argmax per output) — the oracle every Fano-type bound is
/// tested against.
pub fn exact_map_error(joint: &JointPMF) -> (f64, Vec<usize>) {
    let (nx, ny) = (joint.nx(), joint.ny());
    let mut success = 0.0;
    let mut rule = Vec::with_capacity(ny);
    for y in 0..ny {
        let mut best = (0usize, joint.cell(0, y));
        for x in 1..nx {
            if joint.cell(x, y) > best.1 {
                best = (x, joint.cell(x, y));
            }
        }
        success += best.1;
        rule.push(best.0);
    }
    ((1.0 - success).max(0.0), rule)
}

/// Fano-type lower bound on the MAP error through the binary Rényi
/// divergence: `ε_{X|Y} ≥ d_α⁻¹(I_α(X,Y) ‖ 1 − p*)` with `p* = max_x P_X(x)`;
/// 0 by convention in the vacuous regime `I_α ≥ −log p*`.
pub fn fano_dalpha_bound(joint: &JointPMF, alpha: AlphaOrder) -> f64 {
    let p_star = joint.x_marginal().max_prob();
    let info = sibson::sibson_mi(joint, alpha).value;
    if info >= -p_star.ln() {
        return 0.0;
    }
    renyi::binary_d_alpha_inverse(info, 1.0 - p_star, alpha).unwrap_or(0.0)
}

/// Choice of the free parameter in [`fano_like_bound`].
#[derive(Debug, Clone, Copy)]
pub enum Gamma {
    Fixed(f64),
    /// Golden-section search over `log γ ∈ [−20, 20]` after grid bracketing.
    Optimize,
}

/// Output of [`fano_like_bound`].
#[derive(Debug, Clone, Copy)]
pub struct FanoLikeBound {
    /// Clamped upper bound on `P(X = X̂_MAP(Y))`.
    pub value: f64,
    /// Unclamped formula value at the selected γ.
    pub raw: f64,
    /// The γ that produced `value` (`∞` never; the limit lives in
    /// `corollary`).
    pub gamma: f64,
    /// The γ → ∞ limit `(p* e^{I_α})^{(α−1)/α}`, always ≥ the optimized
    /// bound.
    pub corollary: f64,
}

/// Parameterized upper bound on the MAP success probability for α > 1:
/// `P(X = X̂_MAP) ≤ [(p*(γ+1)^{α/(α−1)} + 1 − p*)^{(α−1)/α} e^{(α−1)/α·I_α} − 1]/γ`,
/// whose γ → ∞ limit is `(p* e^{I_α})^{(α−1)/α}`.
pub fn fano_like_bound(joint: &JointPMF, alpha: f64, gamma: Gamma) -> FanoLikeBound {
    assert!(alpha > 1.0, "requires alpha > 1");
    let p_star = joint.x_marginal().max_prob();
    let info = sibson::sibson_mi(joint, AlphaOrder::new(alpha)).value;
    let r = (alpha - 1.0) / alpha;
    let at = |g: f64| -> f64 {
        ((p_star * (g + 1.0).powf(alpha / (alpha - 1.0)) + 1.0 - p_star).powf(r)
            * (r * info).exp()
            - 1.0)
            / g
    };
    let corollary = (p_star * info.exp()).powf(r);
    let (g, raw) = match gamma {
        Gamma::Fixed(g) => {
            assert!(g > 0.0);
            (g, at(g))
        }
        Gamma::Optimize => {
            let (lo, hi) = (-20.0f64, 20.0f64);
            let grid_best = (0..64)
                .map(|i| lo + (hi - lo) * i as f64 / 63.0)
                .min_by(|&a, &b| at(a.exp()).partial_cmp(&at(b.exp())).unwrap())
                .unwrap();
            let span = (hi - lo) / 63.0;
            let (mut a, mut b) = ((grid_best - span).max(lo), (grid_best + span).min(hi));
            let phi = (5.0f64.sqrt() - 1.0) / 2.0;
            while b - a > 1e-10 {
                let c = b - phi * (b - a);
                let d = a + phi * (b - a);
                if at(c.exp()) < at(d.exp()) {
                    b = d;
                } else {
                    a = c;
                }
            }
            let g = (0.5 * (a + b)).exp();
            (g, at(g))
        }
    };
    FanoLikeBound {
        value: raw.clamp(0.0, 1.0),
        raw,
        gamma: g,
        corollary,
    }
}

/// Fano-type lower bound on the MAP error through the Arimoto measure:
/// `ε_{X|Y} ≥ 1 − exp(−(α−1)/α · (H_α(X) − I_α^A(X,Y)))` for
/// α ∈ (0,1) ∪ (1,∞), clamped to `[0, 1]`.
pub fn fano_arimoto_bound(joint: &JointPMF, alpha: f64) -> BoundValue {
    assert!(alpha > 0.0 && alpha != 1.0 && alpha.is_finite());
    let order = AlphaOrder::new(alpha);
    let h = renyi::renyi_entropy(&joint.x_marginal(), order);
    let info = sibson::arimoto_mi(joint, order);
    let raw = 1.0 - (-(alpha - 1.0) / alpha * (h - info)).exp();
    BoundValue::clamped(raw)
}

// ---------------------------------------------------------------------------
// Generalized Fano method
// ---------------------------------------------------------------------------

/// Minimax-risk lower bound from a packed hypothesis family: given models
/// `P_j` over the observation alphabet, a center `P*` certifying
/// `D_α(P_j‖P*) ≤ beta_bound` for all `j` (which caps `I_α(J,Y)` for every
/// prior), and a loss separation `γ` between distinct hypotheses, any
/// estimator's worst-case risk is at least
/// `(γ/2)·(1 − (max_j prior(j)·e^{min(I_α, β)})^{(α−1)/α})` for α > 1, using
/// the exact `I_α` of the induced prior-model joint.
pub fn generalized_fano(
    models: &[ProbVector],
    center: &ProbVector,
    beta_bound: f64,
    gamma: f64,
    prior: &ProbVector,
    alpha: AlphaOrder,
) -> Result<BoundValue> {
    assert!(alpha.value() > 1.0, "requires alpha > 1");
    assert!(gamma > 0.0 && !models.is_empty() && prior.len() == models.len());
    for (j, model) in models.iter().enumerate() {
        let d = renyi::renyi_divergence(model, center, alpha);
        if d > beta_bound + 1e-12 {
            return Err(Error::CenterViolation {
                index: j,
                divergence: d,
                bound: beta_bound,
            });
        }
    }
    let channel = Channel::from_rows(models.to_vec())?;
    let joint = JointPMF::from_channel(prior, &channel);
    let info = sibson::sibson_mi(&joint, alpha).value.min(beta_bound);
    let r = rate_coefficient(alpha);
    let raw = gamma / 2.0 * (1.0 - (prior.max_prob() * info.exp()).powf(r));
    Ok(BoundValue {
        value: raw.max(0.0),
        raw,
    })
}

// ---------------------------------------------------------------------------
// Bayesian risk
// ---------------------------------------------------------------------------

/// A Bayesian estimation problem reduced to the two curves the risk bound
/// needs: the small-ball probability of the prior under the loss, and the
/// information curve of the observation channel.
pub struct BayesRiskProblem<'a> {
    /// `L_W(ρ) = sup_ŵ P_W(ℓ(W, ŵ) < ρ)`, nondecreasing with values in
    /// `[0, 1]`.
    pub small_ball: &'a dyn Fn(f64) -> f64,
    /// `α ↦ I_α(W, X)`; evaluated at the grid orders (use
    /// `f64::INFINITY` for the maximal-leakage entry).
    pub info: &'a dyn Fn(f64) -> f64,
    /// Candidate radii ρ > 0.
    pub rho_grid: Vec<f64>,
    /// Candidate orders α > 1.
    pub alpha_grid: Vec<f64>,
}

/// Lower bound on the Bayesian risk:
/// `R_B ≥ ρ·(1 − exp((α−1)/α·(I_α + log L_W(ρ))))` for every ρ > 0 and
/// α > 1, maximized over the problem's (ρ, α) grid with golden-section
/// refinement in `log ρ`. Returns `(bound, best_rho, best_alpha)`.
pub fn bayes_risk_lower_bound(problem: &BayesRiskProblem) -> (f64, f64, f64) {
    assert!(!problem.rho_grid.is_empty() && !problem.alpha_grid.is_empty());
    let objective = |rho: f64, alpha: f64, info: f64| -> f64 {
        let l = (problem.small_ball)(rho);
        debug_assert!((0.0..=1.0 + 1e-12).contains(&l));
        let r = rate_coefficient(AlphaOrder::new(alpha));
        let factor = if l == 0.0 {
            0.0
        } else {
            (r * (info + l.ln())).exp()
        };
        rho * (1.0 - factor)
    };
    let mut best = (0.0f64, problem.rho_grid[0], problem.alpha_grid[0]);
    for &alpha in &problem.alpha_grid {
        assert!(alpha > 1.0);
        let info = (problem.info)(alpha);
        let mut grid_best = (f64::NEG_INFINITY, problem.rho_grid[0]);
        for &rho in &problem.rho_grid {
            assert!(rho > 0.0);
            let v = objective(rho, alpha, info);
            if v > grid_best.0 {
                grid_best = (v, rho);
            }
        }
        // Golden-section refinement in log ρ around the best grid point.
        let span = 2.0f64.ln();
        let (mut a, mut b) = (grid_best.1.ln() - span, grid_best.1.ln() + span);
        let phi = (5.0f64.sqrt() - 1.0) / 2.0;
        while b - a > 1e-10 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            if objective(c.exp(), alpha, info) > objective(d.exp(), alpha, info) {
                b = d;
            } else {
                a = c;
            }
        }
        let rho = (0.5 * (a + b)).exp();
        let v = objective(rho, alpha, info).max(grid_best.0);
        let rho = if v > grid_best.0 { rho } else { grid_best.1 };
        if v > best.0 {
            best = (v, rho, alpha);
        }
    }
    (best.0.max(0.0), best.1, best.2)
}

/// Closed form for the Bernoulli-bias estimation problem (uniform prior on
/// the bias, `n` conditionally independent coin flips):
/// `exp((α−1)/α · I_α(W, Xⁿ)) = Σ_k C(n,k)·(Γ(kα+1)Γ((n−k)α+1)/Γ(nα+2))^{1/α}`,
/// evaluated entirely through log-Gamma and log-sum-exp.
pub fn bernoulli_bias_info(n: usize, alpha: f64) -> f64 {
    assert!(n >= 1 && alpha > 1.0);
    let n_f = n as f64;
    let terms: Vec<f64> = (0..=n)
        .map(|k| {
            let k_f = k as f64;
            let log_binom =
                ln_gamma(n_f + 1.0) - ln_gamma(k_f + 1.0) - ln_gamma(n_f - k_f + 1.0);
            log_binom
                + (ln_gamma(k_f * alpha + 1.0) + ln_gamma((n_f - k_f) * alpha + 1.0)
                    - ln_gamma(n_f * alpha + 2.0))
                    / alpha
        })
        .collect();
    log_sum_exp(&terms).exp()
}

/// The maximal-leakage analog of [`bernoulli_bias_info`]:
/// `ML(W → Xⁿ) = log Σ_k C(n,k)·(k/n)^k (1−k/n)^{n−k}` (with `0⁰ = 1`),
/// which is at most `log(2 + √(πn/2))`.
pub fn bernoulli_bias_leakage(n: usize) -> f64 {
    assert!(n >= 1);
    let n_f = n as f64;
    let terms: Vec<f64> = (0..=n)
        .map(|k| {
            let k_f = k as f64;
            let log_binom =
                ln_gamma(n_f + 1.0) - ln_gamma(k_f + 1.0) - ln_gamma(n_f - k_f + 1.0);
            let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
            log_binom + xlnx(k_f) + xlnx(n_f - k_f) - xlnx(n_f)
        })
        .collect();
    log_sum_exp(&terms)
}

/// The two ends of the Bernoulli-bias risk sandwich: the analytically
/// optimized maximal-leakage lower bound `1/(8(2+√(πn/2)))` and the
/// sample-mean upper bound `1/√(6n)`.
pub fn bernoulli_bias_risk_bounds(n: usize) -> (f64, f64) {
    assert!(n >= 1);
    let n_f = n as f64;
    let ml_lower = 1.0 / (8.0 * (2.0 + (std::f64::consts::PI * n_f / 2.0).sqrt()));
    let mi_upper = 1.0 / (6.0 * n_f).sqrt();
    (ml_lower, mi_upper)
}

// ---------------------------------------------------------------------------
// Conditional dependence bound
// ---------------------------------------------------------------------------

/// Conditional analog of [`dependence_bound`] under a rank-3 joint:
/// `P_XYZ(E) ≤ E_PZ[max_{y: P_{Y|Z}(y|z)>0} P_{X|Z}(E_{y,z})]^{(α−1)/α}
/// · exp((α−1)/α · I_α^{Y|Z})` for α > 1, with the plain-expectation α = ∞
/// form. With constant `Z` this reduces exactly to the unconditional bound.
pub fn conditional_dependence_bound(
    triple: &JointTensor,
    event: &ConditionalEventMask,
    alpha: AlphaOrder,
) -> (f64, f64) {
    assert!(alpha.value() > 1.0, "requires alpha > 1");
    let (nx, ny, nz) = (triple.nx(), triple.ny(), triple.nz());
    let pz = triple.z_marginal();
    let lhs: f64 = (0..nx)
        .flat_map(|x| (0..ny).flat_map(move |y| (0..nz).map(move |z| (x, y, z))))
        .filter(|&(x, y, z)| event.contains(x, y, z))
        .map(|(x, y, z)| triple.cell(x, y, z))
        .sum();
    let mut expectation = 0.0;
    for z in 0..nz {
        if pz[z] == 0.0 {
            continue;
        }
        let slice = triple.xy_given_z(z).expect("positive z mass");
        let px_z = slice.x_marginal();
        let py_z = slice.y_marginal();
        let worst = (0..ny)
            .filter(|&y| py_z[y] > 0.0)
            .map(|y| {
                (0..nx)
                    .filter(|&x| event.contains(x, y, z))
                    .map(|x| px_z[x])
                    .sum::<f64>()
            })
            .fold(0.0f64, f64::max);
        expectation += pz[z] * worst;
    }
    let (info, _) = sibson::conditional_sibson_mi(triple, alpha, ConditionalVariant::MinOverQYgZ);
    let r = rate_coefficient(alpha);
    let rhs = expectation.powf(r) * (r * info).exp();
    (lhs, rhs)
}
