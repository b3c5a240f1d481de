//! Seeded property suites over random instances: the axiomatic and
//! structural facts the measures must satisfy (non-negativity, independence
//! characterization, monotonicity and concavity in the order, additivity,
//! data processing, boundedness, optimizer certificates), plus the
//! tensorization inequality and the cross-measure orderings. The CLI `check`
//! subcommands and the acceptance suite both run these, so violations are
//! counted and reported rather than panicking.

use crate::alpha::AlphaOrder;
use crate::prob::{
    sample_channel, sample_joint, sample_prob_vector, seeded_rng, Channel, JointPMF, ProbVector,
};
use crate::renyi;
use crate::sibson;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Outcome of one property checked over many random instances.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: &'static str,
    pub instances: usize,
    pub violations: usize,
    /// The smallest slack seen (inequality margin after tolerance); negative
    /// exactly when `violations > 0`.
    pub worst_slack: f64,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Accumulates `slack ≥ 0` checks into a report.
struct Prop {
    name: &'static str,
    instances: usize,
    violations: usize,
    worst_slack: f64,
}

impl Prop {
    fn new(name: &'static str) -> Self {
        Prop {
            name,
            instances: 0,
            violations: 0,
            worst_slack: f64::INFINITY,
        }
    }

    fn check(&mut self, slack: f64) {
        self.instances += 1;
        if slack < 0.0 || slack.is_nan() {
            self.violations += 1;
        }
        if slack < self.worst_slack {
            self.worst_slack = slack;
        }
    }

    fn report(self) -> PropertyReport {
        PropertyReport {
            name: self.name,
            instances: self.instances,
            violations: self.violations,
            worst_slack: self.worst_slack,
        }
    }
}

fn finite_orders(rng: &mut ChaCha8Rng) -> f64 {
    const PALETTE: [f64; 7] = [0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 5.0];
    PALETTE[rng.gen_range(0..PALETTE.len())]
}

fn small_joint(rng: &mut ChaCha8Rng) -> JointPMF {
    let nx = rng.gen_range(2..=5);
    let ny = rng.gen_range(2..=5);
    sample_joint(rng, nx, ny)
}

/// The core axiomatic suite; every property is exercised on `instances`
/// independent random instances drawn from the seed.
pub fn property_suite(seed: u64, instances: usize) -> Vec<PropertyReport> {
    let mut out = Vec::new();

    // Non-negativity at finite orders and both limits.
    let mut p = Prop::new("nonnegativity");
    let mut rng = seeded_rng(seed);
    for _ in 0..instances {
        let j = small_joint(&mut rng);
        let al = match rng.gen_range(0..3) {
            0 => AlphaOrder::new(finite_orders(&mut rng)),
            1 => AlphaOrder::Zero,
            _ => AlphaOrder::Infinity,
        };
        p.check(sibson::sibson_mi(&j, al).value + 1e-12);
    }
    out.push(p.report());

    // Zero iff independence (threshold 1e-9 on the value): product joints
    // evaluate to ~0, visibly dependent joints do not.
    let mut p = Prop::new("zero_iff_independence");
    let mut rng = seeded_rng(seed ^ 0x1);
    for _ in 0..instances {
        let al = AlphaOrder::new(finite_orders(&mut rng));
        if rng.gen_bool(0.5) {
            let kx = rng.gen_range(2..=4);
            let ky = rng.gen_range(2..=4);
            let px = sample_prob_vector(&mut rng, kx);
            let py = sample_prob_vector(&mut rng, ky);
            let j = JointPMF::product(&px, &py);
            p.check(1e-9 - sibson::sibson_mi(&j, al).value);
        } else {
            // Correlated pair with total variation from independence >= 0.05.
            let j = loop {
                let cand = small_joint(&mut rng);
                let prod = JointPMF::product(&cand.x_marginal(), &cand.y_marginal());
                let tv: f64 = cand
                    .cells()
                    .iter()
                    .flatten()
                    .zip(prod.cells().iter().flatten())
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>()
                    / 2.0;
                if tv >= 0.05 {
                    break cand;
                }
            };
            p.check(sibson::sibson_mi(&j, al).value - 1e-9);
        }
    }
    out.push(p.report());

    // Nondecreasing in the order, up to the alpha = infinity cap.
    let mut p = Prop::new("alpha_monotonicity");
    let mut rng = seeded_rng(seed ^ 0x2);
    for _ in 0..instances {
        let j = small_joint(&mut rng);
        let mut orders = [
            finite_orders(&mut rng),
            finite_orders(&mut rng),
            finite_orders(&mut rng),
        ];
        orders.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let vals: Vec<f64> = orders
            .iter()
            .map(|&a| sibson::sibson_mi(&j, AlphaOrder::new(a)).value)
            .collect();
        let cap = sibson::sibson_mi(&j, AlphaOrder::Infinity).value;
        let mut slack = cap - vals[2] + 1e-10;
        for w in vals.windows(2) {
            slack = slack.min(w[1] - w[0] + 1e-10);
        }
        p.check(slack);
    }
    out.push(p.report());

    // Additivity over independent pairs.
    let mut p = Prop::new("additivity");
    let mut rng = seeded_rng(seed ^ 0x3);
    for _ in 0..instances {
        let j1 = sample_joint(&mut rng, 2, 3);
        let j2 = sample_joint(&mut rng, 3, 2);
        let al = AlphaOrder::new(finite_orders(&mut rng));
        let sum = sibson::sibson_mi(&j1, al).value + sibson::sibson_mi(&j2, al).value;
        let joint = sibson::sibson_mi(&j1.tensor(&j2), al).value;
        p.check(1e-9 - (sum - joint).abs());
    }
    out.push(p.report());

    // Data processing along Markov chains X - Y - Z.
    let mut p = Prop::new("data_processing");
    let mut rng = seeded_rng(seed ^ 0x4);
    for _ in 0..instances {
        let (nx, ny, nz) = (
            rng.gen_range(2..=4),
            rng.gen_range(2..=4),
            rng.gen_range(2..=4),
        );
        let px = sample_prob_vector(&mut rng, nx);
        let w1 = sample_channel(&mut rng, nx, ny);
        let w2 = sample_channel(&mut rng, ny, nz);
        let al = AlphaOrder::new(finite_orders(&mut rng));
        let jxy = JointPMF::from_channel(&px, &w1);
        let py = jxy.y_marginal();
        let jyz = JointPMF::from_channel(&py, &w2);
        // Composite channel X -> Z.
        let comp = Channel::new(
            &(0..nx)
                .map(|x| {
                    (0..nz)
                        .map(|z| (0..ny).map(|y| w1.prob(x, y) * w2.prob(y, z)).sum())
                        .collect()
                })
                .collect::<Vec<_>>(),
            1e-9,
        )
        .unwrap();
        let jxz = JointPMF::from_channel(&px, &comp);
        let end = sibson::sibson_mi(&jxz, al).value;
        let through = sibson::sibson_mi(&jxy, al)
            .value
            .min(sibson::sibson_mi(&jyz, al).value);
        p.check(through - end + 1e-10);
    }
    out.push(p.report());

    // Independence DPI: I_alpha(X,(Y,Z)) <= I_alpha((X,Z),Y) for X and Z
    // independent inputs to a shared coupling.
    let mut p = Prop::new("independence_dpi");
    let mut rng = seeded_rng(seed ^ 0x5);
    for _ in 0..instances {
        let (nx, nz, ny) = (2usize, 2usize, rng.gen_range(2..=3));
        let px = sample_prob_vector(&mut rng, nx);
        let pz = sample_prob_vector(&mut rng, nz);
        let coupling = sample_channel(&mut rng, nx * nz, ny);
        let al = finite_orders(&mut rng);
        let (lhs, rhs) = sibson::independence_dpi_check(&px, &pz, &coupling, al);
        p.check(rhs - lhs + 1e-10);
    }
    out.push(p.report());

    // Invariance under relabeling of either alphabet.
    let mut p = Prop::new("permutation_invariance");
    let mut rng = seeded_rng(seed ^ 0x6);
    for _ in 0..instances {
        let j = small_joint(&mut rng);
        let (nx, ny) = (j.nx(), j.ny());
        let mut rx: Vec<usize> = (0..nx).collect();
        let mut ry: Vec<usize> = (0..ny).collect();
        for i in (1..nx).rev() {
            rx.swap(i, rng.gen_range(0..=i));
        }
        for i in (1..ny).rev() {
            ry.swap(i, rng.gen_range(0..=i));
        }
        let permuted = JointPMF::new(
            &(0..nx)
                .map(|x| (0..ny).map(|y| j.cell(rx[x], ry[y])).collect())
                .collect::<Vec<_>>(),
            1e-9,
        )
        .unwrap();
        let al = AlphaOrder::new(finite_orders(&mut rng));
        let diff = (sibson::sibson_mi(&j, al).value - sibson::sibson_mi(&permuted, al).value).abs();
        p.check(1e-10 - diff);
    }
    out.push(p.report());

    // Boundedness by the conjugate-order entropies of either side.
    let mut p = Prop::new("entropy_bound");
    let mut rng = seeded_rng(seed ^ 0x7);
    for _ in 0..instances {
        let j = small_joint(&mut rng);
        let al = finite_orders(&mut rng);
        let v = sibson::sibson_mi(&j, AlphaOrder::new(al)).value;
        let conj = AlphaOrder::new(1.0 / al);
        let cap = renyi::renyi_entropy(&j.x_marginal(), conj)
            .min(renyi::renyi_entropy(&j.y_marginal(), conj));
        p.check(cap - v + 1e-10);
    }
    out.push(p.report());

    // The reported optimizer is optimal: random simplex perturbations of
    // q_star never beat it.
    let mut p = Prop::new("q_star_optimality");
    let mut rng = seeded_rng(seed ^ 0x8);
    for _ in 0..instances {
        let j = small_joint(&mut rng);
        let al = AlphaOrder::new(finite_orders(&mut rng));
        let r = sibson::sibson_mi(&j, al);
        let mut slack = f64::INFINITY;
        for _ in 0..20 {
            let noise = sample_prob_vector(&mut rng, j.ny());
            let t: f64 = rng.gen_range(0.01..0.5);
            let mixed = ProbVector::from_normalized(
                (0..j.ny())
                    .map(|y| (1.0 - t) * r.q_star[y] + t * noise[y])
                    .collect(),
            );
            slack = slack.min(sibson::sibson_objective(&j, &mixed, al) - r.value + 1e-12);
        }
        p.check(slack);
    }
    out.push(p.report());

    // Concavity of (1 - alpha) * I_alpha in the order: nonpositive second
    // differences along a grid.
    let mut p = Prop::new("order_concavity");
    let mut rng = seeded_rng(seed ^ 0x9);
    for _ in 0..instances {
        let j = small_joint(&mut rng);
        let lo = rng.gen_range(0.2..0.8);
        let step = rng.gen_range(0.1..0.5);
        let g: Vec<f64> = (0..5)
            .map(|i| {
                let a = lo + step * i as f64;
                (1.0 - a) * sibson::sibson_mi(&j, AlphaOrder::new(a)).value
            })
            .collect();
        let mut slack = f64::INFINITY;
        for w in g.windows(3) {
            slack = slack.min(1e-8 - (w[0] - 2.0 * w[1] + w[2]));
        }
        p.check(slack);
    }
    out.push(p.report());

    out
}

/// Tensorization of the measure over banks of conditionally independent
/// channels, with random Hölder weights.
pub fn tensorization_suite(seed: u64, instances: usize) -> Vec<PropertyReport> {
    let mut p = Prop::new("tensorization");
    let mut rng = seeded_rng(seed ^ 0x10);
    for _ in 0..instances {
        let n = rng.gen_range(2..=3);
        let nx = rng.gen_range(2..=3);
        let prior = sample_prob_vector(&mut rng, nx);
        let channels: Vec<Channel> = (0..n)
            .map(|_| {
                let ny = rng.gen_range(2..=3);
                sample_channel(&mut rng, nx, ny)
            })
            .collect();
        // Positive weights w_i induce valid Hölder exponents beta_i = S/w_i.
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let s: f64 = w.iter().sum();
        let betas: Vec<f64> = w.iter().map(|&v| s / v).collect();
        let alpha = 1.0 + rng.gen_range(0.1..4.0);
        let (lhs, rhs) = sibson::tensorization_check(&channels, &prior, alpha, &betas).unwrap();
        p.check(rhs - lhs + 1e-9);
    }
    vec![p.report()]
}

/// Cross-measure orderings: Csiszár versus Sibson on both sides of α = 1,
/// the Lapidoth-Pfister minimization never exceeding Sibson, and the
/// Arimoto equality at uniform inputs.
pub fn ordering_suite(seed: u64, instances: usize) -> Vec<PropertyReport> {
    let mut out = Vec::new();

    let mut p = Prop::new("csiszar_vs_sibson");
    let mut rng = seeded_rng(seed ^ 0x20);
    for _ in 0..instances {
        let kx = rng.gen_range(2..=3);
        let ky = rng.gen_range(2..=3);
        let j = sample_joint(&mut rng, kx, ky);
        let above = rng.gen_bool(0.5);
        let al = if above {
            1.0 + rng.gen_range(0.2..4.0)
        } else {
            rng.gen_range(0.2..0.9)
        };
        let s = sibson::sibson_mi(&j, AlphaOrder::new(al)).value;
        let c = sibson::csiszar_mi(&j, AlphaOrder::new(al), 1e-11).unwrap();
        // Csiszár sits below Sibson for alpha > 1 and above it for alpha < 1.
        let slack = if above { s - c } else { c - s };
        p.check(slack + 1e-7);
    }
    out.push(p.report());

    let mut p = Prop::new("lapidoth_pfister_vs_sibson");
    let mut rng = seeded_rng(seed ^ 0x21);
    for _ in 0..instances {
        let kx = rng.gen_range(2..=3);
        let ky = rng.gen_range(2..=3);
        let j = sample_joint(&mut rng, kx, ky);
        let al = 1.0 + rng.gen_range(0.2..3.0);
        let s = sibson::sibson_mi(&j, AlphaOrder::new(al)).value;
        let lp = sibson::lapidoth_pfister_mi(&j, AlphaOrder::new(al), 4, 1e-11).unwrap();
        p.check(s - lp + 1e-7);
    }
    out.push(p.report());

    let mut p = Prop::new("arimoto_uniform_equality");
    let mut rng = seeded_rng(seed ^ 0x22);
    for _ in 0..instances {
        let nx = rng.gen_range(2..=4);
        let ny = rng.gen_range(2..=4);
        let ch = sample_channel(&mut rng, nx, ny);
        let j = JointPMF::from_channel(&ProbVector::uniform(nx), &ch);
        let al = AlphaOrder::new(finite_orders(&mut rng));
        let diff = (sibson::arimoto_mi(&j, al) - sibson::sibson_mi(&j, al).value).abs();
        p.check(1e-9 - diff);
    }
    out.push(p.report());

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_clean(reports: &[PropertyReport]) {
        for r in reports {
            assert!(
                r.passed(),
                "{}: {}/{} violations, worst slack {:.3e}",
                r.name,
                r.violations,
                r.instances,
                r.worst_slack
            );
        }
    }

    #[test]
    fn property_suite_is_clean() {
        assert_clean(&property_suite(2024, 60));
    }

    #[test]
    fn tensorization_suite_is_clean() {
        assert_clean(&tensorization_suite(2024, 60));
    }

    #[test]
    fn ordering_suite_is_clean() {
        assert_clean(&ordering_suite(2024, 40));
    }
}
