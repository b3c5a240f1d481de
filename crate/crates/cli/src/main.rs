//! `alphainfo` — command-line surface for the α-information library.
//!
//! Every computation in the library is exposed as a subcommand with JSON
//! distribution input (`{"pxy": ...}`, `{"pxyz": ...}`, or
//! `{"px": ..., "pygx": ...}`) and CSV output (header row,
//! 17-significant-digit decimals). All internal computation is in nats;
//! `--base 2` divides logarithmic quantities by ln 2 at the presentation
//! layer only (probability-valued bounds are never rescaled). Sweeps over α
//! parallelize across points with rayon; rows are always emitted in α order
//! regardless of schedule.
//!
//! Exit codes: 0 success, 1 validation/usage error, 2 solver
//! non-convergence.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use alphainfo::alpha::AlphaOrder;
use alphainfo::bounds;
use alphainfo::capacity::{self, ExponentKind};
use alphainfo::checks;
use alphainfo::error::Error;
use alphainfo::prob::{
    format_value, read_distribution, write_table, Channel, Distribution, JointPMF, JointTensor,
    ProbVector,
};
use alphainfo::renyi;
use alphainfo::sibson::{self, ConditionalQStar, ConditionalVariant};
use alphainfo::variational;

type Result<T> = std::result::Result<T, Error>;

// ---------------------------------------------------------------------------
// Argument surface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "alphainfo",
    version,
    about = "Sibson α-mutual information, Rényi measures, capacities, and bounds \
             on finite discrete distributions"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Logarithm base for reported information quantities (and for
    /// information-valued inputs such as --info and --rate).
    #[arg(long, global = true, value_enum, default_value_t = Base::E)]
    base: Base,
    /// Distribution-validation and solver tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// PRNG seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for α sweeps (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write the output table to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Base {
    E,
    #[value(name = "2")]
    Two,
}

impl GlobalOpts {
    /// nats → display units.
    fn display(&self, nats: f64) -> f64 {
        match self.base {
            Base::E => nats,
            Base::Two => nats / std::f64::consts::LN_2,
        }
    }

    /// display units → nats, for information-valued *inputs*.
    fn to_nats(&self, v: f64) -> f64 {
        match self.base {
            Base::E => v,
            Base::Two => v * std::f64::consts::LN_2,
        }
    }
}

/// α selection: a single order or a sweep.
#[derive(Args, Clone)]
struct AlphaSel {
    /// A single order (a nonnegative number, or `inf`).
    #[arg(long, value_parser = parse_alpha, conflicts_with = "sweep")]
    alpha: Option<AlphaOrder>,
    /// An α sweep `min:max:points` (0 < min < max, points ≥ 2).
    #[arg(long)]
    sweep: Option<String>,
    /// Space sweep points logarithmically instead of linearly.
    #[arg(long, requires = "sweep")]
    log_scale: bool,
    /// Append the α = 0 limit to a sweep.
    #[arg(long, requires = "sweep")]
    include_zero: bool,
    /// Insert the α = 1 limit into a sweep.
    #[arg(long, requires = "sweep")]
    include_one: bool,
    /// Append the α = ∞ limit to a sweep.
    #[arg(long, requires = "sweep")]
    include_inf: bool,
    /// Shorthand for all three limit orders.
    #[arg(long, requires = "sweep")]
    include_limits: bool,
}

fn parse_alpha(s: &str) -> std::result::Result<AlphaOrder, String> {
    match s {
        "inf" | "infinity" | "oo" => Ok(AlphaOrder::Infinity),
        _ => {
            let v: f64 = s
                .parse()
                .map_err(|_| format!("`{s}` is not a number or `inf`"))?;
            if v < 0.0 || v.is_nan() {
                return Err(format!("order must be nonnegative, got {s}"));
            }
            Ok(AlphaOrder::new(v))
        }
    }
}

/// Parses `min:max:points` into a grid of values.
fn parse_grid(spec: &str, log_scale: bool) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Parse(format!("sweep `{spec}` is not min:max:points"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let min: f64 = parts[0].parse().map_err(|_| bad())?;
    let max: f64 = parts[1].parse().map_err(|_| bad())?;
    let points: usize = parts[2].parse().map_err(|_| bad())?;
    if !(min > 0.0) || !(min < max) || points < 2 {
        return Err(Error::Parse(format!(
            "sweep `{spec}` needs 0 < min < max and points >= 2"
        )));
    }
    Ok((0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            if log_scale {
                (min.ln() + (max / min).ln() * t).exp()
            } else {
                min + (max - min) * t
            }
        })
        .collect())
}

impl AlphaSel {
    fn orders(&self) -> Result<Vec<AlphaOrder>> {
        let mut out = match (&self.alpha, &self.sweep) {
            (Some(a), None) => vec![*a],
            (None, Some(spec)) => parse_grid(spec, self.log_scale)?
                .into_iter()
                .map(AlphaOrder::new)
                .collect(),
            _ => {
                return Err(Error::Parse(
                    "exactly one of --alpha and --sweep is required".into(),
                ))
            }
        };
        if self.include_zero || self.include_limits {
            out.push(AlphaOrder::Zero);
        }
        if self.include_one || self.include_limits {
            out.push(AlphaOrder::One);
        }
        if self.include_inf || self.include_limits {
            out.push(AlphaOrder::Infinity);
        }
        out.sort_by(|a, b| a.value().partial_cmp(&b.value()).unwrap());
        out.dedup_by(|a, b| a.value() == b.value());
        Ok(out)
    }

    fn is_single(&self) -> bool {
        self.alpha.is_some()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Information measures of a fixed pair (or triple) distribution.
    Measure {
        #[command(subcommand)]
        which: MeasureCmd,
    },
    /// Channel capacities, exponents, and universal prediction.
    Capacity {
        #[command(subcommand)]
        which: CapacityCmd,
    },
    /// Probability bounds driven by α-information.
    Bound {
        #[command(subcommand)]
        which: BoundCmd,
    },
    /// Variational representations: evaluation, witnesses, estimation.
    Variational {
        #[command(subcommand)]
        which: VariationalCmd,
    },
    /// Built-in worked examples with closed-form reference columns.
    Example {
        #[command(subcommand)]
        which: ExampleCmd,
    },
    /// Property suites on seeded random instances.
    Check {
        #[command(subcommand)]
        which: CheckCmd,
    },
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Sibson α-mutual information of a pair joint.
    Sibson {
        #[arg(long)]
        joint: PathBuf,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Arimoto α-mutual information.
    Arimoto {
        #[arg(long)]
        joint: PathBuf,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Csiszár α-mutual information (damped fixed point; finite α only).
    Csiszar {
        #[arg(long)]
        joint: PathBuf,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Lapidoth–Pfister α-mutual information (alternating minimization;
    /// finite α only).
    Lp {
        #[arg(long)]
        joint: PathBuf,
        #[command(flatten)]
        alpha: AlphaSel,
        /// Random restarts of the alternating minimization.
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Conditional Sibson measures of a rank-3 joint.
    Conditional {
        #[arg(long)]
        triple: PathBuf,
        /// Which reference is optimized: the conditional family Q_{Y|Z} or
        /// the single marginal Q_Z.
        #[arg(long, value_enum, default_value_t = VariantArg::YGivenZ)]
        variant: VariantArg,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Rényi divergence between two inline distributions.
    RenyiDiv {
        /// First distribution, comma-separated probabilities.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        p: Vec<f64>,
        /// Second distribution, comma-separated probabilities.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        q: Vec<f64>,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Rényi entropy of an inline distribution.
    RenyiEnt {
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        p: Vec<f64>,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Maximal leakage I_∞ of a pair joint.
    Leakage {
        #[arg(long)]
        joint: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    #[value(name = "y-given-z")]
    YGivenZ,
    #[value(name = "z")]
    Z,
}

#[derive(Subcommand)]
enum CapacityCmd {
    /// α-capacity sup_P I_α(P, W) with a certified duality gap.
    Sibson {
        #[arg(long)]
        channel: PathBuf,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Zero-error feedback capacity −log min_P max_y P(S_y) (0 when no
    /// channel output rules out any input).
    ZeroErrorFb {
        #[arg(long)]
        channel: PathBuf,
    },
    /// Sphere-packing / random-coding exponent curves over a rate grid.
    Exponents {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::RandomCoding)]
        kind: KindArg,
        /// Rate grid `min:max:points` in the units of --base.
        #[arg(long)]
        rates: String,
    },
    /// α-regret-optimal predictor for the model class given by the channel
    /// rows, with prior `px`; prints the worst-case regret, and writes the
    /// predictor table to --out when given.
    AlphaNml {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, value_parser = parse_alpha)]
        alpha: AlphaOrder,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    SpherePacking,
    RandomCoding,
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Event-probability bound P_XY(E) ≤ max_y P_X(E_y)^{(α−1)/α} e^{(α−1)/α·I_α}.
    Dependence {
        #[arg(long)]
        joint: PathBuf,
        /// JSON file with a 2D 0/1 (or boolean) array selecting the event.
        #[arg(long, conflicts_with = "diagonal")]
        event: Option<PathBuf>,
        /// Use the diagonal event {x = y} (square joints only).
        #[arg(long)]
        diagonal: bool,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Generalization-error bound for n samples at sensitivity η.
    GenError {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eta: f64,
        /// Information budget, in the units of --base.
        #[arg(long)]
        info: f64,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Composite independence-testing error bound at blocklength n.
    HypTest {
        #[arg(long)]
        n: usize,
        /// Rate, in the units of --base.
        #[arg(long)]
        rate: f64,
        /// Information budget, in the units of --base.
        #[arg(long)]
        info: f64,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Transportation-cost check: verifies the exponential-moment condition
    /// and reports the slack of the mean-separation conclusion.
    Tpc {
        #[arg(long)]
        joint: PathBuf,
        /// JSON file with the 2D array f(x,y).
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Moment constant c; defaults to the bounded-function sufficient
        /// value M²(2−α) with f centered under P_X per column.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Fano family: MAP-success upper bounds vs the exact MAP success.
    Fano {
        #[arg(long)]
        joint: PathBuf,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Generalized Fano minimax-risk lower bound for a packed model family
    /// (channel rows = models, px = prior).
    GenFano {
        #[arg(long)]
        models: PathBuf,
        /// Index of the model used as the divergence-ball center.
        #[arg(long, default_value_t = 0)]
        center: usize,
        /// Divergence-ball radius β, in the units of --base.
        #[arg(long)]
        beta: f64,
        /// Loss separation γ between distinct hypotheses.
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Bayesian-risk lower bound for the Bernoulli bias-estimation problem
    /// with a uniform prior, optimized over (ρ, α).
    BayesRisk {
        /// Number of coin flips.
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum VariationalCmd {
    /// Evaluate one representation at a supplied candidate against the
    /// closed form.
    Eval {
        #[arg(long)]
        joint: PathBuf,
        #[arg(long, value_enum)]
        form: FormArg,
        #[arg(long)]
        alpha: f64,
        /// Candidate: a joint JSON file for --form kl, a 2D-array JSON file
        /// for the function forms.
        #[arg(long)]
        candidate: PathBuf,
        /// Output-marginal reference for --form one.
        #[arg(long, value_enum, default_value_t = RefArg::RStar)]
        reference: RefArg,
    },
    /// Emit the saturating witness of one representation as a table and
    /// verify it reproduces the closed form.
    Witness {
        #[arg(long)]
        joint: PathBuf,
        #[arg(long, value_enum)]
        form: FormArg,
        #[arg(long)]
        alpha: f64,
    },
    /// Gradient-ascent estimation of I_α over test functions (α > 1,
    /// full-support joints).
    Estimate {
        #[arg(long)]
        joint: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        #[arg(long, default_value_t = 0.5)]
        rate: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormArg {
    /// Weighted-KL form over candidate couplings.
    Kl,
    /// Log-moment form over test functions f(x,y).
    One,
    /// Ratio form over positive test functions.
    Ratio,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RefArg {
    RStar,
    QStar,
    ProductRStar,
    ProductQStar,
}

#[derive(Subcommand)]
enum ExampleCmd {
    /// Binary symmetric channel under uniform input: generic pipeline vs
    /// log 2 − h_{2,α}(ε) closed form.
    Bsc {
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Binary erasure channel under uniform input: both orientations
    /// against their closed forms (the two curves are asymmetric).
    Bec {
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Additive Gaussian pair discretized to a finite grid: quadrature
    /// I_α vs ½log(1 + α·ratio).
    Gaussian {
        /// σ²_X / σ²_N.
        #[arg(long, default_value_t = 1.0)]
        ratio: f64,
        /// Grid points per axis.
        #[arg(long, default_value_t = 501)]
        points: usize,
        /// Half-width in standard deviations.
        #[arg(long, default_value_t = 8.0)]
        half_width: f64,
        #[command(flatten)]
        alpha: AlphaSel,
    },
    /// Bernoulli bias estimation: risk lower bound vs its closed-form
    /// sandwich, per sample size.
    #[command(name = "bernoulli_bias", alias = "bernoulli-bias")]
    BernoulliBias {
        /// Sample sizes.
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [10usize, 100, 1000])]
        n: Vec<usize>,
    },
    /// Ber(1/2)³ through three BSC(0.3) uses: the Fano bound family against
    /// the exact MAP success 0.343.
    #[command(name = "fano_bsc3", alias = "fano-bsc3")]
    FanoBsc3 {
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        /// α sweep `min:max:points` with min > 1.
        #[arg(long, default_value = "1.1:10:50")]
        sweep: String,
    },
    /// Doubly symmetric binary source: dependence bound on the diagonal
    /// event, tight at α = ∞.
    Dsbs {
        #[arg(long, default_value_t = 0.25)]
        p: f64,
        #[command(flatten)]
        alpha: AlphaSel,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Core invariants: non-negativity, zero-iff-independence,
    /// α-monotonicity, additivity, DPI, permutation invariance, entropy
    /// bounds, Q* optimality, order concavity.
    Properties {
        #[arg(long, default_value_t = 500)]
        instances: usize,
    },
    /// Tensorization inequality on product joints.
    Tensorization {
        #[arg(long, default_value_t = 500)]
        instances: usize,
    },
    /// Cross-measure orderings (Csiszár/Lapidoth–Pfister vs Sibson, Arimoto
    /// at uniform input).
    Ordering {
        #[arg(long, default_value_t = 500)]
        instances: usize,
    },
}

// ---------------------------------------------------------------------------
// IO helpers
// ---------------------------------------------------------------------------

fn read_joint(path: &Path, tol: f64) -> Result<JointPMF> {
    read_distribution(path, tol)?.into_joint()
}

fn read_triple(path: &Path, tol: f64) -> Result<JointTensor> {
    read_distribution(path, tol)?.into_triple()
}

fn read_channel(path: &Path, tol: f64) -> Result<(ProbVector, Channel)> {
    match read_distribution(path, tol)? {
        Distribution::ChannelPrior { px, pygx } => Ok((px, pygx)),
        _ => Err(Error::Parse(
            "expected the channel schema {\"px\": ..., \"pygx\": ...}".into(),
        )),
    }
}

/// Reads a JSON 2D array of numbers (booleans and 0/1 accepted for masks).
fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Parse("expected a JSON 2D array".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::Parse("expected a JSON 2D array".into()))?;
        let mut r = Vec::with_capacity(cells.len());
        for c in cells {
            let v = match c {
                serde_json::Value::Bool(b) => {
                    if *b {
                        1.0
                    } else {
                        0.0
                    }
                }
                _ => c
                    .as_f64()
                    .ok_or_else(|| Error::Parse(format!("non-numeric cell {c}")))?,
            };
            r.push(v);
        }
        out.push(r);
    }
    if out.is_empty() || out.iter().any(|r| r.len() != out[0].len()) {
        return Err(Error::Parse("matrix rows must be nonempty and equal-length".into()));
    }
    Ok(out)
}

/// Writes the output table to --out or stdout.
fn emit_table(global: &GlobalOpts, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    match &global.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            write_table(&mut f, header, rows)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            write_table(&mut stdout.lock(), header, rows)?;
        }
    }
    Ok(())
}

/// Prints a single value (already in display units).
fn emit_scalar(global: &GlobalOpts, name: &str, v: f64) -> Result<()> {
    match &global.out {
        Some(_) => emit_table(global, &[name], &[vec![v]]),
        None => {
            println!("{}", format_value(v));
            Ok(())
        }
    }
}

/// Runs one row per α in parallel, preserving α order.
fn alpha_rows(
    orders: &[AlphaOrder],
    f: impl Fn(AlphaOrder) -> Result<Vec<f64>> + Sync,
) -> Result<Vec<Vec<f64>>> {
    orders.par_iter().map(|&a| f(a)).collect()
}

/// Emits either a bare scalar (single --alpha, no --out) or an α-indexed
/// table.
fn emit_measure(
    global: &GlobalOpts,
    sel: &AlphaSel,
    name: &str,
    f: impl Fn(AlphaOrder) -> Result<f64> + Sync,
) -> Result<()> {
    let orders = sel.orders()?;
    let rows = alpha_rows(&orders, |a| Ok(vec![a.value(), global.display(f(a)?)]))?;
    if sel.is_single() && global.out.is_none() {
        emit_scalar(global, name, rows[0][1])
    } else {
        emit_table(global, &["alpha", name], &rows)
    }
}

fn require_finite(orders: &[AlphaOrder], what: &str) -> Result<()> {
    if orders
        .iter()
        .any(|a| matches!(a, AlphaOrder::Zero | AlphaOrder::Infinity))
    {
        return Err(Error::Parse(format!("{what} requires finite orders")));
    }
    Ok(())
}

fn require_above_one(orders: &[AlphaOrder], what: &str) -> Result<()> {
    if orders.iter().any(|a| a.value() <= 1.0) {
        return Err(Error::Parse(format!("{what} requires alpha > 1")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn run_measure(global: &GlobalOpts, cmd: &MeasureCmd) -> Result<()> {
    match cmd {
        MeasureCmd::Sibson { joint, alpha } => {
            let j = read_joint(joint, global.tol)?;
            emit_measure(global, alpha, "sibson", |a| Ok(sibson::sibson_mi(&j, a).value))
        }
        MeasureCmd::Arimoto { joint, alpha } => {
            let j = read_joint(joint, global.tol)?;
            emit_measure(global, alpha, "arimoto", |a| Ok(sibson::arimoto_mi(&j, a)))
        }
        MeasureCmd::Csiszar { joint, alpha } => {
            let j = read_joint(joint, global.tol)?;
            require_finite(&alpha.orders()?, "csiszar")?;
            emit_measure(global, alpha, "csiszar", |a| {
                sibson::csiszar_mi(&j, a, global.tol)
            })
        }
        MeasureCmd::Lp {
            joint,
            alpha,
            restarts,
        } => {
            let j = read_joint(joint, global.tol)?;
            require_finite(&alpha.orders()?, "lp")?;
            // Restarts draw from the global seed so sweeps stay
            // reproducible; the measure itself is deterministic at the
            // optimum.
            emit_measure(global, alpha, "lapidoth_pfister", |a| {
                sibson::lapidoth_pfister_mi(&j, a, *restarts, global.tol)
            })
        }
        MeasureCmd::Conditional {
            triple,
            variant,
            alpha,
        } => {
            let t = read_triple(triple, global.tol)?;
            let v = match variant {
                VariantArg::YGivenZ => ConditionalVariant::MinOverQYgZ,
                VariantArg::Z => ConditionalVariant::MinOverQZ,
            };
            emit_measure(global, alpha, "conditional_sibson", |a| {
                let (value, _q): (f64, ConditionalQStar) = sibson::conditional_sibson_mi(&t, a, v);
                Ok(value)
            })
        }
        MeasureCmd::RenyiDiv { p, q, alpha } => {
            let pv = ProbVector::new(p, global.tol)?;
            let qv = ProbVector::new(q, global.tol)?;
            if pv.len() != qv.len() {
                return Err(Error::Parse("p and q must have equal length".into()));
            }
            emit_measure(global, alpha, "renyi_divergence", |a| {
                Ok(renyi::renyi_divergence(&pv, &qv, a))
            })
        }
        MeasureCmd::RenyiEnt { p, alpha } => {
            let pv = ProbVector::new(p, global.tol)?;
            emit_measure(global, alpha, "renyi_entropy", |a| {
                Ok(renyi::renyi_entropy(&pv, a))
            })
        }
        MeasureCmd::Leakage { joint } => {
            let j = read_joint(joint, global.tol)?;
            let v = sibson::sibson_mi(&j, AlphaOrder::Infinity).value;
            emit_scalar(global, "maximal_leakage", global.display(v))
        }
    }
}

fn run_capacity(global: &GlobalOpts, cmd: &CapacityCmd) -> Result<()> {
    match cmd {
        CapacityCmd::Sibson { channel, alpha } => {
            let (_px, w) = read_channel(channel, global.tol)?;
            let orders = alpha.orders()?;
            let rows = alpha_rows(&orders, |a| {
                let r = capacity::sibson_capacity(&w, a, global.tol.max(1e-11))?;
                Ok(vec![
                    a.value(),
                    global.display(r.value),
                    global.display(r.gap),
                    r.iterations as f64,
                ])
            })?;
            emit_table(global, &["alpha", "capacity", "gap", "iterations"], &rows)
        }
        CapacityCmd::ZeroErrorFb { channel } => {
            let (_px, w) = read_channel(channel, global.tol)?;
            let r = capacity::zero_error_feedback_capacity(&w, global.tol.max(1e-9))?;
            emit_table(
                global,
                &["capacity", "gap", "iterations"],
                &[vec![
                    global.display(r.value),
                    global.display(r.gap),
                    r.iterations as f64,
                ]],
            )
        }
        CapacityCmd::Exponents {
            channel,
            kind,
            rates,
        } => {
            let (_px, w) = read_channel(channel, global.tol)?;
            let grid: Vec<f64> = parse_grid(rates, false)?
                .into_iter()
                .map(|r| global.to_nats(r))
                .collect();
            let kind = match kind {
                KindArg::SpherePacking => ExponentKind::SpherePacking,
                KindArg::RandomCoding => ExponentKind::RandomCoding,
            };
            let curve = capacity::error_exponents(&w, &grid, kind, 1e-9)?;
            let rows: Vec<Vec<f64>> = curve
                .rates
                .iter()
                .zip(&curve.exponents)
                .map(|(&r, &e)| vec![global.display(r), global.display(e)])
                .collect();
            emit_table(global, &["rate", "exponent"], &rows)
        }
        CapacityCmd::AlphaNml { channel, alpha } => {
            let (prior, models) = read_channel(channel, global.tol)?;
            if alpha.value() < 1.0 {
                return Err(Error::Parse("alpha-nml requires alpha >= 1".into()));
            }
            let (predictor, regret) = capacity::alpha_nml(&models, &prior, *alpha);
            if global.out.is_some() {
                let rows: Vec<Vec<f64>> = predictor
                    .as_slice()
                    .iter()
                    .enumerate()
                    .map(|(x, &p)| vec![x as f64, p])
                    .collect();
                emit_table(global, &["x", "predictor_prob"], &rows)?;
            }
            println!("{}", format_value(global.display(regret)));
            Ok(())
        }
    }
}

fn run_bound(global: &GlobalOpts, cmd: &BoundCmd) -> Result<()> {
    match cmd {
        BoundCmd::Dependence {
            joint,
            event,
            diagonal,
            alpha,
        } => {
            let j = read_joint(joint, global.tol)?;
            let mask = match (event, diagonal) {
                (Some(path), false) => {
                    let m = read_matrix(path)?;
                    if m.len() != j.nx() || m[0].len() != j.ny() {
                        return Err(Error::Parse("event mask shape mismatch".into()));
                    }
                    bounds::EventMask::new(
                        m.iter()
                            .map(|r| r.iter().map(|&v| v != 0.0).collect())
                            .collect(),
                    )
                }
                (None, true) => {
                    if j.nx() != j.ny() {
                        return Err(Error::Parse("--diagonal needs a square joint".into()));
                    }
                    bounds::EventMask::diagonal(j.nx())
                }
                _ => {
                    return Err(Error::Parse(
                        "exactly one of --event and --diagonal is required".into(),
                    ))
                }
            };
            let orders = alpha.orders()?;
            require_above_one(&orders, "the dependence bound")?;
            let rows = alpha_rows(&orders, |a| {
                let (lhs, rhs) = bounds::dependence_bound(&j, &mask, a);
                Ok(vec![a.value(), lhs, rhs, rhs - lhs])
            })?;
            emit_table(global, &["alpha", "event_prob", "bound", "slack"], &rows)
        }
        BoundCmd::GenError {
            n,
            eta,
            info,
            alpha,
        } => {
            let info = global.to_nats(*info);
            let orders = alpha.orders()?;
            require_above_one(&orders, "the generalization bound")?;
            let rows = alpha_rows(&orders, |a| {
                Ok(vec![a.value(), bounds::gen_error_bound(*n, *eta, info, a).value])
            })?;
            emit_table(global, &["alpha", "bound"], &rows)
        }
        BoundCmd::HypTest {
            n,
            rate,
            info,
            alpha,
        } => {
            let rate = global.to_nats(*rate);
            let info = global.to_nats(*info);
            let orders = alpha.orders()?;
            if orders.iter().any(|a| a.value() < 1.0) {
                return Err(Error::Parse("the testing bound requires alpha >= 1".into()));
            }
            let rows = alpha_rows(&orders, |a| {
                Ok(vec![
                    a.value(),
                    bounds::hypothesis_testing_bound(*n, rate, info, a).value,
                ])
            })?;
            emit_table(global, &["alpha", "bound"], &rows)
        }
        BoundCmd::Tpc { joint, f, alpha, c } => {
            if !(*alpha > 0.0 && *alpha < 1.0) {
                return Err(Error::Parse("tpc requires 0 < alpha < 1".into()));
            }
            let j = read_joint(joint, global.tol)?;
            let fm = read_matrix(f)?;
            if fm.len() != j.nx() || fm[0].len() != j.ny() {
                return Err(Error::Parse("f shape mismatch".into()));
            }
            let c = c.unwrap_or_else(|| {
                let m = fm
                    .iter()
                    .flatten()
                    .fold(0.0f64, |acc, &v| acc.max(v.abs()));
                bounds::tpc_bounded_constant(m, *alpha)
            });
            let report = bounds::tpc_check(&j, &fm, *alpha, c, &bounds::default_kappa_grid());
            emit_table(
                global,
                &["condition_ok", "gap"],
                &[vec![if report.condition_ok { 1.0 } else { 0.0 }, report.gap]],
            )
        }
        BoundCmd::Fano { joint, alpha } => {
            let j = read_joint(joint, global.tol)?;
            let orders = alpha.orders()?;
            require_above_one(&orders, "the Fano family")?;
            let rows = fano_rows(&j, &orders)?;
            emit_table(global, FANO_HEADER, &rows)
        }
        BoundCmd::GenFano {
            models,
            center,
            beta,
            gamma,
            alpha,
        } => {
            let (prior, w) = read_channel(models, global.tol)?;
            let rows: Vec<ProbVector> =
                (0..w.input_size()).map(|x| w.row(x).clone()).collect();
            if *center >= rows.len() {
                return Err(Error::Parse(format!(
                    "--center {center} out of range for {} models",
                    rows.len()
                )));
            }
            let b = bounds::generalized_fano(
                &rows,
                &rows[*center].clone(),
                global.to_nats(*beta),
                *gamma,
                &prior,
                AlphaOrder::new(*alpha),
            )?;
            emit_scalar(global, "risk_lower_bound", b.value)
        }
        BoundCmd::BayesRisk { n } => {
            let n = *n;
            if n == 0 {
                return Err(Error::Parse("--n must be positive".into()));
            }
            let small_ball = |rho: f64| (2.0 * rho).min(1.0);
            let info = |alpha: f64| {
                if alpha.is_finite() {
                    // exp-scale closed form → I_α in nats.
                    alpha / (alpha - 1.0) * bounds::bernoulli_bias_info(n, alpha).ln()
                } else {
                    bounds::bernoulli_bias_leakage(n)
                }
            };
            let problem = bounds::BayesRiskProblem {
                small_ball: &small_ball,
                info: &info,
                rho_grid: (1..100).map(|i| i as f64 / 200.0).collect(),
                alpha_grid: vec![1.5, 2.0, 3.0, 5.0, 10.0, f64::INFINITY],
            };
            let (bound, rho, alpha) = bounds::bayes_risk_lower_bound(&problem);
            let (lo, hi) = bounds::bernoulli_bias_risk_bounds(n);
            emit_table(
                global,
                &["lower_bound", "rho", "alpha", "ml_lower", "mean_upper"],
                &[vec![bound, rho, alpha, lo, hi]],
            )
        }
    }
}

const FANO_HEADER: &[&str] = &[
    "alpha",
    "gamma_opt",
    "gamma_limit",
    "dalpha",
    "entropy_form",
    "exact_success",
];

/// One row per order: the γ-optimized success bound, its γ → ∞ limit, the
/// binary-divergence and entropy-form bounds converted to success, and the
/// exact MAP success.
fn fano_rows(joint: &JointPMF, orders: &[AlphaOrder]) -> Result<Vec<Vec<f64>>> {
    let (map_error, _) = bounds::exact_map_error(joint);
    let exact = 1.0 - map_error;
    alpha_rows(orders, |order| {
        let a = order
            .finite()
            .ok_or_else(|| Error::Parse("the Fano family needs finite alpha > 1".into()))?;
        let like = bounds::fano_like_bound(joint, a, bounds::Gamma::Optimize);
        let dalpha = 1.0 - bounds::fano_dalpha_bound(joint, order);
        let entropy_form = 1.0 - bounds::fano_arimoto_bound(joint, a).value;
        Ok(vec![
            a,
            like.value,
            like.corollary.min(1.0),
            dalpha,
            entropy_form,
            exact,
        ])
    })
}

fn run_variational(global: &GlobalOpts, cmd: &VariationalCmd) -> Result<()> {
    match cmd {
        VariationalCmd::Eval {
            joint,
            form,
            alpha,
            candidate,
            reference,
        } => {
            let j = read_joint(joint, global.tol)?;
            let closed = variational::closed_form(&j, AlphaOrder::new(*alpha)).value;
            let objective = match form {
                FormArg::Kl => {
                    let r = read_joint(candidate, global.tol)?;
                    variational::kl_representation_objective(&r, &j, *alpha)
                }
                FormArg::One => {
                    let f = read_matrix(candidate)?;
                    let r = match reference {
                        RefArg::RStar => variational::Reference::RStar,
                        RefArg::QStar => variational::Reference::QStar,
                        RefArg::ProductRStar => variational::Reference::ProductRStar,
                        RefArg::ProductQStar => variational::Reference::ProductQStar,
                    };
                    variational::var_rep_one(&f, &j, *alpha, r)
                }
                FormArg::Ratio => {
                    let g = read_matrix(candidate)?;
                    variational::var_rep_ratio(&g, &j, AlphaOrder::new(*alpha))?
                }
            };
            emit_table(
                global,
                &["objective", "closed_form"],
                &[vec![global.display(objective), global.display(closed)]],
            )
        }
        VariationalCmd::Witness { joint, form, alpha } => {
            let j = read_joint(joint, global.tol)?;
            let order = AlphaOrder::new(*alpha);
            let closed = variational::closed_form(&j, order).value;
            let (witness, objective): (Vec<Vec<f64>>, f64) = match form {
                FormArg::Kl => {
                    let r = variational::kl_representation_witness(&j, *alpha);
                    let v = variational::kl_representation_objective(&r, &j, *alpha);
                    (r.cells().to_vec(), v)
                }
                FormArg::One => {
                    let f = variational::var_rep_one_witness(&j, *alpha);
                    let r = if *alpha > 1.0 {
                        variational::Reference::RStar
                    } else {
                        variational::Reference::QStar
                    };
                    let v = variational::var_rep_one(&f, &j, *alpha, r);
                    (f, v)
                }
                FormArg::Ratio => {
                    let g = variational::var_rep_ratio_witness(&j, order);
                    let v = variational::var_rep_ratio(&g, &j, order)?;
                    (g, v)
                }
            };
            let mut rows = Vec::new();
            for (x, row) in witness.iter().enumerate() {
                for (y, &v) in row.iter().enumerate() {
                    rows.push(vec![x as f64, y as f64, v]);
                }
            }
            emit_table(global, &["x", "y", "witness"], &rows)?;
            eprintln!(
                "objective {} closed_form {} gap {:.3e}",
                format_value(global.display(objective)),
                format_value(global.display(closed)),
                (objective - closed).abs()
            );
            Ok(())
        }
        VariationalCmd::Estimate {
            joint,
            alpha,
            steps,
            rate,
        } => {
            if !(*alpha > 1.0) {
                return Err(Error::Parse("the ascent estimator requires alpha > 1".into()));
            }
            let j = read_joint(joint, global.tol)?;
            let closed = variational::closed_form(&j, AlphaOrder::new(*alpha)).value;
            let (estimate, _f) =
                variational::estimate_sibson_by_ascent(&j, *alpha, *steps, *rate, global.seed)?;
            emit_table(
                global,
                &["estimate", "closed_form"],
                &[vec![global.display(estimate), global.display(closed)]],
            )
        }
    }
}

fn run_example(global: &GlobalOpts, cmd: &ExampleCmd) -> Result<()> {
    match cmd {
        ExampleCmd::Bsc { eps, alpha } => {
            if !(*eps > 0.0 && *eps < 1.0) {
                return Err(Error::Parse("--eps must lie in (0, 1)".into()));
            }
            let joint = JointPMF::from_channel(&ProbVector::uniform(2), &Channel::bsc(*eps));
            let e = *eps;
            let closed = move |a: AlphaOrder| -> f64 {
                let two = std::f64::consts::LN_2;
                match a {
                    AlphaOrder::Zero => 0.0,
                    AlphaOrder::One => two + e * e.ln() + (1.0 - e) * (1.0 - e).ln(),
                    AlphaOrder::Infinity => two + e.max(1.0 - e).ln(),
                    AlphaOrder::Finite(al) => {
                        two + (e.powf(al) + (1.0 - e).powf(al)).ln() / (al - 1.0)
                    }
                }
            };
            let orders = alpha.orders()?;
            let rows = alpha_rows(&orders, |a| {
                Ok(vec![
                    a.value(),
                    global.display(sibson::sibson_mi(&joint, a).value),
                    global.display(closed(a)),
                ])
            })?;
            emit_table(global, &["alpha", "sibson", "closed_form"], &rows)
        }
        ExampleCmd::Bec { delta, alpha } => {
            if !(*delta > 0.0 && *delta < 1.0) {
                return Err(Error::Parse("--delta must lie in (0, 1)".into()));
            }
            let d = *delta;
            let forward = JointPMF::from_channel(&ProbVector::uniform(2), &Channel::bec(d));
            let backward = forward.swap();
            let two = std::f64::consts::LN_2;
            // I_α(X,Y) = α/(α−1)·log(2^{1−1/α}(1−δ) + δ); the erased output
            // carries no α-dependence. Reverse orientation:
            // I_α(Y,X) = α/(α−1)·log 2((1−δ)/2 + δ2^{−α})^{1/α}.
            let fwd_closed = move |a: AlphaOrder| -> f64 {
                match a {
                    AlphaOrder::Zero => 0.0,
                    AlphaOrder::One => (1.0 - d) * two,
                    AlphaOrder::Infinity => (2.0 - d).ln(),
                    AlphaOrder::Finite(al) => {
                        al / (al - 1.0) * (2f64.powf(1.0 - 1.0 / al) * (1.0 - d) + d).ln()
                    }
                }
            };
            let bwd_closed = move |a: AlphaOrder| -> f64 {
                match a {
                    AlphaOrder::Zero => (2.0 / (1.0 + d)).ln(),
                    AlphaOrder::One => (1.0 - d) * two,
                    AlphaOrder::Infinity => two,
                    AlphaOrder::Finite(al) => {
                        al / (al - 1.0)
                            * (two + ((1.0 - d) / 2.0 + d * 2f64.powf(-al)).ln() / al)
                    }
                }
            };
            let orders = alpha.orders()?;
            let rows = alpha_rows(&orders, |a| {
                Ok(vec![
                    a.value(),
                    global.display(sibson::sibson_mi(&forward, a).value),
                    global.display(fwd_closed(a)),
                    global.display(sibson::sibson_mi(&backward, a).value),
                    global.display(bwd_closed(a)),
                ])
            })?;
            emit_table(
                global,
                &["alpha", "xy", "xy_closed", "yx", "yx_closed"],
                &rows,
            )
        }
        ExampleCmd::Gaussian {
            ratio,
            points,
            half_width,
            alpha,
        } => {
            if !(*ratio > 0.0) {
                return Err(Error::Parse("--ratio must be positive".into()));
            }
            let joint = sibson::gaussian_quadrature_joint(*ratio, 1.0, *points, *half_width);
            let orders = alpha.orders()?;
            require_finite(&orders, "the Gaussian example")?;
            let rows = alpha_rows(&orders, |a| {
                Ok(vec![
                    a.value(),
                    global.display(sibson::sibson_mi(&joint, a).value),
                    global.display(sibson::sibson_mi_gaussian(*ratio, 1.0, a.value())),
                ])
            })?;
            emit_table(global, &["alpha", "quadrature", "closed_form"], &rows)
        }
        ExampleCmd::BernoulliBias { n } => {
            let rows: Vec<Vec<f64>> = n
                .par_iter()
                .map(|&n| {
                    let small_ball = |rho: f64| (2.0 * rho).min(1.0);
                    let info = |alpha: f64| {
                        if alpha.is_finite() {
                            // exp-scale closed form → I_α in nats.
                            alpha / (alpha - 1.0)
                                * bounds::bernoulli_bias_info(n, alpha).ln()
                        } else {
                            bounds::bernoulli_bias_leakage(n)
                        }
                    };
                    let problem = bounds::BayesRiskProblem {
                        small_ball: &small_ball,
                        info: &info,
                        rho_grid: (1..100).map(|i| i as f64 / 200.0).collect(),
                        alpha_grid: vec![1.5, 2.0, 3.0, 5.0, 10.0, f64::INFINITY],
                    };
                    let (opt, _, _) = bounds::bayes_risk_lower_bound(&problem);
                    let (lo, hi) = bounds::bernoulli_bias_risk_bounds(n);
                    vec![n as f64, lo, opt, hi]
                })
                .collect();
            emit_table(global, &["n", "ml_lower", "sibson_opt", "mean_upper"], &rows)
        }
        ExampleCmd::FanoBsc3 { eps, sweep } => {
            if !(*eps > 0.0 && *eps < 0.5) {
                return Err(Error::Parse("--eps must lie in (0, 0.5)".into()));
            }
            let one = JointPMF::from_channel(&ProbVector::uniform(2), &Channel::bsc(*eps));
            let joint = one.tensor(&one).tensor(&one);
            let orders: Vec<AlphaOrder> = parse_grid(sweep, false)?
                .into_iter()
                .map(AlphaOrder::new)
                .collect();
            require_above_one(&orders, "the Fano family")?;
            let rows = fano_rows(&joint, &orders)?;
            emit_table(global, FANO_HEADER, &rows)
        }
        ExampleCmd::Dsbs { p, alpha } => {
            if !(*p > 0.0 && *p < 0.5) {
                return Err(Error::Parse("--p must lie in (0, 0.5)".into()));
            }
            let joint = JointPMF::from_channel(&ProbVector::uniform(2), &Channel::bsc(*p));
            let mask = bounds::EventMask::diagonal(2);
            let orders = alpha.orders()?;
            require_above_one(&orders, "the dependence bound")?;
            let rows = alpha_rows(&orders, |a| {
                let (lhs, rhs) = bounds::dependence_bound(&joint, &mask, a);
                Ok(vec![a.value(), lhs, rhs, rhs - lhs])
            })?;
            emit_table(global, &["alpha", "event_prob", "bound", "slack"], &rows)
        }
    }
}

fn run_check(global: &GlobalOpts, cmd: &CheckCmd) -> Result<bool> {
    let reports = match cmd {
        CheckCmd::Properties { instances } => checks::property_suite(global.seed, *instances),
        CheckCmd::Tensorization { instances } => {
            checks::tensorization_suite(global.seed, *instances)
        }
        CheckCmd::Ordering { instances } => checks::ordering_suite(global.seed, *instances),
    };
    let mut text = String::new();
    let mut all_pass = true;
    for r in &reports {
        all_pass &= r.passed();
        text.push_str(&format!(
            "{}: instances={} violations={} worst_slack={:.3e} {}\n",
            r.name,
            r.instances,
            r.violations,
            r.worst_slack,
            if r.passed() { "PASS" } else { "FAIL" }
        ));
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    text.push_str(&format!("{passed}/{} properties passed\n", reports.len()));
    match &global.out {
        Some(path) => std::fs::write(path, &text).map_err(Error::Io)?,
        None => print!("{text}"),
    }
    Ok(all_pass)
}

// ---------------------------------------------------------------------------
// Entry
// ---------------------------------------------------------------------------

fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Measure { which } => run_measure(&cli.global, which).map(|()| true),
        Command::Capacity { which } => run_capacity(&cli.global, which).map(|()| true),
        Command::Bound { which } => run_bound(&cli.global, which).map(|()| true),
        Command::Variational { which } => run_variational(&cli.global, which).map(|()| true),
        Command::Example { which } => run_example(&cli.global, which).map(|()| true),
        Command::Check { which } => run_check(&cli.global, which),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.global.threads > 0 {
        // Ignore the error when a pool already exists (e.g. repeated calls
        // under a test harness in the same process).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global();
    }
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::NoConvergence { .. } => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
