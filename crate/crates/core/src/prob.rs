//! Finite-alphabet probability types, validation, random instance
//! generation and file I/O.
//!
//! Three carriers cover every object in the crate:
//!
//! * [`ProbVector`] — a point on the simplex (inputs, priors, output marginals),
//! * [`Channel`] — a row-stochastic matrix `P_{Y|X}`,
//! * [`JointPMF`] / [`JointTensor`] — joint distributions `P_XY` / `P_XYZ`.
//!
//! All types are immutable after construction and therefore freely shareable
//! across threads. Construction validates and renormalizes: entries below
//! `-tol` or totals off by more than `tol` are rejected, small negatives are
//! clipped to zero, and the result is divided by its exact sum.

use crate::error::Error;
use crate::logdomain::{log_dot_exp, log_p_norm};
use crate::Result;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::io::Write as _;
use std::path::Path;

/// Default validation tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

fn validate_simplex(raw: &[f64], tol: f64) -> Result<Vec<f64>> {
    if raw.is_empty() {
        return Err(Error::NotADistribution("empty vector".into()));
    }
    let mut sum = 0.0;
    for (i, &v) in raw.iter().enumerate() {
        if v.is_nan() || v < -tol {
            return Err(Error::NotADistribution(format!(
                "entry {i} is {v}, below -tol = {}",
                -tol
            )));
        }
        sum += v.max(0.0);
    }
    if (sum - 1.0).abs() > tol {
        return Err(Error::NotADistribution(format!(
            "entries sum to {sum}, more than tol = {tol} away from 1"
        )));
    }
    Ok(raw.iter().map(|&v| v.max(0.0) / sum).collect())
}

// ---------------------------------------------------------------------------
// ProbVector
// ---------------------------------------------------------------------------

/// A probability distribution over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    probs: Vec<f64>,
}

impl ProbVector {
    /// Validates and normalizes a raw vector (see module docs).
    pub fn new(raw: &[f64], tol: f64) -> Result<Self> {
        Ok(ProbVector {
            probs: validate_simplex(raw, tol)?,
        })
    }

    /// Uniform distribution over `n` symbols.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        ProbVector {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass at index `i`.
    pub fn point_mass(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut probs = vec![0.0; n];
        probs[i] = 1.0;
        ProbVector { probs }
    }

    /// Wraps an exactly normalized vector without re-validation.
    /// Used internally where normalization is performed by construction.
    pub(crate) fn from_normalized(probs: Vec<f64>) -> Self {
        debug_assert!(
            (probs.iter().sum::<f64>() - 1.0).abs() < 1e-9,
            "from_normalized requires a normalized vector"
        );
        ProbVector { probs }
    }

    /// Builds a distribution proportional to `exp(log_weights)`, normalized
    /// in the log domain. All-zero weights produce an error.
    pub fn from_log_weights(log_weights: &[f64]) -> Result<Self> {
        let norm = crate::logdomain::log_sum_exp(log_weights);
        if norm == f64::NEG_INFINITY {
            return Err(Error::NotADistribution(
                "all log-weights are -inf".into(),
            ));
        }
        Ok(ProbVector {
            probs: log_weights.iter().map(|&l| (l - norm).exp()).collect(),
        })
    }

    /// Alphabet size.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// True when the alphabet is empty (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// The probabilities as a slice.
    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// Natural logs of the probabilities (`-inf` at zeros).
    pub fn log_probs(&self) -> Vec<f64> {
        self.probs.iter().map(|&p| p.ln()).collect()
    }

    /// Indices with strictly positive probability.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.probs[i] > 0.0).collect()
    }

    /// Largest probability.
    pub fn max_prob(&self) -> f64 {
        self.probs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Total mass on a set of indices selected by a predicate.
    pub fn mass_where(&self, mut pred: impl FnMut(usize) -> bool) -> f64 {
        (0..self.len())
            .filter(|&i| pred(i))
            .map(|i| self.probs[i])
            .sum()
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.probs[i]
    }
}

// ---------------------------------------------------------------------------
// Channel
// ---------------------------------------------------------------------------

/// A row-stochastic matrix `P_{Y|X}`: row `x` is the distribution of `Y`
/// given `X = x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    rows: Vec<ProbVector>,
}

impl Channel {
    /// Validates and normalizes each row.
    pub fn new(raw: &[Vec<f64>], tol: f64) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::NotADistribution("empty channel".into()));
        }
        let ny = raw[0].len();
        let mut rows = Vec::with_capacity(raw.len());
        for (x, r) in raw.iter().enumerate() {
            if r.len() != ny {
                return Err(Error::NotADistribution(format!(
                    "row {x} has {} entries, expected {ny}",
                    r.len()
                )));
            }
            rows.push(ProbVector::new(r, tol)?);
        }
        Ok(Channel { rows })
    }

    /// Builds from already-validated rows (must share an output alphabet).
    pub fn from_rows(rows: Vec<ProbVector>) -> Result<Self> {
        if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(Error::NotADistribution(
                "channel rows must be nonempty and share one alphabet".into(),
            ));
        }
        Ok(Channel { rows })
    }

    /// Binary symmetric channel with crossover probability `eps`.
    pub fn bsc(eps: f64) -> Self {
        Channel {
            rows: vec![
                ProbVector::from_normalized(vec![1.0 - eps, eps]),
                ProbVector::from_normalized(vec![eps, 1.0 - eps]),
            ],
        }
    }

    /// Binary erasure channel with erasure probability `delta`;
    /// outputs ordered as (0, erasure, 1).
    pub fn bec(delta: f64) -> Self {
        Channel {
            rows: vec![
                ProbVector::from_normalized(vec![1.0 - delta, delta, 0.0]),
                ProbVector::from_normalized(vec![0.0, delta, 1.0 - delta]),
            ],
        }
    }

    /// Noiseless identity channel over `n` symbols.
    pub fn identity(n: usize) -> Self {
        Channel {
            rows: (0..n).map(|i| ProbVector::point_mass(n, i)).collect(),
        }
    }

    /// Input alphabet size.
    pub fn input_size(&self) -> usize {
        self.rows.len()
    }

    /// Output alphabet size.
    pub fn output_size(&self) -> usize {
        self.rows[0].len()
    }

    /// The conditional distribution of `Y` given `X = x`.
    pub fn row(&self, x: usize) -> &ProbVector {
        &self.rows[x]
    }

    /// `P(y|x)`.
    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.rows[x][y]
    }

    /// Raw matrix copy (row-major).
    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.as_slice().to_vec()).collect()
    }
}

// ---------------------------------------------------------------------------
// JointPMF
// ---------------------------------------------------------------------------

/// A joint distribution `P_XY` over a product of finite alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPMF {
    cells: Vec<Vec<f64>>,
}

/// Marginals and induced conditionals of a joint. Conditional rows at
/// zero-probability conditioning points are `None` (undefined) and must be
/// excluded from downstream sums.
#[derive(Debug, Clone)]
pub struct Marginals {
    pub px: ProbVector,
    pub py: ProbVector,
    pub y_given_x: Vec<Option<ProbVector>>,
    pub x_given_y: Vec<Option<ProbVector>>,
}

impl JointPMF {
    /// Validates and normalizes the full matrix (total mass 1).
    pub fn new(raw: &[Vec<f64>], tol: f64) -> Result<Self> {
        if raw.is_empty() || raw[0].is_empty() {
            return Err(Error::NotADistribution("empty joint".into()));
        }
        let ny = raw[0].len();
        if raw.iter().any(|r| r.len() != ny) {
            return Err(Error::NotADistribution("ragged joint matrix".into()));
        }
        let flat: Vec<f64> = raw.iter().flatten().cloned().collect();
        let norm = validate_simplex(&flat, tol)?;
        let cells = norm.chunks(ny).map(|c| c.to_vec()).collect();
        Ok(JointPMF { cells })
    }

    /// Composes an input distribution with a channel: `P(x,y) = px(x)·W(y|x)`.
    pub fn from_channel(px: &ProbVector, channel: &Channel) -> Self {
        assert_eq!(px.len(), channel.input_size());
        let cells = (0..px.len())
            .map(|x| {
                channel
                    .row(x)
                    .as_slice()
                    .iter()
                    .map(|&w| px[x] * w)
                    .collect()
            })
            .collect();
        JointPMF { cells }
    }

    /// Independent product `P(x,y) = px(x)·py(y)`.
    pub fn product(px: &ProbVector, py: &ProbVector) -> Self {
        let cells = (0..px.len())
            .map(|x| (0..py.len()).map(|y| px[x] * py[y]).collect())
            .collect();
        JointPMF { cells }
    }

    /// Number of `X` symbols.
    pub fn nx(&self) -> usize {
        self.cells.len()
    }

    /// Number of `Y` symbols.
    pub fn ny(&self) -> usize {
        self.cells[0].len()
    }

    /// `P(x,y)`.
    pub fn cell(&self, x: usize, y: usize) -> f64 {
        self.cells[x][y]
    }

    /// The raw matrix.
    pub fn cells(&self) -> &[Vec<f64>] {
        &self.cells
    }

    /// Marginal over `X`.
    pub fn x_marginal(&self) -> ProbVector {
        ProbVector::from_normalized(
            self.cells.iter().map(|r| r.iter().sum()).collect(),
        )
    }

    /// Marginal over `Y`.
    pub fn y_marginal(&self) -> ProbVector {
        let mut py = vec![0.0; self.ny()];
        for row in &self.cells {
            for (y, &p) in row.iter().enumerate() {
                py[y] += p;
            }
        }
        ProbVector::from_normalized(py)
    }

    /// Both marginals and both induced conditionals.
    pub fn marginals(&self) -> Marginals {
        let px = self.x_marginal();
        let py = self.y_marginal();
        let y_given_x = (0..self.nx())
            .map(|x| {
                if px[x] > 0.0 {
                    Some(ProbVector::from_normalized(
                        self.cells[x].iter().map(|&p| p / px[x]).collect(),
                    ))
                } else {
                    None
                }
            })
            .collect();
        let x_given_y = (0..self.ny())
            .map(|y| {
                if py[y] > 0.0 {
                    Some(ProbVector::from_normalized(
                        (0..self.nx()).map(|x| self.cells[x][y] / py[y]).collect(),
                    ))
                } else {
                    None
                }
            })
            .collect();
        Marginals {
            px,
            py,
            y_given_x,
            x_given_y,
        }
    }

    /// The transposed joint (roles of `X` and `Y` swapped).
    pub fn swap(&self) -> JointPMF {
        let cells = (0..self.ny())
            .map(|y| (0..self.nx()).map(|x| self.cells[x][y]).collect())
            .collect();
        JointPMF { cells }
    }

    /// The joint of two independent pairs: `((X1,X2),(Y1,Y2))` with
    /// row-major composite indices.
    pub fn tensor(&self, other: &JointPMF) -> JointPMF {
        let (nx1, ny1) = (self.nx(), self.ny());
        let (nx2, ny2) = (other.nx(), other.ny());
        let cells = (0..nx1 * nx2)
            .map(|x| {
                let (x1, x2) = (x / nx2, x % nx2);
                (0..ny1 * ny2)
                    .map(|y| {
                        let (y1, y2) = (y / ny2, y % ny2);
                        self.cells[x1][y1] * other.cells[x2][y2]
                    })
                    .collect()
            })
            .collect();
        JointPMF { cells }
    }

    /// Natural logs of all cells, same shape as `cells`.
    pub fn log_cells(&self) -> Vec<Vec<f64>> {
        self.cells
            .iter()
            .map(|r| r.iter().map(|&p| p.ln()).collect())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// JointTensor
// ---------------------------------------------------------------------------

/// A rank-3 joint distribution `P_XYZ`, indexed `[x][y][z]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTensor {
    cells: Vec<Vec<Vec<f64>>>,
}

impl JointTensor {
    /// Validates and normalizes the full tensor.
    pub fn new(raw: &[Vec<Vec<f64>>], tol: f64) -> Result<Self> {
        if raw.is_empty() || raw[0].is_empty() || raw[0][0].is_empty() {
            return Err(Error::NotADistribution("empty tensor".into()));
        }
        let (ny, nz) = (raw[0].len(), raw[0][0].len());
        if raw
            .iter()
            .any(|p| p.len() != ny || p.iter().any(|r| r.len() != nz))
        {
            return Err(Error::NotADistribution("ragged joint tensor".into()));
        }
        let flat: Vec<f64> = raw
            .iter()
            .flat_map(|p| p.iter().flatten().cloned())
            .collect();
        let norm = validate_simplex(&flat, tol)?;
        let mut it = norm.into_iter();
        let cells = (0..raw.len())
            .map(|_| {
                (0..ny)
                    .map(|_| (0..nz).map(|_| it.next().unwrap()).collect())
                    .collect()
            })
            .collect();
        Ok(JointTensor { cells })
    }

    pub fn nx(&self) -> usize {
        self.cells.len()
    }

    pub fn ny(&self) -> usize {
        self.cells[0].len()
    }

    pub fn nz(&self) -> usize {
        self.cells[0][0].len()
    }

    /// `P(x,y,z)`.
    pub fn cell(&self, x: usize, y: usize, z: usize) -> f64 {
        self.cells[x][y][z]
    }

    /// Marginal over `Z`.
    pub fn z_marginal(&self) -> ProbVector {
        let mut pz = vec![0.0; self.nz()];
        for plane in &self.cells {
            for row in plane {
                for (z, &p) in row.iter().enumerate() {
                    pz[z] += p;
                }
            }
        }
        ProbVector::from_normalized(pz)
    }

    /// The conditional joint `P_{XY|Z=z}`, or `None` when `P_Z(z) = 0`.
    pub fn xy_given_z(&self, z: usize) -> Option<JointPMF> {
        let mut mass = 0.0;
        for plane in &self.cells {
            for row in plane {
                mass += row[z];
            }
        }
        if mass <= 0.0 {
            return None;
        }
        let cells = self
            .cells
            .iter()
            .map(|plane| plane.iter().map(|row| row[z] / mass).collect())
            .collect();
        Some(JointPMF { cells })
    }

    /// Flattens to a pair joint of `X` against the composite `(Y,Z)`
    /// (row-major composite index `y·nz + z`).
    pub fn flatten_yz(&self) -> JointPMF {
        let cells = self
            .cells
            .iter()
            .map(|plane| plane.iter().flatten().cloned().collect())
            .collect();
        JointPMF { cells }
    }
}

// ---------------------------------------------------------------------------
// Nested norms
// ---------------------------------------------------------------------------

/// The nested weighted norm `‖ ‖f(·,y)‖_{L^inner(inner_weights)} ‖_{L^outer(outer_weights)}`
/// for a nonnegative matrix `f` indexed `(x,y)`: the inner norm runs over `x`
/// for each fixed `y`, the outer norm over `y`.
///
/// An order of exactly `0.0` selects the p→0+ limit `exp E[log f]`
/// (the weighted geometric mean); negative orders are the usual quasi-norms.
/// Terms with zero weight contribute nothing.
pub fn nested_norm(
    f: &[Vec<f64>],
    inner_order: f64,
    outer_order: f64,
    inner_weights: &ProbVector,
    outer_weights: &ProbVector,
) -> f64 {
    assert_eq!(f.len(), inner_weights.len(), "f rows must match inner weights");
    assert!(
        f.iter().all(|r| r.len() == outer_weights.len()),
        "f cols must match outer weights"
    );
    let ny = outer_weights.len();
    let mut inner_logs = vec![f64::NEG_INFINITY; ny];
    let mut col_logs = vec![0.0; f.len()];
    for (y, slot) in inner_logs.iter_mut().enumerate() {
        for (x, row) in f.iter().enumerate() {
            debug_assert!(row[y] >= 0.0, "nested_norm requires nonnegative f");
            col_logs[x] = row[y].abs().ln();
        }
        *slot = log_p_norm(inner_weights.as_slice(), &col_logs, inner_order);
    }
    log_p_norm(outer_weights.as_slice(), &inner_logs, outer_order).exp()
}

/// Log-domain weighted dot product `log Σ_x w(x)·exp(logs(x))`, re-exported
/// here for consumers that hold a [`ProbVector`] of weights.
pub fn log_expectation(weights: &ProbVector, logs: &[f64]) -> f64 {
    log_dot_exp(weights.as_slice(), logs)
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

/// What `random_instance` should generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    /// A Dirichlet(1) joint over the product alphabet.
    Joint,
    /// A Dirichlet(1) prior composed with a row-wise Dirichlet(1) channel.
    ChannelPrior,
}

/// The seeded PRNG used everywhere: ChaCha8 keyed by a 64-bit seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sample_exp(rng: &mut ChaCha8Rng) -> f64 {
    // Standard exponential via inverse CDF; clamped away from exactly 0 so
    // sampled distributions are full-support.
    let u: f64 = rng.gen();
    (-(1.0 - u).ln()).max(1e-300)
}

/// Uniform (Dirichlet(1)) sample from the simplex; full support.
pub fn sample_prob_vector(rng: &mut ChaCha8Rng, n: usize) -> ProbVector {
    let e: Vec<f64> = (0..n).map(|_| sample_exp(rng)).collect();
    let s: f64 = e.iter().sum();
    ProbVector::from_normalized(e.iter().map(|&v| v / s).collect())
}

/// Row-wise Dirichlet(1) channel; full support.
pub fn sample_channel(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> Channel {
    Channel {
        rows: (0..nx).map(|_| sample_prob_vector(rng, ny)).collect(),
    }
}

/// Dirichlet(1) joint over the product alphabet; full support.
/// Cells are sampled in row-major order for cross-run determinism.
pub fn sample_joint(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> JointPMF {
    let e: Vec<Vec<f64>> = (0..nx)
        .map(|_| (0..ny).map(|_| sample_exp(rng)).collect())
        .collect();
    let s: f64 = e.iter().flatten().sum();
    JointPMF {
        cells: e
            .iter()
            .map(|r| r.iter().map(|&v| v / s).collect())
            .collect(),
    }
}

/// Dirichlet(1) rank-3 joint; full support.
pub fn sample_tensor(rng: &mut ChaCha8Rng, nx: usize, ny: usize, nz: usize) -> JointTensor {
    let e: Vec<Vec<Vec<f64>>> = (0..nx)
        .map(|_| {
            (0..ny)
                .map(|_| (0..nz).map(|_| sample_exp(rng)).collect())
                .collect()
        })
        .collect();
    let s: f64 = e.iter().flat_map(|p| p.iter().flatten()).sum();
    JointTensor {
        cells: e
            .iter()
            .map(|p| {
                p.iter()
                    .map(|r| r.iter().map(|&v| v / s).collect())
                    .collect()
            })
            .collect(),
    }
}

/// Deterministic seeded random joint of the requested kind and shape.
pub fn random_instance(seed: u64, nx: usize, ny: usize, kind: InstanceKind) -> JointPMF {
    let mut rng = seeded_rng(seed);
    match kind {
        InstanceKind::Joint => sample_joint(&mut rng, nx, ny),
        InstanceKind::ChannelPrior => {
            let px = sample_prob_vector(&mut rng, nx);
            let ch = sample_channel(&mut rng, nx, ny);
            JointPMF::from_channel(&px, &ch)
        }
    }
}

// ---------------------------------------------------------------------------
// File I/O
// ---------------------------------------------------------------------------

/// On-disk JSON schemas: exactly one of the three forms.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pxy: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pxyz: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    px: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pygx: Option<Vec<Vec<f64>>>,
}

/// A parsed and validated distribution file.
#[derive(Debug, Clone)]
pub enum Distribution {
    Joint(JointPMF),
    Triple(JointTensor),
    ChannelPrior { px: ProbVector, pygx: Channel },
}

impl Distribution {
    /// The pair joint this file denotes (composing channel+prior forms;
    /// rejecting triples).
    pub fn into_joint(self) -> Result<JointPMF> {
        match self {
            Distribution::Joint(j) => Ok(j),
            Distribution::ChannelPrior { px, pygx } => {
                Ok(JointPMF::from_channel(&px, &pygx))
            }
            Distribution::Triple(_) => Err(Error::Parse(
                "expected a pair joint, found a rank-3 tensor (pxyz)".into(),
            )),
        }
    }

    /// The rank-3 joint this file denotes.
    pub fn into_triple(self) -> Result<JointTensor> {
        match self {
            Distribution::Triple(t) => Ok(t),
            _ => Err(Error::Parse("expected a pxyz tensor".into())),
        }
    }
}

/// Parses one of the three JSON schemas
/// (`{"pxy": [[...]]}`, `{"pxyz": [[[...]]]}`, `{"px": [...], "pygx": [[...]]}`)
/// and validates with tolerance `tol`.
pub fn parse_distribution(text: &str, tol: f64) -> Result<Distribution> {
    let file: DistributionFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    match file {
        DistributionFile {
            pxy: Some(m),
            pxyz: None,
            px: None,
            pygx: None,
        } => Ok(Distribution::Joint(JointPMF::new(&m, tol)?)),
        DistributionFile {
            pxy: None,
            pxyz: Some(t),
            px: None,
            pygx: None,
        } => Ok(Distribution::Triple(JointTensor::new(&t, tol)?)),
        DistributionFile {
            pxy: None,
            pxyz: None,
            px: Some(p),
            pygx: Some(w),
        } => {
            let px = ProbVector::new(&p, tol)?;
            let pygx = Channel::new(&w, tol)?;
            if px.len() != pygx.input_size() {
                return Err(Error::Parse(format!(
                    "field px has {} entries but pygx has {} rows",
                    px.len(),
                    pygx.input_size()
                )));
            }
            Ok(Distribution::ChannelPrior { px, pygx })
        }
        _ => Err(Error::Parse(
            "expected exactly one of: {pxy}, {pxyz}, {px, pygx}".into(),
        )),
    }
}

/// Reads and validates a distribution file.
pub fn read_distribution(path: impl AsRef<Path>, tol: f64) -> Result<Distribution> {
    let text = std::fs::read_to_string(path)?;
    parse_distribution(&text, tol)
}

/// Serializes a pair joint to the `{"pxy": ...}` schema.
pub fn write_joint(path: impl AsRef<Path>, joint: &JointPMF) -> Result<()> {
    let file = DistributionFile {
        pxy: Some(joint.cells().to_vec()),
        pxyz: None,
        px: None,
        pygx: None,
    };
    std::fs::write(path, serde_json::to_string_pretty(&file).unwrap())?;
    Ok(())
}

/// Formats one table value with 17 significant digits, enough for a
/// lossless f64 round-trip.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a CSV table: header row, then rows of 17-significant-digit decimals.
pub fn write_table(
    out: &mut dyn std::io::Write,
    header: &[&str],
    rows: &[Vec<f64>],
) -> Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Writes a CSV table to a file path.
pub fn write_table_to_path(
    path: impl AsRef<Path>,
    header: &[&str],
    rows: &[Vec<f64>],
) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    write_table(&mut f, header, rows)?;
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn validation_accepts_and_normalizes() {
        let p = ProbVector::new(&[0.5, 0.5000000001], 1e-6).unwrap();
        assert_relative_eq!(p.as_slice().iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        assert!(ProbVector::new(&[0.7, 0.2], 1e-6).is_err());
        assert!(ProbVector::new(&[1.5, -0.5], 1e-6).is_err());
        // Tiny negatives are clipped, not rejected.
        let p = ProbVector::new(&[1.0 + 1e-12, -1e-12], 1e-9).unwrap();
        assert_eq!(p[1], 0.0);
    }

    #[test]
    fn marginals_of_bsc_quarter() {
        // BSC(1/4) with Ber(1/2) input: joint [[3/8,1/8],[1/8,3/8]].
        let j = JointPMF::from_channel(&ProbVector::uniform(2), &Channel::bsc(0.25));
        let m = j.marginals();
        assert_relative_eq!(m.py[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(m.px[1], 0.5, epsilon = 1e-15);
        assert_relative_eq!(j.cell(0, 0), 0.375, epsilon = 1e-15);
        // Recomposition reproduces the joint wherever the marginal is positive.
        for x in 0..2 {
            for y in 0..2 {
                let w = m.y_given_x[x].as_ref().unwrap();
                assert_relative_eq!(m.px[x] * w[y], j.cell(x, y), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_marginal_rows_are_undefined() {
        let j = JointPMF::new(&[vec![1.0, 0.0], vec![0.0, 0.0]], 1e-9).unwrap();
        let m = j.marginals();
        assert!(m.x_given_y[1].is_none());
        assert!(m.y_given_x[1].is_none());
        assert!(m.x_given_y[0].is_some());
    }

    #[test]
    fn nested_norm_basics() {
        let w = ProbVector::uniform(2);
        // Constant matrix: every nested norm is the constant.
        let c = vec![vec![3.0, 3.0], vec![3.0, 3.0]];
        for &(p, q) in &[(2.0, 1.0), (0.5, 3.0), (0.0, 1.0), (-1.0, 2.0)] {
            assert_relative_eq!(nested_norm(&c, p, q, &w, &w), 3.0, epsilon = 1e-12);
        }
        // Column [1,2] under uniform weights, inner order 2: sqrt(2.5).
        let f = vec![vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_relative_eq!(
            nested_norm(&f, 2.0, 1.0, &w, &w),
            2.5f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn nested_norm_monotone_in_order_and_zero_limit() {
        let mut rng = seeded_rng(7);
        for _ in 0..50 {
            let w = sample_prob_vector(&mut rng, 3);
            let wy = sample_prob_vector(&mut rng, 4);
            let f: Vec<Vec<f64>> = (0..3)
                .map(|_| (0..4).map(|_| rng.gen::<f64>() + 0.05).collect())
                .collect();
            let mut prev = f64::NEG_INFINITY;
            for &p in &[0.0, 1e-4, 0.5, 1.0, 2.0, 4.0] {
                let v = nested_norm(&f, p, 1.0, &w, &wy);
                assert!(v >= prev - 1e-12, "norm must be nondecreasing in order");
                prev = v;
            }
            // p -> 0+ limit agrees with the explicit geometric-mean formula.
            let lim = nested_norm(&f, 0.0, 1.0, &w, &wy);
            let near = nested_norm(&f, 1e-4, 1.0, &w, &wy);
            // First-order continuity: the gap is O(p · Var(log f)).
            assert!((lim - near).abs() < 1e-3 * lim.max(1.0));
        }
    }

    #[test]
    fn random_instances_are_deterministic_and_full_support() {
        let a = random_instance(0, 2, 2, InstanceKind::Joint);
        let b = random_instance(0, 2, 2, InstanceKind::Joint);
        let c = random_instance(1, 2, 2, InstanceKind::Joint);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.cells().iter().flatten().all(|&p| p > 0.0));
        let d = random_instance(3, 3, 4, InstanceKind::ChannelPrior);
        assert_eq!((d.nx(), d.ny()), (3, 4));
        assert!(d.cells().iter().flatten().all(|&p| p > 0.0));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"pxy": [[0.375,0.125],[0.125,0.375]]}"#;
        let d = parse_distribution(text, 1e-9).unwrap();
        let j = d.into_joint().unwrap();
        assert_relative_eq!(j.cell(0, 0), 0.375, epsilon = 1e-15);

        let text = r#"{"px":[0.5,0.5],"pygx":[[0.75,0.25],[0.25,0.75]]}"#;
        let j2 = parse_distribution(text, 1e-9).unwrap().into_joint().unwrap();
        assert_eq!(j.cells(), j2.cells());

        assert!(parse_distribution("{not json", 1e-9).is_err());
        assert!(parse_distribution(r#"{"pxy": [[0.9,0.2]]}"#, 1e-6).is_err());
    }

    #[test]
    fn table_format_round_trips_f64() {
        let vals = [0.1, 1.0 / 3.0, 1e-300, 12345.6789];
        for &v in &vals {
            let s = format_value(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v, back, "17 significant digits must round-trip");
        }
        let mut buf = Vec::new();
        write_table(&mut buf, &["alpha", "value"], &[vec![2.0, 0.25]]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("alpha,value\n"));
    }

    #[test]
    fn tensor_marginals_and_flatten() {
        let mut rng = seeded_rng(11);
        let t = sample_tensor(&mut rng, 2, 3, 2);
        let pz = t.z_marginal();
        assert_relative_eq!(pz.as_slice().iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        let flat = t.flatten_yz();
        assert_eq!((flat.nx(), flat.ny()), (2, 6));
        assert_relative_eq!(flat.cell(1, 2 * 2 + 1), t.cell(1, 2, 1), epsilon = 1e-15);
        let c0 = t.xy_given_z(0).unwrap();
        let total: f64 = c0.cells().iter().flatten().sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }
}
