//! Fitness functions and cellular-automaton target tables.
//!
//! Three scores are supported:
//!
//! * `kl`: KL divergence between a CA target table and the circuit's
//!   response table (minimized),
//! * `mw`: Meyer-Wallach entanglement of the circuit's output on `|0…0⟩`
//!   (maximized),
//! * `vn`: summed single-qubit von Neumann entropy of that output
//!   (maximized).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::entanglement::{entropy_fitness, meyer_wallach_with, MwNormalization};
use crate::error::{Error, Result};
use crate::genome::{decode, Chromosome};
use crate::rng::{derive_seed, fnv1a, seeded};
use crate::statevector::{Circuit, GatePool, StateVector};

/// Number of neighborhood triads of an elementary CA.
pub const NEIGHBORHOODS: usize = 8;

/// Added to every normalized response entry before the KL sum.
pub const KL_SMOOTHING: f64 = 1e-10;

/// Probability that the middle cell updates to 1, per triad.
///
/// Entry `i` belongs to the triad `(l, m, r)` with `i = 4l + 2m + r`, so the
/// order is `[0,0,0], [0,0,1], …, [1,1,1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TargetTable {
    probs: [f64; NEIGHBORHOODS],
}

impl TargetTable {
    pub fn new(probs: [f64; NEIGHBORHOODS]) -> Result<Self> {
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::domain(format!("table entry {p} outside [0, 1]")));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64; NEIGHBORHOODS] {
        &self.probs
    }

    /// Rule number of a deterministic table, `None` if any entry is
    /// fractional.
    pub fn to_rule(&self) -> Option<u8> {
        self.probs.iter().enumerate().try_fold(0u8, |acc, (i, &p)| {
            if p == 1.0 {
                Some(acc | 1 << i)
            } else if p == 0.0 {
                Some(acc)
            } else {
                None
            }
        })
    }

    /// Parses the table file format: eight lines, one decimal in `[0, 1]`
    /// each, in triad order. Blank lines are not allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().collect();
        if lines.len() != NEIGHBORHOODS {
            return Err(Error::format(
                0,
                format!("expected {NEIGHBORHOODS} lines, found {}", lines.len()),
            ));
        }
        let mut probs = [0.0; NEIGHBORHOODS];
        for (i, line) in lines.iter().enumerate() {
            let v: f64 = line
                .trim()
                .parse()
                .map_err(|_| Error::format(i + 1, format!("`{line}` is not a decimal")))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::format(i + 1, format!("{v} outside [0, 1]")));
            }
            probs[i] = v;
        }
        Ok(Self { probs })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// The file format accepted by [`TargetTable::parse`].
    pub fn to_text(&self) -> String {
        self.probs.iter().map(|p| format!("{p}\n")).collect()
    }
}

/// The critical stochastic CA.
pub fn critical_ca_table() -> TargetTable {
    TargetTable {
        probs: [
            0.394221, 0.094721, 0.239492, 0.408455, 0.0, 0.730203, 0.915034, 1.0,
        ],
    }
}

/// Deterministic table of an elementary CA rule: entry `i` is bit `i` of
/// `rule`.
pub fn rule_to_table(rule: u32) -> Result<TargetTable> {
    if rule > 255 {
        return Err(Error::domain(format!("rule {rule} outside 0..=255")));
    }
    let mut probs = [0.0; NEIGHBORHOODS];
    for (i, p) in probs.iter_mut().enumerate() {
        *p = f64::from((rule >> i) & 1);
    }
    Ok(TargetTable { probs })
}

/// Where a target table comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetSpec {
    Critical,
    Rule(u8),
    File(PathBuf),
}

impl TargetSpec {
    pub fn resolve(&self) -> Result<TargetTable> {
        match self {
            TargetSpec::Critical => Ok(critical_ca_table()),
            TargetSpec::Rule(r) => rule_to_table(u32::from(*r)),
            TargetSpec::File(p) => TargetTable::load(p),
        }
    }
}

impl FromStr for TargetSpec {
    type Err = Error;

    /// `critical`, `rule:<0..255>` or `file:<path>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "critical" {
            return Ok(TargetSpec::Critical);
        }
        if let Some(n) = s.strip_prefix("rule:") {
            let rule: u32 = n
                .parse()
                .map_err(|_| Error::domain(format!("bad rule number `{n}`")))?;
            return u8::try_from(rule)
                .map(TargetSpec::Rule)
                .map_err(|_| Error::domain(format!("rule {rule} outside 0..=255")));
        }
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(TargetSpec::File(PathBuf::from(p)));
        }
        Err(Error::domain(format!(
            "target `{s}` is not critical, rule:<n> or file:<path>"
        )))
    }
}

impl fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSpec::Critical => f.write_str("critical"),
            TargetSpec::Rule(r) => write!(f, "rule:{r}"),
            TargetSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl Serialize for TargetSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TargetSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which qubits hold the triad `(l, m, r)` on input and which qubit is read
/// out as the updated middle cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborhoodEncoding {
    pub left: usize,
    pub middle: usize,
    pub right: usize,
    pub readout: usize,
}

/// `l → q2`, `m → q1`, `r → q0`, read out `q0`.
impl Default for NeighborhoodEncoding {
    fn default() -> Self {
        Self {
            left: 2,
            middle: 1,
            right: 0,
            readout: 0,
        }
    }
}

impl NeighborhoodEncoding {
    fn validate(&self) -> Result<()> {
        let mut q = [self.left, self.middle, self.right];
        q.sort_unstable();
        if q != [0, 1, 2] || self.readout > 2 {
            return Err(Error::domain(format!(
                "encoding {self:?} is not a permutation of qubits 0..3"
            )));
        }
        Ok(())
    }

    /// Basis index of the input state for triad `i = 4l + 2m + r`.
    pub fn basis_index(&self, triad: usize) -> usize {
        let (l, m, r) = (triad >> 2 & 1, triad >> 1 & 1, triad & 1);
        l << self.left | m << self.middle | r << self.right
    }
}

/// `P(readout = 1)` of the circuit for each of the eight triads.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResponseVector {
    pub probs: [f64; NEIGHBORHOODS],
}

/// Exact probabilities, or estimates from `shots` measurements per triad.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Readout {
    Exact,
    Shots { shots: u64, seed: u64 },
}

pub fn ca_response(
    circuit: &Circuit,
    encoding: &NeighborhoodEncoding,
    readout: Readout,
) -> Result<ResponseVector> {
    if circuit.n_qubits() != 3 {
        return Err(Error::domain(format!(
            "CA response needs a 3-qubit circuit, got {}",
            circuit.n_qubits()
        )));
    }
    encoding.validate()?;
    let mut probs = [0.0; NEIGHBORHOODS];
    for (triad, p) in probs.iter_mut().enumerate() {
        let input = StateVector::basis(3, encoding.basis_index(triad))?;
        let out = circuit.run(&input)?;
        *p = match readout {
            Readout::Exact => out.marginal_probability(encoding.readout, true)?,
            Readout::Shots { shots, seed } => out.sample_marginal(
                encoding.readout,
                shots,
                &mut seeded(derive_seed(seed, triad as u64)),
            )?,
        };
    }
    Ok(ResponseVector { probs })
}

fn normalize(v: &[f64], what: &str) -> Result<Vec<f64>> {
    if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::domain(format!("{what} entry {x} is not a nonnegative number")));
    }
    let sum: f64 = v.iter().sum();
    if sum == 0.0 {
        return Err(Error::domain(format!("{what} is all zeros and cannot be normalized")));
    }
    Ok(v.iter().map(|x| x / sum).collect())
}

/// `D(P‖Q) = Σ P log₂(P/Q)` after normalizing both inputs to sum to one.
///
/// Terms with `P = 0` contribute nothing; a term with `P > 0` and `Q = 0`
/// makes the divergence infinite.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    kl_divergence_smoothed(p, q, 0.0)
}

/// As [`kl_divergence`], with `eps` added to every normalized `Q` entry and
/// `Q` renormalized, so the result stays finite and nonnegative.
pub fn kl_divergence_smoothed(p: &[f64], q: &[f64], eps: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::domain(format!(
            "distributions have lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    let p = normalize(p, "P")?;
    let q = normalize(q, "Q")?;
    let z = 1.0 + eps * q.len() as f64;
    let d: f64 = p
        .iter()
        .zip(&q)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, qi)| {
            let qi = (qi + eps) / z;
            if qi == 0.0 {
                f64::INFINITY
            } else {
                pi * (pi / qi).log2()
            }
        })
        .sum();
    Ok(d.max(0.0))
}

/// `D(target ‖ response)` with [`KL_SMOOTHING`]; 0 is a perfect match.
pub fn kl_fitness(
    circuit: &Circuit,
    target: &TargetTable,
    encoding: &NeighborhoodEncoding,
    readout: Readout,
) -> Result<f64> {
    // A unitary circuit's exact response always sums to 4 over the eight
    // triads, so normalization only fails for degenerate shot estimates.
    let response = ca_response(circuit, encoding, readout)?;
    kl_divergence_smoothed(target.probs(), &response.probs, KL_SMOOTHING)
}

/// Meyer-Wallach entanglement of the circuit's output on `|0…0⟩`.
pub fn mw_fitness(circuit: &Circuit) -> Result<f64> {
    meyer_wallach_with(&circuit.run_from_zero()?, MwNormalization::Standard)
}

/// Summed single-qubit entropy of the circuit's output on `|0…0⟩`.
pub fn vn_fitness(circuit: &Circuit) -> Result<f64> {
    if circuit.n_qubits() < 2 {
        return Err(Error::domain("entropy fitness needs at least two qubits"));
    }
    Ok(entropy_fitness(&circuit.run_from_zero()?))
}

/// Whether lower or higher scores are better.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// `a` is strictly better than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Minimize => a < b,
            Direction::Maximize => a > b,
        }
    }

    /// Maps a score to a key where smaller is always better.
    pub fn key(self, f: f64) -> f64 {
        match self {
            Direction::Minimize => f,
            Direction::Maximize => -f,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitnessKind {
    Kl,
    Mw,
    Vn,
}

impl FitnessKind {
    pub fn direction(self) -> Direction {
        match self {
            FitnessKind::Kl => Direction::Minimize,
            FitnessKind::Mw | FitnessKind::Vn => Direction::Maximize,
        }
    }
}

impl FromStr for FitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kl" => Ok(FitnessKind::Kl),
            "mw" => Ok(FitnessKind::Mw),
            "vn" => Ok(FitnessKind::Vn),
            other => Err(Error::domain(format!("unknown fitness `{other}`"))),
        }
    }
}

impl fmt::Display for FitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitnessKind::Kl => "kl",
            FitnessKind::Mw => "mw",
            FitnessKind::Vn => "vn",
        })
    }
}

/// A fully configured chromosome scorer.
#[derive(Clone, Debug)]
pub enum Objective {
    Kl {
        target: TargetTable,
        encoding: NeighborhoodEncoding,
        /// 0 means exact probabilities.
        shots: u64,
        /// Base seed for shot sampling; each chromosome samples from a
        /// stream keyed on its serialized genes.
        shot_seed: u64,
    },
    Mw(MwNormalization),
    Vn,
}

impl Objective {
    pub fn kl(target: TargetTable) -> Self {
        Objective::Kl {
            target,
            encoding: NeighborhoodEncoding::default(),
            shots: 0,
            shot_seed: 0,
        }
    }

    pub fn mw() -> Self {
        Objective::Mw(MwNormalization::Standard)
    }

    pub fn direction(&self) -> Direction {
        match self {
            Objective::Kl { .. } => Direction::Minimize,
            _ => Direction::Maximize,
        }
    }

    pub fn score_circuit(&self, circuit: &Circuit, key: &str) -> Result<f64> {
        match self {
            Objective::Kl {
                target,
                encoding,
                shots,
                shot_seed,
            } => {
                let readout = if *shots == 0 {
                    Readout::Exact
                } else {
                    Readout::Shots {
                        shots: *shots,
                        seed: derive_seed(*shot_seed, fnv1a(key.as_bytes())),
                    }
                };
                kl_fitness(circuit, target, encoding, readout)
            }
            Objective::Mw(norm) => meyer_wallach_with(&circuit.run_from_zero()?, *norm),
            Objective::Vn => vn_fitness(circuit),
        }
    }

    pub fn score(&self, chromosome: &Chromosome, pool: &GatePool) -> Result<f64> {
        let circuit = decode(chromosome, pool)?;
        self.score_circuit(&circuit, &chromosome.to_csv())
    }
}
