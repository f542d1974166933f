//! Dense statevector simulation for up to [`MAX_QUBITS`] qubits.
//!
//! Bit order: bit `k` of a basis index is the value of qubit `k`, so qubit 0
//! is the least significant bit. `|101⟩` written q2 q1 q0 is index 5.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 8;

/// Tolerance on `Σ|c|² = 1` accepted when constructing a state.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::domain(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// `|0…0⟩`
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Wraps explicit amplitudes. The length must be a power of two and the
    /// vector must be normalized within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::domain(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubit_count(n_qubits)?;
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::domain(format!("state norm {norm} differs from 1")));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::domain("cannot normalize a zero vector"));
        }
        for c in &mut amplitudes {
            *c /= norm;
        }
        Self::from_amplitudes(amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Returns the image of this state under `gate`.
    pub fn apply(&self, gate: &GateInstance) -> Result<Self> {
        let mut out = self.clone();
        out.apply_in_place(gate)?;
        Ok(out)
    }

    fn apply_in_place(&mut self, gate: &GateInstance) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let amps = &mut self.amplitudes;
        let a = 1usize << gate.qubit_a;
        match gate.kind {
            GateKind::H => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                for i in (0..amps.len()).filter(|i| i & a == 0) {
                    let (x, y) = (amps[i], amps[i | a]);
                    amps[i] = (x + y) * h;
                    amps[i | a] = (x - y) * h;
                }
            }
            GateKind::X => {
                for i in (0..amps.len()).filter(|i| i & a == 0) {
                    amps.swap(i, i | a);
                }
            }
            GateKind::Y => {
                let im = Complex64::i();
                for i in (0..amps.len()).filter(|i| i & a == 0) {
                    let (x, y) = (amps[i], amps[i | a]);
                    amps[i] = -im * y;
                    amps[i | a] = im * x;
                }
            }
            GateKind::Z | GateKind::S | GateKind::T => {
                let phase = match gate.kind {
                    GateKind::Z => Complex64::new(-1.0, 0.0),
                    GateKind::S => Complex64::i(),
                    _ => Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
                };
                for i in (0..amps.len()).filter(|i| i & a != 0) {
                    amps[i] *= phase;
                }
            }
            GateKind::Cnot => {
                let b = 1usize << gate.target();
                for i in (0..amps.len()).filter(|i| i & a != 0 && i & b == 0) {
                    amps.swap(i, i | b);
                }
            }
            GateKind::Cz => {
                let b = 1usize << gate.target();
                for i in (0..amps.len()).filter(|i| i & a != 0 && i & b != 0) {
                    amps[i] = -amps[i];
                }
            }
            GateKind::Swap => {
                let b = 1usize << gate.target();
                for i in (0..amps.len()).filter(|i| i & a != 0 && i & b == 0) {
                    amps.swap(i, (i & !a) | b);
                }
            }
        }
        Ok(())
    }

    /// Born-rule probabilities `|c_i|²` of every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Probability that measuring `qubit` yields `value`.
    pub fn marginal_probability(&self, qubit: usize, value: bool) -> Result<f64> {
        if qubit >= self.n_qubits {
            return Err(Error::domain(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        let mask = 1usize << qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & mask != 0) == value)
            .map(|(_, c)| c.norm_sqr())
            .sum())
    }

    /// Estimates `P(qubit = 1)` from `shots` simulated measurements.
    pub fn sample_marginal<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        shots: u64,
        rng: &mut R,
    ) -> Result<f64> {
        if shots == 0 {
            return Err(Error::domain("shot count must be positive"));
        }
        let p = self.marginal_probability(qubit, true)?.clamp(0.0, 1.0);
        let ones = Binomial::new(shots, p)
            .map_err(|e| Error::domain(format!("binomial sampler: {e}")))?
            .sample(rng);
        Ok(ones as f64 / shots as f64)
    }
}

fn check_qubit_count(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::domain(format!(
            "qubit count {n_qubits} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    Cnot,
    Cz,
    Swap,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::T,
        GateKind::Cnot,
        GateKind::Cz,
        GateKind::Swap,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::T => "T",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::format(0, format!("unknown gate kind `{s}`")))
    }
}

/// Ordered set of gate kinds a chromosome's gate ids index into.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GatePool(Vec<GateKind>);

impl GatePool {
    pub fn new(kinds: Vec<GateKind>) -> Result<Self> {
        if kinds.is_empty() {
            return Err(Error::domain("gate pool is empty"));
        }
        Ok(Self(kinds))
    }

    pub fn kinds(&self) -> &[GateKind] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<GateKind> {
        self.0.get(id).copied()
    }

    /// Ids of the single-qubit kinds, in pool order.
    pub fn single_qubit_ids(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i].arity() == 1).collect()
    }
}

/// `{H, X, Z, CNOT, SWAP}`
impl Default for GatePool {
    fn default() -> Self {
        Self(vec![
            GateKind::H,
            GateKind::X,
            GateKind::Z,
            GateKind::Cnot,
            GateKind::Swap,
        ])
    }
}

impl FromStr for GatePool {
    type Err = Error;

    /// Comma-separated kind names, e.g. `H,X,Z,CNOT,SWAP`.
    fn from_str(s: &str) -> Result<Self> {
        let kinds = s
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<Vec<_>>>()?;
        Self::new(kinds)
    }
}

impl fmt::Display for GatePool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.0.iter().map(|k| k.name()).collect();
        f.write_str(&names.join(","))
    }
}

/// A gate placed on specific qubits. For CNOT `qubit_a` is the control and
/// `qubit_b` the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GateInstance {
    pub kind: GateKind,
    pub qubit_a: usize,
    pub qubit_b: Option<usize>,
}

impl GateInstance {
    pub fn single(kind: GateKind, qubit: usize) -> Self {
        Self {
            kind,
            qubit_a: qubit,
            qubit_b: None,
        }
    }

    pub fn pair(kind: GateKind, qubit_a: usize, qubit_b: usize) -> Self {
        Self {
            kind,
            qubit_a,
            qubit_b: Some(qubit_b),
        }
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }

    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q)
    }

    pub fn z(q: usize) -> Self {
        Self::single(GateKind::Z, q)
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::pair(GateKind::Cnot, control, target)
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self::pair(GateKind::Swap, a, b)
    }

    fn target(&self) -> usize {
        self.qubit_b.expect("validated two-qubit gate")
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let in_range = |q: usize| {
            if q < n_qubits {
                Ok(())
            } else {
                Err(Error::domain(format!(
                    "{} acts on qubit {q} but the register has {n_qubits} qubits",
                    self.kind
                )))
            }
        };
        in_range(self.qubit_a)?;
        match (self.kind.arity(), self.qubit_b) {
            (1, None) => Ok(()),
            (1, Some(_)) => Err(Error::domain(format!(
                "{} takes a single qubit",
                self.kind
            ))),
            (_, None) => Err(Error::domain(format!("{} needs two qubits", self.kind))),
            (_, Some(b)) => {
                in_range(b)?;
                if b == self.qubit_a {
                    Err(Error::domain(format!(
                        "{} acts twice on qubit {b}",
                        self.kind
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for GateInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.qubit_b {
            Some(b) => write!(f, "{} {} {}", self.kind, self.qubit_a, b),
            None => write!(f, "{} {}", self.kind, self.qubit_a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<GateInstance>,
}

impl Circuit {
    pub fn new(n_qubits: usize, gates: Vec<GateInstance>) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        for g in &gates {
            g.validate(n_qubits)?;
        }
        Ok(Self { n_qubits, gates })
    }

    pub fn empty(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, Vec::new())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[GateInstance] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::domain("cannot concatenate circuits of different width"));
        }
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Ok(Circuit {
            n_qubits: self.n_qubits,
            gates,
        })
    }

    /// Applies the gates in order to `initial`.
    pub fn run(&self, initial: &StateVector) -> Result<StateVector> {
        if initial.n_qubits != self.n_qubits {
            return Err(Error::domain(format!(
                "circuit has {} qubits, state has {}",
                self.n_qubits, initial.n_qubits
            )));
        }
        let mut state = initial.clone();
        for g in &self.gates {
            state.apply_in_place(g)?;
        }
        Ok(state)
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn run_from_zero(&self) -> Result<StateVector> {
        self.run(&StateVector::zero(self.n_qubits)?)
    }

    /// Parses the line-oriented circuit text format:
    ///
    /// ```text
    /// qubits 2
    /// H 0
    /// CNOT 0 1
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (header_line, header) = lines
            .next()
            .ok_or_else(|| Error::format(1, "missing `qubits <n>` header"))?;
        let n_qubits = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["qubits", n] => n
                .parse::<usize>()
                .map_err(|_| Error::format(header_line, format!("bad qubit count `{n}`")))?,
            _ => return Err(Error::format(header_line, "expected `qubits <n>`")),
        };
        check_qubit_count(n_qubits).map_err(|e| Error::format(header_line, e.to_string()))?;

        let mut gates = Vec::new();
        for (line, content) in lines {
            let fields: Vec<_> = content.split_whitespace().collect();
            let kind: GateKind = fields[0]
                .parse()
                .map_err(|_| Error::format(line, format!("unknown gate kind `{}`", fields[0])))?;
            let qubit = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::format(line, format!("bad qubit index `{s}`")))
            };
            let gate = match (kind.arity(), &fields[1..]) {
                (1, [a]) => GateInstance::single(kind, qubit(a)?),
                (2, [a, b]) => GateInstance::pair(kind, qubit(a)?, qubit(b)?),
                (arity, _) => {
                    return Err(Error::format(
                        line,
                        format!("{kind} expects {arity} qubit index(es)"),
                    ))
                }
            };
            gate.validate(n_qubits)
                .map_err(|e| Error::format(line, e.to_string()))?;
            gates.push(gate);
        }
        Ok(Self { n_qubits, gates })
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Circuit::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_state(state: &StateVector, expected: &[Complex64]) {
        assert_eq!(state.dim(), expected.len());
        for (a, b) in state.amplitudes().iter().zip(expected) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn basis_states() {
        let s = StateVector::basis(1, 0).unwrap();
        assert_state(&s, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = StateVector::basis(3, 5).unwrap();
        let p = s.probabilities();
        assert_eq!(p, vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(StateVector::basis(2, 4), Err(Error::Domain(_))));
        assert!(StateVector::basis(9, 0).is_err());
    }

    #[test]
    fn single_qubit_gates() {
        let zero = StateVector::zero(1).unwrap();
        let plus = zero.apply(&GateInstance::h(0)).unwrap();
        assert_state(&plus, &[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]);
        let one = zero.apply(&GateInstance::x(0)).unwrap();
        assert_state(&one, &[c(0.0, 0.0), c(1.0, 0.0)]);
        let y = zero.apply(&GateInstance::single(GateKind::Y, 0)).unwrap();
        assert_state(&y, &[c(0.0, 0.0), c(0.0, 1.0)]);
        let minus = one.apply(&GateInstance::z(0)).unwrap();
        assert_state(&minus, &[c(0.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn cnot_on_superposition() {
        // (|00⟩+|10⟩)/√2 written q0 q1: q1 = 0 and q0 in superposition, i.e.
        // indices 0 and 1. CNOT(0→1) maps index 1 → 3.
        let r = FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(vec![c(r, 0.0), c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let out = s.apply(&GateInstance::cnot(0, 1)).unwrap();
        assert_state(&out, &[c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)]);
    }

    #[test]
    fn swap_moves_excitation() {
        let s = StateVector::basis(3, 0b001).unwrap();
        let out = s.apply(&GateInstance::swap(0, 2)).unwrap();
        assert_eq!(out.probabilities()[0b100], 1.0);
        let cz = StateVector::basis(2, 3)
            .unwrap()
            .apply(&GateInstance::pair(GateKind::Cz, 1, 0))
            .unwrap();
        assert_state(&cz, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn invalid_gates_rejected() {
        let s = StateVector::zero(2).unwrap();
        assert!(s.apply(&GateInstance::h(2)).is_err());
        assert!(s.apply(&GateInstance::cnot(1, 1)).is_err());
        assert!(s.apply(&GateInstance::single(GateKind::Cnot, 0)).is_err());
        assert!(s.apply(&GateInstance::pair(GateKind::H, 0, 1)).is_err());
    }

    #[test]
    fn run_circuit_examples() {
        let empty = Circuit::empty(2).unwrap();
        let zero = StateVector::zero(2).unwrap();
        assert_eq!(empty.run(&zero).unwrap(), zero);

        let bell = Circuit::new(2, vec![GateInstance::h(0), GateInstance::cnot(0, 1)]).unwrap();
        let out = bell.run(&zero).unwrap();
        let r = FRAC_1_SQRT_2;
        assert_state(&out, &[c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)]);

        let xx = Circuit::new(1, vec![GateInstance::x(0), GateInstance::x(0)]).unwrap();
        let one_q = StateVector::zero(1).unwrap();
        assert_eq!(xx.run(&one_q).unwrap(), one_q);

        assert!(bell.run(&StateVector::zero(3).unwrap()).is_err());
    }

    #[test]
    fn probabilities_and_marginals() {
        let plus = StateVector::zero(1).unwrap().apply(&GateInstance::h(0)).unwrap();
        let p = plus.probabilities();
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.5, epsilon = 1e-15);

        let s = StateVector::from_amplitudes(vec![c(0.0, 0.0), c(0.6, 0.8)]).unwrap();
        assert_abs_diff_eq!(s.probabilities()[1], 1.0, epsilon = 1e-15);

        let bell = Circuit::new(2, vec![GateInstance::h(0), GateInstance::cnot(0, 1)])
            .unwrap()
            .run_from_zero()
            .unwrap();
        assert_abs_diff_eq!(bell.marginal_probability(0, true).unwrap(), 0.5, epsilon = 1e-15);
        let zero3 = StateVector::zero(3).unwrap();
        assert_eq!(zero3.marginal_probability(0, true).unwrap(), 0.0);
        assert!(zero3.marginal_probability(3, true).is_err());
    }

    #[test]
    fn shot_sampling_is_seeded() {
        let plus = StateVector::zero(1).unwrap().apply(&GateInstance::h(0)).unwrap();
        let a = plus
            .sample_marginal(0, 1000, &mut crate::rng::seeded(7))
            .unwrap();
        let b = plus
            .sample_marginal(0, 1000, &mut crate::rng::seeded(7))
            .unwrap();
        assert_eq!(a, b);
        assert!((a - 0.5).abs() < 0.1);
        assert!(plus.sample_marginal(0, 0, &mut crate::rng::seeded(7)).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let text = "qubits 3\nH 0\nCNOT 0 1\nSWAP 2 1\nZ 2\n";
        let circuit: Circuit = text.parse().unwrap();
        assert_eq!(circuit.len(), 4);
        assert_eq!(circuit.to_string(), text);
    }

    #[test]
    fn text_format_errors_carry_line() {
        let err = Circuit::parse("qubits 2\nH 0\nFOO 1\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 3, .. }), "{err}");
        let err = Circuit::parse("qubits 2\nCNOT 0 2\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
        let err = Circuit::parse("qubits 2\nCNOT 0\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }), "{err}");
        assert!(Circuit::parse("").is_err());
        assert!(Circuit::parse("qbits 2\n").is_err());
        assert!(Circuit::parse("qubits 2\nh 0\n").is_err());
    }

    #[test]
    fn pool_parsing() {
        let pool: GatePool = "H,X,Z,CNOT,SWAP".parse().unwrap();
        assert_eq!(pool, GatePool::default());
        assert_eq!(pool.to_string(), "H,X,Z,CNOT,SWAP");
        assert_eq!(pool.single_qubit_ids(), vec![0, 1, 2]);
        assert!("H,FOO".parse::<GatePool>().is_err());
    }
}
