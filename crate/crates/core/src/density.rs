//! Density operators, partial traces and purity.

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// Tolerance for the Hermiticity and unit-trace checks.
pub const TOLERANCE: f64 = 1e-10;

/// Most negative eigenvalue accepted as floating-point noise on a PSD matrix.
pub const PSD_TOLERANCE: f64 = 1e-9;

/// A Hermitian, positive semi-definite, unit-trace matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validating constructor. `entries` is row-major, `dim × dim`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::domain(format!("dimension {dim} is not a power of two")));
        }
        if entries.len() != dim * dim {
            return Err(Error::domain(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let rho = Self { dim, entries };
        if !rho.is_hermitian(TOLERANCE) {
            return Err(Error::domain("matrix is not Hermitian"));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TOLERANCE || tr.im.abs() > TOLERANCE {
            return Err(Error::domain(format!("trace {tr} differs from 1")));
        }
        if let Some(min) = rho.eigenvalues().first() {
            if *min < -PSD_TOLERANCE {
                return Err(Error::domain(format!("negative eigenvalue {min}")));
            }
        }
        Ok(rho)
    }

    /// Diagonal density matrix from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let dim = probs.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, p) in probs.iter().enumerate() {
            entries[i * dim + i] = Complex64::new(*p, 0.0);
        }
        Self::new(dim, entries)
    }

    /// `|ψ⟩⟨ψ|`
    pub fn from_state(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for ci in amps {
            for cj in amps {
                entries.push(ci * cj.conj());
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| {
            (i..self.dim).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol)
        })
    }

    /// Matrix product `self · other` (not itself a density matrix in general).
    pub fn matmul(&self, other: &DensityMatrix) -> Vec<Complex64> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        out
    }

    /// Frobenius distance between `ρ²` and `ρ`; zero iff `ρ` is a projector.
    pub fn idempotence_defect(&self) -> f64 {
        self.matmul(self)
            .iter()
            .zip(&self.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `Tr[ρ²]`
    pub fn purity(&self) -> f64 {
        // For Hermitian ρ, Tr[ρ²] = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|².
        self.entries.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Reduced state on the qubits in `keep`, tracing out the rest.
    ///
    /// Bit `j` of the result's basis index is qubit `keep_sorted[j]`, so the
    /// kept qubits retain their relative order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.n_qubits();
        if keep.is_empty() {
            return Err(Error::domain("partial trace must keep at least one qubit"));
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() {
            return Err(Error::domain("duplicate qubit in keep set"));
        }
        if let Some(&q) = kept.iter().find(|&&q| q >= n) {
            return Err(Error::domain(format!("qubit {q} out of range for {n} qubits")));
        }
        let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();

        let out_dim = 1usize << kept.len();
        let kept_offsets: Vec<usize> = (0..out_dim).map(|r| deposit(r, &kept)).collect();
        let traced_offsets: Vec<usize> =
            (0..1usize << traced.len()).map(|t| deposit(t, &traced)).collect();

        let mut entries = vec![Complex64::new(0.0, 0.0); out_dim * out_dim];
        for (r, &row_bits) in kept_offsets.iter().enumerate() {
            for (c, &col_bits) in kept_offsets.iter().enumerate() {
                entries[r * out_dim + c] = traced_offsets
                    .iter()
                    .map(|&t| self.get(row_bits | t, col_bits | t))
                    .sum();
            }
        }
        Ok(DensityMatrix {
            dim: out_dim,
            entries,
        })
    }

    /// Eigenvalues in ascending order.
    ///
    /// 2×2 matrices use the closed form; larger ones go through
    /// [`hermitian_eigenvalues`].
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self.dim {
            1 => vec![self.entries[0].re],
            2 => {
                let a = self.entries[0].re;
                let d = self.entries[3].re;
                let b = self.entries[1];
                let mid = 0.5 * (a + d);
                let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
                vec![mid - rad, mid + rad]
            }
            _ => hermitian_eigenvalues(self.dim, &self.entries),
        }
    }

    /// Conjugation `U ρ U†` by a unitary given row-major.
    pub fn conjugate_by(&self, unitary: &[Complex64]) -> Result<DensityMatrix> {
        let d = self.dim;
        if unitary.len() != d * d {
            return Err(Error::domain("unitary has the wrong size"));
        }
        let mut tmp = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let u = unitary[i * d + k];
                for j in 0..d {
                    tmp[i * d + j] += u * self.entries[k * d + j];
                }
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = (0..d).map(|k| tmp[i * d + k] * unitary[j * d + k].conj()).sum();
            }
        }
        Ok(DensityMatrix {
            dim: d,
            entries: out,
        })
    }
}

/// Places the low bits of `value` at the qubit positions listed in `positions`.
fn deposit(value: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .filter(|(j, _)| value >> j & 1 == 1)
        .fold(0, |acc, (_, &q)| acc | 1 << q)
}

/// Single-qubit reduced states `ρ_k`, one per qubit, in qubit order.
pub fn reduced_per_qubit(state: &StateVector) -> Vec<DensityMatrix> {
    // Each ρ_k needs only four sums over amplitude pairs, so the full 2^n×2^n
    // outer product is never materialized.
    let amps = state.amplitudes();
    (0..state.n_qubits())
        .map(|k| {
            let mask = 1usize << k;
            let mut e = [Complex64::new(0.0, 0.0); 4];
            for i in (0..amps.len()).filter(|i| i & mask == 0) {
                let (u, v) = (amps[i], amps[i | mask]);
                e[0] += u * u.conj();
                e[1] += u * v.conj();
                e[3] += v * v.conj();
            }
            e[2] = e[1].conj();
            DensityMatrix {
                dim: 2,
                entries: e.to_vec(),
            }
        })
        .collect()
}

/// Eigenvalues of a Hermitian `dim × dim` matrix (row-major), ascending.
///
/// The matrix `A = B + iC` is embedded as the real symmetric
/// `[[B, -C], [C, B]]`, whose spectrum is that of `A` with every eigenvalue
/// doubled. The embedding is diagonalized by cyclic Jacobi rotations until
/// the off-diagonal Frobenius mass falls below `1e-26` relative to the total,
/// then every second eigenvalue is kept.
pub fn hermitian_eigenvalues(dim: usize, entries: &[Complex64]) -> Vec<f64> {
    let n = 2 * dim;
    let mut m = vec![0.0f64; n * n];
    for i in 0..dim {
        for j in 0..dim {
            let z = entries[i * dim + j];
            m[i * n + j] = z.re;
            m[(i + dim) * n + j + dim] = z.re;
            m[i * n + j + dim] = -z.im;
            m[(i + dim) * n + j] = z.im;
        }
    }
    let mut eig = symmetric_jacobi(n, &mut m);
    eig.sort_by(f64::total_cmp);
    eig.into_iter().step_by(2).collect()
}

fn symmetric_jacobi(n: usize, a: &mut [f64]) -> Vec<f64> {
    const MAX_SWEEPS: usize = 100;
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off <= 1e-26 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Serializes as row-major nested arrays of `[re, im]` pairs.
impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut rows = serializer.serialize_seq(Some(self.dim))?;
        for row in self.entries.chunks(self.dim) {
            let pairs: Vec<[f64; 2]> = row.iter().map(|c| [c.re, c.im]).collect();
            rows.serialize_element(&pairs)?;
        }
        rows.end()
    }
}
