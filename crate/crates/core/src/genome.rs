//! Integer chromosomes encoding circuits.
//!
//! A chromosome is an ordered list of genes `(gate_id, qubit_a, qubit_b)`,
//! one per gate, with `gate_id` indexing into a [`GatePool`]. Single-qubit
//! genes carry a `qubit_b` that is ignored on decode, so a later change of
//! `gate_id` alone can yield a valid two-qubit gate.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Circuit, GateInstance, GatePool};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GateGene {
    pub gate_id: usize,
    pub qubit_a: usize,
    pub qubit_b: usize,
}

impl GateGene {
    pub fn new(gate_id: usize, qubit_a: usize, qubit_b: usize) -> Self {
        Self {
            gate_id,
            qubit_a,
            qubit_b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chromosome {
    n_qubits: usize,
    genes: Vec<GateGene>,
}

impl Chromosome {
    pub fn new(n_qubits: usize, genes: Vec<GateGene>) -> Self {
        Self { n_qubits, genes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn genes(&self) -> &[GateGene] {
        &self.genes
    }

    pub fn n_gates(&self) -> usize {
        self.genes.len()
    }

    /// `[id₀, a₀, b₀, id₁, a₁, b₁, …]`, always `3 · n_gates` long.
    pub fn flatten(&self) -> Vec<usize> {
        self.genes
            .iter()
            .flat_map(|g| [g.gate_id, g.qubit_a, g.qubit_b])
            .collect()
    }

    /// One line of comma-separated integers.
    pub fn to_csv(&self) -> String {
        let ints: Vec<String> = self.flatten().iter().map(usize::to_string).collect();
        ints.join(",")
    }

    /// Strict inverse of [`Chromosome::to_csv`]. Qubit indices are checked
    /// against `n_qubits`; gate ids are checked later by [`decode`].
    pub fn from_csv(text: &str, n_qubits: usize) -> Result<Self> {
        let text = text.strip_suffix('\n').unwrap_or(text);
        if text.is_empty() {
            return Err(Error::format(1, "empty chromosome"));
        }
        let ints = text
            .split(',')
            .map(|t| {
                if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::format(1, format!("`{t}` is not a non-negative integer")));
                }
                t.parse::<usize>()
                    .map_err(|e| Error::format(1, format!("`{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if ints.len() % 3 != 0 {
            return Err(Error::format(
                1,
                format!("{} integers is not a multiple of three", ints.len()),
            ));
        }
        let genes: Vec<GateGene> = ints
            .chunks_exact(3)
            .map(|c| GateGene::new(c[0], c[1], c[2]))
            .collect();
        if let Some(g) = genes
            .iter()
            .find(|g| g.qubit_a >= n_qubits || g.qubit_b >= n_qubits)
        {
            return Err(Error::format(
                1,
                format!("gene {g:?} addresses a qubit outside 0..{n_qubits}"),
            ));
        }
        Ok(Self { n_qubits, genes })
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationMode {
    /// Each gene is independently replaced with probability `p`.
    #[default]
    GateReplace,
    /// The whole chromosome is regenerated with probability `p`.
    FullReplace,
}

impl FromStr for MutationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "gate_replace" => Ok(MutationMode::GateReplace),
            "full_replace" => Ok(MutationMode::FullReplace),
            other => Err(Error::domain(format!("unknown mutation mode `{other}`"))),
        }
    }
}

impl fmt::Display for MutationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutationMode::GateReplace => "gate_replace",
            MutationMode::FullReplace => "full_replace",
        })
    }
}

fn is_two_qubit(pool: &GatePool, gate_id: usize) -> bool {
    pool.get(gate_id).is_some_and(|k| k.arity() == 2)
}

/// Makes a gene valid for `n_qubits`.
///
/// A two-qubit gene wired to itself gets `qubit_b` redrawn uniformly from the
/// other `n_qubits − 1` indices. On a single-qubit register a two-qubit gene
/// cannot be wired at all, so its `gate_id` is redrawn from the pool's
/// single-qubit kinds instead.
pub fn repair<R: Rng + ?Sized>(
    gene: GateGene,
    n_qubits: usize,
    pool: &GatePool,
    rng: &mut R,
) -> Result<GateGene> {
    if gene.gate_id >= pool.len() {
        return Err(Error::domain(format!(
            "gate id {} outside pool of {}",
            gene.gate_id,
            pool.len()
        )));
    }
    if !is_two_qubit(pool, gene.gate_id) || gene.qubit_a != gene.qubit_b {
        return Ok(gene);
    }
    if n_qubits == 1 {
        let singles = pool.single_qubit_ids();
        if singles.is_empty() {
            return Err(Error::domain(
                "pool has no single-qubit gate for a one-qubit register",
            ));
        }
        let gate_id = singles[rng.random_range(0..singles.len())];
        return Ok(GateGene { gate_id, ..gene });
    }
    let mut b = rng.random_range(0..n_qubits - 1);
    if b >= gene.qubit_a {
        b += 1;
    }
    Ok(GateGene { qubit_b: b, ..gene })
}

/// A uniformly drawn, repaired gene.
pub fn random_gene<R: Rng + ?Sized>(
    n_qubits: usize,
    pool: &GatePool,
    rng: &mut R,
) -> Result<GateGene> {
    let gene = GateGene::new(
        rng.random_range(0..pool.len()),
        rng.random_range(0..n_qubits),
        rng.random_range(0..n_qubits),
    );
    repair(gene, n_qubits, pool, rng)
}

pub fn random_chromosome<R: Rng + ?Sized>(
    n_qubits: usize,
    n_gates: usize,
    pool: &GatePool,
    rng: &mut R,
) -> Result<Chromosome> {
    if n_qubits == 0 {
        return Err(Error::domain("a chromosome needs at least one qubit"));
    }
    if n_gates == 0 {
        return Err(Error::domain("a chromosome needs at least one gate"));
    }
    let genes = (0..n_gates)
        .map(|_| random_gene(n_qubits, pool, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(Chromosome::new(n_qubits, genes))
}

pub fn mutate<R: Rng + ?Sized>(
    chromosome: &Chromosome,
    p: f64,
    mode: MutationMode,
    pool: &GatePool,
    rng: &mut R,
) -> Result<Chromosome> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("mutation probability {p} outside [0, 1]")));
    }
    let n = chromosome.n_qubits;
    match mode {
        MutationMode::GateReplace => {
            let genes = chromosome
                .genes
                .iter()
                .map(|&g| {
                    if rng.random_bool(p) {
                        random_gene(n, pool, rng)
                    } else {
                        Ok(g)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Chromosome::new(n, genes))
        }
        MutationMode::FullReplace => {
            if rng.random_bool(p) {
                random_chromosome(n, chromosome.n_gates(), pool, rng)
            } else {
                Ok(chromosome.clone())
            }
        }
    }
}

pub fn decode(chromosome: &Chromosome, pool: &GatePool) -> Result<Circuit> {
    let gates = chromosome
        .genes
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let kind = pool.get(g.gate_id).ok_or_else(|| {
                Error::format(
                    0,
                    format!("gene {i}: gate id {} outside pool of {}", g.gate_id, pool.len()),
                )
            })?;
            Ok(if kind.arity() == 2 {
                GateInstance::pair(kind, g.qubit_a, g.qubit_b)
            } else {
                GateInstance::single(kind, g.qubit_a)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Circuit::new(chromosome.n_qubits, gates)
}

/// Inverse of [`decode`] for circuits built from `pool`. Single-qubit gates
/// get `qubit_b = (qubit_a + 1) mod n`.
pub fn encode(circuit: &Circuit, pool: &GatePool) -> Result<Chromosome> {
    let n = circuit.n_qubits();
    let genes = circuit
        .gates()
        .iter()
        .map(|g| {
            let id = pool
                .kinds()
                .iter()
                .position(|k| *k == g.kind)
                .ok_or_else(|| Error::domain(format!("{} is not in the gate pool", g.kind)))?;
            let b = g.qubit_b.unwrap_or((g.qubit_a + 1) % n);
            Ok(GateGene::new(id, g.qubit_a, b))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Chromosome::new(n, genes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::statevector::GateKind;

    const H: usize = 0;
    const CNOT: usize = 3;

    #[test]
    fn random_chromosome_is_seeded() {
        let pool = GatePool::default();
        let a = random_chromosome(3, 3, &pool, &mut seeded(11)).unwrap();
        let b = random_chromosome(3, 3, &pool, &mut seeded(11)).unwrap();
        assert_eq!(a, b);
        let c = random_chromosome(3, 5, &pool, &mut seeded(3)).unwrap();
        assert_eq!(c.flatten().len(), 15);
        assert!(random_chromosome(3, 0, &pool, &mut seeded(3)).is_err());
    }

    #[test]
    fn random_two_qubit_genes_are_wired_apart() {
        let pool = GatePool::default();
        let mut rng = seeded(5);
        for _ in 0..10_000 {
            let g = random_gene(2, &pool, &mut rng).unwrap();
            if is_two_qubit(&pool, g.gate_id) {
                assert_ne!(g.qubit_a, g.qubit_b);
            }
        }
    }

    #[test]
    fn repair_examples() {
        let pool = GatePool::default();
        let mut seen = [false; 3];
        for seed in 0..200 {
            let g = repair(GateGene::new(CNOT, 1, 1), 3, &pool, &mut seeded(seed)).unwrap();
            assert_eq!(g.qubit_a, 1);
            assert!(g.qubit_b == 0 || g.qubit_b == 2);
            seen[g.qubit_b] = true;
        }
        assert!(seen[0] && seen[2]);

        let h = GateGene::new(H, 0, 0);
        assert_eq!(repair(h, 3, &pool, &mut seeded(0)).unwrap(), h);
        let ok = GateGene::new(CNOT, 0, 2);
        assert_eq!(repair(ok, 3, &pool, &mut seeded(0)).unwrap(), ok);

        let lone = repair(GateGene::new(CNOT, 0, 0), 1, &pool, &mut seeded(0)).unwrap();
        assert!(!is_two_qubit(&pool, lone.gate_id));

        let only_pairs = GatePool::new(vec![GateKind::Cnot]).unwrap();
        assert!(repair(GateGene::new(0, 0, 0), 1, &only_pairs, &mut seeded(0)).is_err());
        assert!(repair(GateGene::new(9, 0, 1), 3, &pool, &mut seeded(0)).is_err());
    }

    #[test]
    fn mutation_extremes() {
        let pool = GatePool::default();
        let mut rng = seeded(9);
        let c = random_chromosome(3, 12, &pool, &mut rng).unwrap();
        assert_eq!(mutate(&c, 0.0, MutationMode::GateReplace, &pool, &mut rng).unwrap(), c);
        assert_eq!(mutate(&c, 0.0, MutationMode::FullReplace, &pool, &mut rng).unwrap(), c);
        assert!(mutate(&c, 1.5, MutationMode::GateReplace, &pool, &mut rng).is_err());

        // At p = 1 every position is redrawn: the mutated chromosome equals
        // the one obtained by drawing 12 fresh genes from the same stream.
        let mut r1 = seeded(77);
        let m = mutate(&c, 1.0, MutationMode::GateReplace, &pool, &mut r1).unwrap();
        let mut r2 = seeded(77);
        let fresh: Vec<GateGene> = (0..12)
            .map(|_| {
                let _ = r2.random_bool(1.0);
                random_gene(3, &pool, &mut r2).unwrap()
            })
            .collect();
        assert_eq!(m.genes(), fresh.as_slice());
    }

    #[test]
    fn mutation_rate_matches_binomial_mean() {
        let pool = GatePool::default();
        let mut rng = seeded(2024);
        let base = random_chromosome(3, 3, &pool, &mut rng).unwrap();
        // Count draws rather than changed values, since a replacement may
        // reproduce the original gene. A sentinel gate id marks originals.
        let marked = Chromosome::new(
            3,
            base.genes().iter().map(|g| GateGene { gate_id: 99, ..*g }).collect(),
        );
        let trials = 100_000;
        let mut replaced = 0usize;
        for _ in 0..trials {
            let m = mutate(&marked, 0.1, MutationMode::GateReplace, &pool, &mut rng).unwrap();
            replaced += m.genes().iter().filter(|g| g.gate_id != 99).count();
        }
        let mean = replaced as f64 / trials as f64;
        assert!((mean - 0.3).abs() < 0.01, "mean replaced genes {mean}");
    }

    #[test]
    fn decode_examples() {
        let pool = GatePool::default();
        let c = Chromosome::new(2, vec![GateGene::new(H, 0, 1), GateGene::new(CNOT, 0, 1)]);
        let circuit = decode(&c, &pool).unwrap();
        assert_eq!(circuit.gates(), &[GateInstance::h(0), GateInstance::cnot(0, 1)]);

        let c12 = random_chromosome(4, 12, &pool, &mut seeded(1)).unwrap();
        let decoded = decode(&c12, &pool).unwrap();
        assert_eq!(decoded.len(), 12);
        assert_eq!(decode(&encode(&decoded, &pool).unwrap(), &pool).unwrap(), decoded);

        let bad = Chromosome::new(2, vec![GateGene::new(5, 0, 1)]);
        assert!(matches!(decode(&bad, &pool), Err(Error::Format { .. })));
    }

    #[test]
    fn csv_round_trip_and_strictness() {
        let pool = GatePool::default();
        let c = random_chromosome(3, 5, &pool, &mut seeded(4)).unwrap();
        let text = c.to_csv();
        assert_eq!(text.split(',').count(), 15);
        assert_eq!(Chromosome::from_csv(&text, 3).unwrap(), c);

        assert!(Chromosome::from_csv("", 3).is_err());
        assert!(Chromosome::from_csv("1,2", 3).is_err());
        assert!(Chromosome::from_csv("1, 2,0", 3).is_err());
        assert!(Chromosome::from_csv("1,2,-1", 3).is_err());
        assert!(Chromosome::from_csv("1,3,0", 3).is_err());
        assert!(Chromosome::from_csv("1,2,0,", 3).is_err());
    }

    #[test]
    fn mutation_mode_names() {
        assert_eq!("gate_replace".parse::<MutationMode>().unwrap(), MutationMode::GateReplace);
        assert_eq!("full-replace".parse::<MutationMode>().unwrap(), MutationMode::FullReplace);
        assert!("swap".parse::<MutationMode>().is_err());
    }
}
