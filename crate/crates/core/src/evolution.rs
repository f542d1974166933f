//! Elitist generational loop.
//!
//! Each step keeps the `elite_count` best chromosomes verbatim and refills the
//! population with mutated copies of them, offspring `i` descending from elite
//! `i mod elite_count`. The best fitness therefore never worsens.
//!
//! A new generation lists the offspring first and the carried-over elites
//! last. Ranking breaks fitness ties by lower index.

use std::collections::HashMap;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::Direction;
use crate::genome::{mutate, random_chromosome, Chromosome, MutationMode};
use crate::rng::{derive_seed, seeded, Rng};
use crate::statevector::GatePool;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub elite_count: usize,
    pub mutation_p: f64,
    pub mutation_mode: MutationMode,
    pub n_generations: usize,
    pub n_qubits: usize,
    pub n_gates: usize,
    pub direction: Direction,
    pub seed: u64,
    /// Fill non-elite slots with fresh random chromosomes instead of
    /// mutated elites.
    pub reset_nonelites: bool,
    pub pool: GatePool,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            population_size: 20,
            elite_count: 4,
            mutation_p: 0.1,
            mutation_mode: MutationMode::GateReplace,
            n_generations: 500,
            n_qubits: 3,
            n_gates: 3,
            direction: Direction::Maximize,
            seed: 0,
            reset_nonelites: false,
            pool: GatePool::default(),
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::domain("population size must be at least 1"));
        }
        if self.elite_count == 0 || self.elite_count >= self.population_size {
            return Err(Error::domain(format!(
                "elite count {} must be in 1..{}",
                self.elite_count, self.population_size
            )));
        }
        if self.n_generations == 0 {
            return Err(Error::domain("at least one generation is required"));
        }
        if !(0.0..=1.0).contains(&self.mutation_p) {
            return Err(Error::domain(format!(
                "mutation probability {} outside [0, 1]",
                self.mutation_p
            )));
        }
        if self.n_gates == 0 {
            return Err(Error::domain("at least one gate is required"));
        }
        if self.n_qubits == 0 || self.n_qubits > crate::statevector::MAX_QUBITS {
            return Err(Error::domain(format!("unsupported qubit count {}", self.n_qubits)));
        }
        Ok(())
    }
}

/// An evaluated population.
#[derive(Clone, Debug, PartialEq)]
pub struct Generation {
    pub chromosomes: Vec<Chromosome>,
    pub fitness: Vec<f64>,
}

impl Generation {
    pub fn len(&self) -> usize {
        self.chromosomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chromosomes.is_empty()
    }

    /// Indices sorted best first; ties keep the lower index first.
    pub fn ranking(&self, direction: Direction) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| {
            direction
                .key(self.fitness[a])
                .total_cmp(&direction.key(self.fitness[b]))
        });
        idx
    }

    pub fn best(&self, direction: Direction) -> (usize, f64) {
        let i = self.ranking(direction)[0];
        (i, self.fitness[i])
    }

    pub fn mean(&self) -> f64 {
        self.fitness.iter().sum::<f64>() / self.len() as f64
    }
}

/// Scores every chromosome. Identical chromosomes are scored once.
pub fn evaluate<F>(chromosomes: Vec<Chromosome>, fitness_fn: &F) -> Result<Generation>
where
    F: Fn(&Chromosome) -> Result<f64> + Sync,
{
    let mut first_seen: HashMap<&Chromosome, usize> = HashMap::new();
    let mut unique = Vec::new();
    let slot: Vec<usize> = chromosomes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            *first_seen.entry(c).or_insert_with(|| {
                unique.push(i);
                unique.len() - 1
            })
        })
        .collect();

    let scores = unique
        .par_iter()
        .map(|&i| {
            let wrap = |e: Error| Error::Fitness {
                index: i,
                source: Box::new(e),
            };
            let f = fitness_fn(&chromosomes[i]).map_err(wrap)?;
            if f.is_finite() {
                Ok(f)
            } else {
                Err(wrap(Error::domain(format!("non-finite fitness {f}"))))
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    let fitness = slot.iter().map(|&s| scores[s]).collect();
    drop(first_seen);
    Ok(Generation {
        chromosomes,
        fitness,
    })
}

/// One generational step: elites carried over, the rest bred from them.
pub fn evolve_step<F>(
    generation: &Generation,
    config: &EvolutionConfig,
    fitness_fn: &F,
    rng: &mut Rng,
) -> Result<Generation>
where
    F: Fn(&Chromosome) -> Result<f64> + Sync,
{
    config.validate()?;
    if generation.len() != config.population_size {
        return Err(Error::domain(format!(
            "generation has {} chromosomes, config expects {}",
            generation.len(),
            config.population_size
        )));
    }
    let ranking = generation.ranking(config.direction);
    let elites = &ranking[..config.elite_count];
    let step_seed: u64 = rng.random();

    let offspring = (0..config.population_size - config.elite_count)
        .into_par_iter()
        .map(|i| {
            let mut child_rng = seeded(derive_seed(step_seed, i as u64));
            if config.reset_nonelites {
                random_chromosome(config.n_qubits, config.n_gates, &config.pool, &mut child_rng)
            } else {
                let parent = &generation.chromosomes[elites[i % config.elite_count]];
                mutate(
                    parent,
                    config.mutation_p,
                    config.mutation_mode,
                    &config.pool,
                    &mut child_rng,
                )
            }
        })
        .collect::<Result<Vec<_>>>()?;

    // Offspring come first so that, under lower-index tie-breaking, an
    // offspring that matches an elite's fitness displaces it next step.
    // Without this, neutral mutations can never spread and the population
    // freezes on the first plateau it reaches.
    let Generation {
        mut chromosomes,
        mut fitness,
    } = evaluate(offspring, fitness_fn)?;
    chromosomes.extend(elites.iter().map(|&i| generation.chromosomes[i].clone()));
    fitness.extend(elites.iter().map(|&i| generation.fitness[i]));
    Ok(Generation {
        chromosomes,
        fitness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub g: usize,
    pub best: f64,
    pub mean: f64,
}

/// Outcome of one seeded run. `per_generation[0]` describes the initial
/// population, so a run of `n` generations has `n + 1` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub config: EvolutionConfig,
    pub per_generation: Vec<GenerationStats>,
    pub best_chromosome: Chromosome,
    pub best_fitness: f64,
}

#[derive(Serialize, Deserialize)]
struct RunRecordJson {
    seed: u64,
    config: EvolutionConfig,
    generations: Vec<GenerationStats>,
    best_chromosome: String,
    best_fitness: f64,
}

impl Serialize for RunRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RunRecordJson {
            seed: self.seed,
            config: self.config.clone(),
            generations: self.per_generation.clone(),
            best_chromosome: self.best_chromosome.to_csv(),
            best_fitness: self.best_fitness,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RunRecord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RunRecordJson::deserialize(d)?;
        let best_chromosome = Chromosome::from_csv(&raw.best_chromosome, raw.config.n_qubits)
            .map_err(serde::de::Error::custom)?;
        Ok(RunRecord {
            seed: raw.seed,
            config: raw.config,
            per_generation: raw.generations,
            best_chromosome,
            best_fitness: raw.best_fitness,
        })
    }
}

/// Random initial population; chromosome `i` is drawn from its own stream.
pub fn initial_population(config: &EvolutionConfig, seed: u64) -> Result<Vec<Chromosome>> {
    (0..config.population_size)
        .map(|i| {
            random_chromosome(
                config.n_qubits,
                config.n_gates,
                &config.pool,
                &mut seeded(derive_seed(seed, i as u64)),
            )
        })
        .collect()
}

pub fn run<F>(config: &EvolutionConfig, fitness_fn: &F) -> Result<RunRecord>
where
    F: Fn(&Chromosome) -> Result<f64> + Sync,
{
    run_with_progress(config, fitness_fn, |_, _| {})
}

/// As [`run`], calling `on_generation(g, generation)` after each generation
/// is evaluated, starting with the initial population at `g = 0`.
pub fn run_with_progress<F, P>(
    config: &EvolutionConfig,
    fitness_fn: &F,
    mut on_generation: P,
) -> Result<RunRecord>
where
    F: Fn(&Chromosome) -> Result<f64> + Sync,
    P: FnMut(usize, &Generation),
{
    config.validate()?;
    let mut rng = seeded(config.seed);
    let init_seed: u64 = rng.random();
    let mut generation = evaluate(initial_population(config, init_seed)?, fitness_fn)?;

    let stats = |g: usize, gen: &Generation| GenerationStats {
        g,
        best: gen.best(config.direction).1,
        mean: gen.mean(),
    };
    let mut per_generation = Vec::with_capacity(config.n_generations + 1);
    per_generation.push(stats(0, &generation));
    on_generation(0, &generation);

    for g in 1..=config.n_generations {
        generation = evolve_step(&generation, config, fitness_fn, &mut rng)?;
        per_generation.push(stats(g, &generation));
        on_generation(g, &generation);
    }

    let (best_idx, best_fitness) = generation.best(config.direction);
    Ok(RunRecord {
        seed: config.seed,
        config: config.clone(),
        per_generation,
        best_chromosome: generation.chromosomes[best_idx].clone(),
        best_fitness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::{critical_ca_table, rule_to_table, Objective};
    use crate::genome::GateGene;

    fn mw_config(seed: u64) -> EvolutionConfig {
        EvolutionConfig {
            n_generations: 30,
            seed,
            ..Default::default()
        }
    }

    fn mw_fn(pool: GatePool) -> impl Fn(&Chromosome) -> Result<f64> + Sync {
        let objective = Objective::mw();
        move |c: &Chromosome| objective.score(c, &pool)
    }

    #[test]
    fn config_validation() {
        assert!(EvolutionConfig::default().validate().is_ok());
        let bad = |f: fn(&mut EvolutionConfig)| {
            let mut c = EvolutionConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.elite_count = 20));
        assert!(bad(|c| c.elite_count = 0));
        assert!(bad(|c| c.population_size = 0));
        assert!(bad(|c| c.n_generations = 0));
        assert!(bad(|c| c.mutation_p = -0.1));
        assert!(bad(|c| c.n_gates = 0));
        assert!(bad(|c| c.n_qubits = 9));
    }

    #[test]
    fn evaluate_examples() {
        let pool = GatePool::default();
        let f = mw_fn(pool.clone());
        let bell = Chromosome::new(2, vec![GateGene::new(0, 0, 1), GateGene::new(3, 0, 1)]);
        let other = Chromosome::new(2, vec![GateGene::new(1, 0, 1), GateGene::new(2, 1, 0)]);
        let gen = evaluate(vec![other.clone(), bell.clone(), other], &f).unwrap();
        assert!((gen.fitness[1] - 1.0).abs() < 1e-9);
        assert_eq!(gen.fitness[0], gen.fitness[2]);

        let kl = Objective::kl(rule_to_table(90).unwrap());
        let kl_fn = |c: &Chromosome| kl.score(c, &pool);
        let rule90 = Chromosome::new(3, vec![GateGene::new(3, 2, 0)]);
        let gen = evaluate(vec![rule90], &kl_fn).unwrap();
        assert!(gen.fitness[0] < 1e-9);
    }

    #[test]
    fn evaluate_reports_failing_index() {
        let pool = GatePool::default();
        let f = mw_fn(pool);
        let ok = Chromosome::new(2, vec![GateGene::new(0, 0, 1)]);
        let bad = Chromosome::new(2, vec![GateGene::new(7, 0, 1)]);
        let err = evaluate(vec![ok, bad], &f).unwrap_err();
        assert!(matches!(err, Error::Fitness { index: 1, .. }), "{err}");
    }

    #[test]
    fn zero_mutation_step_keeps_elites_only() {
        let config = EvolutionConfig {
            mutation_p: 0.0,
            ..mw_config(1)
        };
        let f = mw_fn(config.pool.clone());
        let gen = evaluate(initial_population(&config, 5).unwrap(), &f).unwrap();
        let next = evolve_step(&gen, &config, &f, &mut seeded(2)).unwrap();
        let ranking = gen.ranking(config.direction);
        let elites: Vec<&Chromosome> =
            ranking[..4].iter().map(|&i| &gen.chromosomes[i]).collect();
        assert!(next.chromosomes.iter().all(|c| elites.contains(&c)));
        assert_eq!(next.best(config.direction).1, gen.best(config.direction).1);
    }

    #[test]
    fn step_is_seeded_and_elitist() {
        let config = mw_config(3);
        let f = mw_fn(config.pool.clone());
        let gen = evaluate(initial_population(&config, 9).unwrap(), &f).unwrap();
        let a = evolve_step(&gen, &config, &f, &mut seeded(4)).unwrap();
        let b = evolve_step(&gen, &config, &f, &mut seeded(4)).unwrap();
        assert_eq!(a, b);
        assert!(a.best(config.direction).1 >= gen.best(config.direction).1);
        let tail = &a.chromosomes[16..];
        for (k, &i) in gen.ranking(config.direction)[..4].iter().enumerate() {
            assert_eq!(tail[k], gen.chromosomes[i]);
        }
    }

    #[test]
    fn ties_prefer_lower_index() {
        let gen = Generation {
            chromosomes: vec![Chromosome::new(1, vec![]); 4],
            fitness: vec![0.5, 0.7, 0.7, 0.1],
        };
        assert_eq!(gen.ranking(Direction::Maximize), vec![1, 2, 0, 3]);
        assert_eq!(gen.ranking(Direction::Minimize), vec![3, 0, 1, 2]);
    }

    #[test]
    fn run_counts_and_determinism() {
        let config = EvolutionConfig {
            n_generations: 1,
            ..mw_config(10)
        };
        let f = mw_fn(config.pool.clone());
        let rec = run(&config, &f).unwrap();
        assert_eq!(rec.per_generation.len(), 2);

        let config = mw_config(11);
        let a = run(&config, &f).unwrap();
        let b = run(&config, &f).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        for w in a.per_generation.windows(2) {
            assert!(w[1].best >= w[0].best);
        }
        assert_eq!(a.best_fitness, a.per_generation.last().unwrap().best);
    }

    #[test]
    fn minimizing_run_is_monotone() {
        let pool = GatePool::default();
        let kl = Objective::kl(critical_ca_table());
        let f = |c: &Chromosome| kl.score(c, &pool);
        let config = EvolutionConfig {
            n_gates: 6,
            direction: Direction::Minimize,
            ..mw_config(12)
        };
        let rec = run(&config, &f).unwrap();
        for w in rec.per_generation.windows(2) {
            assert!(w[1].best <= w[0].best);
        }
    }

    #[test]
    fn reset_nonelites_mode_runs() {
        let config = EvolutionConfig {
            reset_nonelites: true,
            ..mw_config(13)
        };
        let f = mw_fn(config.pool.clone());
        let rec = run(&config, &f).unwrap();
        for w in rec.per_generation.windows(2) {
            assert!(w[1].best >= w[0].best);
        }
    }

    #[test]
    fn run_record_json_round_trip() {
        let config = EvolutionConfig {
            n_generations: 2,
            ..mw_config(14)
        };
        let f = mw_fn(config.pool.clone());
        let rec = run(&config, &f).unwrap();
        let json = serde_json::to_string(&rec).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        for key in ["seed", "config", "generations", "best_chromosome", "best_fitness"] {
            assert!(value.get(key).is_some(), "missing {key}");
        }
        assert!(value["best_chromosome"].is_string());
        let back: RunRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
    }
}
