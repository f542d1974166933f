//! Multi-run experiments, result files, and the inspection commands behind
//! the CLI.
//!
//! An experiment writes into `out_dir`:
//!
//! * `config.json`: the resolved [`ExperimentConfig`],
//! * `run_<i>.json`: one [`RunRecord`] per run,
//! * `summary.csv`: per-generation means and standard errors across runs,
//! * `best_circuit.txt`: the best circuit found, in the circuit text format.
//!
//! Run `i` uses seed `splitmix64(master_seed ^ i)`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::density::{reduced_per_qubit, DensityMatrix};
use crate::entanglement::{entropy_fitness, meyer_wallach_with, MwNormalization};
use crate::error::{Error, Result};
use crate::evolution::{run_with_progress, EvolutionConfig, RunRecord};
use crate::fitness::{
    ca_response, Direction, FitnessKind, NeighborhoodEncoding, Objective, Readout, TargetSpec,
};
use crate::genome::{decode, Chromosome};
use crate::rng::splitmix64;
use crate::statevector::Circuit;

pub const SUMMARY_HEADER: &str =
    "generation,mean_fitness_mean,mean_fitness_se,best_fitness_mean,best_fitness_se";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// `seed` here is the master seed; `direction` is derived from `fitness`.
    #[serde(flatten)]
    pub evolution: EvolutionConfig,
    pub fitness: FitnessKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetSpec>,
    pub runs: usize,
    /// Measurements per triad for KL fitness; 0 means exact probabilities.
    pub shots: u64,
    pub mw_normalization: MwNormalization,
    pub encoding: NeighborhoodEncoding,
    #[serde(skip_serializing)]
    pub out_dir: PathBuf,
    /// Concurrent runs; 0 uses every available core.
    #[serde(skip_serializing)]
    pub jobs: usize,
    /// Suppresses progress lines on standard error.
    #[serde(skip_serializing)]
    pub quiet: bool,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("results")
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            evolution: EvolutionConfig::default(),
            fitness: FitnessKind::Mw,
            target: None,
            runs: 50,
            shots: 0,
            mw_normalization: MwNormalization::Standard,
            encoding: NeighborhoodEncoding::default(),
            out_dir: default_out_dir(),
            jobs: 0,
            quiet: false,
        }
    }
}

impl ExperimentConfig {
    /// Checks the invariants and aligns the optimization direction with the
    /// fitness kind.
    pub fn validate(&mut self) -> Result<()> {
        self.evolution.direction = self.fitness.direction();
        self.evolution.validate()?;
        if self.runs == 0 {
            return Err(Error::domain("at least one run is required"));
        }
        match (self.fitness, &self.target) {
            (FitnessKind::Kl, None) => Err(Error::domain("kl fitness needs a target")),
            (FitnessKind::Kl, Some(_)) if self.evolution.n_qubits != 3 => Err(Error::domain(
                "kl fitness evaluates 3-qubit circuits; set qubits to 3",
            )),
            (FitnessKind::Mw | FitnessKind::Vn, Some(_)) => Err(Error::domain(format!(
                "a target only applies to kl fitness, not {}",
                self.fitness
            ))),
            (FitnessKind::Mw | FitnessKind::Vn, None) if self.evolution.n_qubits < 2 => Err(
                Error::domain("entanglement fitness needs at least two qubits"),
            ),
            _ => Ok(()),
        }
    }

    pub fn objective(&self) -> Result<Objective> {
        Ok(match self.fitness {
            FitnessKind::Kl => {
                let spec = self
                    .target
                    .as_ref()
                    .ok_or_else(|| Error::domain("kl fitness needs a target"))?;
                Objective::Kl {
                    target: spec.resolve()?,
                    encoding: self.encoding,
                    shots: self.shots,
                    shot_seed: self.evolution.seed,
                }
            }
            FitnessKind::Mw => Objective::Mw(self.mw_normalization),
            FitnessKind::Vn => Objective::Vn,
        })
    }

    /// Seed of run `index`.
    pub fn run_seed(&self, index: usize) -> u64 {
        splitmix64(self.evolution.seed ^ index as u64)
    }
}

/// Cross-run aggregate for one generation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GenerationSummary {
    pub generation: usize,
    pub mean_fitness_mean: f64,
    pub mean_fitness_se: f64,
    pub best_fitness_mean: f64,
    pub best_fitness_se: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSummary {
    pub generations: Vec<GenerationSummary>,
    pub best_fitness: f64,
    pub best_chromosome: Chromosome,
    pub best_run: usize,
    pub best_seed: u64,
    pub runs: Vec<RunRecord>,
}

impl ExperimentSummary {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SUMMARY_HEADER);
        out.push('\n');
        for g in &self.generations {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                g.generation,
                g.mean_fitness_mean,
                g.mean_fitness_se,
                g.best_fitness_mean,
                g.best_fitness_se
            );
        }
        out
    }
}

/// Sample mean and standard error `s / √n` (zero for a single sample).
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Aggregates run records that share a generation count and direction.
pub fn summarize(runs: Vec<RunRecord>, direction: Direction) -> Result<ExperimentSummary> {
    let first = runs
        .first()
        .ok_or_else(|| Error::domain("cannot summarize zero runs"))?;
    let n_gen = first.per_generation.len();
    if runs.iter().any(|r| r.per_generation.len() != n_gen) {
        return Err(Error::domain("runs have different generation counts"));
    }
    let generations = (0..n_gen)
        .map(|g| {
            let means: Vec<f64> = runs.iter().map(|r| r.per_generation[g].mean).collect();
            let bests: Vec<f64> = runs.iter().map(|r| r.per_generation[g].best).collect();
            let (mm, mse) = mean_and_se(&means);
            let (bm, bse) = mean_and_se(&bests);
            GenerationSummary {
                generation: runs[0].per_generation[g].g,
                mean_fitness_mean: mm,
                mean_fitness_se: mse,
                best_fitness_mean: bm,
                best_fitness_se: bse,
            }
        })
        .collect();
    let mut best_run = 0;
    for (i, r) in runs.iter().enumerate() {
        if direction.better(r.best_fitness, runs[best_run].best_fitness) {
            best_run = i;
        }
    }
    Ok(ExperimentSummary {
        generations,
        best_fitness: runs[best_run].best_fitness,
        best_chromosome: runs[best_run].best_chromosome.clone(),
        best_run,
        best_seed: runs[best_run].seed,
        runs,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Runs `config.runs` seeded runs and writes the result files.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    let mut config = config.clone();
    config.validate()?;
    let objective = config.objective()?;

    let out = &config.out_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let mut config_json = serde_json::to_string_pretty(&config)?;
    config_json.push('\n');
    write_file(&out.join("config.json"), &config_json)?;

    let pool = config.evolution.pool.clone();
    let fitness_fn = |c: &Chromosome| objective.score(c, &pool);
    let n_gen = config.evolution.n_generations;
    let tick = (n_gen / 10).max(1);

    let execute = |i: usize| -> Result<RunRecord> {
        let run_config = EvolutionConfig {
            seed: config.run_seed(i),
            ..config.evolution.clone()
        };
        let record = run_with_progress(&run_config, &fitness_fn, |g, gen| {
            if !config.quiet && g > 0 && (g % tick == 0 || g == n_gen) {
                eprintln!(
                    "run {i}: generation {g}/{n_gen} best {}",
                    gen.best(run_config.direction).1
                );
            }
        })?;
        let mut json = serde_json::to_string_pretty(&record)?;
        json.push('\n');
        write_file(&out.join(format!("run_{i}.json")), &json)?;
        Ok(record)
    };

    let pool_threads = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
    let records = pool_threads.install(|| {
        (0..config.runs)
            .into_par_iter()
            .map(execute)
            .collect::<Result<Vec<_>>>()
    })?;

    let summary = summarize(records, config.evolution.direction)?;
    write_file(&out.join("summary.csv"), &summary.to_csv())?;
    let best = decode(&summary.best_chromosome, &pool)?;
    write_file(&out.join("best_circuit.txt"), &best.to_string())?;
    Ok(summary)
}

/// What [`measure`] reports about a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Mw,
    Vn,
    PurityPerQubit,
    Response,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "mw" => Ok(Metric::Mw),
            "vn" => Ok(Metric::Vn),
            "purity_per_qubit" => Ok(Metric::PurityPerQubit),
            "response" => Ok(Metric::Response),
            other => Err(Error::domain(format!("unknown metric `{other}`"))),
        }
    }
}

/// Evaluates `metric` on the circuit's output from `|0…0⟩` (or, for
/// `response`, on all eight CA triads) and returns it as JSON.
pub fn measure(circuit: &Circuit, metric: Metric) -> Result<serde_json::Value> {
    Ok(match metric {
        Metric::Mw => {
            let state = circuit.run_from_zero()?;
            json!({
                "metric": "mw",
                "value": meyer_wallach_with(&state, MwNormalization::Standard)?,
            })
        }
        Metric::Vn => {
            if circuit.n_qubits() < 2 {
                return Err(Error::domain("entropy fitness needs at least two qubits"));
            }
            json!({ "metric": "vn", "value": entropy_fitness(&circuit.run_from_zero()?) })
        }
        Metric::PurityPerQubit => {
            let reduced = reduced_per_qubit(&circuit.run_from_zero()?);
            let purities: Vec<f64> = reduced.iter().map(DensityMatrix::purity).collect();
            json!({
                "metric": "purity_per_qubit",
                "matrices": reduced,
                "purities": purities,
            })
        }
        Metric::Response => {
            let r = ca_response(circuit, &NeighborhoodEncoding::default(), Readout::Exact)?;
            json!({ "metric": "response", "values": r.probs })
        }
    })
}

pub fn measure_file(path: &Path, metric: Metric) -> Result<serde_json::Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    measure(&Circuit::parse(&text)?, metric)
}

/// The table named by `spec` in the table file format.
pub fn dump_table(spec: &str) -> Result<String> {
    Ok(spec.parse::<TargetSpec>()?.resolve()?.to_text())
}
