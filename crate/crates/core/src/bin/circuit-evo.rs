use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use circuit_evo::fitness::{FitnessKind, TargetSpec};
use circuit_evo::genome::MutationMode;
use circuit_evo::harness::{dump_table, measure_file, run_experiment, ExperimentConfig, Metric};
use circuit_evo::statevector::GatePool;
use circuit_evo::{Error, Result};

#[derive(Parser)]
#[command(name = "circuit-evo", version, about = "Evolve small quantum circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a multi-run evolution experiment and write its result files.
    Evolve(Box<EvolveArgs>),
    /// Print a metric of a circuit file as JSON.
    Measure {
        circuit: PathBuf,
        /// mw, vn, purity_per_qubit or response
        #[arg(long, default_value = "mw")]
        metric: Metric,
    },
    /// Print a CA target table in the table file format.
    DumpTable {
        /// critical, rule:<n> or file:<path>
        target: String,
    },
}

#[derive(Args)]
struct EvolveArgs {
    /// JSON experiment config; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    qubits: Option<usize>,
    #[arg(long)]
    gates: Option<usize>,
    /// [default: 20]
    #[arg(long)]
    population: Option<usize>,
    /// [default: 4]
    #[arg(long)]
    elites: Option<usize>,
    /// [default: 500]
    #[arg(long)]
    generations: Option<usize>,
    /// [default: 50]
    #[arg(long)]
    runs: Option<usize>,
    /// Mutation probability, e.g. 0.10
    #[arg(long)]
    mutation: Option<f64>,
    /// gate_replace or full_replace
    #[arg(long)]
    mutation_mode: Option<MutationMode>,
    /// kl, mw or vn
    #[arg(long)]
    fitness: Option<FitnessKind>,
    /// critical, rule:<n> or file:<path> (kl only)
    #[arg(long)]
    target: Option<TargetSpec>,
    /// Shots per triad for kl fitness; 0 is exact [default: 0]
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Concurrent runs; 0 uses all cores
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Comma-separated gate kinds [default: H,X,Z,CNOT,SWAP]
    #[arg(long)]
    pool: Option<GatePool>,
    /// Refill non-elite slots with fresh random chromosomes
    #[arg(long)]
    reset_nonelites: bool,
    /// No progress output on standard error
    #[arg(long)]
    quiet: bool,
}

impl EvolveArgs {
    fn into_config(self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                })?;
                serde_json::from_str(&text)?
            }
            None => ExperimentConfig::default(),
        };
        let e = &mut c.evolution;
        macro_rules! set {
            ($flag:expr, $field:expr) => {
                if let Some(v) = $flag {
                    $field = v;
                }
            };
        }
        set!(self.qubits, e.n_qubits);
        set!(self.gates, e.n_gates);
        set!(self.population, e.population_size);
        set!(self.elites, e.elite_count);
        set!(self.generations, e.n_generations);
        set!(self.mutation, e.mutation_p);
        set!(self.mutation_mode, e.mutation_mode);
        set!(self.seed, e.seed);
        set!(self.pool, e.pool);
        if self.reset_nonelites {
            e.reset_nonelites = true;
        }
        set!(self.runs, c.runs);
        set!(self.fitness, c.fitness);
        set!(self.shots, c.shots);
        set!(self.jobs, c.jobs);
        set!(self.out_dir, c.out_dir);
        if self.target.is_some() {
            c.target = self.target;
        }
        if self.quiet {
            c.quiet = true;
        }
        Ok(c)
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Evolve(args) => {
            let config = args.into_config()?;
            let summary = run_experiment(&config)?;
            eprintln!(
                "best fitness {} (run {}, seed {}): {}",
                summary.best_fitness,
                summary.best_run,
                summary.best_seed,
                summary.best_chromosome
            );
            Ok(())
        }
        Command::Measure { circuit, metric } => {
            let report = measure_file(&circuit, metric)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Command::DumpTable { target } => {
            print!("{}", dump_table(&target)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
