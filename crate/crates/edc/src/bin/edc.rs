//! Command-line experiment runner.
//!
//! Subcommands:
//!   run        execute a multi-seed experiment from a JSON config
//!   compare    rank-sum + Cohen's d between two stored summaries
//!   trace      validate and re-emit a convergence trace CSV
//!   gen-config emit a default config with the standard parameters

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use edc::benchfn::{Family, FunctionSpec, Rotation};
use edc::harness::{
    self, Algorithm, ExperimentSummary, RunConfig,
};
use edc::EdcError;

#[derive(Parser)]
#[command(name = "edc", about = "Eigenspace divide-and-conquer optimization harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config file.
    Run {
        /// Path to the config file.
        config: Option<PathBuf>,
        /// Alternative way to pass the config path.
        #[arg(long = "config", value_name = "PATH")]
        config_flag: Option<PathBuf>,
        /// Override the output directory.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Override the number of independent runs.
        #[arg(long)]
        runs: Option<u32>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the algorithm variant.
        #[arg(long, value_enum)]
        algorithm: Option<Algorithm>,
        /// Override the evaluation budget.
        #[arg(long = "max-fes")]
        max_fes: Option<u64>,
    },
    /// Compare two summary.json files (per-run FEVs, minimization).
    Compare {
        summary_a: PathBuf,
        summary_b: PathBuf,
        /// Significance level for the rank-sum test.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Validate a trace CSV and print it (or write it elsewhere).
    Trace {
        run_file: PathBuf,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit a default experiment config with the standard parameters.
    GenConfig {
        /// Write the config here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn exit_code_for(err: &EdcError) -> u8 {
    match err {
        EdcError::MalformedConfig { .. } | EdcError::MalformedTrace { .. } => 2,
        EdcError::Io { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), EdcError> {
    match cmd {
        Command::Run {
            config,
            config_flag,
            output,
            runs,
            seed,
            algorithm,
            max_fes,
        } => {
            let path = config.or(config_flag).ok_or_else(|| {
                EdcError::InvalidConfig("missing config path (positional or --config)".into())
            })?;
            let mut cfg = harness::load_config(&path)?;
            if let Some(dir) = output {
                cfg.output_dir = dir;
            }
            if let Some(r) = runs {
                cfg.runs = r;
            }
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            if let Some(a) = algorithm {
                cfg.algorithm = a;
            }
            if let Some(m) = max_fes {
                cfg.edc.max_fes = m;
            }
            let (_, summary) = harness::run_experiment(&cfg)?;
            print_summary(&summary);
            println!("output: {}", cfg.output_dir.display());
            Ok(())
        }
        Command::Compare {
            summary_a,
            summary_b,
            alpha,
        } => {
            let a = harness::load_summary(&summary_a)?;
            let b = harness::load_summary(&summary_b)?;
            let cmp = harness::compare(&a.per_run_fev, &b.per_run_fev, alpha)?;
            println!("A: {} {} (runs {})", a.function, a.algorithm, a.runs);
            println!("B: {} {} (runs {})", b.function, b.algorithm, b.runs);
            println!(
                "rank-sum p = {:.6}, verdict {} (alpha {alpha})",
                cmp.rank_sum_p, cmp.significance_mark
            );
            println!("cohen's d = {:.4}, effect {}", cmp.cohens_d, cmp.effect_mark);
            Ok(())
        }
        Command::Trace { run_file, output } => {
            let trace = harness::load_trace(&run_file)?;
            let csv = trace.to_csv();
            match output {
                Some(path) => std::fs::write(&path, csv).map_err(|e| EdcError::Io {
                    path,
                    source: e,
                })?,
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::GenConfig { output } => {
            let cfg = RunConfig {
                function: FunctionSpec::new(Family::Sphere, 100, true, Rotation::None, 1)
                    .expect("default spec is valid"),
                algorithm: Algorithm::Edc,
                edc: Default::default(),
                runs: 25,
                base_seed: 1,
                output_dir: PathBuf::from("results"),
                checkpoints: None,
            };
            let json = serde_json::to_string_pretty(&cfg).expect("config serializes");
            match output {
                Some(path) => std::fs::write(&path, json).map_err(|e| EdcError::Io {
                    path,
                    source: e,
                })?,
                None => println!("{json}"),
            }
            Ok(())
        }
    }
}

fn print_summary(s: &ExperimentSummary) {
    println!(
        "{} {}: runs {}, mean FEV {:.6e} +- {:.6e}, median {:.6e}",
        s.function, s.algorithm, s.runs, s.mean_fev, s.std_fev, s.median_fev
    );
}
