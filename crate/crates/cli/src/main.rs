//! `lkclab` — experiment harness for chaos-vs-regular classification of 1D
//! map time series. Every subcommand is driven by a TOML config (all fields
//! optional, sensible desk-scale defaults) plus a few global flag overrides,
//! and archives its resolved config next to the outputs.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lkclab_core::error::Error;

use crate::config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "lkclab", version = lkclab_core::VERSION)]
#[command(about = "Laboratory for classifying chaotic vs regular 1D-map time series")]
struct Cli {
    /// TOML experiment config; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Root seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for data-parallel stages (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Full-protocol scale: 250 models, 1000 epochs, patience 50.
    #[arg(long, global = true)]
    paper_scale: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and persist the configured corpus with its period histogram.
    Generate,
    /// Train an ensemble of models with distinct seeds (resumes by skipping
    /// existing model files).
    TrainEnsemble,
    /// Stratified accuracy of every trained model on the configured corpus.
    Evaluate,
    /// Savitzky-Golay classifier report per decimal-convergence level.
    SgEval,
    /// Compare best LKCNN, short-time exponent, and SG reconstruction.
    Compare,
    /// Probe trained models with periodic inputs; emit period matrices and
    /// the class report.
    PeriodMatrices,
    /// Flatten-activation pattern lattices for period-2 inputs.
    Period2Diagram,
    /// Train small ensembles across stride/dense-unit combinations.
    HyperparamSweep,
    /// Property check of strided periodic convolution on random cases.
    LemmaCheck,
}

fn run(cli: Cli) -> lkclab_core::error::Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.apply_overrides(cli.out, cli.seed, cli.paper_scale);

    if let Some(workers) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| Error::Rejected(format!("worker pool: {e}")))?;
    }

    match cli.command {
        Command::Generate => commands::cmd_generate(&cfg),
        Command::TrainEnsemble => commands::cmd_train_ensemble(&cfg),
        Command::Evaluate => commands::cmd_evaluate(&cfg),
        Command::SgEval => commands::cmd_sg_eval(&cfg),
        Command::Compare => commands::cmd_compare(&cfg),
        Command::PeriodMatrices => commands::cmd_period_matrices(&cfg),
        Command::Period2Diagram => commands::cmd_period2_diagram(&cfg),
        Command::HyperparamSweep => commands::cmd_hyperparam_sweep(&cfg),
        Command::LemmaCheck => commands::cmd_lemma_check(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // Validation problems (bad config, bad inputs) exit 1; runtime
        // failures (I/O, divergence, estimator breakdown) exit 2.
        Err(e @ (Error::Rejected(_) | Error::Parse { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
