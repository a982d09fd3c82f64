use clap::{Parser, Subcommand};
use lavarnet_cli::commands::{
    cmd_bench, cmd_evaluate, cmd_generate, cmd_interpret, cmd_train, RunContext,
};
use lavarnet_cli::config::{preset, ExperimentConfig};
use lavarnet_cli::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

/// Forecasting laboratory for lagged-variable representation networks.
#[derive(Parser)]
#[command(name = "lavarnet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration (TOML). Mutually exclusive with --preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Built-in configuration: "desk" (fast single scenario) or "full"
    /// (the long-running simulation grid).
    #[arg(long, global = true)]
    preset: Option<String>,

    /// Output directory.
    #[arg(long, global = true, default_value = "runs/out")]
    out: PathBuf,

    /// Base seed; every repetition, shuffle and initialization derives
    /// deterministically from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for independent training runs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Write synthetic series and ground-truth coupling files.
    Generate,
    /// Train every configured (model, repetition, grid candidate).
    Train,
    /// Score grid winners on the test split; write per-run reports and a
    /// cross-model summary.
    Evaluate,
    /// Score trained lag weights against generated ground truth.
    Interpret,
    /// Time model training for a fixed number of epochs.
    Bench,
}

fn scenarios(cli: &Cli) -> Result<Vec<(String, ExperimentConfig)>, CliError> {
    match (&cli.config, &cli.preset) {
        (Some(_), Some(_)) => Err(CliError::Config(
            "--config and --preset are mutually exclusive".into(),
        )),
        (Some(path), None) => Ok(vec![(String::new(), ExperimentConfig::load(path)?)]),
        (None, Some(name)) => preset(name),
        (None, None) => Err(CliError::Config(
            "either --config <path> or --preset <name> is required".into(),
        )),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    for (sub, cfg) in scenarios(cli)? {
        let out_dir = if sub.is_empty() {
            cli.out.clone()
        } else {
            cli.out.join(&sub)
        };
        let ctx = RunContext {
            out_dir,
            seed: cli.seed,
            jobs: cli.jobs,
        };
        if !sub.is_empty() {
            eprintln!("scenario {sub}");
        }
        match cli.command {
            Command::Generate => {
                let s = cmd_generate(&cfg, &ctx)?;
                eprintln!("generated {} repetition(s) in {}", s.reps, ctx.out_dir.display());
            }
            Command::Train => {
                let m = cmd_train(&cfg, &ctx)?;
                eprintln!("trained {} run(s)", m.runs.len());
            }
            Command::Evaluate => {
                let s = cmd_evaluate(&cfg, &ctx)?;
                for row in &s.models {
                    eprintln!(
                        "{}: test MAE {} +- {} over {} rep(s)",
                        row.model, row.mae_mean, row.mae_std, row.reps
                    );
                }
            }
            Command::Interpret => {
                let s = cmd_interpret(&cfg, &ctx)?;
                for row in &s.models {
                    eprintln!(
                        "{}: mean R_L {} mean R_V {}",
                        row.model, row.r_l_mean, row.r_v_mean
                    );
                }
            }
            Command::Bench => {
                let b = cmd_bench(&cfg, &ctx)?;
                for row in &b.rows {
                    eprintln!("{}: {} s mean over {} realization(s)", row.model, row.mean_seconds, b.realizations);
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
