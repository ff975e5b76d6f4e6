use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use csi_sgan::experiments::{cmd_dump_fakes, cmd_evaluate, cmd_generate_data, cmd_sweep, cmd_train, ExperimentConfig};
use csi_sgan::Error;

/// Semi-supervised DCGAN CSI fingerprinting experiments.
///
/// Any configuration key can be set in the TOML file given by --config and overridden with a
/// same-named flag, e.g. `--epochs 10 --budgets 16,6400`.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a dataset and save it as CSV.
    GenerateData(Common),
    /// Train one model and save checkpoints and history.
    Train(Common),
    /// Score a classifier checkpoint on the test set.
    Evaluate(Common),
    /// Accuracy over label budgets, models and seeds.
    Sweep(Common),
    /// Train while dumping generated samples at chosen epochs.
    DumpFakes(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `--key value` overrides.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
    overrides: Vec<String>,
}

fn run(command: Command) -> Result<(), Error> {
    let (Command::GenerateData(c)
    | Command::Train(c)
    | Command::Evaluate(c)
    | Command::Sweep(c)
    | Command::DumpFakes(c)) = &command;
    let config = ExperimentConfig::resolve(c.config.as_deref(), &c.overrides)?;
    match command {
        Command::GenerateData(_) => cmd_generate_data(&config).map(drop),
        Command::Train(_) => cmd_train(&config).map(drop),
        Command::Evaluate(_) => cmd_evaluate(&config).map(drop),
        Command::Sweep(_) => cmd_sweep(&config).map(drop),
        Command::DumpFakes(_) => cmd_dump_fakes(&config).map(drop),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
