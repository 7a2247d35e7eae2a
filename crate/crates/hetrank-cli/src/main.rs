//! Experiment driver: sweeps the simulator and the analytical models into
//! CSV, prints the hardware comparison tables and exposes the signaling
//! codecs for inspection.
//!
//! Exit codes: 0 on success, 2 for configuration problems, 3 for runtime
//! (I/O) failures.

mod commands;
mod experiment;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hetrank::costmodel::Catalog;

use experiment::{apply_config_file, parse_lambdas, parse_modes, parse_users, ExperimentSpec};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file or input data.
    Config(String),
    /// I/O or other environmental failure.
    Runtime(String),
}

#[derive(Parser)]
#[command(
    name = "hetrank",
    about = "Scheduling simulator and analytical models for mixed analog/digital beamforming receivers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SweepArgs {
    /// Config file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Inclusive user-count range `a..b` (or a single count).
    #[arg(long)]
    users: Option<String>,
    /// Comma-separated traffic rates.
    #[arg(long)]
    lambda: Option<String>,
    /// Operating mode: hybrid, het or both.
    #[arg(long)]
    mode: Option<String>,
    /// Repetitions per sweep point (seed offsets).
    #[arg(long)]
    reps: Option<usize>,
    /// Base seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the scheduler over a sweep and emit per-run metrics as CSV.
    Simulate(SweepArgs),
    /// Evaluate the closed-form throughput estimate over a sweep.
    Estimate(SweepArgs),
    /// Evaluate the capacity bound over a user sweep.
    Bound(SweepArgs),
    /// Print component count, power, cost and sample-stream tables.
    Cost {
        /// Catalog file overriding the built-in component data.
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Number of antennas.
        #[arg(long, default_value_t = 32)]
        antennas: usize,
        /// Number of RF chains.
        #[arg(long, default_value_t = 2)]
        chains: usize,
    },
    /// Encode or decode signaling messages (hex in/out).
    Codec {
        #[command(subcommand)]
        direction: CodecDirection,
    },
}

#[derive(Subcommand)]
enum CodecDirection {
    /// Encode a message from its fields.
    Encode {
        #[command(subcommand)]
        message: EncodeMessage,
    },
    /// Decode a hex message into its fields.
    Decode {
        #[command(subcommand)]
        message: DecodeMessage,
    },
}

#[derive(Subcommand)]
enum EncodeMessage {
    /// Capability list; each entry is `fix,tradable,mask`.
    Abcap { entries: Vec<String> },
    /// Sub-band configuration: `start_rb,num_rb,tradcapuse,num_trade_chains`.
    Bwp { fields: String },
    /// Allocation extension: `mcs,port_field_width,antenna_ports`.
    Dci { fields: String },
}

#[derive(Subcommand)]
enum DecodeMessage {
    Abcap { hex: String },
    Bwp { hex: String },
    Dci { hex: String },
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))
}

fn build_spec(args: &SweepArgs) -> Result<ExperimentSpec, CliError> {
    let mut spec = ExperimentSpec::default();
    if let Some(path) = &args.config {
        let text = read_file(path)?;
        apply_config_file(&mut spec, &text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
    }
    if let Some(users) = &args.users {
        spec.users = parse_users(users)?;
    }
    if let Some(lambda) = &args.lambda {
        spec.lambdas = parse_lambdas(lambda)?;
    }
    if let Some(mode) = &args.mode {
        spec.modes = parse_modes(mode)?;
    }
    if let Some(reps) = args.reps {
        spec.reps = reps;
    }
    if let Some(seed) = args.seed {
        spec.config.seed = seed;
    }
    if let Some(out) = &args.out {
        spec.out = Some(out.clone());
    }
    Ok(spec)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let spec = build_spec(&args)?;
            let csv = commands::cmd_simulate(&spec)?;
            emit(&csv, spec.out.as_ref())
        }
        Command::Estimate(args) => {
            let spec = build_spec(&args)?;
            let csv = commands::cmd_estimate(&spec)?;
            emit(&csv, spec.out.as_ref())
        }
        Command::Bound(args) => {
            let spec = build_spec(&args)?;
            let csv = commands::cmd_bound(&spec)?;
            emit(&csv, spec.out.as_ref())
        }
        Command::Cost {
            catalog,
            antennas,
            chains,
        } => {
            let catalog = match catalog {
                None => Catalog::default(),
                Some(path) => {
                    let text = read_file(&path)?;
                    Catalog::parse(&text)
                        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
                }
            };
            let table = commands::cmd_cost(&catalog, antennas, chains)?;
            print!("{table}");
            Ok(())
        }
        Command::Codec { direction } => {
            let text = match direction {
                CodecDirection::Encode { message } => match message {
                    EncodeMessage::Abcap { entries } => {
                        commands::encode_abcap_cmd(&entries)? + "\n"
                    }
                    EncodeMessage::Bwp { fields } => commands::encode_bwp_cmd(&fields)? + "\n",
                    EncodeMessage::Dci { fields } => commands::encode_dci_cmd(&fields)? + "\n",
                },
                CodecDirection::Decode { message } => match message {
                    DecodeMessage::Abcap { hex } => commands::decode_abcap_cmd(&hex)?,
                    DecodeMessage::Bwp { hex } => commands::decode_bwp_cmd(&hex)?,
                    DecodeMessage::Dci { hex } => commands::decode_dci_cmd(&hex)?,
                },
            };
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
