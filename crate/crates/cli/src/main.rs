//! `dimrank`: exact invariants of AH building blocks and systems from the
//! command line. Reports are deterministic JSON on stdout; certificates can
//! additionally be written to a file. Exit codes: 0 computed, 2 computed
//! but some verdict abstained, 3 input error.

mod commands;
mod input;
mod json;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use commands::CommandOutput;

#[derive(Parser)]
#[command(
    name = "dimrank",
    version,
    about = "Exact dimension-rank ratios, positivity certificates, and comparison-radius witnesses"
)]
struct Cli {
    /// Write the machine-readable certificate list to this path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension-rank ratios of the blocks described by a spec file.
    Drr {
        /// JSON algebra spec: {"block": ...}, {"villadsen": ...}, or {"blocks": ..., "maps": ...}.
        spec: PathBuf,
        /// Report the limsup over stages starting here (clamped to the last stage).
        #[arg(long, default_value_t = 0)]
        tail_from: usize,
    },
    /// Nistor stable ranks of the blocks described by a spec file.
    Sr { spec: PathBuf },
    /// Generate a sphere-power system with prescribed dimension-rank ratio.
    Construct {
        /// Target ratio as an exact rational "p/q".
        #[arg(long)]
        c: String,
        /// Number of stages to generate.
        #[arg(long)]
        stages: usize,
    },
    /// Positivity verdicts with certificates for the classes in an input file.
    Positivity { input: PathBuf },
    /// Run the comparison, cancellation, and interpolation checkers at slack r.
    Compare {
        /// Slack as an exact rational "p/q".
        #[arg(long)]
        r: String,
        input: PathBuf,
    },
    /// Build and verify a radius-of-comparison lower-bound witness.
    RcBound {
        /// Ambient dimension of the model spectrum.
        #[arg(long)]
        dim: u64,
        /// Unit rank (matrix size over the spectrum).
        #[arg(long)]
        rank: String,
        /// Also report the witness after tensoring the unit by this factor.
        #[arg(long)]
        amplify: Option<String>,
    },
    /// Build and verify the perforation witness on a marked sphere model.
    AupWitness {
        /// Ambient dimension (at least 5); the marked sphere is S^4.
        #[arg(long, default_value_t = 5)]
        dim: u64,
        /// Exhaustive multiple search bound for rediscovery.
        #[arg(long, default_value_t = 4)]
        max_mn: u64,
    },
}

fn digest_hex(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let mut hex = String::with_capacity(2 * hash.len() + 7);
    hex.push_str("sha256:");
    for byte in hash {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

fn read_input(path: &Path) -> Result<(String, String), String> {
    let bytes = std::fs::read(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let text = String::from_utf8(bytes).map_err(|_| format!("{}: not UTF-8", path.display()))?;
    let digest = digest_hex(text.as_bytes());
    Ok((text, digest))
}

fn parse_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<(T, String), String> {
    let (text, digest) = read_input(path)?;
    let value: T = serde_json::from_str(&text)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((value, digest))
}

fn run(cli: &Cli) -> Result<(CommandOutput, String), String> {
    match &cli.command {
        Command::Drr { spec, tail_from } => {
            let (spec, digest) = parse_file::<input::AlgebraSpec>(spec)?;
            let parsed = input::convert_algebra(&spec)?;
            Ok((commands::cmd_drr(parsed, *tail_from)?, digest))
        }
        Command::Sr { spec } => {
            let (spec, digest) = parse_file::<input::AlgebraSpec>(spec)?;
            let parsed = input::convert_algebra(&spec)?;
            Ok((commands::cmd_sr(parsed)?, digest))
        }
        Command::Construct { c, stages } => {
            let digest = digest_hex(format!("construct c={c} stages={stages}").as_bytes());
            Ok((commands::cmd_construct(c, *stages)?, digest))
        }
        Command::Positivity { input: path } => {
            let (spec, digest) = parse_file::<input::PositivityInput>(path)?;
            Ok((commands::cmd_positivity(&spec)?, digest))
        }
        Command::Compare { r, input: path } => {
            let (spec, digest) = parse_file::<input::CompareInput>(path)?;
            let r = json::parse_rational(r).map_err(|e| format!("--r: {e}"))?;
            let model = input::convert_model(&spec.model)?;
            Ok((commands::cmd_compare(&model, &r, &spec)?, digest))
        }
        Command::RcBound { dim, rank, amplify } => {
            let digest = digest_hex(
                format!("rc-bound dim={dim} rank={rank} amplify={amplify:?}").as_bytes(),
            );
            Ok((commands::cmd_rc_bound(*dim, rank, amplify.as_deref())?, digest))
        }
        Command::AupWitness { dim, max_mn } => {
            let digest = digest_hex(format!("aup-witness dim={dim} max_mn={max_mn}").as_bytes());
            Ok((commands::cmd_aup_witness(*dim, *max_mn)?, digest))
        }
    }
}

fn emit(cli: &Cli, output: &CommandOutput, digest: &str) -> Result<(), String> {
    let report = json!({
        "report": output.body,
        "meta": {
            "tool": "dimrank",
            "version": env!("CARGO_PKG_VERSION"),
            "input_digest": digest,
            "exact": true,
        },
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));

    if let Some(path) = &cli.out {
        let payload = json!({
            "input_digest": digest,
            "certificates": Value::Array(output.certificates.clone()),
        });
        let text = serde_json::to_string_pretty(&payload).expect("certificates serialize");
        std::fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(3);
        }
    };

    match run(&cli) {
        Ok((output, digest)) => match emit(&cli, &output, &digest) {
            Ok(()) if output.has_unknown => ExitCode::from(2),
            Ok(()) => ExitCode::SUCCESS,
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(3)
            }
        },
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
