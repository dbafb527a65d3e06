//! `frobsplit`: F-purity tests, F-differents and moduli divisors of cubic
//! families from the command line. Reports are JSON with sorted keys on
//! stdout.

mod commands;
mod json;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand};
use frobsplit_core::fibration::CONE;
use frobsplit_core::groebner::{GbOptions, DEFAULT_DEGREE_CAP};
use serde_json::{json, Value};

use commands::{Failure, Session};
use manifest::{sha256_hex, RunManifest};

#[derive(Debug, Parser)]
#[command(
    name = "frobsplit",
    version,
    about = "Frobenius-splitting invariants in characteristic p"
)]
pub struct Cli {
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,

    /// Degree cap for Buchberger's algorithm.
    #[arg(long, global = true, env = "FROBSPLIT_DEGREE_CAP", default_value_t = DEFAULT_DEGREE_CAP)]
    pub degree_cap: u64,

    /// Write a run manifest (input and result digests) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct LevelArgs {
    /// The characteristic.
    #[arg(short = 'p', value_name = "P")]
    pub p: u64,
    /// Frobenius exponent, q = p^e.
    #[arg(short = 'e', value_name = "E", default_value_t = 1)]
    pub e: u32,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Comma-separated variable names.
    #[arg(long, value_name = "NAMES")]
    pub vars: String,
    /// A hypersurface equation; repeat for several.
    #[arg(long, value_name = "EXPR")]
    pub hypersurface: Vec<String>,
    /// One ideal generator; repeat for several.
    #[arg(long, value_name = "EXPR")]
    pub ideal: Vec<String>,
    /// The point, as comma-separated integers (default: the origin).
    #[arg(long, value_name = "COORDS", allow_hyphen_values = true)]
    pub at: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct CenterArgs {
    #[command(flatten)]
    pub level: LevelArgs,
    #[command(flatten)]
    pub input: InputArgs,
    /// Comma-separated generators of the center.
    #[arg(long, value_name = "GENS")]
    pub center: String,
    /// The Fedder polynomial f; defaults to (product of the equations)^(q-1).
    #[arg(long, value_name = "EXPR")]
    pub fedder: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArg {
    /// Family of plane cubics in x, y, z over the t-line.
    #[arg(long, value_name = "EXPR", default_value = CONE)]
    pub family: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fedder's F-purity test at a point.
    Fpure {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Compatibility of a center with the map given by a Fedder polynomial.
    Center(CenterArgs),
    /// F-different of a complete-intersection center.
    Fdiff(CenterArgs),
    /// ν-invariants up to level e and the resulting threshold estimate.
    Fpt {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Hasse polynomial of a family against the Legendre polynomial.
    Hasse {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        family: FamilyArg,
        /// Also report the fiber over this parameter.
        #[arg(long, value_name = "LAMBDA", allow_hyphen_values = true)]
        lambda0: Option<i64>,
    },
    /// Fiber scans and moduli divisors of cubic families.
    #[command(subcommand)]
    Fibration(FibrationCommand),
    /// Q-divisor arithmetic on the affine line.
    #[command(subcommand)]
    Divisor(DivisorCommand),
}

#[derive(Debug, Subcommand)]
pub enum FibrationCommand {
    /// Per-fiber F-splitting over every F_p-point of the base.
    Scan {
        #[arg(short = 'p', value_name = "P")]
        p: u64,
        #[command(flatten)]
        family: FamilyArg,
    },
    /// The moduli divisor (1/(q-1)) div(h).
    Moduli {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        family: FamilyArg,
    },
    /// Reduce an integer family modulo several primes.
    Charscan {
        /// Comma-separated odd primes.
        #[arg(long, value_name = "PRIMES", value_delimiter = ',', num_args = 1..)]
        primes: Vec<u64>,
        /// Parameter value tested against each support.
        #[arg(long, value_name = "LAMBDA", allow_hyphen_values = true)]
        lambda0: i64,
        #[command(flatten)]
        family: FamilyArg,
    },
}

#[derive(Debug, Clone, Args)]
pub struct DivisorCtx {
    #[arg(short = 'p', value_name = "P")]
    pub p: u64,
    /// Coordinate on the target line.
    #[arg(long, value_name = "NAME", default_value = "t")]
    pub var: String,
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub ctx: DivisorCtx,
    /// Divisor as JSON: [{"prime": "t+1", "coeff": "1/2"}, ...].
    #[arg(long, value_name = "JSON")]
    pub divisor: String,
    /// The map as a polynomial in the source coordinate.
    #[arg(long = "map", value_name = "EXPR")]
    pub map: String,
    /// Coordinate on the source line.
    #[arg(long, value_name = "NAME", default_value = "s")]
    pub source_var: String,
}

#[derive(Debug, Subcommand)]
pub enum DivisorCommand {
    /// Sum of two divisors.
    Add {
        #[command(flatten)]
        ctx: DivisorCtx,
        #[arg(long, value_name = "JSON")]
        lhs: String,
        #[arg(long, value_name = "JSON")]
        rhs: String,
    },
    /// Pullback along s -> g(s).
    Pullback(MapArgs),
    /// Pullback minus the ramification divisor.
    Basechange(MapArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Fpure { .. } => "fpure",
            Command::Center(_) => "center",
            Command::Fdiff(_) => "fdiff",
            Command::Fpt { .. } => "fpt",
            Command::Hasse { .. } => "hasse",
            Command::Fibration(FibrationCommand::Scan { .. }) => "fibration scan",
            Command::Fibration(FibrationCommand::Moduli { .. }) => "fibration moduli",
            Command::Fibration(FibrationCommand::Charscan { .. }) => "fibration charscan",
            Command::Divisor(DivisorCommand::Add { .. }) => "divisor add",
            Command::Divisor(DivisorCommand::Pullback(_)) => "divisor pullback",
            Command::Divisor(DivisorCommand::Basechange(_)) => "divisor basechange",
        }
    }
}

fn render(value: &Value, text: bool) -> String {
    if text {
        json::render_text(value)
    } else {
        let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let started = Instant::now();
    let mut session = Session::new(GbOptions {
        degree_cap: cli.degree_cap,
    });
    let (code, value) = match commands::run(&cli.command, &mut session) {
        Ok(v) => (0u8, v),
        Err(Failure::Domain {
            kind,
            message,
            report,
        }) => (
            1,
            json!({"error": {"kind": kind, "message": message}, "report": report}),
        ),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}\n");
            eprintln!("{}", Cli::command().render_usage());
            (2, json!({"error": {"kind": "usage", "message": message}}))
        }
    };
    let out = render(&value, cli.text);
    print!("{out}");
    if let Some(path) = &cli.manifest {
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            subcommand: cli.command.name().to_string(),
            p: session.p,
            e: session.e,
            input_digests: session
                .inputs
                .iter()
                .map(|(k, v)| (k.clone(), sha256_hex(v.as_bytes())))
                .collect(),
            wall_clock_ms: started.elapsed().as_millis(),
            exit_code: code,
            result_digest: sha256_hex(out.as_bytes()),
        };
        if let Err(e) = std::fs::write(path, render(&manifest.to_json(), false)) {
            eprintln!("error: cannot write manifest {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
