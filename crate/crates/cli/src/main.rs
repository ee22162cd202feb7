//! `toric`: JSON front end for the toric-core library.
//!
//! Exit status: 0 success, 2 malformed input or validation failure,
//! 3 unmet precondition (non-complete fan, not ℚ-Cartier, cap exceeded, ...),
//! 1 failed internal cross-check or I/O error.

mod commands;
mod input;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use toric_core::polyhedra::{DEFAULT_SUBSET_CAP, MAX_PROBE_M};
use toric_core::rayset::MAX_RAYS;
use toric_core::Error;

#[derive(Parser, Debug)]
#[command(name = "toric", version, about = "Cohomology, asymptotics and GKZ chambers of toric divisors")]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FanArg {
    /// Fan document (JSON).
    #[arg(long, value_name = "PATH")]
    fan: PathBuf,
}

#[derive(Args, Debug)]
struct JobArgs {
    #[command(flatten)]
    fan: FanArg,
    /// Divisor document (JSON).
    #[arg(long, value_name = "PATH")]
    divisor: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a fan document and list every problem found.
    Validate(FanArg),
    /// Dimensions h^i(D).
    Cohom {
        #[command(flatten)]
        job: JobArgs,
        /// Also run the Čech-complex oracle and compare.
        #[arg(long)]
        check_oracle: bool,
        /// Maximum number of rays for the subset sweep.
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP as u64, value_parser = clap::value_parser!(u64).range(1..=MAX_RAYS as u64))]
        cap: u64,
    },
    /// Euler characteristic χ(O(D)).
    Euler(JobArgs),
    /// Asymptotic cohomological functions ĥ^i(D).
    Asym(JobArgs),
    /// Top self-intersection (D^n) against Σ(-1)^i ĥ^i(D).
    Selfint(JobArgs),
    /// Convergence table h^i(mD)·n!/m^n, or lattice point counts of one region with --subset.
    Probe {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..=MAX_PROBE_M as u64))]
        mmax: u64,
        /// Ray indices I of the region P_{D,I}, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        subset: Option<Vec<usize>>,
    },
    /// The GKZ cone containing [D].
    GkzLocate(JobArgs),
    /// All maximal GKZ chambers of a complete fan.
    GkzEnumerate {
        #[command(flatten)]
        fan: FanArg,
        /// Allow the triangulation search on three-dimensional fans.
        #[arg(long)]
        dim3: bool,
    },
    /// Ampleness by convexity, by asymptotic cohomology and by chamber.
    Ample(JobArgs),
    /// Print a built-in fan as a fan document.
    Fixture {
        /// P1, P2, P1xP1, F1, P112, Bl2P2, Bl3P2, P1xP1xP1, P3, SquareCone or CubeFan.
        name: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Cohom { .. } => "cohom",
            Command::Euler(_) => "euler",
            Command::Asym(_) => "asym",
            Command::Selfint(_) => "selfint",
            Command::Probe { .. } => "probe",
            Command::GkzLocate(_) => "gkz-locate",
            Command::GkzEnumerate { .. } => "gkz-enumerate",
            Command::Ample(_) => "ample",
            Command::Fixture { .. } => "fixture",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input document.
    Input(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidFan(_) | Error::DivisorLength { .. } | Error::InvalidArgument(_) => 2,
                Error::StepUnderflow | Error::Inconsistent(_) => 1,
                _ => 3,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Core(e) => match e {
                Error::InvalidFan(_) => "invalid_fan",
                Error::DivisorLength { .. } => "divisor_length",
                Error::InvalidArgument(_) => "invalid_argument",
                Error::NotComplete => "not_complete",
                Error::NotSimplicial(_) | Error::NonSimplicialCone(_) => "not_simplicial",
                Error::NotQCartier => "not_q_cartier",
                Error::Unbounded => "unbounded",
                Error::CapExceeded { .. } => "cap_exceeded",
                Error::NotEffective => "not_effective",
                Error::OnWall => "on_wall",
                Error::StepUnderflow => "step_underflow",
                Error::Unsupported(_) => "unsupported",
                Error::RayMismatch(_) => "ray_mismatch",
                Error::NotMember(_) => "not_member",
                Error::Inconsistent(_) => "inconsistent",
            },
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), json!(self.kind()));
        match self {
            CliError::Input(msg) => {
                m.insert("message".into(), json!(msg));
            }
            CliError::Core(e) => {
                m.insert("message".into(), json!(e.to_string()));
                if let Error::InvalidFan(diags) = e {
                    m.insert("diagnostics".into(), diags.iter().map(|d| json!(d.to_string())).collect());
                }
            }
        }
        Value::Object(m)
    }
}

/// What a command hands back to the envelope.
pub struct Outcome {
    pub result: Value,
    /// Set when a cross-check inside the report failed.
    pub check_failed: Option<String>,
}

impl Outcome {
    pub fn ok(result: Value) -> Self {
        Outcome { result, check_failed: None }
    }
}

/// Digests and warnings gathered while loading inputs.
#[derive(Default)]
pub struct Context {
    pub inputs: Map<String, Value>,
    pub warnings: Vec<String>,
}

fn run(command: &Command, ctx: &mut Context) -> Result<Outcome, CliError> {
    match command {
        Command::Validate(a) => commands::validate(ctx, &a.fan),
        Command::Cohom { job, check_oracle, cap } => {
            commands::cohom(ctx, &job.fan.fan, &job.divisor, *check_oracle, *cap as usize)
        }
        Command::Euler(j) => commands::euler(ctx, &j.fan.fan, &j.divisor),
        Command::Asym(j) => commands::asym(ctx, &j.fan.fan, &j.divisor),
        Command::Selfint(j) => commands::selfint(ctx, &j.fan.fan, &j.divisor),
        Command::Probe { job, mmax, subset } => {
            commands::probe(ctx, &job.fan.fan, &job.divisor, *mmax as usize, subset.as_deref())
        }
        Command::GkzLocate(j) => commands::gkz_locate(ctx, &j.fan.fan, &j.divisor),
        Command::GkzEnumerate { fan, dim3 } => commands::gkz_enumerate(ctx, &fan.fan, *dim3),
        Command::Ample(j) => commands::ample(ctx, &j.fan.fan, &j.divisor),
        Command::Fixture { .. } => unreachable!("handled before the envelope"),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> ExitCode {
    match out {
        Some(path) => match fs::write(path, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                ExitCode::from(1)
            }
        },
        None => {
            print!("{text}");
            ExitCode::SUCCESS
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    if let Command::Fixture { name } = &cli.command {
        return match commands::fixture(name) {
            Some(doc) => emit(&report::render(&doc), cli.out.as_ref()),
            None => {
                eprintln!("error: unknown fixture {name:?}");
                ExitCode::from(2)
            }
        };
    }

    let mut ctx = Context::default();
    let outcome = run(&cli.command, &mut ctx);

    let mut doc = Map::new();
    doc.insert(
        "tool".into(),
        json!({ "name": "toric", "version": env!("CARGO_PKG_VERSION") }),
    );
    doc.insert("command".into(), json!(cli.command.name()));
    doc.insert("inputs".into(), Value::Object(std::mem::take(&mut ctx.inputs)));
    doc.insert("warnings".into(), json!(ctx.warnings));
    let code = match outcome {
        Ok(o) => {
            doc.insert("result".into(), o.result);
            match o.check_failed {
                None => {
                    doc.insert("status".into(), json!("ok"));
                    0
                }
                Some(msg) => {
                    eprintln!("error: {msg}");
                    doc.insert("status".into(), json!("check_failed"));
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.to_json()["message"].as_str().unwrap_or_default());
            doc.insert("status".into(), json!("error"));
            doc.insert("error".into(), e.to_json());
            e.exit_code()
        }
    };
    let written = emit(&report::render(&Value::Object(doc)), cli.out.as_ref());
    if code == 0 {
        written
    } else {
        ExitCode::from(code)
    }
}
