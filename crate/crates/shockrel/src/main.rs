use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use shockrel::cli::{self, CommonOpts, CompareKind};
use shockrel::specdoc::MethodRequest;

/// Reliability of systems under fatal shocks, shock-driven degradation
/// and hazard growth.
#[derive(Parser)]
#[command(name = "shockrel", version, about)]
struct Args {
    /// Number of worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct SharedFlags {
    /// Time grid as start:stop:count.
    #[arg(long)]
    grid: Option<String>,

    /// Monte Carlo histories per estimate.
    #[arg(long)]
    histories: Option<usize>,

    /// Root seed; overrides SHOCKREL_SEED and the spec file.
    #[arg(long)]
    seed: Option<u64>,

    /// Series truncation tolerance.
    #[arg(long)]
    tol: Option<f64>,

    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SharedFlags {
    fn into_opts(self) -> CommonOpts {
        CommonOpts {
            grid: self.grid,
            histories: self.histories,
            seed: self.seed,
            tol: self.tol,
            out: self.out,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a reliability curve for a spec file and emit CSV.
    Reliability {
        /// Model spec file (JSON).
        #[arg(long)]
        spec: PathBuf,

        /// Evaluation method: auto, mc1, mc2, series or laplace.
        #[arg(long, default_value = "auto")]
        method: String,

        #[command(flatten)]
        flags: SharedFlags,
    },
    /// Run the built-in validation table and assert its checks.
    Validate {
        #[command(flatten)]
        flags: SharedFlags,
    },
    /// Compare two systems (or check ageing for one).
    Compare {
        /// Comparison kind: fatality, dependence, intensity or nbu.
        #[arg(long)]
        kind: String,

        /// First (base) spec file.
        #[arg(long)]
        spec_a: PathBuf,

        /// Second spec file; omitted for the ageing check.
        #[arg(long)]
        spec_b: Option<PathBuf>,

        #[command(flatten)]
        flags: SharedFlags,
    },
}

fn parse_method(text: &str) -> Result<MethodRequest, String> {
    match text {
        "auto" => Ok(MethodRequest::Auto),
        "mc1" => Ok(MethodRequest::Mc1),
        "mc2" => Ok(MethodRequest::Mc2),
        "series" => Ok(MethodRequest::Series),
        "laplace" => Ok(MethodRequest::Laplace),
        other => Err(format!("unknown method {other:?}")),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(cli::EXIT_USAGE as u8);
        }
    };
    if let Some(n) = args.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: could not configure {n} workers: {e}");
            return ExitCode::from(cli::EXIT_USAGE as u8);
        }
    }
    let code = match args.command {
        Command::Reliability { spec, method, flags } => match parse_method(&method) {
            Ok(m) => cli::cmd_reliability(&spec, m, &flags.into_opts()),
            Err(msg) => {
                eprintln!("error: {msg}");
                cli::EXIT_USAGE
            }
        },
        Command::Validate { flags } => cli::cmd_validate(&flags.into_opts()),
        Command::Compare { kind, spec_a, spec_b, flags } => match kind.parse::<CompareKind>() {
            Ok(k) => cli::cmd_compare(k, &spec_a, spec_b.as_deref(), &flags.into_opts()),
            Err(msg) => {
                eprintln!("error: {msg}");
                cli::EXIT_USAGE
            }
        },
    };
    ExitCode::from(code as u8)
}
