//! `latcurve`: invariants and Cohen-Macaulay type of reduced curve germs.

mod descriptor;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latcurve_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                Error::UnknownGerm(_)
                | Error::BadParams { .. }
                | Error::InvalidSeries(_)
                | Error::InconsistentInput(_)
                | Error::InconsistentSemigroup(_)
                | Error::PathInconsistency { .. }
                | Error::DimensionMismatch { .. } => 2,
                Error::MarginTooSmall { .. } | Error::TruncationUnsound { .. } => 3,
                Error::RouteDisagreement { .. } => 4,
                _ => 1,
            },
        }
    }

    fn hint(&self) -> Option<&'static str> {
        match self {
            CliError::Core(Error::MarginTooSmall { .. }) => {
                Some("pass a larger --bound, or omit it to use the default region")
            }
            CliError::Core(Error::TruncationUnsound { .. }) => {
                Some("lower --depth, or pass a larger --bound")
            }
            CliError::Core(Error::UnknownGerm(_)) => Some("run `latcurve catalog` for the families"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Germ descriptor file (JSON).
    #[arg(long, value_name = "FILE", conflicts_with = "builtin")]
    germ: Option<PathBuf>,
    /// Catalog germ, e.g. `D,5`, `T,3,7` or `E12`.
    #[arg(long, value_name = "NAME[,params]")]
    builtin: Option<String>,
    /// Grid bound L1,..,Lr overriding the default region.
    #[arg(long, value_name = "L1,..,Lr", value_delimiter = ',')]
    bound: Option<Vec<u32>>,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Print the elapsed time to stderr.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Parser)]
#[command(name = "latcurve", version, about = "Lattice homology and Cohen-Macaulay type of curve germs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Multiplicity, conductor, delta, min w0, Gorenstein flag, Euler characteristic.
    Invariants {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// Weight function on R(0,c): `*` marks semigroup elements, `[ ]` the conductor.
    Table {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// Lattice homology ranks, torsion and U-ranks per level.
    Homology {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// E1 ranks of the level filtration and minimal spectral cycles.
    Spectral {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
        /// Minimal cycle group M_{k,n}; repeatable.
        #[arg(long, value_name = "k,n", allow_hyphen_values = true)]
        minimal: Vec<String>,
        /// Level entry (E1_{-d,d+k})_{-2n}; repeatable.
        #[arg(long, value_name = "d,k,n", allow_hyphen_values = true)]
        level: Vec<String>,
    },
    /// Univariate motivic coefficients and the omega-substituted series.
    Motivic {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
        /// Highest order (and level) to compute.
        #[arg(long, default_value_t = 6)]
        depth: i64,
    },
    /// Cohen-Macaulay type by all three routes.
    Classify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// Lists the built-in families, or exports one entry as a descriptor.
    Catalog {
        /// Entry to export, e.g. `T,3,7`.
        #[arg(long, value_name = "NAME[,params]")]
        builtin: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn load(input: &Input) -> Result<descriptor::Loaded, CliError> {
    let d = match (&input.germ, &input.builtin) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            descriptor::parse(&text, &path.display().to_string())?
        }
        (None, Some(spec)) => descriptor::builtin(spec)?,
        (None, None) => {
            return Err(CliError::Parse("one of --germ or --builtin is required".into()))
        }
    };
    descriptor::load(d, input.bound.clone())
}

fn run(cli: Cli) -> Result<String, CliError> {
    let start = Instant::now();
    let (out, timing) = match cli.command {
        Command::Invariants { input, common } => {
            let l = load(&input)?;
            (report::invariants(&l, common.format)?, common.timing)
        }
        Command::Table { input, common } => {
            let l = load(&input)?;
            (report::table(&l, common.format)?, common.timing)
        }
        Command::Homology { input, common } => {
            let l = load(&input)?;
            (report::homology(&l, common.format)?, common.timing)
        }
        Command::Spectral {
            input,
            common,
            minimal,
            level,
        } => {
            let l = load(&input)?;
            let q = report::SpectralQueries::parse(&minimal, &level)?;
            (report::spectral(&l, &q, common.format)?, common.timing)
        }
        Command::Motivic {
            input,
            common,
            depth,
        } => {
            let l = load(&input)?;
            (report::motivic(&l, depth, common.format)?, common.timing)
        }
        Command::Classify { input, common } => {
            let l = load(&input)?;
            (report::classify(&l, common.format)?, common.timing)
        }
        Command::Catalog { builtin, format } => (report::catalog(builtin.as_deref(), format)?, false),
    };
    if timing {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    Ok(out)
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("LATCURVE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Parse(format!("LATCURVE_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Io(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|_| run(cli)) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(h) = e.hint() {
                eprintln!("hint: {h}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
