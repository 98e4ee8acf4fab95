//! `hesse`: command-line access to regulators, periods, L-values, integrality
//! and Mahler measures of the Hesse cubic family.

mod commands;
mod output;
mod parse;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use hesse_core::integrality::Element;
use hesse_core::lseries::{ApCache, DEFAULT_MAX_CONDUCTOR};
use hesse_core::numerics::PrecisionContext;
use hesse_core::periods::Cycle;
use hesse_core::regulator::DetKind;
use hesse_core::verify::Suite;
use rug::Rational;

use commands::Env;
use output::CommandResult;

/// Extra working digits beyond those printed.
const GUARD_DIGITS: u32 = 10;

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(hesse_core::Error),
    Io(String),
}

impl From<hesse_core::Error> for CliError {
    fn from(e: hesse_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_domain() => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Core(e) if e.is_domain() => write!(f, "domain error: {e}"),
            CliError::Core(e) => write!(f, "internal error: {e}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "hesse", version, about = "Regulators, periods, L-values and Mahler measures of the Hesse cubic family")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Working precision in significant decimal digits (at least 15).
    #[arg(long, global = true, default_value_t = 30)]
    digits: u32,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Directory for cached a_p tables.
    #[arg(long, global = true, env = "HESSE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Term budget for every series.
    #[arg(long, global = true)]
    max_terms: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a generalized or Kampé de Fériet hypergeometric series.
    #[command(subcommand)]
    Hyper(HyperCmd),
    /// Periods of ω and η over the cycles A and B.
    Periods {
        /// Parameter t, e.g. 1/2 or 0.2+0.1i.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Regulator of a named element on a cycle.
    Regulator {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// xi_zeta, xi_rho, xi_prime or xi_hesse.
        #[arg(long)]
        element: String,
        /// Exponent k of z = ζ^k for xi_rho.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k: i64,
        /// A, B or gamma.
        #[arg(long, default_value = "gamma")]
        cycle: String,
    },
    /// Q_t for 3t in a range, with rational reconstruction.
    Qtable {
        #[arg(long, default_value_t = -20, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, default_value_t = 20, allow_hyphen_values = true)]
        to: i64,
        /// Conductors above this are reported as skipped.
        #[arg(long, default_value_t = DEFAULT_MAX_CONDUCTOR)]
        max_conductor: u64,
    },
    /// L(X_t, 2) over Q or over Q(ζ).
    Lvalue {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Q or K.
        #[arg(long, default_value = "Q")]
        field: String,
    },
    /// Boundary map and integrality of a named element.
    Integrality {
        /// Rational part a of t = a + bζ.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// ζ-coefficient b of t = a + bζ.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        t_zeta: String,
        /// xi_hesse, xi_prime_half or xi_zeta.
        #[arg(long, default_value = "xi_hesse")]
        element: String,
    },
    /// Mahler measure of x³ + y³ + 1 − 3txy and membership in the curved triangle.
    Mahler {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Allow t = −1/3 or t = 1 on the triangle's edge.
        #[arg(long)]
        one_sided: bool,
    },
    /// Regulator determinant R₋₂, R₋₁⁄₂ or R₀.
    Regdet {
        /// minus2, minusHalf or zero.
        #[arg(long)]
        kind: String,
    },
    /// Run the acceptance criteria.
    Verify {
        /// core or full.
        #[arg(long, default_value = "core")]
        suite: String,
    },
}

#[derive(Subcommand)]
enum HyperCmd {
    /// pFq(upper; lower; x).
    Pfq {
        /// Comma-separated upper parameters.
        #[arg(long, allow_hyphen_values = true)]
        upper: String,
        /// Comma-separated lower parameters.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        lower: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Kampé de Fériet series with parameters a, c, b1, b2, d, b′.
    Kdf {
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
}

fn usage<T, E: std::fmt::Display>(flag: &str, r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Usage(format!("{flag}: {e}")))
}

fn run(cli: &Cli) -> Result<(CommandResult, bool), CliError> {
    let g = &cli.global;
    PrecisionContext::with_digits(g.digits).map_err(|e| CliError::Usage(format!("--digits: {e}")))?;
    let mut ctx = PrecisionContext::with_digits(g.digits + GUARD_DIGITS).map_err(|e| CliError::Usage(format!("--digits: {e}")))?;
    if let Some(n) = g.max_terms {
        ctx = ctx.with_max_terms(n).map_err(|e| CliError::Usage(format!("--max-terms: {e}")))?;
    }
    let env = Env { ctx, digits: g.digits, cache: g.cache_dir.as_ref().map(ApCache::new) };
    let result = match &cli.command {
        Command::Hyper(HyperCmd::Pfq { upper, lower, x }) => {
            let upper = usage("--upper", parse::rational_list(upper))?;
            let lower = usage("--lower", parse::rational_list(lower))?;
            commands::hyper_pfq(&env, &upper, &lower, &usage("--x", parse::complex(x))?)?
        }
        Command::Hyper(HyperCmd::Kdf { params, x, y }) => {
            let p = usage("--params", parse::rational_list(params))?;
            let p: [Rational; 6] = p.try_into().map_err(|_| CliError::Usage("--params: expected six values".into()))?;
            commands::hyper_kdf(&env, p, &usage("--x", parse::complex(x))?, &usage("--y", parse::complex(y))?)?
        }
        Command::Periods { t } => commands::periods(&env, &usage("--t", parse::complex(t))?)?,
        Command::Regulator { t, element, k, cycle } => {
            let cycle: Cycle = usage("--cycle", cycle.parse())?;
            commands::regulator(&env, &usage("--t", parse::complex(t))?, element, *k, cycle)?
        }
        Command::Qtable { from, to, max_conductor } => commands::qtable(&env, *from, *to, *max_conductor)?,
        Command::Lvalue { t, field } => commands::lvalue(&env, &usage("--t", parse::rational(t))?, field)?,
        Command::Integrality { t, t_zeta, element } => {
            let element: Element = usage("--element", element.parse())?;
            let t = commands::qzeta(usage("--t", parse::rational(t))?, usage("--t-zeta", parse::rational(t_zeta))?);
            commands::integrality(&t, element)?
        }
        Command::Mahler { t, one_sided } => commands::mahler(&env, &usage("--t", parse::complex(t))?, *one_sided)?,
        Command::Regdet { kind } => {
            let kind: DetKind = usage("--kind", kind.parse())?;
            commands::regdet(&env, kind)?
        }
        Command::Verify { suite } => {
            let suite: Suite = usage("--suite", suite.parse())?;
            return commands::verify(suite);
        }
    };
    Ok((result, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok((mut result, ok)) => {
            result.seconds = start.elapsed().as_secs_f64();
            let mut out = io::stdout().lock();
            let written = if cli.global.csv {
                result.write_csv(&mut out).map_err(|e| CliError::Io(e.to_string()))
            } else {
                serde_json::to_writer_pretty(&mut out, &result.to_json())
                    .map_err(|e| CliError::Io(e.to_string()))
                    .and_then(|_| writeln!(out).map_err(|e| CliError::Io(e.to_string())))
            };
            match written {
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(e.exit_code())
                }
                Ok(()) if ok => ExitCode::SUCCESS,
                Ok(()) => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
