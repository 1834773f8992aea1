//! The `numsemi` command line.
//!
//! Exit codes: 0 success, 1 a verified identity failed, 2 usage error,
//! 3 budget exhausted.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use numsemi_core::{EnumConfig, Error};

pub mod cache;
mod commands;
pub mod report;

use cache::{Cache, Lookup};
use report::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "numsemi",
    version,
    about = "Count and classify numerical semigroups"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Worker threads [default: available parallelism]
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Cache directory; falls back to $NUMSEMI_CACHE_DIR
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Ignore the cache for this run
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Accepted for compatibility; every computation is deterministic
    #[arg(long, global = true)]
    pub seedless: bool,
    /// Stop after visiting this many search nodes
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    /// Stop after this many seconds
    #[arg(long, global = true, value_parser = parse_seconds)]
    pub max_time: Option<f64>,
}

fn parse_seconds(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err("expected a nonnegative number of seconds".into())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count semigroups by Frobenius number, genus, or multiplicity
    #[command(group = clap::ArgGroup::new("target").required(true).args(["frobenius", "genus"]))]
    Count {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=63))]
        frobenius: Option<u32>,
        #[arg(long)]
        genus: Option<u32>,
        /// With --frobenius: count only this multiplicity
        #[arg(long, requires = "frobenius", conflicts_with = "genus")]
        multiplicity: Option<u32>,
    },
    /// Distribution of n(S) = |S ∩ [1, f]| against the Gaussian model
    Dist {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=63))]
        frobenius: u32,
        /// Class depth L of the model [default: largest with f > 6L + 6]
        #[arg(long)]
        max_l: Option<u32>,
        #[arg(long, value_enum, default_value = "derived")]
        polynomial: Polynomial,
    },
    /// Per-(Y, Z) class table: closed form against enumeration
    Classes {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=63))]
        frobenius: u32,
        #[arg(long, default_value_t = 2)]
        max_l: u32,
    },
    /// Partial sums of the limiting constants by L and parity
    Constants {
        #[arg(long, default_value_t = 5)]
        max_l: u32,
    },
    /// Check identities over a range and report each one
    #[command(subcommand)]
    Verify(Verify),
    /// MED counts, shift identity, and growth bounds
    Med {
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..=63))]
        max_f: u32,
        /// Largest f for the shift-identity check
        #[arg(long, default_value_t = 26)]
        shift_max_f: u32,
    },
    /// Counts by genus: Fibonacci laws, type bounds, tail masses
    Genus {
        #[arg(long, default_value_t = 14)]
        max_g: u32,
        /// Tail threshold for |F - 2m|
        #[arg(long, default_value_t = 3)]
        tail_n: u32,
        /// Print the (k; A) type census of this genus instead
        #[arg(long)]
        types: Option<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// N(f) < N(f + 2)
    Monotone {
        #[arg(long, default_value_t = 31, value_parser = clap::value_parser!(u32).range(1..=61))]
        max_f: u32,
    },
    /// Depth-2 law, class counts, sandwich bound, MED shift identity
    Formulas {
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..=63))]
        max_f: u32,
    },
    /// Every check at its default range, within a time budget
    All {
        /// Seconds
        #[arg(long, default_value_t = 600.0, value_parser = parse_seconds)]
        budget: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Polynomial {
    Derived,
    Printed,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Count { .. } => "count",
            Command::Dist { .. } => "dist",
            Command::Classes { .. } => "classes",
            Command::Constants { .. } => "constants",
            Command::Verify(Verify::Monotone { .. }) => "verify-monotone",
            Command::Verify(Verify::Formulas { .. }) => "verify-formulas",
            Command::Verify(Verify::All { .. }) => "verify-all",
            Command::Med { .. } => "med",
            Command::Genus { .. } => "genus",
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::OutOfBudget { .. } => EXIT_BUDGET,
        Error::ThreadPool(_) => EXIT_VERIFY_FAILED,
        _ => EXIT_USAGE,
    }
}

fn enum_config(g: &GlobalOpts) -> EnumConfig {
    let workers = g
        .workers
        .map(|w| w as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    EnumConfig {
        workers,
        max_nodes: g.max_nodes,
        max_time: g.max_time.map(Duration::from_secs_f64),
        ..EnumConfig::default()
    }
}

fn cache_for(g: &GlobalOpts) -> Option<Cache> {
    if g.no_cache {
        return None;
    }
    g.cache_dir
        .clone()
        .or_else(|| std::env::var_os(cache::ENV_VAR).map(PathBuf::from))
        .map(Cache::new)
}

/// Parses `argv` (program name first), runs the command, and returns the
/// exit code. Reports go to `out` unless `--output` is given.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let g = &cli.global;
    let name = cli.command.name();
    let params = format!("{:?} format={:?}", cli.command, g.format);
    let cache = cache_for(g);

    let (payload, code) = match cache.as_ref().map(|c| c.get(name, &params)) {
        Some(Lookup::Hit(entry)) => {
            let _ = writeln!(
                err,
                "cache hit: {}",
                cache.as_ref().unwrap().path_for(name, &params).display()
            );
            (entry.payload, entry.exit_code)
        }
        lookup => {
            if let Some(Lookup::Discarded(why)) = lookup {
                let _ = writeln!(err, "warning: discarding cache entry ({why}); recomputing");
            }
            let cfg = enum_config(g);
            match commands::execute(&cli.command, &cfg, err) {
                Ok((report, ok)) => {
                    let payload = report.render(g.format);
                    let code = if ok { EXIT_OK } else { EXIT_VERIFY_FAILED };
                    if let Some(c) = &cache {
                        if let Err(e) = c.put(name, &params, code, &payload) {
                            let _ = writeln!(err, "warning: cache write failed: {e}");
                        }
                    }
                    (payload, code)
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return exit_code_for(&e);
                }
            }
        }
    };

    let written = match &g.output {
        Some(path) => std::fs::write(path, payload.as_bytes()),
        None => out.write_all(payload.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    if code == EXIT_VERIFY_FAILED {
        let _ = writeln!(err, "verification failed: see rows marked false");
    }
    code
}
