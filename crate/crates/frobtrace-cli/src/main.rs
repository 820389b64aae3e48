//! Command-line driver: builds and caches curve censuses over small finite
//! fields, computes exact Hecke traces and eigenvalues from them, and runs
//! verification suites.

mod cache;
mod commands;
mod errors;
mod output;
mod verify;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cache::CensusCache;
use errors::CliError;
use output::Format;

/// Environment variable overriding the census cache directory.
pub const CACHE_ENV: &str = "FROBTRACE_CACHE_DIR";
const DEFAULT_CACHE_DIR: &str = ".frobtrace-cache";

#[derive(Parser)]
#[command(
    name = "frobtrace",
    version,
    about = "Exact Hecke traces and eigenvalues from curve censuses over small finite fields",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 usage, 3 io, 4 unsupported input."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Census cache directory (overrides FROBTRACE_CACHE_DIR; default .frobtrace-cache)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Worker threads for census enumeration (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Report format; exact integers are decimal strings in every format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Build a curve census, cache it or write it to a file, verifying
    /// against any existing copy
    Census(CensusArgs),
    /// Exact Hecke trace (eigenvalue on one-dimensional spaces) at q
    Trace(TraceArgs),
    /// Hecke traces and eigenvalues straight from cusp-form q-expansions
    Qexp(QexpArgs),
    /// Eigenvalue congruences between Siegel and elliptic cusp forms
    Congruence(CongruenceArgs),
    /// Picard-family reports: eigenspace traces, the sixth-power probe,
    /// and compact-vs-ordinary comparisons
    Picard(PicardArgs),
    /// Built-in verification suites with a machine-readable summary
    Verify(VerifyArgs),
}

#[derive(Args)]
pub struct CensusArgs {
    /// Family: g1, g2, g3 (both genus-3 strata), g3_quartic, g3_hyp, picard
    #[arg(long)]
    family: String,
    /// Field size (prime power in the family's supported range)
    #[arg(long)]
    q: u64,
    /// Record isomorphism classes with automorphism orders instead of the
    /// plain family histogram (g2 and genus-3 families)
    #[arg(long)]
    classes: bool,
    /// Write to this path instead of the cache
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for per-shard checkpoints (g2 only; defaults inside the cache)
    #[arg(long)]
    checkpoint_dir: Option<PathBuf>,
    /// Cancel the build after this many seconds at the next shard boundary,
    /// keeping finished checkpoints (g2 only)
    #[arg(long)]
    max_seconds: Option<u64>,
}

#[derive(Args)]
pub struct TraceArgs {
    /// 1: elliptic S_k; 2: Siegel S_{j,k}; 3: Siegel, addressed by the
    /// local-system weight (a, b, c)
    #[arg(long)]
    degree: u8,
    #[arg(long)]
    q: u64,
    /// Weight k (degrees 1 and 2)
    #[arg(long)]
    k: Option<u32>,
    /// Weight j (degree 2)
    #[arg(long)]
    j: Option<u32>,
    /// Local-system weight, a >= b >= c (degree 3)
    #[arg(long)]
    a: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    c: Option<u32>,
}

#[derive(Args)]
pub struct QexpArgs {
    /// Cusp-space weight k (even, at least 4)
    #[arg(long)]
    k: u32,
    /// Report T(p) for every prime p up to this bound
    #[arg(long, default_value_t = 19)]
    p_max: u64,
    /// Report the split eigenvalue lists instead of traces
    #[arg(long)]
    eigen: bool,
}

#[derive(Args)]
pub struct CongruenceArgs {
    /// 2: Harder-type check for S_{j,k}; 3: degree-3 check against an
    /// eigenvalue table
    #[arg(long)]
    degree: u8,
    /// Siegel weight j (degree 2; default 4)
    #[arg(long)]
    j: Option<u32>,
    /// Siegel weight k (degree 2; default 10)
    #[arg(long)]
    k: Option<u32>,
    /// Local-system weight a (degree 3; default 13)
    #[arg(long)]
    a: Option<u32>,
    /// Local-system weight b (degree 3; default 11)
    #[arg(long)]
    b: Option<u32>,
    /// Local-system weight c (degree 3; default 10)
    #[arg(long)]
    c: Option<u32>,
    /// Congruence modulus (defaults: 41 for degree 2, 199 for degree 3)
    #[arg(long)]
    modulus: Option<u64>,
    /// Weight of the elliptic eigenform supplying a(p)
    /// (defaults: 22 for degree 2, 12 for degree 3)
    #[arg(long)]
    f_weight: Option<u32>,
    /// Weight of the second elliptic space (degree 3; default 30)
    #[arg(long)]
    g_weight: Option<u32>,
    /// Check all primes p up to this bound (defaults: 13 for degree 2,
    /// 17 for degree 3)
    #[arg(long)]
    p_max: Option<u64>,
    /// Eigenvalue table for degree 3: `# comment` lines, then `p value`
    /// rows; defaults to the bundled weight-(2,1,14) table
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args)]
pub struct PicardArgs {
    #[command(subcommand)]
    command: PicardCommand,
}

#[derive(Subcommand)]
pub enum PicardCommand {
    /// Exact eigenspace trace of Frobenius on compactly supported
    /// cohomology at one weight
    Trace {
        #[arg(long)]
        q: u64,
        /// Symmetric power of the first mu_3-eigenspace
        #[arg(long)]
        a: u32,
        /// Symmetric power of the conjugate eigenspace
        #[arg(long)]
        b: u32,
        /// Determinant twist exponent (reduced mod 6)
        #[arg(long, default_value_t = 0)]
        det: i64,
    },
    /// Sixth power of the eigenspace determinant across the whole census
    Probe {
        #[arg(long)]
        q: u64,
    },
    /// Side-by-side comparison of an eigenspace trace with reference
    /// eigenvalues; no agreement is asserted
    Compare {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum)]
        family: CompareFamily,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Skip attaching the bundled reference eigenvalues
        #[arg(long)]
        no_refs: bool,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum CompareFamily {
    Scalar,
    Vector,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Which checks to run
    #[arg(long, value_enum)]
    suite: Suite,
    /// Ceiling for the q and p ranges the checks sweep
    #[arg(long)]
    max_q: Option<u64>,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Suite {
    Goldens,
    Properties,
    Congruences,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Goldens => "goldens",
            Suite::Properties => "properties",
            Suite::Congruences => "congruences",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

/// Validated run-wide settings: cache location, worker budget, format.
pub struct RunConfig {
    pub cache: CensusCache,
    pub format: Format,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<RunConfig, CliError> {
        let dir = cli
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        if cli.threads > 4096 {
            return Err(CliError::Usage(format!(
                "--threads {} is out of range (max 4096)",
                cli.threads
            )));
        }
        // The process-wide worker pool is configured once, up front; the
        // compute modules draw parallelism from it and nothing else.
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure the thread pool: {e}")))?;
        Ok(RunConfig {
            cache: CensusCache::new(dir),
            format: cli.format,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests land here too; only real parse
            // errors take the usage exit code.
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = RunConfig::from_cli(&cli)?;
    match &cli.command {
        Command::Census(args) => commands::cmd_census(&config, args),
        Command::Trace(args) => commands::cmd_trace(&config, args),
        Command::Qexp(args) => commands::cmd_qexp(&config, args),
        Command::Congruence(args) => commands::cmd_congruence(&config, args),
        Command::Picard(args) => commands::cmd_picard(&config, args),
        Command::Verify(args) => verify::cmd_verify(&config, args),
    }
}
