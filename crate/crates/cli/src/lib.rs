//! The `kh` command: compute, scan, families, version.

pub mod cache;
pub mod scan;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kh_core::budget::{estimate, MemoryBudget};
use kh_core::expr::parse_expr;
use kh_core::families;
use kh_core::homology::{compute, KhResult};
use kh_core::{BraidWord, ComputeOptions, GradingMode};
use thiserror::Error;

use crate::cache::Cache;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Kh(#[from] kh_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("corrupt cache entry {path}: {source}")]
    Cache { path: PathBuf, source: serde_json::Error },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for bad input, 3 for budget refusals, 4 for internal consistency
    /// failures, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        use kh_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Kh(E::Parse { .. } | E::MalformedWord(_) | E::Domain(_)) => 2,
            CliError::Kh(E::Budget { .. } | E::TooLarge(_)) => 3,
            CliError::Kh(E::Internal(_)) => 4,
            CliError::Io { .. } | CliError::Cache { .. } | CliError::Csv(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Parser)]
#[command(name = "kh", about = "Exact integral Khovanov homology of braid closures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology of one braid closure.
    Compute(ComputeArgs),
    /// Homology of a parameterized family or of every short word.
    Scan(scan::ScanArgs),
    /// List the named braids.
    Families {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print the version.
    Version,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Framed,
    Classical,
}

impl From<Mode> for GradingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Framed => GradingMode::Framed,
            Mode::Classical => GradingMode::Classical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

/// Options shared by `compute` and `scan`.
#[derive(Clone, Debug, Args)]
pub struct JobArgs {
    #[arg(long, value_enum, default_value_t = Mode::Classical)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub reduce: Switch,
    /// Primes for the mod-p rank probe, e.g. `2,3,5,7`.
    #[arg(long = "mod-p", value_delimiter = ',')]
    pub mod_p: Vec<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long = "memory-mb", default_value_t = 4096)]
    pub memory_mb: u64,
    #[arg(long, env = "KH_CACHE")]
    pub cache: Option<PathBuf>,
    /// Skip the up-front size estimate.
    #[arg(long = "force-large")]
    pub force_large: bool,
}

#[derive(Clone, Debug, Args)]
pub struct ComputeArgs {
    #[arg(long)]
    pub strands: Option<usize>,
    /// Space-separated signed generator indices; needs `--strands`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "family")]
    pub word: Option<String>,
    /// A braid expression such as `torus(2,3)` or `thm2`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(flatten)]
    pub job: JobArgs,
}

pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Scan(args) => scan::cmd_scan(args),
        Command::Families { format } => cmd_families(*format),
        Command::Version => Ok(format!("kh {}\n", env!("CARGO_PKG_VERSION"))),
    }
}

pub fn configure_threads(job: &JobArgs) -> Result<()> {
    if let Some(n) = job.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn resolve_word(strands: Option<usize>, word: Option<&str>, family: Option<&str>) -> Result<BraidWord> {
    match (word, family) {
        (Some(w), _) => {
            let n = strands.ok_or_else(|| CliError::Usage("--word needs --strands".into()))?;
            Ok(BraidWord::parse(w, n)?)
        }
        (None, Some(expr)) => Ok(parse_expr(expr, strands)?),
        (None, None) => Err(CliError::Usage("give --word or --family".into())),
    }
}

fn check_job(job: &JobArgs) -> Result<()> {
    if job.memory_mb == 0 {
        return Err(CliError::Usage("--memory-mb must be positive".into()));
    }
    if let Some(p) = job.mod_p.iter().find(|p| !kh_core::algebra::is_prime(**p)) {
        return Err(CliError::Usage(format!("--mod-p: {p} is not prime")));
    }
    Ok(())
}

/// Computes (or loads from the cache) the framed result for a word.
pub fn solve(word: &BraidWord, job: &JobArgs) -> Result<KhResult> {
    check_job(job)?;
    let mut primes = job.mod_p.clone();
    primes.sort_unstable();
    primes.dedup();
    let cache = job.cache.as_ref().map(Cache::new);
    let key = Cache::key(word, &primes);
    if let Some(cache) = &cache {
        if let Some(hit) = cache.load(&key)? {
            return Ok(hit);
        }
    }
    let diagram = word.closure();
    if !job.force_large {
        estimate(&diagram).check(&MemoryBudget::from_megabytes(job.memory_mb))?;
    }
    let opts = ComputeOptions {
        reduce: job.reduce == Switch::On,
        verify: false,
        memory_limit_bytes: job.memory_mb.saturating_mul(1 << 20),
        mod_p: primes,
    };
    let computation = compute(&diagram, &opts)?;
    let result = KhResult::new(word, &computation, GradingMode::Framed)?;
    if let Some(cache) = &cache {
        cache.store(&key, &result)?;
    }
    Ok(result)
}

fn cmd_compute(args: &ComputeArgs) -> Result<String> {
    configure_threads(&args.job)?;
    let word = resolve_word(args.strands, args.word.as_deref(), args.family.as_deref())?;
    let result = solve(&word, &args.job)?.in_mode(args.job.mode.into())?;
    match args.format {
        Format::Json => Ok(result.to_json() + "\n"),
        Format::Table => render(&result),
    }
}

/// Human-readable report: header, grid, torsion list, mod-p excess.
pub fn render(result: &KhResult) -> Result<String> {
    let mut out = String::new();
    let letters: Vec<String> = result.braid.iter().map(i32::to_string).collect();
    let _ = writeln!(
        out,
        "braid [{}] on {} strands: {} crossings, writhe {}, {} component(s)",
        letters.join(" "),
        result.strands,
        result.braid.len(),
        result.writhe,
        result.components
    );
    let table = result.table();
    out.push_str(&table.render());
    let torsion = table.torsion_summary()?;
    if torsion.is_empty() {
        out.push_str("torsion: none\n");
    } else {
        out.push_str("torsion (i, j, order):\n");
        for t in torsion {
            let _ = writeln!(out, "  ({}, {}, {})", t.i, t.j, t.order);
        }
    }
    for (p, excess) in &result.mod_p_excess {
        let cells: Vec<String> = excess.iter().map(|e| format!("({}, {})+{}", e.i, e.j, e.free_rank)).collect();
        let _ = writeln!(out, "mod {p} excess over rational rank: {}", if cells.is_empty() { "none".into() } else { cells.join(" ") });
    }
    Ok(out)
}

#[derive(serde::Serialize)]
struct FamilyRow<'a> {
    name: &'a str,
    strands: usize,
    crossings: usize,
    writhe: i64,
    components: usize,
    scale: families::Scale,
    word: &'a [i32],
    summary: &'a str,
    expected: &'a [families::ExpectedTorsion],
}

fn cmd_families(format: Format) -> Result<String> {
    let registry = families::registry();
    let rows: Vec<FamilyRow> = registry
        .iter()
        .map(|f| FamilyRow {
            name: &f.name,
            strands: f.word.strands(),
            crossings: f.crossings(),
            writhe: f.writhe(),
            components: f.components(),
            scale: f.scale,
            word: f.word.letters(),
            summary: &f.summary,
            expected: &f.expected,
        })
        .collect();
    if format == Format::Json {
        return Ok(serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n");
    }
    let mut out = format!(
        "{:<12} {:>7} {:>9} {:>6} {:>10} {:<11} {}\n",
        "name", "strands", "crossings", "writhe", "components", "scale", "summary"
    );
    for r in rows {
        let scale = match r.scale {
            families::Scale::Desk => "desk",
            families::Scale::Integration => "integration",
        };
        let _ = writeln!(
            out,
            "{:<12} {:>7} {:>9} {:>6} {:>10} {:<11} {}",
            r.name, r.strands, r.crossings, r.writhe, r.components, scale, r.summary
        );
    }
    Ok(out)
}
