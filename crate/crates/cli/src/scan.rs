//! `kh scan`: homology over a parameter grid or over all short words.

use std::time::Instant;

use clap::{Args, ValueEnum};
use kh_core::expr::parse_expr;
use kh_core::homology::TorsionEntry;
use kh_core::BraidWord;
use serde::Serialize;

use crate::{configure_threads, solve, CliError, JobArgs, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, Args)]
pub struct ScanArgs {
    /// Expression with `{name}` placeholders, e.g. `torus(2,{q})`.
    #[arg(long, conflicts_with = "all_words")]
    pub family: Option<String>,
    /// `name=lo..hi` (inclusive) or `name=a,b,c`; repeat for a grid.
    #[arg(long = "param", value_name = "NAME=VALUES")]
    pub params: Vec<String>,
    /// Every word of length at most `--max-len` on `--strands` strands.
    #[arg(long = "all-words", requires_all = ["strands", "max_len"])]
    pub all_words: bool,
    #[arg(long)]
    pub strands: Option<usize>,
    #[arg(long = "max-len")]
    pub max_len: Option<usize>,
    /// Keep only instances with an invariant factor equal to this.
    #[arg(long, conflicts_with = "prime")]
    pub order: Option<u64>,
    /// Keep only instances with torsion of order divisible by this prime.
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long, value_enum, default_value_t = ScanFormat::Csv)]
    pub format: ScanFormat,
    #[command(flatten)]
    pub job: JobArgs,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub params: String,
    pub n_crossings: usize,
    pub components: usize,
    pub writhe: i64,
    pub torsion: Vec<TorsionEntry>,
    pub ms_elapsed: u128,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    params: &'a str,
    n_crossings: usize,
    components: usize,
    writhe: i64,
    torsion: String,
    ms_elapsed: u128,
}

/// `(i,j,order)` triples separated by spaces.
pub fn torsion_triples(torsion: &[TorsionEntry]) -> String {
    let cells: Vec<String> = torsion.iter().map(|t| format!("({},{},{})", t.i, t.j, t.order)).collect();
    cells.join(" ")
}

/// Parses `name=lo..hi` or `name=a,b,c`.
pub fn parse_param(spec: &str) -> Result<(String, Vec<i64>)> {
    let bad = || CliError::Usage(format!("bad --param {spec:?}; expected name=lo..hi or name=a,b,c"));
    let (name, values) = spec.split_once('=').ok_or_else(bad)?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(bad());
    }
    let values: Vec<i64> = if let Some((lo, hi)) = values.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(bad());
        }
        (lo..=hi).collect()
    } else {
        values.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    Ok((name.to_string(), values))
}

/// Every assignment in the grid, first parameter varying slowest.
pub fn grid(params: &[(String, Vec<i64>)]) -> Vec<Vec<(String, i64)>> {
    params.iter().fold(vec![Vec::new()], |acc, (name, values)| {
        acc.iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push((name.clone(), v));
                    next
                })
            })
            .collect()
    })
}

fn instantiate(template: &str, assignment: &[(String, i64)]) -> Result<String> {
    let mut text = template.to_string();
    for (name, v) in assignment {
        text = text.replace(&format!("{{{name}}}"), &v.to_string());
    }
    if let Some(at) = text.find('{') {
        return Err(CliError::Usage(format!("unbound placeholder in {:?}", &text[at..])));
    }
    Ok(text)
}

fn instances(args: &ScanArgs) -> Result<Vec<(String, Result<BraidWord>)>> {
    if args.all_words {
        let (n, max_len) = (args.strands.unwrap_or(0), args.max_len.unwrap_or(0));
        if n < 2 {
            return Err(CliError::Usage("--all-words needs --strands of at least 2".into()));
        }
        let alphabet: Vec<i32> = (1..n as i32).flat_map(|g| [g, -g]).collect();
        let mut out = Vec::new();
        for len in 0..=max_len {
            let total = alphabet.len().checked_pow(len as u32).ok_or_else(|| {
                CliError::Usage(format!("too many words of length {len}"))
            })?;
            for code in 0..total {
                let mut rest = code;
                let letters: Vec<i32> = (0..len)
                    .map(|_| {
                        let l = alphabet[rest % alphabet.len()];
                        rest /= alphabet.len();
                        l
                    })
                    .collect();
                let label: Vec<String> = letters.iter().map(i32::to_string).collect();
                out.push((format!("word={}", label.join(" ")), BraidWord::new(n, letters).map_err(CliError::from)));
            }
        }
        return Ok(out);
    }
    let template = args
        .family
        .as_deref()
        .ok_or_else(|| CliError::Usage("give --family or --all-words".into()))?;
    let params = args.params.iter().map(|p| parse_param(p)).collect::<Result<Vec<_>>>()?;
    grid(&params)
        .into_iter()
        .map(|assignment| {
            let expr = instantiate(template, &assignment)?;
            let label: Vec<String> = assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let label = if label.is_empty() { expr.clone() } else { label.join(";") };
            Ok((label, parse_expr(&expr, args.strands).map_err(CliError::from)))
        })
        .collect()
}

fn keep(args: &ScanArgs, torsion: &[TorsionEntry]) -> bool {
    match (args.order, args.prime) {
        (Some(n), _) => torsion.iter().any(|t| t.order == n),
        (None, Some(p)) => torsion.iter().any(|t| t.order % p == 0),
        (None, None) => true,
    }
}

/// Runs every instance; failures are logged to stderr and skipped.
pub fn scan_rows(args: &ScanArgs) -> Result<Vec<ScanRow>> {
    configure_threads(&args.job)?;
    if let Some(p) = args.prime {
        if !kh_core::algebra::is_prime(p) {
            return Err(CliError::Usage(format!("--prime: {p} is not prime")));
        }
    }
    let mut rows = Vec::new();
    for (label, word) in instances(args)? {
        let start = Instant::now();
        let outcome = word.and_then(|w| {
            let result = solve(&w, &args.job)?.in_mode(args.job.mode.into())?;
            let torsion = result.table().torsion_summary()?;
            Ok((w, torsion))
        });
        match outcome {
            Ok((w, torsion)) => {
                if keep(args, &torsion) {
                    rows.push(ScanRow {
                        params: label,
                        n_crossings: w.len(),
                        components: w.components(),
                        writhe: w.exponent_sum(),
                        torsion,
                        ms_elapsed: start.elapsed().as_millis(),
                    });
                }
            }
            Err(CliError::Usage(msg)) => return Err(CliError::Usage(msg)),
            Err(e) => eprintln!("kh scan: skipping {label}: {e}"),
        }
    }
    Ok(rows)
}

pub fn cmd_scan(args: &ScanArgs) -> Result<String> {
    let rows = scan_rows(args)?;
    match args.format {
        ScanFormat::Json => Ok(serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"),
        ScanFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            if rows.is_empty() {
                writer.write_record(["params", "n_crossings", "components", "writhe", "torsion", "ms_elapsed"])?;
            }
            for r in &rows {
                writer.serialize(CsvRow {
                    params: &r.params,
                    n_crossings: r.n_crossings,
                    components: r.components,
                    writhe: r.writhe,
                    torsion: torsion_triples(&r.torsion),
                    ms_elapsed: r.ms_elapsed,
                })?;
            }
            let bytes = writer.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
            Ok(String::from_utf8(bytes).expect("csv is utf-8"))
        }
    }
}
