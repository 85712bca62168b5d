//! The `oddcover` command line.
//!
//! Exit codes: 0 success or PASS, 1 FAIL or proven absent, 2 usage error,
//! 3 inconclusive because a resource cap was hit.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bounds::{compare_with_partition, Ledger, Status};
use crate::constructions::{
    best_graph_cover, best_three_cover, buchanan_bipartite_cover, buchanan_matrix, circle_cover,
    extend_to_8kplus1, gf3_cover, link, recursive_four_cover, signed_tripartition_cover,
    SkewSignMatrix,
};
use crate::cover::{is_odd_cover, Cover, Verdict};
use crate::error::{Error, Result};
use crate::search::{min_odd_cover, SearchConfig, SearchOutcome, DEFAULT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

pub const CAP_ENV: &str = "ODDCOVER_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "oddcover",
    version,
    about = "Odd covers of complete graphs and hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Circle,
    Gf3,
    Signed,
    Buchanan2,
    Buchanan3,
    Extend8k1,
    Four,
    GraphBest,
    ThreeBest,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a cover from one of the constructions.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        /// Skew sign matrix JSON for the `signed` family.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Seed for the random matrix used by `signed` without `--matrix`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the cover here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check that a cover JSON is an odd cover.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Take the link of a cover at a vertex.
    Link {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Find a minimum odd cover by exhaustive search.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        max_size: usize,
        /// Candidate block cap (default: $ODDCOVER_CAP or 1000000).
        #[arg(long)]
        cap: Option<usize>,
        /// Write the witness cover here.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the bounds ledger.
    Table {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long, default_value_t = 30)]
        to: usize,
        /// Run exhaustive search on unresolved rows that fit under the cap.
        #[arg(long)]
        search: bool,
        #[arg(long)]
        cap: Option<usize>,
        /// Add the partition number column (r = 3 only).
        #[arg(long)]
        partition: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let target: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Construct {
            family,
            n,
            matrix,
            seed,
            output,
            format,
        } => {
            let cover = construct(family, n, matrix.as_deref(), seed)?;
            emit_cover(&cover, output.as_deref(), out)?;
            if output.is_some() {
                match format {
                    Format::Text => {
                        writeln!(out, "n={} r={} size={}", cover.n(), cover.r(), cover.len())?
                    }
                    Format::Json => writeln!(
                        out,
                        "{}",
                        json!({"n": cover.n(), "r": cover.r(), "size": cover.len()})
                    )?,
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify { input, format } => {
            let cover = read_cover(&input)?;
            let verdict = is_odd_cover(&cover);
            report_verdict(&cover, &verdict, format, out)?;
            Ok(if verdict.is_pass() {
                EXIT_OK
            } else {
                EXIT_FAIL
            })
        }
        Command::Link {
            input,
            vertex,
            output,
            format,
        } => {
            let cover = link(&read_cover(&input)?, vertex)?;
            emit_cover(&cover, output.as_deref(), out)?;
            if output.is_some() {
                match format {
                    Format::Text => {
                        writeln!(out, "n={} r={} size={}", cover.n(), cover.r(), cover.len())?
                    }
                    Format::Json => writeln!(
                        out,
                        "{}",
                        json!({"n": cover.n(), "r": cover.r(), "size": cover.len()})
                    )?,
                }
            }
            Ok(EXIT_OK)
        }
        Command::Search {
            n,
            r,
            max_size,
            cap,
            emit,
            format,
        } => {
            let config = SearchConfig {
                cap: resolve_cap(cap)?,
                ..SearchConfig::default()
            };
            let outcome = min_odd_cover(n, r, max_size, &config)?;
            if let (Some(path), SearchOutcome::Found { cover, .. }) = (&emit, &outcome) {
                fs::write(path, cover.to_json() + "\n")?;
            }
            report_search(n, r, max_size, &outcome, format, out)?;
            Ok(match outcome {
                SearchOutcome::Found { .. } => EXIT_OK,
                SearchOutcome::Absent { .. } => EXIT_FAIL,
                SearchOutcome::Inconclusive { .. } => EXIT_INCONCLUSIVE,
            })
        }
        Command::Table {
            r,
            from,
            to,
            search,
            cap,
            partition,
            format,
        } => {
            if partition && r != 3 {
                return Err(Error::Unsupported(format!(
                    "partition numbers are only tabulated for r = 3, got r = {r}"
                )));
            }
            let from = from.unwrap_or(r);
            let mut ledger = Ledger::new();
            if search {
                let config = SearchConfig {
                    cap: resolve_cap(cap)?,
                    ..SearchConfig::default()
                };
                for n in from..=to {
                    let rec = ledger.record(n, r)?;
                    if rec.status == Status::Range {
                        let outcome = min_odd_cover(n, r, rec.upper, &config)?;
                        ledger.commit_search(n, r, &outcome)?;
                    }
                }
            }
            let rows = ledger.rows(r, from..=to)?;
            match format {
                Format::Json => {
                    let mut values = Vec::with_capacity(rows.len());
                    for row in &rows {
                        let mut v = serde_json::to_value(row)?;
                        if partition {
                            let c = compare_with_partition(row.n, 3)?;
                            v["partition_number"] = json!(c.partition_number);
                            v["strict"] = json!(row.upper < c.partition_number);
                        }
                        values.push(v);
                    }
                    writeln!(out, "{}", serde_json::Value::Array(values))?;
                }
                Format::Text => {
                    let mut header = format!(
                        "{:>2} {:>4} {:>6} {:>6} {:<6}",
                        "r", "n", "lower", "upper", "status"
                    );
                    if partition {
                        header += &format!(" {:>4} {:<6}", "f3", "strict");
                    }
                    writeln!(out, "{header}  provenance")?;
                    for row in &rows {
                        let status = match row.status {
                            Status::Exact => "exact",
                            Status::Range => "range",
                        };
                        let mut line = format!(
                            "{:>2} {:>4} {:>6} {:>6} {:<6}",
                            row.r, row.n, row.lower, row.upper, status
                        );
                        if partition {
                            let c = compare_with_partition(row.n, 3)?;
                            line += &format!(
                                " {:>4} {:<6}",
                                c.partition_number,
                                row.upper < c.partition_number
                            );
                        }
                        writeln!(out, "{line}  {}", row.provenance.join("; "))?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn construct(family: Family, n: Option<usize>, matrix: Option<&Path>, seed: u64) -> Result<Cover> {
    let need_n = || n.ok_or_else(|| Error::Validation("--n is required for this family".into()));
    let half = |n: usize, what: &str| -> Result<usize> {
        if n % 8 != 0 || n == 0 {
            return Err(Error::Validation(format!(
                "{what} needs n divisible by 8, got {n}"
            )));
        }
        Ok(n / 2)
    };
    match family {
        Family::Circle => circle_cover(need_n()?),
        Family::Gf3 => gf3_cover(need_n()?),
        Family::Signed => {
            let mat = match matrix {
                Some(path) => SkewSignMatrix::from_json(&fs::read_to_string(path)?)?,
                None => {
                    let n = need_n()?;
                    if n < 4 || n % 2 != 0 {
                        return Err(Error::Validation(format!(
                            "signed cover needs an even n >= 4, got {n}"
                        )));
                    }
                    SkewSignMatrix::random(n / 2, &mut ChaCha8Rng::seed_from_u64(seed))?
                }
            };
            if let Some(n) = n {
                if n != 2 * mat.dim() {
                    return Err(Error::Validation(format!(
                        "matrix of dimension {} gives n = {}, not {n}",
                        mat.dim(),
                        2 * mat.dim()
                    )));
                }
            }
            signed_tripartition_cover(&mat)
        }
        Family::Buchanan2 => buchanan_bipartite_cover(half(need_n()?, "buchanan2")?),
        Family::Buchanan3 => {
            signed_tripartition_cover(&buchanan_matrix(half(need_n()?, "buchanan3")?)?)
        }
        Family::Extend8k1 => {
            let n = need_n()?;
            if n % 8 != 1 || n < 9 {
                return Err(Error::Validation(format!(
                    "extend8k1 needs n = 8k + 1 with k >= 1, got {n}"
                )));
            }
            extend_to_8kplus1((n - 1) / 2)
        }
        Family::Four => recursive_four_cover(need_n()?),
        Family::GraphBest => best_graph_cover(need_n()?),
        Family::ThreeBest => best_three_cover(need_n()?),
    }
}

fn resolve_cap(flag: Option<usize>) -> Result<usize> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Validation(format!("{CAP_ENV}={s:?} is not a count"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn read_cover(path: &Path) -> Result<Cover> {
    Cover::from_json(&fs::read_to_string(path)?)
}

fn emit_cover(cover: &Cover, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let text = cover.to_json() + "\n";
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn report_verdict(
    cover: &Cover,
    verdict: &Verdict,
    format: Format,
    out: &mut dyn Write,
) -> Result<()> {
    match (format, verdict) {
        (Format::Text, Verdict::Pass) => writeln!(
            out,
            "PASS n={} r={} blocks={}",
            cover.n(),
            cover.r(),
            cover.len()
        )?,
        (Format::Text, Verdict::Fail { witness }) => writeln!(
            out,
            "FAIL n={} r={} blocks={} witness={} coverage={}",
            cover.n(),
            cover.r(),
            cover.len(),
            witness,
            cover.coverage_count(witness)?
        )?,
        (Format::Json, v) => {
            let witness = v.witness();
            let coverage = witness.map(|w| cover.coverage_count(w)).transpose()?;
            writeln!(
                out,
                "{}",
                json!({
                    "result": if v.is_pass() { "PASS" } else { "FAIL" },
                    "n": cover.n(),
                    "r": cover.r(),
                    "blocks": cover.len(),
                    "witness": witness,
                    "coverage": coverage,
                })
            )?
        }
    }
    Ok(())
}

fn report_search(
    n: usize,
    r: usize,
    max_size: usize,
    outcome: &SearchOutcome,
    format: Format,
    out: &mut dyn Write,
) -> Result<()> {
    match format {
        Format::Text => match outcome {
            SearchOutcome::Found { size, .. } => writeln!(out, "found n={n} r={r} size={size}")?,
            SearchOutcome::Absent { max_size } => writeln!(
                out,
                "absent n={n} r={r}: no odd cover with at most {max_size} blocks"
            )?,
            SearchOutcome::Inconclusive {
                proven_above,
                reason,
            } => writeln!(
                out,
                "inconclusive n={n} r={r}: {reason} (sizes <= {proven_above} excluded)"
            )?,
        },
        Format::Json => {
            let v = match outcome {
                SearchOutcome::Found { size, cover } => json!({
                    "n": n, "r": r, "max_size": max_size,
                    "result": "found", "size": size, "cover": cover,
                }),
                SearchOutcome::Absent { .. } => json!({
                    "n": n, "r": r, "max_size": max_size, "result": "absent",
                }),
                SearchOutcome::Inconclusive {
                    proven_above,
                    reason,
                } => json!({
                    "n": n, "r": r, "max_size": max_size, "result": "inconclusive",
                    "proven_above": proven_above, "reason": reason,
                }),
            };
            writeln!(out, "{v}")?;
        }
    }
    Ok(())
}
