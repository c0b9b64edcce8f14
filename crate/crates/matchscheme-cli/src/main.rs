//! Command-line front door: enumeration, scheme tables, spectra, zonal
//! tables, EKR and polytope verifications, conjecture checks and the full
//! verification suites, with per-n caching and machine-readable reports.
//!
//! Exit codes: 0 all checks pass, 1 any check fails, 2 inconclusive-only,
//! 3 operational error (bad arguments, I/O, unsupported instance).

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use matchscheme::cache::{default_cache_dir, load_or_compute, CacheEntry};
use matchscheme::combinatorics::double_factorial;
use matchscheme::derangement::{spectrum, AssociateUnion};
use matchscheme::ekr::{max_independent_set, t_intersecting_search, MisMode, DEFAULT_SEED};
use matchscheme::error::Error;
use matchscheme::report::{ReportSet, VerificationReport};
use matchscheme::verify::{self, Suite, VerifyOptions};

#[derive(Parser)]
#[command(name = "matchscheme", version, about = "Exact computations in the association scheme of perfect matchings of K_2n")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format (default: text for streams, json for reports, csv for tables).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Cache directory for per-n scheme tables (env MATCHSCHEME_CACHE_DIR
    /// overrides; default platform data dir).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads for the data-parallel scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for randomized constructions (Lucas-clique search, sampling).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Node budget for the exact branch-and-bound searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stream all (2n-1)!! matchings in rank order, one per line.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Print only the count.
        #[arg(long)]
        count_only: bool,
    },
    /// Compute (and cache) the scheme tables for one n; print as JSON.
    Scheme {
        #[arg(long)]
        n: usize,
    },
    /// Spectrum of the matching derangement graph or the (n)-associate.
    Spectrum {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "gamma")]
        graph: GraphSel,
    },
    /// The zonal spherical function table ω_λ^μ.
    Zonal {
        #[arg(long)]
        n: usize,
    },
    /// Independence-number and t-intersecting verifications.
    EkrVerify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "gamma")]
        graph: GraphSel,
        #[arg(long, default_value = "enumerate")]
        mode: String,
        /// Run the t-intersecting search instead of the independence check.
        #[arg(long)]
        t: Option<usize>,
    },
    /// Perfect-matching-polytope checks.
    Polytope {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        check: PolytopeCheck,
    },
    /// The spectral conjecture checks over a range of n.
    Conjectures {
        /// Single n or inclusive range "3..6".
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        n_range: Option<String>,
    },
    /// Run registered check suites in dependency order.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Single n or inclusive range "3..6".
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        n_range: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphSel {
    Gamma,
    #[value(name = "n-associate")]
    NAssociate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolytopeCheck {
    Rank,
    Cuts,
    Membership,
    Faces,
}

fn main() {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    if cli.jobs.is_some() {
        eprintln!("note: built without the `parallel` feature; --jobs ignored");
    }
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(3);
        }
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    let cache_dir = cli.cache_dir.clone().unwrap_or_else(default_cache_dir);
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match cli.cmd {
        Cmd::Enumerate { n, count_only } => cmd_enumerate(n, count_only, cli.format),
        Cmd::Scheme { n } => {
            let tables = load_or_compute(Some(&cache_dir), n)?;
            let entry = CacheEntry::from_tables(&tables)?;
            println!("{}", serde_json::to_string_pretty(&entry)?);
            Ok(0)
        }
        Cmd::Spectrum { n, graph } => cmd_spectrum(n, graph, cli.format, &cache_dir),
        Cmd::Zonal { n } => cmd_zonal(n, cli.format, &cache_dir),
        Cmd::EkrVerify { n, graph, mode, t } => {
            cmd_ekr_verify(n, graph, &mode, t, cli.format, &cache_dir, cli.budget)
        }
        Cmd::Polytope { n, check } => cmd_polytope(n, check, cli.format, &cache_dir),
        Cmd::Conjectures { n, n_range } => {
            let (lo, hi) = parse_range(n.as_deref(), n_range.as_deref(), (3, 6))?;
            let opts = VerifyOptions {
                n_lo: lo,
                n_hi: hi,
                seed,
                budget: cli.budget,
                cache_dir: Some(cache_dir),
            };
            let set = verify::run(Suite::Conjectures, &opts)?;
            emit_reports(&set, cli.format)
        }
        Cmd::Verify { suite, n, n_range } => {
            let suite: Suite = suite.parse()?;
            let (lo, hi) = parse_range(n.as_deref(), n_range.as_deref(), (3, 5))?;
            let opts = VerifyOptions {
                n_lo: lo,
                n_hi: hi,
                seed,
                budget: cli.budget,
                cache_dir: Some(cache_dir),
            };
            let set = verify::run(suite, &opts)?;
            emit_reports(&set, cli.format)
        }
    }
}

fn parse_range(
    n: Option<&str>,
    n_range: Option<&str>,
    default: (usize, usize),
) -> Result<(usize, usize), Error> {
    let spec = n.or(n_range);
    let Some(spec) = spec else {
        return Ok(default);
    };
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo = lo
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad range start {lo:?}: {e}")))?;
        let hi = hi
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad range end {hi:?}: {e}")))?;
        Ok((lo, hi))
    } else {
        let v = spec
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad n {spec:?}: {e}")))?;
        Ok((v, v))
    }
}

fn cmd_enumerate(n: usize, count_only: bool, format: Option<Format>) -> Result<i32, Error> {
    if count_only {
        println!("{}", double_factorial(2 * n as i64 - 1)?);
        return Ok(0);
    }
    let lines = matchscheme::matching::enumerate(n)?.map(|m| m.canonical_string());
    match format.unwrap_or(Format::Text) {
        Format::Json => {
            let all: Vec<String> = lines.collect();
            println!("{}", serde_json::to_string_pretty(&all)?);
        }
        _ => {
            use std::io::Write;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            for line in lines {
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(0)
}

fn union_for(n: usize, graph: GraphSel) -> Result<AssociateUnion, Error> {
    match graph {
        GraphSel::Gamma => AssociateUnion::gamma(n),
        GraphSel::NAssociate => AssociateUnion::n_associate(n),
    }
}

fn cmd_spectrum(
    n: usize,
    graph: GraphSel,
    format: Option<Format>,
    cache_dir: &std::path::Path,
) -> Result<i32, Error> {
    let tables = load_or_compute(Some(cache_dir), n)?;
    let union = union_for(n, graph)?;
    let spec = spectrum(&union, &tables.table)?;
    let rows: Vec<(String, String, String, usize, &str)> = spec
        .entries
        .iter()
        .map(|e| {
            (
                e.partition.to_string(),
                e.eigenvalue.to_string(),
                e.multiplicity.to_string(),
                e.depth,
                match e.sign_consistent {
                    Some(true) => "consistent",
                    Some(false) => "inconsistent",
                    None => "zero",
                },
            )
        })
        .collect();
    match format.unwrap_or(Format::Csv) {
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|(p, e, m, d, s)| {
                    serde_json::json!({
                        "partition": p,
                        "eigenvalue": e,
                        "multiplicity": m,
                        "depth": d,
                        "sign_consistency": s,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&items)?);
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["partition", "eigenvalue", "multiplicity", "depth", "sign_consistency"])
                .map_err(csv_err)?;
            for (p, e, m, d, s) in &rows {
                w.write_record([p.as_str(), e, m, &d.to_string(), s])
                    .map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Text => {
            println!("{:<16} {:>12} {:>12} {:>6}  sign", "partition", "eigenvalue", "multiplicity", "depth");
            for (p, e, m, d, s) in &rows {
                println!("{p:<16} {e:>12} {m:>12} {d:>6}  {s}");
            }
        }
    }
    Ok(0)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

fn cmd_zonal(n: usize, format: Option<Format>, cache_dir: &std::path::Path) -> Result<i32, Error> {
    let tables = load_or_compute(Some(cache_dir), n)?;
    let zonal = tables.zonal()?;
    let parts = zonal.parts();
    let np = parts.len();
    let label = |i: usize| parts.get(i).to_string();
    let cell = |mu: usize, lam: usize| {
        let v = zonal.get(mu, lam);
        format!("{}/{}", v.numer(), v.denom())
    };
    match format.unwrap_or(Format::Csv) {
        Format::Json => {
            let omega: Vec<Vec<String>> = (0..np)
                .map(|mu| (0..np).map(|lam| cell(mu, lam)).collect())
                .collect();
            let partitions: Vec<Vec<usize>> =
                parts.list().iter().map(|p| p.parts().to_vec()).collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "n": n,
                    "partitions": partitions,
                    "omega_rows_are_spheres": true,
                    "omega": omega,
                }))?
            );
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            let mut header = vec!["sphere".to_string()];
            header.extend((0..np).map(label));
            w.write_record(&header).map_err(csv_err)?;
            for mu in 0..np {
                let mut row = vec![label(mu)];
                row.extend((0..np).map(|lam| cell(mu, lam)));
                w.write_record(&row).map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for mu in 0..np {
                let row: Vec<String> = (0..np).map(|lam| cell(mu, lam)).collect();
                println!("{:<16} {}", label(mu), row.join(" "));
            }
        }
    }
    Ok(0)
}

fn cmd_ekr_verify(
    n: usize,
    graph: GraphSel,
    mode: &str,
    t: Option<usize>,
    format: Option<Format>,
    cache_dir: &std::path::Path,
    budget: Option<u64>,
) -> Result<i32, Error> {
    let mut set = ReportSet::new();
    if let Some(t) = t {
        let start = Instant::now();
        let out = t_intersecting_search(n, t, budget)?;
        let claim = format!("ekr.t-intersecting.n{n}.t{t}");
        let expect = double_factorial(2 * (n - t) as i64 - 1)?;
        let report = if !out.complete {
            VerificationReport::inconclusive(claim, format!("budget exhausted ({} nodes)", out.nodes))
        } else if BigInt::from(out.max_size) == BigInt::from(expect.clone()) && out.all_trivial {
            VerificationReport::pass(claim)
                .with_expected(&expect)
                .with_actual(out.max_size)
                .with_detail(format!(
                    "{} extremal families, all trivially t-intersecting",
                    out.extremal.len()
                ))
        } else {
            VerificationReport::fail(
                claim,
                format!(
                    "max size {}, {} extremal, all_trivial = {}",
                    out.max_size,
                    out.extremal.len(),
                    out.all_trivial
                ),
            )
            .with_expected(&expect)
        };
        set.push(report, start.elapsed());
        return emit_reports(&set, format);
    }
    let tables = load_or_compute(Some(cache_dir), n)?;
    let union = union_for(n, graph)?;
    let name = match graph {
        GraphSel::Gamma => "gamma",
        GraphSel::NAssociate => "n-associate",
    };
    let mode: MisMode = mode.parse()?;
    let start = Instant::now();
    match mode {
        MisMode::Bound => {
            let out = max_independent_set(&union, MisMode::Bound, &tables.table, budget)?;
            let claim = format!("ekr.bound.{name}.n{n}");
            set.push(
                VerificationReport::pass(claim)
                    .with_actual(&out.upper_bound)
                    .with_detail("ratio bound on the independence number"),
                start.elapsed(),
            );
        }
        MisMode::Exact => {
            let out = max_independent_set(&union, MisMode::Exact, &tables.table, budget)?;
            let claim = format!("ekr.alpha.{name}.n{n}");
            let expect = double_factorial(2 * n as i64 - 3)?;
            let report = if !out.complete {
                VerificationReport::inconclusive(claim, format!("budget exhausted ({} nodes)", out.nodes))
            } else if out.alpha == expect.to_u64() {
                VerificationReport::pass(claim)
                    .with_expected(&expect)
                    .with_actual(out.alpha.unwrap())
            } else {
                VerificationReport::fail(claim, format!("α = {:?}", out.alpha)).with_expected(&expect)
            };
            set.push(report, start.elapsed());
        }
        MisMode::Enumerate => {
            let report = verify::alpha_check(n, &union, name, &tables, budget)?;
            set.push(report, start.elapsed());
        }
    }
    emit_reports(&set, format)
}

fn cmd_polytope(
    n: usize,
    check: PolytopeCheck,
    format: Option<Format>,
    cache_dir: &std::path::Path,
) -> Result<i32, Error> {
    let mut set = ReportSet::new();
    let start = Instant::now();
    let report = match check {
        PolytopeCheck::Rank => matchscheme::polytope::rank_check(n)?,
        PolytopeCheck::Cuts => {
            let claim = format!("polytope.cuts.n{n}");
            let mut s = 3;
            let mut checked = 0;
            while s + 3 <= 2 * n {
                matchscheme::polytope::odd_cut_single_crossing(n, s)?;
                checked += 1;
                s += 2;
            }
            VerificationReport::pass(claim)
                .with_detail(format!("{checked} cut sizes, scan equals s!!(2n-s)!!"))
        }
        PolytopeCheck::Membership => verify::membership_battery(n)?,
        PolytopeCheck::Faces => verify::faces_check(n)?,
    };
    set.push(report, start.elapsed());
    // The counting inequality rides along with every polytope invocation.
    let t = Instant::now();
    set.push(
        matchscheme::polytope::cut_counting_inequality(3..=10),
        t.elapsed(),
    );
    let _ = cache_dir;
    emit_reports(&set, format)
}

fn emit_reports(set: &ReportSet, format: Option<Format>) -> Result<i32, Error> {
    match format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut envelope = set.to_json();
            let meta = envelope
                .get_mut("meta")
                .and_then(|m| m.as_object_mut())
                .expect("meta object");
            meta.insert(
                "tool".into(),
                serde_json::json!(format!("matchscheme {}", env!("CARGO_PKG_VERSION"))),
            );
            let now = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            meta.insert("generated_at_unix".into(), serde_json::json!(now));
            println!("{}", serde_json::to_string_pretty(&envelope)?);
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["claim", "status", "expected", "actual", "witnesses", "detail"])
                .map_err(csv_err)?;
            for r in set.reports() {
                w.write_record([
                    r.claim.as_str(),
                    match r.status {
                        matchscheme::Status::Pass => "pass",
                        matchscheme::Status::Fail => "fail",
                        matchscheme::Status::Inconclusive => "inconclusive",
                    },
                    r.expected.as_deref().unwrap_or(""),
                    r.actual.as_deref().unwrap_or(""),
                    &r.witnesses.join("; "),
                    r.detail.as_deref().unwrap_or(""),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in set.reports() {
                let tag = match r.status {
                    matchscheme::Status::Pass => "PASS",
                    matchscheme::Status::Fail => "FAIL",
                    matchscheme::Status::Inconclusive => "INCONCLUSIVE",
                };
                let mut line = format!("[{tag}] {}", r.claim);
                if let (Some(e), Some(a)) = (&r.expected, &r.actual) {
                    line.push_str(&format!(" (expected {e}, actual {a})"));
                }
                if let Some(d) = &r.detail {
                    line.push_str(&format!(" — {d}"));
                }
                println!("{line}");
                for w in &r.witnesses {
                    println!("        witness: {w}");
                }
            }
        }
    }
    Ok(set.exit_code())
}
