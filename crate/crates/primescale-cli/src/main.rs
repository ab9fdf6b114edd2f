//! Command-line front end: builds and persists hierarchies, exports
//! histograms and renders, runs the analyses and the verification
//! suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 I/O or container error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use primescale::analytic::{li, psi, EstimatorConfig};
use primescale::encoding::build_hierarchy;
use primescale::error::Error;
use primescale::histogram::{histogram, histogram_prefix};
use primescale::mersenne;
use primescale::params::EncodingParams;
use primescale::primes;
use primescale::reconstruct::reconstruct;
use primescale::render::{spiral, tree_text};
use primescale::sieve::sieve;
use primescale::storage;
use primescale::twins;
use primescale::verify::{self, Scope, VerifyOptions};
use primescale::Hierarchy;

#[derive(Parser)]
#[command(name = "primescale", version, about = "Multi-scale bit-pattern encoding of integer properties")]
struct Cli {
    /// Upper bound of the analyzed interval [1, n_max]
    #[arg(long, global = true, default_value_t = primescale::REFERENCE_N)]
    n_max: u64,

    /// Number of hierarchy levels
    #[arg(long, global = true, default_value_t = 3)]
    levels: u32,

    /// Pattern width exponent (blocks hold 2^t integers)
    #[arg(long, global = true, default_value_t = 3)]
    t: u32,

    /// Container path (output of `build`/`sieve`, input of the analyses)
    #[arg(long, global = true)]
    store: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Primes,
    Twins,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScopeArg {
    Props,
    Primes,
    Twins,
    Mersenne,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve [1, n_max] and report pi(n_max); optionally persist the bitmap
    Sieve,
    /// Build a property hierarchy over [1, n_max] and persist it (requires --store)
    Build {
        #[arg(long, value_enum, default_value_t = Property::Primes)]
        property: Property,
    },
    /// Export the pattern histogram of one level
    Hist {
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// Restrict to the prefix [1, PREFIX] (must align with the level's block span)
        #[arg(long)]
        prefix: Option<u64>,
    },
    /// Render the first side^2 values of a level as a spiral grid
    Spiral {
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long, default_value_t = 7)]
        side: usize,
    },
    /// Render the three-level tree under one level-3 block
    Tree {
        #[arg(long, default_value_t = 0)]
        index: u64,
    },
    /// Full statistics report for a stored hierarchy
    Stats {
        /// Override the psi weight exponent
        #[arg(long)]
        psi_exponent: Option<f64>,
    },
    /// Twin-prime analyses (builds on the fly unless --store points at a twin hierarchy)
    Twins,
    /// Mersenne-adjacent scans and observations
    Mersenne {
        /// Odd-exponent bound for the level-1 scan
        #[arg(long)]
        k_max: Option<u64>,
        /// Level-2 block bound (scans exponents up to 16*m_max+17)
        #[arg(long)]
        m_max: Option<u64>,
        /// Probable-prime rounds
        #[arg(long, default_value_t = primescale::probable::DEFAULT_ROUNDS)]
        rounds: u32,
        /// Smoke-test bounds (k_max 501, m_max 25)
        #[arg(long)]
        fast: bool,
        /// Write the per-exponent CSV here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the integers encoded under a level-3 pattern value
    Reconstruct {
        #[arg(long)]
        pattern: u8,
    },
    /// Re-run the reference regression checks
    Verify {
        #[arg(long, value_enum, default_value_t = ScopeArg::All)]
        scope: ScopeArg,
        /// Probable-prime rounds for the Mersenne scope
        #[arg(long, default_value_t = primescale::probable::DEFAULT_ROUNDS)]
        rounds: u32,
    },
}

#[derive(Serialize)]
struct Versioned<T: Serialize> {
    schema: &'static str,
    #[serde(flatten)]
    body: T,
}

fn json<T: Serialize>(body: &T) -> String {
    serde_json::to_string_pretty(&Versioned { schema: "report_v1", body })
        .expect("report serialization cannot fail")
}

/// Bulk writes to stdout; a closed pipe (e.g. `| head`) ends the
/// program quietly instead of panicking.
fn emit(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(Error::Io { path: "<stdout>".into(), source: e }.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = match err.downcast_ref::<Error>() {
                Some(Error::Io { .. } | Error::Format(_) | Error::UnsupportedVersion(_)) => 3,
                Some(_) => 2,
                None => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn params(cli: &Cli) -> anyhow::Result<EncodingParams> {
    Ok(EncodingParams::new(cli.t, cli.levels, cli.n_max)?)
}

fn store_path(cli: &Cli) -> anyhow::Result<&PathBuf> {
    cli.store
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("this command needs --store <path>"))
}

fn load_store(cli: &Cli) -> anyhow::Result<Hierarchy> {
    Ok(storage::load(store_path(cli)?)?)
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Sieve => {
            let bitmap = sieve(cli.n_max)?;
            println!("pi({}) = {}", cli.n_max, bitmap.count_primes_upto(cli.n_max)?);
            if let Some(path) = &cli.store {
                storage::save_bitmap(&bitmap, "primes:bitmap", path)?;
                println!("bitmap saved to {}", path.display());
            }
        }
        Command::Build { property } => {
            let path = store_path(cli)?;
            let p = params(cli)?;
            let bitmap = Arc::new(sieve(cli.n_max)?);
            let chain = match property {
                Property::Primes => primes::prime_chain(bitmap),
                Property::Twins => twins::twin_chain(bitmap),
            };
            let hier = build_hierarchy(&chain, &p)?;
            storage::save(&hier, path)?;
            println!(
                "{} hierarchy over [1, {}], {} levels, saved to {}",
                hier.property(),
                cli.n_max,
                cli.levels,
                path.display()
            );
        }
        Command::Hist { level, prefix } => {
            let hier = load_store(cli)?;
            let seq = hier.level(*level)?;
            let hist = match prefix {
                Some(m) => {
                    let span = hier.params().block_size().pow(*level);
                    if *m == 0 || m % span != 0 {
                        return Err(Error::Range(format!(
                            "prefix {m} is not a positive multiple of the level-{level} span {span}"
                        ))
                        .into());
                    }
                    histogram_prefix(seq, m / span)?
                }
                None => histogram(seq)?,
            };
            match cli.format {
                Format::Csv | Format::Text => emit(&hist.to_csv())?,
                Format::Json => println!("{}", json(&hist)),
            }
        }
        Command::Spiral { level, side } => {
            let hier = load_store(cli)?;
            let grid = spiral(hier.level(*level)?, *side)?;
            match cli.format {
                Format::Json => println!("{}", json(&grid)),
                _ => emit(&grid.render_text())?,
            }
        }
        Command::Tree { index } => {
            let hier = load_store(cli)?;
            emit(&tree_text(&hier, *index)?)?;
        }
        Command::Stats { psi_exponent } => {
            let hier = load_store(cli)?;
            let mut cfg = EstimatorConfig::default();
            if let Some(e) = psi_exponent {
                cfg.psi_exponent = *e;
            }
            match hier.property() {
                "primes" => print_prime_stats(cli, &hier, &cfg)?,
                "twins" => print_twin_stats(cli, &hier)?,
                other => {
                    return Err(Error::MissingData(format!(
                        "no statistics defined for property '{other}'"
                    ))
                    .into())
                }
            }
        }
        Command::Twins => {
            let hier = match &cli.store {
                Some(path) => storage::load(path)?,
                None => {
                    let bitmap = Arc::new(sieve(cli.n_max)?);
                    build_hierarchy(&twins::twin_chain(bitmap), &params(cli)?)?
                }
            };
            if hier.property() != "twins" {
                return Err(Error::MissingData(format!(
                    "expected a twins hierarchy, found '{}'",
                    hier.property()
                ))
                .into());
            }
            print_twin_stats(cli, &hier)?;
        }
        Command::Mersenne { k_max, m_max, rounds, fast, out } => {
            let (k_max, m_max) = if *fast {
                (501, 25)
            } else {
                (
                    k_max.unwrap_or(primescale::reference::MERSENNE_K_MAX),
                    m_max.unwrap_or(primescale::reference::MERSENNE_LEVEL2_M_MAX),
                )
            };
            let scan_bound = k_max.max(16 * m_max + 17);
            let level1 = mersenne::mersenne_level1_scan(scan_bound, *rounds)?;
            let level1_in_range: Vec<_> =
                level1.iter().filter(|b| b.exponent <= k_max).cloned().collect();
            let level2 = mersenne::level2_from_level1(&level1, m_max);
            let report = mersenne::mersenne_observations(&level1_in_range, &level2);
            if let Some(path) = out {
                std::fs::write(path, mersenne::level1_scan_csv(&level1_in_range))
                    .map_err(|e| Error::Io { path: path.clone(), source: e })?;
                eprintln!("per-exponent CSV written to {}", path.display());
            }
            match cli.format {
                Format::Json => println!("{}", json(&report)),
                Format::Csv => emit(&mersenne::level1_scan_csv(&level1_in_range))?,
                Format::Text => print_mersenne_report(&report),
            }
        }
        Command::Reconstruct { pattern } => {
            let hier = load_store(cli)?;
            let result = reconstruct(&hier, *pattern)?;
            match cli.format {
                Format::Csv => emit(&result.to_csv())?,
                Format::Json => println!("{}", json(&result)),
                Format::Text => {
                    use std::io::Write;
                    let mut out = std::io::BufWriter::new(std::io::stdout().lock());
                    for i in &result.integers {
                        if let Err(e) = writeln!(out, "{i}") {
                            if e.kind() == std::io::ErrorKind::BrokenPipe {
                                return Ok(ExitCode::SUCCESS);
                            }
                            return Err(Error::Io { path: "<stdout>".into(), source: e }.into());
                        }
                    }
                    drop(out);
                    eprintln!(
                        "{} integers from {} matching level-3 blocks",
                        result.integers.len(),
                        result.matches.len()
                    );
                }
            }
        }
        Command::Verify { scope, rounds } => {
            let scope = match scope {
                ScopeArg::Props => Scope::Properties,
                ScopeArg::Primes => Scope::Primes,
                ScopeArg::Twins => Scope::Twins,
                ScopeArg::Mersenne => Scope::Mersenne,
                ScopeArg::All => Scope::All,
            };
            let opts = VerifyOptions { rounds: *rounds, ..VerifyOptions::default() };
            let reports = verify::run(scope, &opts)?;
            let all_passed = reports.iter().all(|r| r.all_passed());
            #[derive(Serialize)]
            struct VerifyBody<'a> {
                scopes: &'a [verify::VerifyReport],
            }
            match cli.format {
                Format::Json => println!("{}", json(&VerifyBody { scopes: &reports })),
                _ => {
                    for r in &reports {
                        print!("{}", r.render_text());
                    }
                }
            }
            if !all_passed {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PrimeStats {
    n_max: u64,
    prime_count: u64,
    restriction: primes::RestrictionReport,
    classes: primes::BlockClassCounts,
    percentages: [f64; 4],
    li: f64,
    psi: f64,
    ratio_li_pi: f64,
    ratio_psi_li_n1: f64,
    ratio_multi_prime: f64,
    level1_positions: primes::PositionProbabilities,
    level2_positions: primes::PositionProbabilities,
    density_level2: bool,
    density_level3: bool,
    level3: primes::Level3Report,
}

fn prime_stats(hier: &Hierarchy, cfg: &EstimatorConfig) -> anyhow::Result<PrimeStats> {
    let n = hier.params().n_max();
    let l1 = hier.level(1)?;
    let hist1 = histogram(l1)?;
    // pi(n) without a bitmap: level-1 bits are the primality bits
    let prime_count: u64 = l1.iter().map(|v| v.count_ones() as u64).sum();
    let classes = primes::classify_blocks(&hist1, n)?;
    let li_n = li(n as f64, cfg)?;
    let psi_n = psi(n as f64, cfg);
    Ok(PrimeStats {
        n_max: n,
        prime_count,
        restriction: primes::check_level1_restriction(&hist1),
        percentages: classes.percentages(),
        classes,
        li: li_n,
        psi: psi_n,
        ratio_li_pi: li_n / prime_count as f64,
        ratio_psi_li_n1: psi_n * li_n / classes.n1 as f64,
        ratio_multi_prime: (2 * classes.n2 + 3 * classes.n3 + 1) as f64 / ((1.0 - psi_n) * li_n),
        level1_positions: primes::position_probabilities_level1(&hist1),
        level2_positions: primes::position_probabilities_level2(hier)?,
        density_level2: primes::density_check(hier, 2, n)?,
        density_level3: primes::density_check(hier, 3, n)?,
        level3: primes::level3_report(hier)?,
    })
}

fn print_prime_stats(cli: &Cli, hier: &Hierarchy, cfg: &EstimatorConfig) -> anyhow::Result<()> {
    let stats = prime_stats(hier, cfg)?;
    match cli.format {
        Format::Json => println!("{}", json(&stats)),
        Format::Csv => {
            return Err(Error::Config("stats supports --format text or json".into()).into())
        }
        Format::Text => {
            println!("prime statistics over [1, {}]", stats.n_max);
            println!("  pi(n)                = {}", stats.prime_count);
            println!(
                "  level-1 support      = {} values (restriction {})",
                if stats.restriction.ok { "attainable" } else { "VIOLATED" },
                if stats.restriction.ok { "holds" } else { "fails" },
            );
            println!(
                "  block classes        = empty {} / one {} / two {} / three-four {}",
                stats.classes.empty, stats.classes.n1, stats.classes.n2, stats.classes.n3
            );
            println!(
                "  class percentages    = {:.2}% / {:.2}% / {:.2}% / {:.2}%",
                stats.percentages[0], stats.percentages[1], stats.percentages[2], stats.percentages[3]
            );
            println!("  li(n)                = {:.3}", stats.li);
            println!("  psi(n)               = {:.6}", stats.psi);
            println!("  li/pi                = {:.5}", stats.ratio_li_pi);
            println!("  psi*li/N1            = {:.5}", stats.ratio_psi_li_n1);
            println!("  (2N2+3N3+1)/((1-psi)li) = {:.5}", stats.ratio_multi_prime);
            let fmt_probs = |p: &primes::PositionProbabilities| {
                p.probabilities
                    .iter()
                    .map(|(b, v)| format!("b{b}={v:.7}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            println!("  level-1 positions    = {}", fmt_probs(&stats.level1_positions));
            println!("  level-2 positions    = {}", fmt_probs(&stats.level2_positions));
            println!(
                "  level-2 search order = {:?}",
                stats.level2_positions.search_order
            );
            println!(
                "  density              = level 2: {}, level 3: {}",
                stats.density_level2, stats.density_level3
            );
            println!(
                "  level-3 values       = {} distinct, {} missing, min np {}",
                stats.level3.distinct_count, stats.level3.missing_count, stats.level3.min_np
            );
            println!(
                "  longest empty run    = {} blocks ({} integers)",
                stats.level3.max_empty_run_blocks, stats.level3.max_empty_run_integers
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TwinStats {
    n_max: u64,
    level2_prefix: Vec<u64>,
    level2_coverage: twins::CoverageReport,
    level3_coverage: twins::CoverageReport,
    straddling_pairs: u64,
}

fn print_twin_stats(cli: &Cli, hier: &Hierarchy) -> anyhow::Result<()> {
    let n = hier.params().n_max();
    let span3 = hier.params().block_size().pow(3);
    let l3_bound = primescale::reference::TWIN_LEVEL3_EXHAUSTIVE_N.min(n / span3 * span3);
    let stats = TwinStats {
        n_max: n,
        level2_prefix: twins::twin_level2_prefix(hier, 20.min((n / 64) as usize))?,
        level2_coverage: twins::value_coverage(hier, 2, n)?,
        level3_coverage: twins::value_coverage(hier, 3, l3_bound)?,
        straddling_pairs: twins::straddling_twin_count(hier.level(1)?),
    };
    match cli.format {
        Format::Json => println!("{}", json(&stats)),
        Format::Csv => {
            return Err(Error::Config("twins supports --format text or json".into()).into())
        }
        Format::Text => {
            println!("twin statistics over [1, {}]", stats.n_max);
            println!("  first level-2 values = {:?}", stats.level2_prefix);
            println!(
                "  level-2 coverage     = {} distinct, {} missing",
                stats.level2_coverage.distinct_count, stats.level2_coverage.missing_count
            );
            println!("  level-2 ranges       = {:?}", stats.level2_coverage.ranges);
            println!(
                "  level-3 coverage     = {} distinct over [1, {}]",
                stats.level3_coverage.distinct_count, stats.level3_coverage.n_max
            );
            println!(
                "  straddling twin pairs across block boundaries (invisible to the filter) = {}",
                stats.straddling_pairs
            );
        }
    }
    Ok(())
}

fn print_mersenne_report(report: &mersenne::MersenneReport) {
    println!("mersenne scan through exponent {}", report.k_max);
    println!("  nonzero patterns     = {:?}", report.nonzero_patterns);
    for (pattern, exponents) in &report.pattern_exponents {
        println!("  pattern {pattern:>3} exponents = {exponents:?}");
    }
    println!("  max np (k >= 7)      = {}", report.max_np_from_k7);
    println!("  offset prime counts  = {:?} (k >= 7)", report.offset_prime_counts);
    println!("  small-k anomalies    = {:?}", report.small_exponent_anomalies);
    println!("  exclusivity (k >= 11) = {}", report.exclusivity_holds);
    println!(
        "  level-2 blocks       = {} nonzero of {} ({:.1}% empty)",
        report.level2_nonzero.len(),
        report.level2_blocks,
        report.level2_empty_fraction * 100.0
    );
    println!("  level-2 nonzero      = {:?}", report.level2_nonzero);
}
