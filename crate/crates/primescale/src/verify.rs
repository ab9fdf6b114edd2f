//! Regression verification: recomputes every reference claim and
//! reports one named pass/fail check per claim, with measured and
//! expected values side by side.
//!
//! Three reference entries are known to disagree with direct
//! computation (see `reference`); their checks fail by design and carry
//! explanatory notes rather than being silently adjusted.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::analytic::{li, psi, EstimatorConfig};
use crate::encoding::{build_hierarchy, d2b, np, Hierarchy};
use crate::error::{Error, Result};
use crate::histogram::{histogram, histogram_prefix};
use crate::mersenne::{
    level2_from_level1, mersenne_level1_scan, mersenne_observations, MersenneBlock,
    MERSENNE_LEVEL1_PATTERNS, MERSENNE_PATTERN_MASK,
};
use crate::params::EncodingParams;
use crate::primes::{
    check_level1_restriction, classify_blocks, density_check, level3_report,
    position_probabilities_level1, position_probabilities_level2, prime_chain,
    LEVEL1_PRIME_PATTERNS,
};
use crate::reconstruct::reconstruct;
use crate::reference as refs;
use crate::render::{spiral, tree_text};
use crate::sieve::{sieve, PrimalityBitmap};
use crate::storage;
use crate::twins::{twin_chain, twin_level2_prefix, value_coverage};

/// One verified claim.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: String,
    pub expected: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(
        name: &str,
        passed: bool,
        measured: impl std::fmt::Display,
        expected: impl std::fmt::Display,
    ) -> Self {
        Self {
            name: name.to_string(),
            passed,
            measured: measured.to_string(),
            expected: expected.to_string(),
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// All checks of one verification scope.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub scope: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check, plus notes.
    pub fn render_text(&self) -> String {
        let mut out = format!("== scope: {} ==\n", self.scope);
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{status}  {:<34} measured: {}  expected: {}",
                c.name, c.measured, c.expected
            );
            if let Some(note) = &c.note {
                let _ = writeln!(out, "      note: {note}");
            }
        }
        let _ = writeln!(
            out,
            "{}/{} checks passed",
            self.checks.len() - self.failures(),
            self.checks.len()
        );
        out
    }
}

fn prime_hierarchy(n_max: u64, levels: u32) -> Result<(Hierarchy, Arc<PrimalityBitmap>)> {
    let bitmap = Arc::new(sieve(n_max)?);
    let chain = prime_chain(bitmap.clone());
    let params = EncodingParams::new(3, levels, n_max)?;
    Ok((build_hierarchy(&chain, &params)?, bitmap))
}

/// Golden renders, embedded so the check runs anywhere.
pub const GOLDEN_SPIRAL_PRIME_L1: &str = include_str!("golden/spiral_prime_level1_side7.txt");
pub const GOLDEN_SPIRAL_TWIN_L2: &str = include_str!("golden/spiral_twin_level2_side7.txt");
pub const GOLDEN_TREE_PRIME_BLOCK0: &str = include_str!("golden/tree_prime_block0.txt");

/// Self-contained structural checks; no full-interval data needed.
pub fn verify_properties() -> Result<VerifyReport> {
    let mut checks = Vec::new();

    // bit-decomposition identities, exhaustive over one byte
    let d2b_ok = (0..=255u8).all(|v| {
        let positions: Vec<u32> = d2b(v).collect();
        positions.len() as u32 == np(v as u64)
            && positions.iter().map(|j| 1u64 << (7 - j)).sum::<u64>() == v as u64
    });
    checks.push(Check::new(
        "d2b-np-identities",
        d2b_ok,
        if d2b_ok { "hold on [0, 255]" } else { "violated" },
        "|d2b(v)| = np(v) and sum 2^(7-j) = v",
    ));

    // Mersenne filter set vs bit 2^1 over the attainable pattern space
    let equiv_ok = (0..=255u8).all(|v| {
        let attainable = v & !MERSENNE_PATTERN_MASK == 0;
        let in_set = MERSENNE_LEVEL1_PATTERNS.contains(&v);
        if attainable && v != 170 {
            in_set == (v & 0b10 != 0)
        } else {
            !in_set
        }
    });
    checks.push(
        Check::new(
            "mersenne-filter-bit-equivalence",
            equiv_ok,
            if equiv_ok { "holds" } else { "violated" },
            "membership = bit 2^1 over attainable patterns except 170",
        )
        .with_note("170 (all four offsets prime, never observed) is deliberately outside the filter set"),
    );

    // classification identity on pseudo-random multiples of 8 up to 10^6
    let (hier6, bitmap6) = prime_hierarchy(1_000_448, 3)?;
    let l1 = hier6.level(1)?;
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    let mut identity_ok = true;
    let mut identity_detail = String::new();
    for _ in 0..100 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let m = 8 * (1 + (state >> 33) % 125_000); // multiples of 8 in [8, 10^6]
        let hist = histogram_prefix(l1, m / 8)?;
        let classes = classify_blocks(&hist, m)?;
        let pi = bitmap6.count_primes_upto(m)?;
        if classes.prime_count() != pi {
            identity_ok = false;
            let _ = write!(identity_detail, "m={m}: {} vs pi={pi}; ", classes.prime_count());
        }
    }
    checks.push(Check::new(
        "classification-identity",
        identity_ok,
        if identity_ok { "exact on 100 random multiples of 8".into() } else { identity_detail },
        "pi(m) = N1 + 2 N2 + 3 N3 + 1",
    ));

    // density verdicts on [1, 10^6]
    let verdicts = (
        density_check(&hier6, 1, 1_000_000)?,
        density_check(&hier6, 2, 1_000_000)?,
        density_check(&hier6, 3, 1_000_000)?,
    );
    checks.push(Check::new(
        "density-verdicts-1e6",
        verdicts == (false, false, true),
        format!("k=1: {}, k=2: {}, k=3: {}", verdicts.0, verdicts.1, verdicts.2),
        "k=1: false, k=2: false, k=3: true",
    ));

    // storage round-trip byte equality
    let (hier_small, bitmap_small) = prime_hierarchy(4096, 3)?;
    let dir = tempfile::tempdir().map_err(|e| Error::Io { path: "tempdir".into(), source: e })?;
    let hpath = dir.path().join("roundtrip.msp");
    storage::save(&hier_small, &hpath)?;
    let reloaded = storage::load(&hpath)?;
    let bpath = dir.path().join("roundtrip-bitmap.msp");
    storage::save_bitmap(&bitmap_small, "primes:bitmap", &bpath)?;
    let bitmap_back = storage::load_bitmap(&bpath)?;
    let storage_ok = reloaded == hier_small && bitmap_back == *bitmap_small;
    checks.push(Check::new(
        "storage-round-trip",
        storage_ok,
        if storage_ok { "identical after save/load" } else { "mismatch" },
        "byte-exact round trip",
    ));

    // reconstruction round trip over [1, 4096]
    let observed: BTreeSet<u64> = hier_small.level(3)?.iter().collect();
    let mut recovered = Vec::new();
    for &c in &observed {
        recovered.extend(reconstruct(&hier_small, c as u8)?.integers);
    }
    recovered.sort_unstable();
    let primes: Vec<u64> = bitmap_small.primes().collect();
    let rec_ok = recovered == primes;
    checks.push(Check::new(
        "reconstruction-round-trip-4096",
        rec_ok,
        format!("{} integers recovered", recovered.len()),
        format!("{} primes below 4096", primes.len()),
    ));

    // golden renders
    let (hier512, _) = prime_hierarchy(512, 3)?;
    let spiral_prime = spiral(hier512.level(1)?, 7)?.render_text();
    let tree = tree_text(&hier512, 0)?;
    let bitmap_t = Arc::new(sieve(3584)?);
    let twin_h = build_hierarchy(&twin_chain(bitmap_t), &EncodingParams::new(3, 2, 3584)?)?;
    let spiral_twin = spiral(twin_h.level(2)?, 7)?.render_text();
    checks.push(Check::new(
        "spiral-golden",
        spiral_prime == GOLDEN_SPIRAL_PRIME_L1 && spiral_twin == GOLDEN_SPIRAL_TWIN_L2,
        "prime level-1 and twin level-2 spirals",
        "byte-identical to golden renders",
    ));
    checks.push(Check::new(
        "tree-golden",
        tree == GOLDEN_TREE_PRIME_BLOCK0,
        "tree of block 0",
        "byte-identical to golden render",
    ));

    Ok(VerifyReport { scope: "properties".into(), checks })
}

fn require_reference_geometry(hier: &Hierarchy, property: &str) -> Result<()> {
    if hier.property() != property {
        return Err(Error::MissingData(format!(
            "expected a '{property}' hierarchy, found '{}' (build one with: primescale build --property {property} --store <path>)",
            hier.property()
        )));
    }
    let expected = EncodingParams::new(3, 3, crate::REFERENCE_N)?;
    if hier.params() != &expected {
        return Err(Error::MissingData(format!(
            "reference checks need t=3, levels=3, n_max={} (found t={}, levels={}, n_max={})",
            crate::REFERENCE_N,
            hier.params().t(),
            hier.params().levels(),
            hier.params().n_max()
        )));
    }
    Ok(())
}

/// Full prime-scope verification over the standard interval.
pub fn verify_primes(
    hier: &Hierarchy,
    bitmap: &PrimalityBitmap,
    cfg: &EstimatorConfig,
) -> Result<VerifyReport> {
    require_reference_geometry(hier, "primes")?;
    let mut checks = Vec::new();
    let n = crate::REFERENCE_N;
    let l1 = hier.level(1)?;
    let hist1 = histogram(l1)?;

    // pattern support
    let support: Vec<u64> = hist1.support();
    let expected_support: Vec<u64> = LEVEL1_PRIME_PATTERNS.iter().map(|&v| v as u64).collect();
    let restriction = check_level1_restriction(&hist1);
    checks.push(Check::new(
        "level1-support",
        support == expected_support && restriction.ok,
        format!("{} distinct values", support.len()),
        "exactly the 14 attainable patterns",
    ));

    // histogram counts, exact
    let mut mismatches = Vec::new();
    for &(v, c) in refs::LEVEL1_HISTOGRAM.iter() {
        if hist1.count(v as u64) != c {
            mismatches.push(format!("h({v}) = {} vs {c}", hist1.count(v as u64)));
        }
    }
    checks.push(Check::new(
        "level1-histogram",
        mismatches.is_empty(),
        if mismatches.is_empty() { "all 14 counts exact".into() } else { mismatches.join(", ") },
        "reference counts",
    ));

    let pi_n = bitmap.count_primes_upto(n)?;
    checks.push(Check::new(
        "prime-count",
        pi_n == refs::PRIME_COUNT,
        pi_n,
        refs::PRIME_COUNT,
    ));

    // block proportions
    let classes = classify_blocks(&hist1, n)?;
    let pct = classes.percentages();
    let mut prop_fail = Vec::new();
    for (i, (&measured, &expected)) in pct.iter().zip(refs::BLOCK_PROPORTIONS_PCT.iter()).enumerate()
    {
        if (measured - expected).abs() > refs::BLOCK_PROPORTIONS_TOL_PP {
            prop_fail.push(format!("class {i}: {measured:.4}% vs {expected}%"));
        }
    }
    let measured_pct = format!(
        "({:.2}%, {:.2}%, {:.2}%, {:.2}%)",
        pct[0], pct[1], pct[2], pct[3]
    );
    let mut prop_check = Check::new(
        "block-proportions",
        prop_fail.is_empty(),
        measured_pct,
        format!("(59%, 35.01%, 5%, 0.24%) within {} pp", refs::BLOCK_PROPORTIONS_TOL_PP),
    );
    if !prop_fail.is_empty() {
        prop_check = prop_check.with_note(format!(
            "{}; the histogram fixes the two-prime share at 5.76%, so the reference 5% is not reachable",
            prop_fail.join(", ")
        ));
    }
    checks.push(prop_check);

    // estimator ratios
    let li_n = li(n as f64, cfg)?;
    let psi_n = psi(n as f64, cfg);
    let r1 = li_n / pi_n as f64;
    let r2 = psi_n * li_n / classes.n1 as f64;
    let r3 = (2 * classes.n2 + 3 * classes.n3 + 1) as f64 / ((1.0 - psi_n) * li_n);
    let ratio = |name: &str, measured: f64, expected: f64| {
        Check::new(
            name,
            (measured - expected).abs() <= refs::RATIO_TOL,
            format!("{measured:.5}"),
            format!("{expected} within {}", refs::RATIO_TOL),
        )
    };
    checks.push(ratio("ratio-li-pi", r1, refs::RATIO_LI_PI));
    checks.push(
        ratio("ratio-psi-li-n1", r2, refs::RATIO_PSI_LI_N1).with_note(format!(
            "psi exponent {} gives {r2:.5}; the reference value needs an exponent near 0.0615",
            cfg.psi_exponent
        )),
    );
    checks.push(
        ratio("ratio-multi-prime", r3, refs::RATIO_MULTI_PRIME).with_note(format!(
            "psi exponent {} gives {r3:.5}; the reference value needs an exponent near 0.0615",
            cfg.psi_exponent
        )),
    );

    // level-1 positional probabilities
    let probs1 = position_probabilities_level1(&hist1);
    let mut p1_fail = Vec::new();
    for &(bit, expected) in refs::LEVEL1_POSITION_PROBS.iter() {
        let measured = probs1.probabilities.iter().find(|(b, _)| *b == bit).unwrap().1;
        if (measured - expected).abs() > refs::LEVEL1_POSITION_TOL {
            p1_fail.push(format!("b{bit}: {measured:.7} vs {expected:.7}"));
        }
    }
    checks.push(Check::new(
        "level1-position-probabilities",
        p1_fail.is_empty(),
        if p1_fail.is_empty() {
            format!(
                "(p1, p3, p5, p7) = ({:.7}, {:.7}, {:.7}, {:.7})",
                probs1.probabilities[0].1,
                probs1.probabilities[1].1,
                probs1.probabilities[2].1,
                probs1.probabilities[3].1
            )
        } else {
            p1_fail.join(", ")
        },
        format!("reference values within {:e}", refs::LEVEL1_POSITION_TOL),
    ));
    let strictly_ordered = probs1.probabilities.windows(2).all(|w| w[0].1 > w[1].1);
    checks.push(Check::new(
        "level1-position-ordering",
        strictly_ordered && probs1.search_order == vec![1, 3, 5, 7],
        format!("search order {:?}", probs1.search_order),
        "strict p1 > p3 > p5 > p7",
    ));

    // level-2 positional probabilities
    let probs2 = position_probabilities_level2(hier)?;
    let mut p2_fail = Vec::new();
    for (bit, expected) in refs::LEVEL2_POSITION_PROBS.iter().enumerate() {
        let measured = probs2.probabilities[bit].1;
        if (measured - expected).abs() > refs::LEVEL2_POSITION_TOL {
            p2_fail.push(format!("b{bit}: {measured:.7} vs {expected:.6}"));
        }
    }
    checks.push(Check::new(
        "level2-position-probabilities",
        p2_fail.is_empty(),
        if p2_fail.is_empty() { "all 8 within tolerance".into() } else { p2_fail.join(", ") },
        format!("reference values within {:e}", refs::LEVEL2_POSITION_TOL),
    ));
    checks.push(Check::new(
        "level2-search-order",
        probs2.search_order == refs::LEVEL2_SEARCH_ORDER,
        format!("{:?}", probs2.search_order),
        format!("{:?}", refs::LEVEL2_SEARCH_ORDER),
    ));

    // level 3: initial constancy and first deviation
    let l3 = hier.level(3)?;
    let constant = l3.iter().take(refs::LEVEL3_CONSTANT_THROUGH as usize + 1).all(|v| v == 255);
    let deviation = l3.get(refs::LEVEL3_FIRST_DEVIATION.0)?;
    checks.push(Check::new(
        "level3-constant-prefix",
        constant && deviation == refs::LEVEL3_FIRST_DEVIATION.1,
        format!("constant through 366: {constant}, value at 367: {deviation}"),
        "255 through n = 366, then 223",
    ));

    // level 3: support and histogram
    let report3 = level3_report(hier)?;
    let support3: Vec<u64> = report3.distinct.clone();
    let expected3: Vec<u64> = refs::LEVEL3_SUPPORT.iter().map(|&v| v as u64).collect();
    checks.push(
        Check::new(
            "level3-support",
            support3 == expected3,
            format!("{} distinct values, {} missing", report3.distinct_count, report3.missing_count),
            "the 47 reference values",
        )
        .with_note(format!(
            "computed missing count {} (the reference text claims {})",
            report3.missing_count,
            refs::LEVEL3_CLAIMED_MISSING
        )),
    );
    let mut h3_fail = Vec::new();
    for &(v, c) in refs::LEVEL3_HISTOGRAM.iter() {
        if report3.histogram.count(v as u64) != c {
            h3_fail.push(format!("h({v}) = {} vs {c}", report3.histogram.count(v as u64)));
        }
    }
    checks.push(Check::new(
        "level3-histogram",
        h3_fail.is_empty() && report3.min_np == refs::LEVEL3_MIN_NP,
        if h3_fail.is_empty() {
            format!("all 47 counts exact, min np = {}", report3.min_np)
        } else {
            h3_fail.join(", ")
        },
        format!("reference counts, min np = {}", refs::LEVEL3_MIN_NP),
    ));

    // reconstruction soundness on sampled patterns
    let samples: [u8; 5] = [31, 127, 191, 254, 255];
    let mut sound = true;
    let mut recovered_total = 0u64;
    for &c in &samples {
        let result = reconstruct(hier, c)?;
        recovered_total += result.integers.len() as u64;
        if !result.integers.iter().all(|&i| bitmap.is_prime(i)) {
            sound = false;
        }
    }
    checks.push(Check::new(
        "reconstruction-soundness",
        sound,
        format!("{recovered_total} integers from 5 sampled patterns, all prime"),
        "every recovered integer is prime",
    ));

    // density at the full interval (k = 2 fails, k = 3 holds)
    let d2 = density_check(hier, 2, n)?;
    let d3 = density_check(hier, 3, n)?;
    checks.push(
        Check::new(
            "density-full-interval",
            !d2 && d3,
            format!("k=2: {d2}, k=3: {d3}"),
            "k=2: false, k=3: true",
        )
        .with_note("about 1% of 2-patterns are zero while every 3-pattern is nonzero"),
    );

    Ok(VerifyReport { scope: "primes".into(), checks })
}

/// Full twin-scope verification over the standard interval.
pub fn verify_twins(hier: &Hierarchy) -> Result<VerifyReport> {
    require_reference_geometry(hier, "twins")?;
    let mut checks = Vec::new();

    let prefix = twin_level2_prefix(hier, 20)?;
    checks.push(Check::new(
        "twin-level2-prefix",
        prefix == refs::TWIN_LEVEL2_FIRST20,
        format!("{prefix:?}"),
        format!("{:?}", refs::TWIN_LEVEL2_FIRST20),
    ));

    let coverage2 = value_coverage(hier, 2, crate::REFERENCE_N)?;
    checks.push(Check::new(
        "twin-level2-distinct",
        coverage2.distinct_count == refs::TWIN_LEVEL2_DISTINCT,
        coverage2.distinct_count,
        refs::TWIN_LEVEL2_DISTINCT,
    ));
    let expected_support: Vec<u64> = refs::TWIN_LEVEL2_SUPPORT.iter().map(|&v| v as u64).collect();
    checks.push(
        Check::new(
            "twin-level2-support",
            coverage2.distinct == expected_support,
            format!("{} values, {} missing", coverage2.distinct_count, coverage2.missing_count),
            "the frozen 108-element support",
        )
        .with_note(format!(
            "computed missing count {} (the reference text claims {}); the reference range summary expands to 174 values and is lossy",
            coverage2.missing_count,
            refs::TWIN_LEVEL2_CLAIMED_MISSING
        )),
    );

    let coverage3 = value_coverage(hier, 3, refs::TWIN_LEVEL3_EXHAUSTIVE_N)?;
    checks.push(Check::new(
        "twin-level3-coverage",
        coverage3.distinct_count == 256,
        format!("{} distinct values over [1, {}]", coverage3.distinct_count, coverage3.n_max),
        "all 256 values attained",
    ));

    let l3 = hier.level(3)?;
    let prefix3: Vec<u64> = l3.iter().take(20).collect();
    checks.push(Check::new(
        "twin-level3-prefix",
        prefix3 == refs::TWIN_LEVEL3_FIRST20,
        format!("{prefix3:?}"),
        format!("{:?}", refs::TWIN_LEVEL3_FIRST20),
    ));

    Ok(VerifyReport { scope: "twins".into(), checks })
}

/// Mersenne-scope verification against the pinned exponent ranges.
/// `level1` must cover odd exponents [3, 4001]; `level2` blocks 0..=500.
pub fn verify_mersenne(level1: &[MersenneBlock], level2: &[(u64, u8)]) -> Result<VerifyReport> {
    let expected_len = ((refs::MERSENNE_K_MAX - 3) / 2 + 1) as usize;
    if level1.len() < expected_len {
        return Err(Error::MissingData(format!(
            "level-1 scan covers {} exponents, need {expected_len} (odd k in [3, {}])",
            level1.len(),
            refs::MERSENNE_K_MAX
        )));
    }
    let level1 = &level1[..expected_len];
    if level2.len() != (refs::MERSENNE_LEVEL2_M_MAX + 1) as usize {
        return Err(Error::MissingData(format!(
            "level-2 scan covers {} blocks, need {}",
            level2.len(),
            refs::MERSENNE_LEVEL2_M_MAX + 1
        )));
    }
    let mut checks = Vec::new();
    let report = mersenne_observations(level1, level2);

    // occurrence histogram
    let hist = crate::mersenne::mersenne_level1_histogram(level1);
    let mut h_fail = Vec::new();
    for &(v, c) in refs::MERSENNE_LEVEL1_HISTOGRAM.iter() {
        if hist.count(v as u64) != c {
            h_fail.push(format!("count({v}) = {} vs {c}", hist.count(v as u64)));
        }
    }
    let extra: Vec<u64> = hist
        .support()
        .into_iter()
        .filter(|&v| !refs::MERSENNE_LEVEL1_HISTOGRAM.iter().any(|&(rv, _)| rv as u64 == v))
        .collect();
    checks.push(Check::new(
        "mersenne-level1-histogram",
        h_fail.is_empty() && extra.is_empty(),
        if h_fail.is_empty() && extra.is_empty() {
            "all 6 counts exact".into()
        } else {
            format!("{} extra {:?}", h_fail.join(", "), extra)
        },
        "reference occurrence counts",
    ));

    // exponent lists per pattern
    let list_for = |pattern: u8| -> Vec<u64> {
        report
            .pattern_exponents
            .iter()
            .find(|(p, _)| *p == pattern)
            .map(|(_, l)| l.clone())
            .unwrap_or_default()
    };
    let lists: [(&str, u8, &[u64]); 5] = [
        ("mersenne-pattern2-exponents", 2, &refs::MERSENNE_PATTERN2_EXPONENTS),
        ("mersenne-pattern8-exponents", 8, &refs::MERSENNE_PATTERN8_EXPONENTS),
        ("mersenne-pattern10-exponents", 10, &refs::MERSENNE_PATTERN10_EXPONENTS),
        ("mersenne-pattern42-exponents", 42, &refs::MERSENNE_PATTERN42_EXPONENTS),
        ("mersenne-pattern128-exponents", 128, &refs::MERSENNE_PATTERN128_EXPONENTS),
    ];
    for (name, pattern, expected) in lists {
        let measured = list_for(pattern);
        let passed = measured == expected;
        let mut check = Check::new(
            name,
            passed,
            format!("{measured:?}"),
            format!("{expected:?}"),
        );
        if !passed && pattern == 2 {
            check = check.with_note(
                "the reference list contains 251, but 2^251 - 1 is divisible by 503; \
                 the computed list contains 521 (2^521 - 1 is prime)",
            );
        }
        checks.push(check);
    }

    // offset counts for k >= 7
    let measured_offsets = report.offset_prime_counts;
    checks.push(Check::new(
        "mersenne-offset-counts",
        measured_offsets == refs::MERSENNE_OFFSET_COUNTS,
        format!("{measured_offsets:?}"),
        format!("{:?} for exponents >= 7", refs::MERSENNE_OFFSET_COUNTS),
    ));
    checks.push(Check::new(
        "mersenne-exclusivity",
        report.exclusivity_holds,
        report.exclusivity_holds,
        "2^k - 1 prime excludes the other offsets (k >= 11)",
    ));

    // level-2 values
    let expected_nonzero: Vec<(u64, u8)> =
        refs::MERSENNE_LEVEL2_VALUES.iter().map(|&(m, _, v)| (m, v)).collect();
    checks.push(Check::new(
        "mersenne-level2-values",
        report.level2_nonzero == expected_nonzero,
        format!("{:?}", report.level2_nonzero),
        format!("{expected_nonzero:?}"),
    ));
    checks.push(
        Check::new(
            "mersenne-level2-nonempty",
            report.level2_nonzero.len() == 14 && report.level2_blocks == 501,
            format!("{} of {}", report.level2_nonzero.len(), report.level2_blocks),
            "14 of 501",
        )
        .with_note(format!("empty fraction {:.1}%", report.level2_empty_fraction * 100.0)),
    );

    Ok(VerifyReport { scope: "mersenne".into(), checks })
}

/// Which scopes to verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Properties,
    Primes,
    Twins,
    Mersenne,
    All,
}

/// Build settings for [`run`].
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub rounds: u32,
    pub estimator: EstimatorConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { rounds: crate::probable::DEFAULT_ROUNDS, estimator: EstimatorConfig::default() }
    }
}

/// Builds whatever data the requested scope needs (at the reference
/// sizes) and runs its checks.
pub fn run(scope: Scope, opts: &VerifyOptions) -> Result<Vec<VerifyReport>> {
    let mut reports = Vec::new();
    let wants = |s: Scope| scope == s || scope == Scope::All;

    if wants(Scope::Properties) {
        reports.push(verify_properties()?);
    }
    if wants(Scope::Primes) || wants(Scope::Twins) {
        let bitmap = Arc::new(sieve(crate::REFERENCE_N)?);
        let params = EncodingParams::new(3, 3, crate::REFERENCE_N)?;
        if wants(Scope::Primes) {
            let hier = build_hierarchy(&prime_chain(bitmap.clone()), &params)?;
            reports.push(verify_primes(&hier, &bitmap, &opts.estimator)?);
        }
        if wants(Scope::Twins) {
            let hier = build_hierarchy(&twin_chain(bitmap.clone()), &params)?;
            reports.push(verify_twins(&hier)?);
        }
    }
    if wants(Scope::Mersenne) {
        let k_max = 16 * refs::MERSENNE_LEVEL2_M_MAX + 17; // covers the level-1 range too
        let level1 = mersenne_level1_scan(k_max, opts.rounds)?;
        let level2 = level2_from_level1(&level1, refs::MERSENNE_LEVEL2_M_MAX);
        reports.push(verify_mersenne(&level1, &level2)?);
    }
    Ok(reports)
}
