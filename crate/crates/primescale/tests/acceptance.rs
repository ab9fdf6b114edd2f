//! Acceptance suite: one test per entry of the reference checklist for
//! the standard interval [1, 65,536,000] and the pinned Mersenne
//! ranges. Each test prints a PASS/FAIL line per check with measured
//! and expected values.
//!
//! Three reference entries are inconsistent with direct computation
//! (see README, "Known discrepancies in the reference data"); the
//! corresponding tests — criteria 3, 4 and the pattern-2 list of
//! criterion 9 — fail by design instead of being loosened.

use std::sync::{Arc, OnceLock};

use primescale::analytic::EstimatorConfig;
use primescale::encoding::{build_hierarchy, Hierarchy, LevelSequence};
use primescale::mersenne::{level2_from_level1, mersenne_level1_scan, MersenneBlock};
use primescale::params::EncodingParams;
use primescale::primes::prime_chain;
use primescale::probable::is_probable_prime;
use primescale::reference as refs;
use primescale::sieve::{sieve, PrimalityBitmap};
use primescale::twins::twin_chain;
use primescale::verify::{verify_mersenne, verify_primes, verify_properties, verify_twins, VerifyReport};
use primescale::{PropertyChain, REFERENCE_N};

fn reference_params() -> EncodingParams {
    EncodingParams::new(3, 3, REFERENCE_N).unwrap()
}

fn bitmap() -> &'static Arc<PrimalityBitmap> {
    static BITMAP: OnceLock<Arc<PrimalityBitmap>> = OnceLock::new();
    BITMAP.get_or_init(|| Arc::new(sieve(REFERENCE_N).unwrap()))
}

fn prime_hierarchy() -> &'static Hierarchy {
    static HIER: OnceLock<Hierarchy> = OnceLock::new();
    HIER.get_or_init(|| {
        build_hierarchy(&prime_chain(bitmap().clone()), &reference_params()).unwrap()
    })
}

fn prime_report() -> &'static VerifyReport {
    static REPORT: OnceLock<VerifyReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        verify_primes(prime_hierarchy(), bitmap(), &EstimatorConfig::default()).unwrap()
    })
}

fn twin_report() -> &'static VerifyReport {
    static REPORT: OnceLock<VerifyReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let hier = build_hierarchy(&twin_chain(bitmap().clone()), &reference_params()).unwrap();
        verify_twins(&hier).unwrap()
    })
}

fn mersenne_report() -> &'static VerifyReport {
    static REPORT: OnceLock<VerifyReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let k_max = 16 * refs::MERSENNE_LEVEL2_M_MAX + 17;
        let level1: Vec<MersenneBlock> = mersenne_level1_scan(k_max, 32).unwrap();
        let level2 = level2_from_level1(&level1, refs::MERSENNE_LEVEL2_M_MAX);
        verify_mersenne(&level1, &level2).unwrap()
    })
}

fn properties_report() -> &'static VerifyReport {
    static REPORT: OnceLock<VerifyReport> = OnceLock::new();
    REPORT.get_or_init(|| verify_properties().unwrap())
}

/// Prints each named check and asserts they all passed.
fn assert_checks(criterion: &str, report: &VerifyReport, names: &[&str]) {
    let mut all = true;
    for name in names {
        let check = report
            .check(name)
            .unwrap_or_else(|| panic!("{criterion}: check '{name}' missing"));
        println!(
            "{criterion} [{}] {}: measured {} | expected {}{}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.measured,
            check.expected,
            check.note.as_deref().map(|n| format!(" | note: {n}")).unwrap_or_default()
        );
        all &= check.passed;
    }
    assert!(all, "{criterion}: failed checks listed above");
}

#[test]
fn criterion_01_level1_pattern_support() {
    assert_checks("criterion 1", prime_report(), &["level1-support"]);
}

#[test]
fn criterion_02_level1_histogram_exact() {
    assert_checks("criterion 2", prime_report(), &["level1-histogram", "prime-count"]);
}

#[test]
fn criterion_03_block_proportions() {
    // the two-prime reference entry (5%) is inconsistent with the exact
    // histogram (5.76%); this test fails by design
    assert_checks("criterion 3", prime_report(), &["block-proportions"]);
}

#[test]
fn criterion_04_estimator_ratios() {
    // the second and third reference ratios need a psi exponent near
    // 0.0615 rather than the documented 0.06; those checks fail by design
    assert_checks(
        "criterion 4",
        prime_report(),
        &["ratio-li-pi", "ratio-psi-li-n1", "ratio-multi-prime"],
    );
}

#[test]
fn criterion_05_level1_position_probabilities() {
    assert_checks(
        "criterion 5",
        prime_report(),
        &["level1-position-probabilities", "level1-position-ordering"],
    );
}

#[test]
fn criterion_06_level2_position_probabilities() {
    assert_checks(
        "criterion 6",
        prime_report(),
        &["level2-position-probabilities", "level2-search-order"],
    );
}

#[test]
fn criterion_07_level3_values() {
    assert_checks(
        "criterion 7",
        prime_report(),
        &["level3-constant-prefix", "level3-support", "level3-histogram"],
    );
}

#[test]
fn criterion_08_twin_primes() {
    assert_checks(
        "criterion 8",
        twin_report(),
        &[
            "twin-level2-prefix",
            "twin-level2-distinct",
            "twin-level2-support",
            "twin-level3-coverage",
            "twin-level3-prefix",
        ],
    );
}

#[test]
fn criterion_09_mersenne_tables() {
    // the reference offset-1 exponent list contains 251 where direct
    // computation yields 521; that check fails by design
    assert_checks(
        "criterion 9",
        mersenne_report(),
        &[
            "mersenne-level1-histogram",
            "mersenne-pattern2-exponents",
            "mersenne-pattern8-exponents",
            "mersenne-pattern10-exponents",
            "mersenne-pattern42-exponents",
            "mersenne-pattern128-exponents",
            "mersenne-offset-counts",
            "mersenne-level2-values",
            "mersenne-level2-nonempty",
        ],
    );
}

#[test]
fn criterion_10_reconstruction() {
    assert_checks("criterion 10", properties_report(), &["reconstruction-round-trip-4096"]);
    assert_checks("criterion 10", prime_report(), &["reconstruction-soundness"]);
}

/// Direct evaluation of the recursive definition, written independently
/// of the hierarchy builder: trial-division primality, no sieve, no
/// shared code with the construction path.
mod naive {
    pub fn is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    pub enum Filter {
        NonZero,
        Member(&'static [u8]),
    }

    impl Filter {
        fn holds(&self, v: u64) -> bool {
            match self {
                Filter::NonZero => v != 0,
                Filter::Member(set) => set.contains(&(v as u8)),
            }
        }
    }

    pub fn value(filters: &[Filter], k: u32, n: u64) -> u64 {
        let mut out = 0u64;
        for j in 0..8u64 {
            let flagged = if k == 1 {
                is_prime(8 * n + 1 + j)
            } else {
                let sub = value(filters, k - 1, 8 * n + j);
                filters[(k - 2) as usize].holds(sub)
            };
            if flagged {
                out |= 1 << (7 - j);
            }
        }
        out
    }
}

#[test]
fn criterion_11_oracle_equivalence() {
    // largest multiple of 8^3 not exceeding 10^5
    let n_max = 99_840u64;
    let params = EncodingParams::new(3, 3, n_max).unwrap();
    let bitmap = Arc::new(sieve(n_max).unwrap());

    let chains: [(&str, PropertyChain, [naive::Filter; 2]); 3] = [
        (
            "primes",
            prime_chain(bitmap.clone()),
            [naive::Filter::NonZero, naive::Filter::NonZero],
        ),
        (
            "twins",
            twin_chain(bitmap.clone()),
            [
                naive::Filter::Member(&primescale::twins::TWIN_PATTERNS),
                naive::Filter::NonZero,
            ],
        ),
        (
            "mersenne-filter",
            PropertyChain::new("mersenne-filter", {
                let bitmap = bitmap.clone();
                move |n| bitmap.is_prime(n)
            })
            .with_filter(|v| {
                primescale::mersenne::MERSENNE_LEVEL1_PATTERNS.contains(&(v as u8))
            }),
            [
                naive::Filter::Member(&primescale::mersenne::MERSENNE_LEVEL1_PATTERNS),
                naive::Filter::NonZero,
            ],
        ),
    ];

    for (name, chain, filters) in &chains {
        let built = build_hierarchy(chain, &params).unwrap();
        for k in 1..=3u32 {
            let expected: Vec<u64> =
                (0..params.blocks_at(k).unwrap()).map(|n| naive::value(filters, k, n)).collect();
            let naive_seq = LevelSequence::from_values(k, 8, expected);
            let same = built.level(k).unwrap().as_bytes() == naive_seq.as_bytes();
            println!(
                "criterion 11 [{}] {name} level {k}: byte-for-byte vs independent evaluator",
                if same { "PASS" } else { "FAIL" },
            );
            assert!(same, "{name} level {k} deviates from the naive evaluation");
        }
    }
}

#[test]
fn criterion_12_property_suite() {
    let report = properties_report();
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    assert_checks("criterion 12", report, &names);
}

// Cross-backend agreement, exhaustive up to 10^6: the sieve and the
// probable-prime test must answer identically.
#[test]
fn invariant_sieve_and_probable_prime_agree_to_1e6() {
    let bitmap = sieve(1_000_000).unwrap();
    for n in 1..=1_000_000u64 {
        let expected = bitmap.is_prime(n);
        let got = is_probable_prime(&n.into(), 16);
        assert_eq!(got, expected, "disagreement at {n}");
    }
    println!("invariant [PASS] sieve and probable-prime agree on [1, 10^6]");
}
