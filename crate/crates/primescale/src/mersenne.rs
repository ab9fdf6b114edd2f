//! Mersenne-adjacent analyses over the sparse set {2^k - j : j in 0..7}
//! for odd exponents k: level-1 patterns from big-integer primality
//! tests, level-2 aggregation over exponent blocks 16m+3, and the
//! occurrence reports.
//!
//! Only odd offsets can be prime (even offsets give even numbers > 2),
//! so patterns carry bits at positions 2^1, 2^3, 2^5, 2^7 only.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::histogram::PatternHistogram;
use crate::probable::{is_probable_prime, BigIntCandidate};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Level-1 patterns whose block contains a prime of the form 2^k - 1,
/// i.e. the attainable patterns with bit 2^1 set — except 170 (all four
/// offsets prime), which has never been observed and is excluded from
/// the filter on purpose.
pub const MERSENNE_LEVEL1_PATTERNS: [u8; 7] = [2, 10, 34, 42, 130, 138, 162];

/// Bit mask of the pattern positions an odd offset can occupy.
pub const MERSENNE_PATTERN_MASK: u8 = 0b1010_1010;

/// Level-1 pattern of one odd exponent: which of 2^k - {7,5,3,1} are
/// prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MersenneBlock {
    pub exponent: u64,
    pub pattern: u8,
    /// Offsets j with 2^k - j prime, ascending.
    pub prime_offsets: Vec<u8>,
}

/// Evaluates the level-1 pattern for one odd exponent k >= 3:
/// phi0(2^k-7)*2^7 + phi0(2^k-5)*2^5 + phi0(2^k-3)*2^3 + phi0(2^k-1)*2.
pub fn mersenne_level1(k: u64, rounds: u32) -> Result<MersenneBlock> {
    if k % 2 == 0 || k < 3 {
        return Err(Error::Domain(format!("exponent must be odd and >= 3, got {k}")));
    }
    let mut pattern = 0u8;
    let mut prime_offsets = Vec::new();
    for offset in [1u8, 3, 5, 7] {
        let candidate = BigIntCandidate::new(k, offset);
        if is_probable_prime(&candidate.value(), rounds) {
            pattern |= 1 << offset;
            prime_offsets.push(offset);
        }
    }
    Ok(MersenneBlock { exponent: k, pattern, prime_offsets })
}

fn scan_impl(k_max: u64, rounds: u32, parallel: bool) -> Result<Vec<MersenneBlock>> {
    if k_max < 3 {
        return Err(Error::Range(format!("scan bound must be at least 3, got {k_max}")));
    }
    let exponents: Vec<u64> = (3..=k_max).step_by(2).collect();
    if parallel {
        #[cfg(feature = "parallel")]
        return exponents
            .par_iter()
            .map(|&k| mersenne_level1(k, rounds))
            .collect();
    }
    exponents.iter().map(|&k| mersenne_level1(k, rounds)).collect()
}

/// Level-1 patterns for every odd exponent in [3, k_max], ascending.
/// Each exponent's primality tests are independent, so the scan
/// parallelizes per exponent when the `parallel` feature is enabled.
pub fn mersenne_level1_scan(k_max: u64, rounds: u32) -> Result<Vec<MersenneBlock>> {
    scan_impl(k_max, rounds, cfg!(feature = "parallel"))
}

/// Single-threaded variant of [`mersenne_level1_scan`].
pub fn mersenne_level1_scan_serial(k_max: u64, rounds: u32) -> Result<Vec<MersenneBlock>> {
    scan_impl(k_max, rounds, false)
}

/// Pattern occurrence counts over a level-1 scan.
pub fn mersenne_level1_histogram(blocks: &[MersenneBlock]) -> PatternHistogram {
    let mut counts = vec![0u64; 256];
    for b in blocks {
        counts[b.pattern as usize] += 1;
    }
    PatternHistogram::from_counts(1, counts)
}

/// Level-2 aggregation for exponent block m: bit (7-j) marks whether
/// the level-1 pattern of exponent 16m+3+2j is one of the filter set.
pub fn mersenne_level2(m: u64, k_max: u64, rounds: u32) -> Result<u8> {
    let last = 16 * m + 17;
    if last > k_max {
        return Err(Error::Range(format!(
            "block {m} needs exponents up to {last}, scan bound is {k_max}"
        )));
    }
    let mut value = 0u8;
    for j in 0..8u64 {
        let block = mersenne_level1(16 * m + 3 + 2 * j, rounds)?;
        if MERSENNE_LEVEL1_PATTERNS.contains(&block.pattern) {
            value |= 1 << (7 - j);
        }
    }
    Ok(value)
}

/// Level-2 values for every block m in [0, m_max], derived from one
/// level-1 scan of the odd exponents in [3, 16*m_max+17] (the blocks
/// tile that range exactly).
pub fn mersenne_level2_scan(m_max: u64, rounds: u32) -> Result<Vec<(u64, u8)>> {
    let blocks = mersenne_level1_scan(16 * m_max + 17, rounds)?;
    Ok(level2_from_level1(&blocks, m_max))
}

/// Aggregates an existing level-1 scan into level-2 values; the scan
/// must cover exponents through 16*m_max+17.
pub fn level2_from_level1(blocks: &[MersenneBlock], m_max: u64) -> Vec<(u64, u8)> {
    assert!(blocks.len() as u64 >= 8 * (m_max + 1), "scan too short for m_max");
    (0..=m_max)
        .map(|m| {
            let mut value = 0u8;
            for j in 0..8u64 {
                // exponent 16m+3+2j sits at scan index 8m+j
                let b = &blocks[(8 * m + j) as usize];
                debug_assert_eq!(b.exponent, 16 * m + 3 + 2 * j);
                if MERSENNE_LEVEL1_PATTERNS.contains(&b.pattern) {
                    value |= 1 << (7 - j);
                }
            }
            (m, value)
        })
        .collect()
}

/// Aggregated observations over the level-1 and level-2 scans.
#[derive(Debug, Clone, Serialize)]
pub struct MersenneReport {
    /// Largest exponent covered by the level-1 scan.
    pub k_max: u64,
    /// Nonzero level-1 patterns observed.
    pub nonzero_patterns: Vec<u8>,
    /// Exponent lists per nonzero pattern.
    pub pattern_exponents: Vec<(u8, Vec<u64>)>,
    /// Maximum population count among patterns with exponent >= 7.
    pub max_np_from_k7: u32,
    /// Primes counted by offset (1, 3, 5, 7) over exponents >= 7.
    pub offset_prime_counts: [(u8, u64); 4],
    /// Exponents below 7 whose pattern holds more than one prime
    /// (k = 3 and 5 predate the single-prime regime).
    pub small_exponent_anomalies: Vec<(u64, u8)>,
    /// For every exponent >= 11: if 2^k - 1 is prime then no other
    /// offset is (pattern with bit 2^1 set equals exactly 2).
    pub exclusivity_holds: bool,
    /// Number of level-2 blocks scanned.
    pub level2_blocks: u64,
    /// Nonzero level-2 values as (block m, value).
    pub level2_nonzero: Vec<(u64, u8)>,
    /// Share of level-2 blocks with no Mersenne-pattern sub-block.
    pub level2_empty_fraction: f64,
}

/// Assembles the report from completed scans (a deterministic ordered
/// reduce; no primality work happens here).
pub fn mersenne_observations(level1: &[MersenneBlock], level2: &[(u64, u8)]) -> MersenneReport {
    let mut pattern_exponents: Vec<(u8, Vec<u64>)> = Vec::new();
    for b in level1 {
        if b.pattern != 0 {
            match pattern_exponents.iter_mut().find(|(p, _)| *p == b.pattern) {
                Some((_, list)) => list.push(b.exponent),
                None => pattern_exponents.push((b.pattern, vec![b.exponent])),
            }
        }
    }
    pattern_exponents.sort_by_key(|(p, _)| *p);
    let nonzero_patterns: Vec<u8> = pattern_exponents.iter().map(|(p, _)| *p).collect();

    let mut offset_prime_counts = [(1u8, 0u64), (3, 0), (5, 0), (7, 0)];
    let mut max_np_from_k7 = 0;
    let mut exclusivity_holds = true;
    for b in level1 {
        if b.exponent >= 7 {
            max_np_from_k7 = max_np_from_k7.max(b.pattern.count_ones());
            for slot in offset_prime_counts.iter_mut() {
                if b.prime_offsets.contains(&slot.0) {
                    slot.1 += 1;
                }
            }
        }
        if b.exponent >= 11 && b.pattern & 0b10 != 0 && b.pattern != 2 {
            exclusivity_holds = false;
        }
    }
    let small_exponent_anomalies = level1
        .iter()
        .filter(|b| b.exponent < 7 && b.pattern.count_ones() > 1)
        .map(|b| (b.exponent, b.pattern))
        .collect();

    let level2_nonzero: Vec<(u64, u8)> =
        level2.iter().copied().filter(|&(_, v)| v != 0).collect();
    let level2_blocks = level2.len() as u64;
    let level2_empty_fraction = if level2.is_empty() {
        0.0
    } else {
        (level2_blocks - level2_nonzero.len() as u64) as f64 / level2_blocks as f64
    };

    MersenneReport {
        k_max: level1.last().map(|b| b.exponent).unwrap_or(0),
        nonzero_patterns,
        pattern_exponents,
        max_np_from_k7,
        offset_prime_counts,
        small_exponent_anomalies,
        exclusivity_holds,
        level2_blocks,
        level2_nonzero,
        level2_empty_fraction,
    }
}

/// `k,pattern,prime_offsets` rows for a level-1 scan; offsets joined
/// with `;`.
pub fn level1_scan_csv(blocks: &[MersenneBlock]) -> String {
    let mut out = String::from("k,pattern,prime_offsets\n");
    for b in blocks {
        let offsets: Vec<String> = b.prime_offsets.iter().map(|o| o.to_string()).collect();
        out.push_str(&format!("{},{},{}\n", b.exponent, b.pattern, offsets.join(";")));
    }
    out
}
