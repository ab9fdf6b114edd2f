//! Twin-prime analyses: the twin property chain, per-pattern (twin,
//! prime) classification, level-2/3 statistics, value-coverage reports
//! and the cross-block straddling diagnostic.

use std::sync::Arc;

use serde::Serialize;

use crate::chain::PropertyChain;
use crate::encoding::{np, Hierarchy, LevelSequence};
use crate::error::{Error, Result};
use crate::histogram::histogram_prefix;
use crate::primes::LEVEL1_PRIME_PATTERNS;
use crate::sieve::PrimalityBitmap;

/// Level-1 patterns containing at least one twin pair: two set bits at
/// distance 2 within the block.
pub const TWIN_PATTERNS: [u8; 6] = [10, 40, 106, 138, 160, 162];

/// Property chain for twin primes: primality at the base, twin-pattern
/// membership at the first transition, non-nullity above.
pub fn twin_chain(bitmap: Arc<PrimalityBitmap>) -> PropertyChain {
    PropertyChain::new("twins", move |n| bitmap.is_prime(n))
        .with_filter(|v| TWIN_PATTERNS.contains(&(v as u8)))
}

/// Twin and prime counts of one level-1 pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwinClassification {
    pub value: u8,
    /// Number of twin pairs inside the block. The patterns {10, 40, 160}
    /// and {138, 162} hold one pair each; 106 holds two.
    pub twin_pairs: u8,
    /// Total primes in the block (the pattern's population count).
    pub prime_count: u8,
}

/// Classifies a level-1 prime pattern. Values outside the attainable
/// prime-pattern set are rejected.
pub fn classify_twin(value: u8) -> Result<TwinClassification> {
    if !LEVEL1_PRIME_PATTERNS.contains(&value) {
        return Err(Error::InvalidPattern {
            value: value as u64,
            reason: "not an attainable level-1 prime pattern".into(),
        });
    }
    // count set-bit pairs at distance 2: positions (j, j+2) hold
    // integers differing by 2
    let mut pairs = 0u8;
    for j in 0..6u32 {
        if (value >> (7 - j)) & 1 == 1 && (value >> (5 - j)) & 1 == 1 {
            pairs += 1;
        }
    }
    Ok(TwinClassification { value, twin_pairs: pairs, prime_count: np(value as u64) as u8 })
}

/// First `count` level-2 values of a twin hierarchy.
pub fn twin_level2_prefix(hier: &Hierarchy, count: usize) -> Result<Vec<u64>> {
    let seq = hier.level(2)?;
    if count as u64 > seq.len() {
        return Err(Error::Range(format!(
            "prefix of {count} level-2 values requested, only {} available",
            seq.len()
        )));
    }
    Ok(seq.iter().take(count).collect())
}

/// Which values a level sequence attains over a prefix interval.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub level: u32,
    /// Upper end of the scanned interval [1, n_max].
    pub n_max: u64,
    pub distinct: Vec<u64>,
    pub distinct_count: usize,
    pub missing_count: usize,
    /// Attained values compressed into maximal inclusive runs.
    pub ranges: Vec<(u64, u64)>,
}

/// Scans the level-`level` sequence over [1, n_max] (n_max must be a
/// multiple of the level's block span and lie within the hierarchy).
pub fn value_coverage(hier: &Hierarchy, level: u32, n_max: u64) -> Result<CoverageReport> {
    let seq = hier.level(level)?;
    let span = hier.params().block_size().pow(level);
    if n_max == 0 || n_max % span != 0 {
        return Err(Error::Range(format!(
            "coverage bound {n_max} is not a positive multiple of the level-{level} span {span}"
        )));
    }
    if n_max > hier.params().n_max() {
        return Err(Error::Range(format!(
            "coverage bound {n_max} beyond built interval {}",
            hier.params().n_max()
        )));
    }
    let hist = histogram_prefix(seq, n_max / span)?;
    let distinct = hist.support();
    let mut ranges: Vec<(u64, u64)> = Vec::new();
    for &v in &distinct {
        match ranges.last_mut() {
            Some((_, hi)) if *hi + 1 == v => *hi = v,
            _ => ranges.push((v, v)),
        }
    }
    Ok(CoverageReport {
        level,
        n_max,
        distinct_count: distinct.len(),
        missing_count: (1usize << hier.params().value_bits()) - distinct.len(),
        distinct,
        ranges,
    })
}

/// Twin pairs the block encoding cannot see: a prime at the last odd
/// offset of one block and a prime at the first offset of the next
/// (8n+7 and 8n+9 = 8(n+1)+1). Counts such adjacent-block pairs.
pub fn straddling_twin_count(level1: &LevelSequence) -> u64 {
    let mut count = 0;
    let mut prev_last_set = false;
    for v in level1.iter() {
        if prev_last_set && (v >> 7) & 1 == 1 {
            count += 1;
        }
        prev_last_set = (v >> 1) & 1 == 1;
    }
    count
}
