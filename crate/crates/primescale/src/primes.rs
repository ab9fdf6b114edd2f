//! Prime-specific analyses: the prime property chain, pattern-restriction
//! checks, block classification, positional probabilities, density
//! verdicts and the level-3 summary.

use std::sync::Arc;

use serde::Serialize;

use crate::chain::PropertyChain;
use crate::encoding::{np, Hierarchy};
use crate::error::{Error, Result};
use crate::histogram::{histogram, PatternHistogram};
use crate::sieve::PrimalityBitmap;

/// The 14 values a level-1 prime pattern can take. Any other value
/// requires three consecutive odd numbers (or an even number > 2) to be
/// prime, which divisibility by 2 or 3 rules out.
pub const LEVEL1_PRIME_PATTERNS: [u8; 14] =
    [0, 2, 8, 10, 32, 34, 40, 106, 128, 130, 136, 138, 160, 162];

/// Property chain for primality: base predicate looks up the sieved
/// bitmap; every level transition is plain non-nullity.
pub fn prime_chain(bitmap: Arc<PrimalityBitmap>) -> PropertyChain {
    PropertyChain::new("primes", move |n| bitmap.is_prime(n))
}

/// Outcome of the level-1 pattern-restriction check.
#[derive(Debug, Clone, Serialize)]
pub struct RestrictionReport {
    pub ok: bool,
    /// Out-of-set values present in the histogram, with their counts.
    pub violations: Vec<(u64, u64)>,
}

/// Checks that a level-1 prime histogram is supported on the 14
/// attainable patterns only.
pub fn check_level1_restriction(hist: &PatternHistogram) -> RestrictionReport {
    let allowed = |v: u64| LEVEL1_PRIME_PATTERNS.contains(&(v as u8)) && v < 256;
    let violations: Vec<(u64, u64)> = hist
        .counts()
        .iter()
        .enumerate()
        .filter(|&(v, &c)| c > 0 && !allowed(v as u64))
        .map(|(v, &c)| (v as u64, c))
        .collect();
    RestrictionReport { ok: violations.is_empty(), violations }
}

/// Block classification over [1, m]: counts of level-1 blocks holding
/// no prime, one prime, two primes, and three-or-four primes.
///
/// The unique four-prime block (pattern 106, integers 1..8) is counted
/// in `n3`; the classification identity pi(m) = n1 + 2 n2 + 3 n3 + 1
/// then holds exactly for every multiple of 8, the `+ 1` standing for
/// that block's fourth prime.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BlockClassCounts {
    pub m: u64,
    pub empty: u64,
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
}

impl BlockClassCounts {
    /// pi(m) reconstructed from the class counts.
    pub fn prime_count(&self) -> u64 {
        self.n1 + 2 * self.n2 + 3 * self.n3 + 1
    }

    /// Percentages (empty, one, two, three-or-four) of all blocks.
    pub fn percentages(&self) -> [f64; 4] {
        let total = (self.m / 8) as f64;
        [
            self.empty as f64 / total * 100.0,
            self.n1 as f64 / total * 100.0,
            self.n2 as f64 / total * 100.0,
            self.n3 as f64 / total * 100.0,
        ]
    }
}

/// Classifies a level-1 prime histogram over [1, m]; `m` must be a
/// multiple of 8 and the histogram must cover exactly m/8 blocks.
pub fn classify_blocks(hist: &PatternHistogram, m: u64) -> Result<BlockClassCounts> {
    if m % 8 != 0 {
        return Err(Error::Range(format!("classification bound {m} is not a multiple of 8")));
    }
    if hist.total() != m / 8 {
        return Err(Error::Range(format!(
            "histogram covers {} blocks, expected {} for [1, {m}]",
            hist.total(),
            m / 8
        )));
    }
    let h = |v: u64| hist.count(v);
    Ok(BlockClassCounts {
        m,
        empty: h(0),
        n1: h(2) + h(8) + h(32) + h(128),
        n2: h(10) + h(34) + h(40) + h(130) + h(136) + h(160),
        n3: h(138) + h(162) + h(106),
    })
}

/// Per-bit probabilities that a pattern position holds the property,
/// with the induced search order (descending probability, ties by
/// ascending bit index).
#[derive(Debug, Clone, Serialize)]
pub struct PositionProbabilities {
    pub level: u32,
    /// (bit index, probability), ascending by bit index.
    pub probabilities: Vec<(u32, f64)>,
    pub search_order: Vec<u32>,
}

fn probabilities_from_hist(hist: &PatternHistogram, bits: &[u32]) -> PositionProbabilities {
    let total = hist.total() as f64;
    let probabilities: Vec<(u32, f64)> = bits
        .iter()
        .map(|&bit| {
            let sum: u64 = hist
                .counts()
                .iter()
                .enumerate()
                .filter(|&(v, _)| (v >> bit) & 1 == 1)
                .map(|(_, &c)| c)
                .sum();
            (bit, sum as u64 as f64 / total)
        })
        .collect();
    let mut search_order: Vec<u32> = bits.to_vec();
    search_order.sort_by(|&a, &b| {
        let pa = probabilities.iter().find(|(bit, _)| *bit == a).unwrap().1;
        let pb = probabilities.iter().find(|(bit, _)| *bit == b).unwrap().1;
        pb.partial_cmp(&pa).unwrap().then(a.cmp(&b))
    });
    PositionProbabilities { level: hist.level(), probabilities, search_order }
}

/// Probability that the integer at an odd position of a level-1 block is
/// prime, for positions b1, b3, b5, b7 (the only positions a prime > 2
/// can occupy).
pub fn position_probabilities_level1(hist: &PatternHistogram) -> PositionProbabilities {
    probabilities_from_hist(hist, &[1, 3, 5, 7])
}

/// Probability that the level-1 sub-block at each bit position of a
/// 2-pattern contains a prime.
pub fn position_probabilities_level2(hier: &Hierarchy) -> Result<PositionProbabilities> {
    let hist = histogram(hier.level(2)?)?;
    Ok(probabilities_from_hist(&hist, &[0, 1, 2, 3, 4, 5, 6, 7]))
}

/// Density verdict: true iff every level-k block intersecting [1, m]
/// contains a property-holder within [1, m]. Partial tail blocks are
/// resolved exactly through the level-1 sequence.
pub fn density_check(hier: &Hierarchy, k: u32, m: u64) -> Result<bool> {
    let params = hier.params();
    if m == 0 || m > params.n_max() {
        return Err(Error::Range(format!(
            "density bound {m} outside [1, {}]",
            params.n_max()
        )));
    }
    let seq = hier.level(k)?;
    let span = params.block_size().pow(k);
    let full = m / span;
    if seq.iter().take(full as usize).any(|v| v == 0) {
        return Ok(false);
    }
    let b = params.block_size();
    if m % span != 0 {
        // tail block: inspect level-1 patterns over [span*full + 1, m]
        let l1 = hier.level(1)?;
        let first1 = span * full / b;
        let full1 = m / b;
        let mut found = l1
            .iter()
            .skip(first1 as usize)
            .take((full1 - first1) as usize)
            .any(|v| v != 0);
        if !found && m % b != 0 {
            let rem = m % b;
            let mask = ((1u64 << rem) - 1) << (b - rem);
            found = l1.get(full1)? & mask != 0;
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Summary of the level-3 sequence: attained values, gaps, density of
/// the densest/rarest configurations.
#[derive(Debug, Clone, Serialize)]
pub struct Level3Report {
    pub distinct: Vec<u64>,
    pub distinct_count: usize,
    /// 256 minus the number of attained values.
    pub missing_count: usize,
    /// Smallest population count among attained values.
    pub min_np: u32,
    /// Longest run of zero bits within any attained value: that many
    /// consecutive sub-blocks without a property-holder.
    pub max_empty_run_blocks: u32,
    /// The same run expressed in consecutive integers.
    pub max_empty_run_integers: u64,
    /// Attained values occurring exactly once.
    pub rare_values: Vec<u64>,
    pub histogram: PatternHistogram,
}

fn longest_zero_run(value: u64, bits: u32) -> u32 {
    let mut best = 0;
    let mut run = 0;
    for j in 0..bits {
        if (value >> (bits - 1 - j)) & 1 == 0 {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

/// Builds the level-3 summary for a hierarchy with at least 3 levels.
pub fn level3_report(hier: &Hierarchy) -> Result<Level3Report> {
    let seq = hier.level(3)?;
    let hist = histogram(seq)?;
    let distinct = hist.support();
    let bits = hier.params().value_bits();
    let sub_span = hier.params().block_size().pow(2);
    let min_np = distinct.iter().map(|&v| np(v)).min().unwrap_or(0);
    let max_run = distinct.iter().map(|&v| longest_zero_run(v, bits)).max().unwrap_or(0);
    let rare_values = distinct.iter().copied().filter(|&v| hist.count(v) == 1).collect();
    Ok(Level3Report {
        distinct_count: distinct.len(),
        missing_count: (1usize << bits) - distinct.len(),
        min_np,
        max_empty_run_blocks: max_run,
        max_empty_run_integers: max_run as u64 * sub_span,
        rare_values,
        distinct,
        histogram: hist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::build_hierarchy;
    use crate::histogram::histogram_prefix;
    use crate::params::EncodingParams;
    use crate::sieve::sieve;

    fn small_hierarchy(n_max: u64) -> (Hierarchy, Arc<PrimalityBitmap>) {
        let bitmap = Arc::new(sieve(n_max).unwrap());
        let chain = prime_chain(bitmap.clone());
        let params = EncodingParams::new(3, 3, n_max).unwrap();
        (build_hierarchy(&chain, &params).unwrap(), bitmap)
    }

    #[test]
    fn chain_filters_are_non_nullity() {
        let bitmap = Arc::new(sieve(100).unwrap());
        let chain = prime_chain(bitmap);
        assert!(!chain.filter_holds(1, 0));
        assert!(chain.filter_holds(1, 106));
        assert!(chain.filter_holds(2, 255));
        assert!(chain.base_holds(2));
        assert!(!chain.base_holds(1));
    }

    #[test]
    fn restriction_holds_on_real_data() {
        let (h, _) = small_hierarchy(512 * 256);
        let hist = histogram(h.level(1).unwrap()).unwrap();
        let report = check_level1_restriction(&hist);
        assert!(report.ok, "violations: {:?}", report.violations);
    }

    #[test]
    fn restriction_flags_impossible_pattern() {
        let seq = crate::encoding::LevelSequence::from_values(1, 8, [0, 42, 106]);
        let hist = histogram(&seq).unwrap();
        let report = check_level1_restriction(&hist);
        assert!(!report.ok);
        assert_eq!(report.violations, vec![(42, 1)]);
    }

    #[test]
    fn restriction_accepts_empty_histogram() {
        let seq = crate::encoding::LevelSequence::from_values(1, 8, std::iter::empty());
        assert!(check_level1_restriction(&histogram(&seq).unwrap()).ok);
    }

    #[test]
    fn classify_first_block() {
        let (h, bitmap) = small_hierarchy(512);
        let hist = histogram_prefix(h.level(1).unwrap(), 1).unwrap();
        let classes = classify_blocks(&hist, 8).unwrap();
        assert_eq!(classes.n1, 0);
        assert_eq!(classes.n2, 0);
        // the four-prime block 106 is carried by the three-or-four class
        assert_eq!(classes.n3, 1);
        assert_eq!(classes.prime_count(), 4);
        assert_eq!(bitmap.count_primes_upto(8).unwrap(), 4);
        assert_eq!(np(106), 4);
    }

    #[test]
    fn classification_identity_matches_sieve() {
        let (h, bitmap) = small_hierarchy(512 * 200);
        let l1 = h.level(1).unwrap();
        for m in [8u64, 64, 1000 * 8, 512 * 200] {
            let hist = histogram_prefix(l1, m / 8).unwrap();
            let classes = classify_blocks(&hist, m).unwrap();
            assert_eq!(
                classes.prime_count(),
                bitmap.count_primes_upto(m).unwrap(),
                "identity fails at m={m}"
            );
        }
    }

    #[test]
    fn classify_rejects_unaligned_bound() {
        let (h, _) = small_hierarchy(512);
        let hist = histogram(h.level(1).unwrap()).unwrap();
        assert!(matches!(classify_blocks(&hist, 7), Err(Error::Range(_))));
        assert!(matches!(classify_blocks(&hist, 16), Err(Error::Range(_))));
    }

    #[test]
    fn zero_histogram_classifies_to_zero() {
        let seq = crate::encoding::LevelSequence::from_values(1, 8, [0u64; 4]);
        let hist = histogram(&seq).unwrap();
        let classes = classify_blocks(&hist, 32).unwrap();
        assert_eq!((classes.n1, classes.n2, classes.n3), (0, 0, 0));
        assert_eq!(classes.empty, 4);
    }

    #[test]
    fn level1_probabilities_match_direct_bit_count() {
        let (h, _) = small_hierarchy(512 * 500);
        let l1 = h.level(1).unwrap();
        let hist = histogram(l1).unwrap();
        let probs = position_probabilities_level1(&hist);
        for &(bit, p) in &probs.probabilities {
            let direct =
                l1.iter().filter(|v| (v >> bit) & 1 == 1).count() as f64 / l1.len() as f64;
            assert!((p - direct).abs() < 1e-12, "bit {bit}");
        }
        assert_eq!(probs.probabilities.len(), 4);
    }

    #[test]
    fn search_order_breaks_ties_by_position() {
        // synthetic: all four odd bits equally likely
        let seq = crate::encoding::LevelSequence::from_values(1, 8, [2u64, 8, 32, 128]);
        let hist = histogram(&seq).unwrap();
        let probs = position_probabilities_level1(&hist);
        assert_eq!(probs.search_order, vec![1, 3, 5, 7]);
    }

    #[test]
    fn uniform_level2_probabilities_are_equal() {
        // every value appears once: each bit is set in exactly half the values
        let seq = crate::encoding::LevelSequence::from_values(2, 8, 0..256u64);
        let hist = histogram(&seq).unwrap();
        let probs = probabilities_from_hist(&hist, &[0, 1, 2, 3, 4, 5, 6, 7]);
        for &(_, p) in &probs.probabilities {
            assert!((p - 0.5).abs() < 1e-12);
        }
        // full tie: order falls back to ascending bit index
        assert_eq!(probs.search_order, vec![0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn density_small_anchors() {
        let (h, _) = small_hierarchy(512);
        assert!(density_check(&h, 1, 8).unwrap());
        assert!(density_check(&h, 3, 512).unwrap());
        assert!(matches!(density_check(&h, 1, 0), Err(Error::Range(_))));
        assert!(matches!(density_check(&h, 1, 513), Err(Error::Range(_))));
        assert!(matches!(density_check(&h, 4, 512), Err(Error::Range(_))));
    }

    #[test]
    fn density_verdicts_at_one_million() {
        // 1,000,448 = 512 * 1954 is the smallest aligned bound >= 10^6
        let (h, bitmap) = small_hierarchy(1_000_448);
        let m = 1_000_000;
        assert!(!density_check(&h, 1, m).unwrap());
        assert!(!density_check(&h, 2, m).unwrap());
        assert!(density_check(&h, 3, m).unwrap());

        // brute-force confirmation at k = 2
        let span = 64;
        let brute = (0..(m + span - 1) / span).all(|n| {
            let lo = span * n + 1;
            let hi = (span * (n + 1)).min(m);
            (lo..=hi).any(|i| bitmap.is_prime(i))
        });
        assert!(!brute);
    }

    #[test]
    fn density_partial_tail_is_exact() {
        let (h, bitmap) = small_hierarchy(1024);
        // m = 529 cuts into the second level-3 block: [513, 529] holds 521, 523
        assert!(bitmap.is_prime(521));
        assert!(density_check(&h, 3, 529).unwrap());
        // m = 520 leaves [513, 520] prime-free at the tail
        assert!((513..=520).all(|i| !bitmap.is_prime(i)));
        assert!(!density_check(&h, 3, 520).unwrap());
    }

    #[test]
    fn level3_report_small_interval() {
        let (h, _) = small_hierarchy(512 * 2000);
        let report = level3_report(&h).unwrap();
        assert_eq!(report.distinct_count + report.missing_count, 256);
        assert!(report.min_np >= 1);
        // a smaller interval can only attain a subset of the reference support
        for &v in &report.distinct {
            assert!(
                crate::reference::LEVEL3_SUPPORT.contains(&(v as u8)),
                "unexpected level-3 value {v}"
            );
        }
    }

    #[test]
    fn zero_run_metrics() {
        assert_eq!(longest_zero_run(31, 8), 3);
        assert_eq!(longest_zero_run(255, 8), 0);
        assert_eq!(longest_zero_run(0, 8), 8);
        assert_eq!(longest_zero_run(0b1011_1101, 8), 1);
    }

    #[test]
    fn empty_block_share_rarefies_over_decades() {
        let (h, _) = small_hierarchy(1_000_448);
        let l1 = h.level(1).unwrap();
        let mut last = 0.0;
        for m in [1_000u64, 10_000, 100_000, 1_000_000] {
            let hist = histogram_prefix(l1, m / 8).unwrap();
            let share = hist.count(0) as f64 / (m / 8) as f64;
            assert!(share + 1e-12 >= last, "empty share shrank at m={m}");
            last = share;
        }
    }
}
