//! Reference results for the standard analysis interval
//! [1, 65,536,000] (and the pinned Mersenne exponent ranges). The
//! `verify` command and the acceptance suite compare fresh computations
//! against these values.
//!
//! Most entries reproduce exactly. Three are known to disagree with
//! direct computation and are kept as-is so the verification report
//! shows the discrepancy instead of hiding it; each such entry is
//! annotated below.

/// pi(65,536,000), cross-checked against two independent sieves.
pub const PRIME_COUNT: u64 = 3_870_366;

/// Occurrence counts of the 14 attainable level-1 prime patterns over
/// the standard interval.
pub const LEVEL1_HISTOGRAM: [(u8, u64); 14] = [
    (0, 4_832_539),
    (2, 684_373),
    (8, 750_452),
    (10, 65_993),
    (32, 749_658),
    (34, 66_147),
    (40, 75_799),
    (106, 1),
    (128, 683_626),
    (130, 131_841),
    (136, 65_801),
    (138, 9_773),
    (160, 66_219),
    (162, 9_778),
];

/// Reference block-class percentages (no primes, one prime, two primes,
/// three-to-four primes).
///
/// NOTE: the two-prime entry is inconsistent with the histogram above,
/// which fixes the true proportion at 471,800 / 8,192,000 = 5.76%; the
/// verification suite reports that entry as a failed check by design.
pub const BLOCK_PROPORTIONS_PCT: [f64; 4] = [59.0, 35.01, 5.0, 0.24];
/// Tolerance for the proportion checks, in percentage points.
pub const BLOCK_PROPORTIONS_TOL_PP: f64 = 0.5;

/// Reference estimator ratios at m = 65,536,000:
/// li(N)/pi(N), psi(N)li(N)/N1(N), (2N2+3N3+1)/((1-psi(N))li(N)).
///
/// NOTE: with the documented psi exponent 0.06 the second and third
/// ratios evaluate to 1.00750 and 1.02124; the reference values below
/// are only reachable with an exponent near 0.0615. The verification
/// suite reports both entries as failed checks by design.
pub const RATIO_LI_PI: f64 = 1.0002;
pub const RATIO_PSI_LI_N1: f64 = 1.01439;
pub const RATIO_MULTI_PRIME: f64 = 1.04124;
pub const RATIO_TOL: f64 = 0.001;

/// Reference level-1 positional probabilities (bit, probability) for the
/// odd bit positions, 7 decimal places.
pub const LEVEL1_POSITION_PROBS: [(u32, f64); 4] = [
    (1, 0.118_152_6),
    (3, 0.118_142_0),
    (5, 0.118_115_5),
    (7, 0.118_046_6),
];
pub const LEVEL1_POSITION_TOL: f64 = 2e-7;

/// Reference level-2 positional probabilities indexed by bit 0..7,
/// 6 decimal places.
pub const LEVEL2_POSITION_PROBS: [f64; 8] = [
    0.409_912, 0.410_776, 0.409_876, 0.409_734, 0.410_438, 0.410_192, 0.409_737, 0.410_057,
];
pub const LEVEL2_POSITION_TOL: f64 = 2e-6;

/// Bits of a 2-pattern ordered by decreasing probability of holding a
/// prime (ties broken by ascending bit index).
pub const LEVEL2_SEARCH_ORDER: [u32; 8] = [1, 4, 5, 7, 0, 2, 6, 3];

/// First seven level-2 prime pattern values.
pub const PRIME_LEVEL2_FIRST7: [u64; 7] = [255, 255, 255, 191, 251, 127, 255];

/// The level-3 prime sequence is constant at 255 through this index...
pub const LEVEL3_CONSTANT_THROUGH: u64 = 366;
/// ...and first deviates here, with this value.
pub const LEVEL3_FIRST_DEVIATION: (u64, u64) = (367, 223);

/// The 47 level-3 pattern values attained over the standard interval.
pub const LEVEL3_SUPPORT: [u8; 47] = [
    31, 55, 59, 63, 95, 111, 115, 118, 119, 123, 125, 126, 127, 159, 175, 179, 181, 183, 187,
    189, 190, 191, 205, 207, 211, 214, 215, 219, 221, 222, 223, 231, 235, 237, 238, 239, 243,
    245, 246, 247, 249, 250, 251, 252, 253, 254, 255,
];

/// Reference count of level-3 values NOT attained. The support above
/// has 47 elements, so the computed missing count is 256 - 47 = 209;
/// the reference claims 208. Reports show both.
pub const LEVEL3_CLAIMED_MISSING: usize = 208;

/// Exact level-3 histogram over the standard interval.
pub const LEVEL3_HISTOGRAM: [(u8, u64); 47] = [
    (31, 1),
    (55, 1),
    (59, 1),
    (63, 8),
    (95, 17),
    (111, 14),
    (115, 2),
    (118, 1),
    (119, 18),
    (123, 11),
    (125, 11),
    (126, 14),
    (127, 1_233),
    (159, 8),
    (175, 8),
    (179, 1),
    (181, 1),
    (183, 10),
    (187, 17),
    (189, 8),
    (190, 14),
    (191, 1_257),
    (205, 1),
    (207, 7),
    (211, 1),
    (214, 2),
    (215, 10),
    (219, 18),
    (221, 10),
    (222, 16),
    (223, 1_206),
    (231, 13),
    (235, 14),
    (237, 19),
    (238, 19),
    (239, 1_200),
    (243, 5),
    (245, 11),
    (246, 17),
    (247, 1_253),
    (249, 12),
    (250, 12),
    (251, 1_243),
    (252, 11),
    (253, 1_216),
    (254, 1_272),
    (255, 117_756),
];

/// Minimum population count among observed level-3 values (every
/// 512-integer block of the standard interval holds at least 5 primes).
pub const LEVEL3_MIN_NP: u32 = 5;

/// First 20 level-2 twin pattern values.
pub const TWIN_LEVEL2_FIRST20: [u64; 20] = [
    245, 12, 98, 136, 80, 16, 8, 64, 65, 4, 160, 0, 7, 18, 0, 1, 24, 128, 0, 65,
];

/// First 20 level-3 twin pattern values.
pub const TWIN_LEVEL3_FIRST20: [u64; 20] = [
    255, 237, 219, 119, 253, 114, 59, 31, 247, 231, 12, 209, 234, 248, 174, 92, 214, 108, 83, 62,
];

/// Number of distinct level-2 twin values over the standard interval.
pub const TWIN_LEVEL2_DISTINCT: usize = 108;

/// The exact 108-element level-2 twin support over the standard
/// interval (computed independently and frozen; the compressed-range
/// summary circulated with the reference data expands to 174 values and
/// is therefore only a lossy description of this set).
pub const TWIN_LEVEL2_SUPPORT: [u8; 108] = [
    0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25,
    26, 28, 29, 32, 33, 34, 35, 36, 37, 38, 40, 41, 42, 43, 44, 48, 49, 50, 52, 56, 57, 64, 65,
    66, 67, 68, 69, 70, 72, 74, 76, 80, 81, 82, 83, 84, 86, 88, 96, 97, 98, 100, 101, 104, 112,
    116, 128, 129, 130, 131, 132, 133, 134, 136, 137, 138, 139, 140, 141, 144, 145, 148, 152,
    160, 161, 162, 163, 164, 166, 168, 169, 176, 192, 193, 194, 196, 197, 200, 208, 212, 224,
    228, 245,
];

/// Reference count of level-2 twin values not attained (claims 147; the
/// computed value is 256 - 108 = 148; reports show both).
pub const TWIN_LEVEL2_CLAIMED_MISSING: usize = 147;

/// Interval over which the level-3 twin sequence attains all 256 values.
pub const TWIN_LEVEL3_EXHAUSTIVE_N: u64 = 8_192_000;

/// Default odd-exponent upper bound for the Mersenne level-1 scan: odd
/// k in [3, 4001] gives exactly 2000 exponents, the range that
/// reproduces the reference occurrence counts.
pub const MERSENNE_K_MAX: u64 = 4_001;

/// Reference level-1 pattern occurrence counts for odd exponents in
/// [3, MERSENNE_K_MAX].
pub const MERSENNE_LEVEL1_HISTOGRAM: [(u8, u64); 6] =
    [(0, 1_968), (2, 15), (8, 9), (10, 1), (42, 1), (128, 6)];

/// Reference exponent lists per nonzero level-1 pattern.
///
/// NOTE: the offset-1 (pattern 2) list below contains 251 as received;
/// direct computation yields 521 instead (2^251 - 1 is divisible by 503,
/// while 2^521 - 1 is a classic Mersenne prime). The verification suite
/// reports that one-element difference as a failed check by design.
pub const MERSENNE_PATTERN2_EXPONENTS: [u64; 15] = [
    7, 13, 17, 19, 31, 61, 89, 107, 127, 251, 607, 1_279, 2_203, 2_281, 3_217,
];
pub const MERSENNE_PATTERN8_EXPONENTS: [u64; 9] = [9, 29, 213, 221, 233, 545, 689, 2_321, 3_237];
pub const MERSENNE_PATTERN10_EXPONENTS: [u64; 1] = [5];
pub const MERSENNE_PATTERN42_EXPONENTS: [u64; 1] = [3];
pub const MERSENNE_PATTERN128_EXPONENTS: [u64; 6] = [39, 715, 1_983, 2_319, 2_499, 3_775];

/// Counts of primes by offset (1, 3, 5, 7) among 2^k - offset for odd
/// k >= 7 within the pinned range.
pub const MERSENNE_OFFSET_COUNTS: [(u8, u64); 4] = [(1, 15), (3, 9), (5, 0), (7, 6)];

/// Default block-index bound for the Mersenne level-2 scan (blocks
/// m = 0..=500, i.e. exponents 16m+3 up to 8017).
pub const MERSENNE_LEVEL2_M_MAX: u64 = 500;

/// The 14 nonzero level-2 Mersenne values as (block index m, exponent
/// 16m+3, value); every other block in [0, 500] is zero.
pub const MERSENNE_LEVEL2_VALUES: [(u64, u64, u8); 14] = [
    (0, 3, 229),
    (1, 19, 130),
    (3, 51, 4),
    (5, 83, 16),
    (6, 99, 8),
    (7, 115, 2),
    (32, 515, 16),
    (37, 595, 2),
    (79, 1_267, 2),
    (137, 2_195, 8),
    (142, 2_275, 16),
    (200, 3_203, 1),
    (265, 4_243, 4),
    (276, 4_419, 32),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level1_histogram_totals() {
        let total: u64 = LEVEL1_HISTOGRAM.iter().map(|&(_, c)| c).sum();
        assert_eq!(total, crate::REFERENCE_N / 8);
        // weighted bit count equals pi(N)
        let primes: u64 = LEVEL1_HISTOGRAM
            .iter()
            .map(|&(v, c)| crate::np(v as u64) as u64 * c)
            .sum();
        assert_eq!(primes, PRIME_COUNT);
    }

    #[test]
    fn level3_histogram_totals() {
        let total: u64 = LEVEL3_HISTOGRAM.iter().map(|&(_, c)| c).sum();
        assert_eq!(total, crate::REFERENCE_N / 512);
        assert_eq!(LEVEL3_HISTOGRAM.len(), LEVEL3_SUPPORT.len());
    }

    #[test]
    fn mersenne_histogram_covers_exponent_count() {
        let total: u64 = MERSENNE_LEVEL1_HISTOGRAM.iter().map(|&(_, c)| c).sum();
        assert_eq!(total, (MERSENNE_K_MAX - 3) / 2 + 1);
    }

    #[test]
    fn twin_support_has_claimed_cardinality() {
        assert_eq!(TWIN_LEVEL2_SUPPORT.len(), TWIN_LEVEL2_DISTINCT);
        assert!(TWIN_LEVEL2_SUPPORT.windows(2).all(|w| w[0] < w[1]));
    }
}
