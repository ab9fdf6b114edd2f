//! Recursive multi-scale bit-pattern encoding.
//!
//! Level 1 packs a base predicate over blocks of B = 2^t consecutive
//! integers into B-bit words ("patterns"); each higher level packs a
//! pattern predicate over B consecutive lower-level patterns. Bit
//! (B-1-j) of a pattern corresponds to offset j inside its block, so the
//! binary print of a pattern reads left-to-right in increasing integer
//! order.

use crate::chain::PropertyChain;
use crate::error::{Error, Result};
use crate::params::EncodingParams;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// One encoded pattern: its value, the level it lives on and its block
/// index at that level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pattern {
    pub value: u64,
    pub level: u32,
    pub index: u64,
}

/// Dense array of pattern values for a single level, stored in the
/// smallest machine word that holds one pattern (one byte for 8-bit
/// patterns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSequence {
    level: u32,
    value_bits: u32,
    data: Vec<u8>,
}

impl LevelSequence {
    /// Bytes per stored value for a given pattern width.
    pub fn width_for(value_bits: u32) -> usize {
        usize::max(1, value_bits as usize / 8)
    }

    pub fn from_values(level: u32, value_bits: u32, values: impl IntoIterator<Item = u64>) -> Self {
        let width = Self::width_for(value_bits);
        let mut data = Vec::new();
        for v in values {
            debug_assert!(value_bits == 64 || v < (1u64 << value_bits));
            data.extend_from_slice(&v.to_le_bytes()[..width]);
        }
        Self { level, value_bits, data }
    }

    /// Wraps raw little-endian storage produced by [`as_bytes`](Self::as_bytes).
    pub fn from_bytes(level: u32, value_bits: u32, data: Vec<u8>) -> Result<Self> {
        let width = Self::width_for(value_bits);
        if data.len() % width != 0 {
            return Err(Error::Format(format!(
                "level {level} byte length {} is not a multiple of the value width {width}",
                data.len()
            )));
        }
        Ok(Self { level, value_bits, data })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn value_bits(&self) -> u32 {
        self.value_bits
    }

    pub fn len(&self) -> u64 {
        (self.data.len() / Self::width_for(self.value_bits)) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, n: u64) -> Result<u64> {
        if n >= self.len() {
            return Err(Error::Range(format!(
                "block index {n} outside level {} sequence of length {}",
                self.level,
                self.len()
            )));
        }
        Ok(self.get_unchecked(n))
    }

    #[inline]
    pub(crate) fn get_unchecked(&self, n: u64) -> u64 {
        let width = Self::width_for(self.value_bits);
        let start = n as usize * width;
        let mut buf = [0u8; 8];
        buf[..width].copy_from_slice(&self.data[start..start + width]);
        u64::from_le_bytes(buf)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let width = Self::width_for(self.value_bits);
        self.data.chunks_exact(width).map(move |chunk| {
            let mut buf = [0u8; 8];
            buf[..width].copy_from_slice(chunk);
            u64::from_le_bytes(buf)
        })
    }

    /// Raw little-endian storage; for 8-bit patterns this is exactly one
    /// byte per pattern.
    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }
}

/// All level sequences of one property over [1, n_max], plus the
/// geometry and property tag they were built with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    params: EncodingParams,
    property: String,
    levels: Vec<LevelSequence>,
}

impl Hierarchy {
    /// Reassembles a hierarchy from stored parts, revalidating the
    /// cross-field geometry.
    pub fn from_parts(
        params: EncodingParams,
        property: impl Into<String>,
        levels: Vec<LevelSequence>,
    ) -> Result<Self> {
        if levels.len() as u32 != params.levels() {
            return Err(Error::Format(format!(
                "expected {} level sequences, got {}",
                params.levels(),
                levels.len()
            )));
        }
        for (i, seq) in levels.iter().enumerate() {
            let k = i as u32 + 1;
            if seq.level() != k {
                return Err(Error::Format(format!(
                    "sequence {i} labelled level {}, expected {k}",
                    seq.level()
                )));
            }
            if seq.value_bits() != params.value_bits() {
                return Err(Error::Format(format!(
                    "level {k} stores {}-bit values, params say {}",
                    seq.value_bits(),
                    params.value_bits()
                )));
            }
            let expect = params.blocks_at(k)?;
            if seq.len() != expect {
                return Err(Error::Format(format!(
                    "level {k} has {} values, expected {expect}",
                    seq.len()
                )));
            }
        }
        Ok(Self { params, property: property.into(), levels })
    }

    pub fn params(&self) -> &EncodingParams {
        &self.params
    }

    pub fn property(&self) -> &str {
        &self.property
    }

    pub fn level(&self, k: u32) -> Result<&LevelSequence> {
        if k == 0 || k > self.levels.len() as u32 {
            return Err(Error::Range(format!(
                "level {k} outside hierarchy with {} levels",
                self.levels.len()
            )));
        }
        Ok(&self.levels[(k - 1) as usize])
    }

    pub fn levels(&self) -> &[LevelSequence] {
        &self.levels
    }

    pub fn value(&self, k: u32, n: u64) -> Result<u64> {
        self.level(k)?.get(n)
    }
}

/// Population count of a pattern value: the number of property-holders
/// (level 1) or flagged sub-blocks (level >= 2) in its block.
#[inline]
pub fn np(value: u64) -> u32 {
    value.count_ones()
}

/// Positions of the 1-bits of an 8-bit pattern, in block-offset order:
/// position j corresponds to bit (7 - j), so values are yielded in
/// increasing integer order within the block.
pub fn d2b(value: u8) -> impl Iterator<Item = u32> {
    (0..8u32).filter(move |j| (value >> (7 - j)) & 1 == 1)
}

/// Closed interval of integers summarized by the level-k block with
/// index n: [B^k * n + 1, B^k * (n + 1)].
pub fn block_range(level: u32, index: u64, params: &EncodingParams) -> std::ops::RangeInclusive<u64> {
    assert!(level >= 1, "blocks exist from level 1");
    let span = params.block_size().pow(level);
    let lo = span
        .checked_mul(index)
        .and_then(|v| v.checked_add(1))
        .expect("block range start overflows u64");
    let hi = span
        .checked_mul(index + 1)
        .expect("block range end overflows u64");
    lo..=hi
}

/// Encodes the base predicate over the level-1 block with index n.
pub fn encode_level1(
    phi0: impl Fn(u64) -> bool,
    n: u64,
    params: &EncodingParams,
) -> Pattern {
    let bits = params.value_bits();
    let first = params.block_size() * n + 1;
    let mut value = 0u64;
    for j in 0..bits as u64 {
        if phi0(first + j) {
            value |= 1 << (bits as u64 - 1 - j);
        }
    }
    Pattern { value, level: 1, index: n }
}

/// Aggregates one block of the previous level through a pattern
/// predicate, producing the next-level pattern with index n.
pub fn encode_next_level(
    prev: &LevelSequence,
    phi: impl Fn(u64) -> bool,
    n: u64,
) -> Result<Pattern> {
    let bits = prev.value_bits();
    let base = bits as u64 * n;
    if base + bits as u64 > prev.len() {
        return Err(Error::Range(format!(
            "block {n} needs level-{} indices [{base}, {}), sequence has {}",
            prev.level(),
            base + bits as u64,
            prev.len()
        )));
    }
    let mut value = 0u64;
    for j in 0..bits as u64 {
        if phi(prev.get_unchecked(base + j)) {
            value |= 1 << (bits as u64 - 1 - j);
        }
    }
    Ok(Pattern { value, level: prev.level() + 1, index: n })
}

// Number of blocks encoded per work unit when filling a level in
// parallel; also the chunk size of the serial loop so both paths share
// the fill routines.
const FILL_CHUNK: usize = 1 << 14;

fn fill_level1_chunk(out: &mut [u8], width: usize, bits: u32, first_block: u64, chain: &PropertyChain) {
    for (i, slot) in out.chunks_exact_mut(width).enumerate() {
        let first = bits as u64 * (first_block + i as u64) + 1;
        let mut value = 0u64;
        for j in 0..bits as u64 {
            if chain.base_holds(first + j) {
                value |= 1 << (bits as u64 - 1 - j);
            }
        }
        slot.copy_from_slice(&value.to_le_bytes()[..width]);
    }
}

fn fill_next_chunk(
    out: &mut [u8],
    width: usize,
    bits: u32,
    first_block: u64,
    prev: &LevelSequence,
    chain: &PropertyChain,
    transition: u32,
) {
    for (i, slot) in out.chunks_exact_mut(width).enumerate() {
        let base = bits as u64 * (first_block + i as u64);
        let mut value = 0u64;
        for j in 0..bits as u64 {
            if chain.filter_holds(transition, prev.get_unchecked(base + j)) {
                value |= 1 << (bits as u64 - 1 - j);
            }
        }
        slot.copy_from_slice(&value.to_le_bytes()[..width]);
    }
}

fn build_impl(chain: &PropertyChain, params: &EncodingParams, parallel: bool) -> Result<Hierarchy> {
    let bits = params.value_bits();
    let width = params.value_width();
    let mut levels: Vec<LevelSequence> = Vec::with_capacity(params.levels() as usize);

    for k in 1..=params.levels() {
        let blocks = params.blocks_at(k)? as usize;
        let mut data = vec![0u8; blocks * width];
        let chunk_bytes = FILL_CHUNK * width;

        let fill = |(idx, chunk): (usize, &mut [u8])| {
            let first_block = (idx * FILL_CHUNK) as u64;
            if k == 1 {
                fill_level1_chunk(chunk, width, bits, first_block, chain);
            } else {
                let prev = levels.last().expect("previous level built");
                fill_next_chunk(chunk, width, bits, first_block, prev, chain, k - 1);
            }
        };

        if parallel {
            #[cfg(feature = "parallel")]
            data.par_chunks_mut(chunk_bytes).enumerate().for_each(fill);
            #[cfg(not(feature = "parallel"))]
            data.chunks_mut(chunk_bytes).enumerate().for_each(fill);
        } else {
            data.chunks_mut(chunk_bytes).enumerate().for_each(fill);
        }

        levels.push(LevelSequence::from_bytes(k, bits, data)?);
    }

    Ok(Hierarchy {
        params: *params,
        property: chain.name().to_string(),
        levels,
    })
}

/// Builds every level of the hierarchy eagerly. Uses the rayon thread
/// pool when the `parallel` feature is enabled; output is identical
/// either way.
pub fn build_hierarchy(chain: &PropertyChain, params: &EncodingParams) -> Result<Hierarchy> {
    build_impl(chain, params, cfg!(feature = "parallel"))
}

/// Single-threaded variant of [`build_hierarchy`].
pub fn build_hierarchy_serial(chain: &PropertyChain, params: &EncodingParams) -> Result<Hierarchy> {
    build_impl(chain, params, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_prime_small(n: u64) -> bool {
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

    fn params(levels: u32, n_max: u64) -> EncodingParams {
        EncodingParams::new(3, levels, n_max).unwrap()
    }

    #[test]
    fn level1_prime_blocks() {
        let p = params(1, 64);
        assert_eq!(encode_level1(is_prime_small, 0, &p).value, 106);
        assert_eq!(encode_level1(is_prime_small, 1, &p).value, 40);
        assert_eq!(encode_level1(|_| false, 5, &p).value, 0);
        assert_eq!(encode_level1(|_| true, 5, &p).value, 255);
    }

    #[test]
    fn next_level_aggregates_non_nullity() {
        let prev = LevelSequence::from_values(1, 8, [106, 40, 162, 10, 8, 162, 8, 40]);
        let pat = encode_next_level(&prev, |v| v != 0, 0).unwrap();
        assert_eq!(pat.value, 255);
        assert_eq!(pat.level, 2);

        let zeros = LevelSequence::from_values(1, 8, [0u64; 8]);
        assert_eq!(encode_next_level(&zeros, |v| v != 0, 0).unwrap().value, 0);

        assert!(matches!(encode_next_level(&prev, |v| v != 0, 1), Err(Error::Range(_))));
    }

    #[test]
    fn np_counts_bits() {
        assert_eq!(np(106), 4);
        assert_eq!(np(0), 0);
        assert_eq!(np(255), 8);
    }

    #[test]
    fn d2b_positions() {
        assert_eq!(d2b(0).count(), 0);
        assert_eq!(d2b(255).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(d2b(40).collect::<Vec<_>>(), vec![2, 4]);
    }

    #[test]
    fn d2b_identities_exhaustive() {
        for v in 0..=255u8 {
            let positions: Vec<u32> = d2b(v).collect();
            assert_eq!(positions.len() as u32, np(v as u64));
            let back: u64 = positions.iter().map(|j| 1u64 << (7 - j)).sum();
            assert_eq!(back, v as u64);
        }
    }

    #[test]
    fn block_ranges() {
        let p = params(3, 512);
        assert_eq!(block_range(1, 28, &p), 225..=232);
        assert_eq!(block_range(3, 0, &p), 1..=512);
        assert_eq!(block_range(1, 0, &p), 1..=8);
    }

    #[test]
    fn block_ranges_partition_interval() {
        let p = params(2, 256);
        for k in 1..=2 {
            let mut covered = vec![false; 257];
            for n in 0..p.blocks_at(k).unwrap() {
                for i in block_range(k, n, &p) {
                    assert!(!covered[i as usize], "overlap at {i}");
                    covered[i as usize] = true;
                }
            }
            assert!(covered[1..].iter().all(|&c| c));
        }
    }

    #[test]
    fn zero_chain_gives_zero_levels() {
        let chain = PropertyChain::new("none", |_| false);
        let h = build_hierarchy(&chain, &params(3, 1024)).unwrap();
        for k in 1..=3 {
            assert!(h.level(k).unwrap().iter().all(|v| v == 0));
        }
    }

    #[test]
    fn serial_and_parallel_builds_agree() {
        let chain = PropertyChain::new("primes", is_prime_small);
        let p = params(3, 8192);
        assert_eq!(build_hierarchy(&chain, &p).unwrap(), build_hierarchy_serial(&chain, &p).unwrap());
    }

    #[test]
    fn level1_bits_round_trip_base_predicate() {
        let chain = PropertyChain::new("primes", is_prime_small);
        let p = params(1, 4096);
        let h = build_hierarchy(&chain, &p).unwrap();
        let l1 = h.level(1).unwrap();
        for n in 0..l1.len() {
            let v = l1.get(n).unwrap();
            for j in 0..8u64 {
                let bit = (v >> (7 - j)) & 1 == 1;
                assert_eq!(bit, is_prime_small(8 * n + 1 + j));
            }
        }
    }

    #[test]
    fn wide_patterns_build() {
        // t = 4: 16-bit patterns stored two bytes each.
        let p = EncodingParams::new(4, 2, 512).unwrap();
        let chain = PropertyChain::new("odd", |n| n % 2 == 1);
        let h = build_hierarchy(&chain, &p).unwrap();
        let l1 = h.level(1).unwrap();
        assert_eq!(l1.len(), 32);
        // odd integers sit at offsets 0, 2, 4, ... within each block
        assert_eq!(l1.get(0).unwrap(), 0b1010_1010_1010_1010);
        assert_eq!(h.level(2).unwrap().get(0).unwrap(), 0xFFFF);
    }

    /// Direct evaluation of the recursive definition, written
    /// independently of the builder (recomputes everything from the base
    /// predicate on every call).
    fn naive_value(
        base: &dyn Fn(u64) -> bool,
        filters: &[Vec<bool>],
        k: u32,
        n: u64,
    ) -> u64 {
        let mut value = 0u64;
        for j in 0..8u64 {
            let flagged = if k == 1 {
                base(8 * n + 1 + j)
            } else {
                let sub = naive_value(base, filters, k - 1, 8 * n + j);
                match filters.get((k - 2) as usize) {
                    Some(table) => table[sub as usize],
                    None => sub != 0,
                }
            };
            if flagged {
                value |= 1 << (7 - j);
            }
        }
        value
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn builder_matches_naive_recursion(
            base_table in prop::collection::vec(any::<bool>(), 2048),
            f1 in prop::collection::vec(any::<bool>(), 256),
            f2 in prop::collection::vec(any::<bool>(), 256),
        ) {
            let p = params(3, 2048);
            let bt = base_table.clone();
            let (f1c, f2c) = (f1.clone(), f2.clone());
            let chain = PropertyChain::new("prop", move |n| bt[(n - 1) as usize])
                .with_filter(move |v| f1c[v as usize])
                .with_filter(move |v| f2c[v as usize]);
            let h = build_hierarchy(&chain, &p).unwrap();

            let base = |n: u64| base_table[(n - 1) as usize];
            let filters = vec![f1.clone(), f2.clone()];
            for k in 1..=3u32 {
                let seq = h.level(k).unwrap();
                for n in 0..seq.len() {
                    prop_assert_eq!(seq.get(n).unwrap(), naive_value(&base, &filters, k, n));
                }
            }

            // cross-level consistency: np of a pattern counts flagged sub-blocks
            for k in 2..=3u32 {
                let seq = h.level(k).unwrap();
                let prev = h.level(k - 1).unwrap();
                for n in 0..seq.len() {
                    let claimed = np(seq.get(n).unwrap());
                    let actual = (0..8u64)
                        .filter(|j| chain.filter_holds(k - 1, prev.get(8 * n + j).unwrap()))
                        .count() as u32;
                    prop_assert_eq!(claimed, actual);
                }
            }
        }
    }
}
