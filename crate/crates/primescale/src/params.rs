use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometry of a pattern hierarchy: pattern width exponent `t` (block size
/// B = 2^t), number of levels `K`, and the analyzed interval `[1, n_max]`.
///
/// `n_max` must be a multiple of B^K so that every top-level pattern covers
/// a complete block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingParams {
    t: u32,
    levels: u32,
    n_max: u64,
}

/// Smallest `t` accepted. Patterns need at least 4 positions for the
/// block arithmetic to be meaningful.
pub const MIN_T: u32 = 2;
/// Largest `t` accepted: 2^6 = 64 pattern bits is the widest value that
/// fits a single machine word.
pub const MAX_T: u32 = 6;
/// Default pattern width exponent; all reference analyses use 8-bit
/// patterns (blocks of 8 integers).
pub const DEFAULT_T: u32 = 3;

impl EncodingParams {
    /// Validates and builds hierarchy parameters.
    pub fn new(t: u32, levels: u32, n_max: u64) -> Result<Self> {
        if !(MIN_T..=MAX_T).contains(&t) {
            return Err(Error::Config(format!(
                "pattern width exponent t must be in [{MIN_T}, {MAX_T}], got {t}"
            )));
        }
        if levels == 0 {
            return Err(Error::Config("levels must be at least 1".into()));
        }
        let block = 1u64 << t;
        let top = block
            .checked_pow(levels)
            .ok_or_else(|| Error::Config(format!("block size {block}^{levels} overflows u64")))?;
        if n_max == 0 || n_max % top != 0 {
            return Err(Error::Config(format!(
                "n_max ({n_max}) must be a positive multiple of B^K = {top}"
            )));
        }
        Ok(Self { t, levels, n_max })
    }

    /// Parameters with the default pattern width (t = 3, blocks of 8).
    pub fn with_default_t(levels: u32, n_max: u64) -> Result<Self> {
        Self::new(DEFAULT_T, levels, n_max)
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Block size B = 2^t: integers per level-1 block, sub-blocks per
    /// higher-level block.
    pub fn block_size(&self) -> u64 {
        1u64 << self.t
    }

    /// Number of bits in one pattern value (= block size).
    pub fn value_bits(&self) -> u32 {
        1u32 << self.t
    }

    /// Bytes used to store one pattern value: the smallest machine word
    /// holding 2^t bits.
    pub fn value_width(&self) -> usize {
        usize::max(1, (self.value_bits() as usize) / 8)
    }

    /// Number of level-k blocks covering [1, n_max].
    pub fn blocks_at(&self, level: u32) -> Result<u64> {
        if level == 0 || level > self.levels {
            return Err(Error::Range(format!(
                "level {level} outside hierarchy with {} levels",
                self.levels
            )));
        }
        Ok(self.n_max / self.block_size().pow(level))
    }
}

impl Default for EncodingParams {
    /// Default geometry: 8-bit patterns, 3 levels, the standard reference
    /// interval [1, 65,536,000].
    fn default() -> Self {
        Self {
            t: DEFAULT_T,
            levels: 3,
            n_max: crate::REFERENCE_N,
        }
    }
}
