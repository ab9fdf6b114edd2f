//! Exact pattern-value histograms over level sequences.

use serde::Serialize;

use crate::encoding::LevelSequence;
use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Exact occurrence counts of the pattern values of one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternHistogram {
    level: u32,
    counts: Vec<u64>,
    total: u64,
}

impl PatternHistogram {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// One slot per possible pattern value.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, value: u64) -> u64 {
        self.counts.get(value as usize).copied().unwrap_or(0)
    }

    /// Values that actually occur, ascending.
    pub fn support(&self) -> Vec<u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, _)| v as u64)
            .collect()
    }

    pub fn distinct(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// `pattern,count` rows for every possible value, ascending.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("pattern,count\n");
        for (v, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{v},{c}\n"));
        }
        out
    }

    pub(crate) fn from_counts(level: u32, counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        Self { level, counts, total }
    }
}

fn count_values(seq: &LevelSequence, blocks: u64, slots: usize, parallel: bool) -> Vec<u64> {
    let width = LevelSequence::width_for(seq.value_bits());
    let bytes = &seq.as_bytes()[..blocks as usize * width];

    let tally = |chunk: &[u8]| {
        let mut counts = vec![0u64; slots];
        for value in chunk.chunks_exact(width).map(|c| {
            let mut buf = [0u8; 8];
            buf[..width].copy_from_slice(c);
            u64::from_le_bytes(buf)
        }) {
            counts[value as usize] += 1;
        }
        counts
    };

    if parallel {
        #[cfg(feature = "parallel")]
        {
            let chunk_bytes = (1usize << 20) * width;
            return bytes
                .par_chunks(chunk_bytes)
                .map(tally)
                .reduce(
                    || vec![0u64; slots],
                    |mut a, b| {
                        for (x, y) in a.iter_mut().zip(b) {
                            *x += y;
                        }
                        a
                    },
                );
        }
    }
    tally(bytes)
}

fn histogram_impl(seq: &LevelSequence, blocks: u64, parallel: bool) -> Result<PatternHistogram> {
    if seq.value_bits() > 16 {
        return Err(Error::Config(format!(
            "dense histograms support pattern widths up to 16 bits, got {}",
            seq.value_bits()
        )));
    }
    if blocks > seq.len() {
        return Err(Error::Range(format!(
            "histogram over {blocks} blocks requested, sequence has {}",
            seq.len()
        )));
    }
    let slots = 1usize << seq.value_bits();
    let counts = count_values(seq, blocks, slots, parallel);
    Ok(PatternHistogram::from_counts(seq.level(), counts))
}

/// Exact histogram of a whole level sequence.
pub fn histogram(seq: &LevelSequence) -> Result<PatternHistogram> {
    histogram_impl(seq, seq.len(), cfg!(feature = "parallel"))
}

/// Single-threaded variant of [`histogram`].
pub fn histogram_serial(seq: &LevelSequence) -> Result<PatternHistogram> {
    histogram_impl(seq, seq.len(), false)
}

/// Histogram over the first `blocks` entries only (the prefix covering
/// `[1, blocks * B^level]`).
pub fn histogram_prefix(seq: &LevelSequence, blocks: u64) -> Result<PatternHistogram> {
    histogram_impl(seq, blocks, cfg!(feature = "parallel"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(values: &[u64]) -> LevelSequence {
        LevelSequence::from_values(1, 8, values.iter().copied())
    }

    #[test]
    fn counts_and_support() {
        let h = histogram(&seq(&[0, 2, 2, 106, 0, 0])).unwrap();
        assert_eq!(h.total(), 6);
        assert_eq!(h.count(0), 3);
        assert_eq!(h.count(2), 2);
        assert_eq!(h.count(106), 1);
        assert_eq!(h.count(40), 0);
        assert_eq!(h.support(), vec![0, 2, 106]);
        assert_eq!(h.distinct(), 3);
        assert_eq!(h.counts().len(), 256);
    }

    #[test]
    fn prefix_restricts_range() {
        let h = histogram_prefix(&seq(&[1, 2, 3, 4]), 2).unwrap();
        assert_eq!(h.total(), 2);
        assert_eq!(h.count(1), 1);
        assert_eq!(h.count(3), 0);
        assert!(histogram_prefix(&seq(&[1]), 2).is_err());
    }

    #[test]
    fn serial_matches_parallel() {
        let values: Vec<u64> = (0..100_000u64).map(|i| (i * 37 + 11) % 256).collect();
        let s = seq(&values);
        assert_eq!(histogram(&s).unwrap(), histogram_serial(&s).unwrap());
    }

    #[test]
    fn csv_shape() {
        let csv = histogram(&seq(&[5, 5])).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("pattern,count"));
        assert_eq!(csv.lines().count(), 257);
        assert!(csv.lines().any(|l| l == "5,2"));
    }

    #[test]
    fn wide_patterns_rejected() {
        let s = LevelSequence::from_values(1, 32, [1u64, 2, 3]);
        assert!(matches!(histogram(&s), Err(Error::Config(_))));
    }
}
