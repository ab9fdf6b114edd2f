//! Exact primality for dense intervals: a segmented, bit-packed sieve of
//! Eratosthenes producing an immutable bitmap with one bit per integer.

use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Packed primality bits for [1, n_max]: bit i (1-based) is set iff i is
/// prime. Write-once; cheap to share across threads afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalityBitmap {
    n_max: u64,
    words: Vec<u64>,
}

impl PrimalityBitmap {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Exact primality lookup. `n` must not exceed `n_max`.
    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.n_max, "lookup {n} beyond sieved bound {}", self.n_max);
        (self.words[(n >> 6) as usize] >> (n & 63)) & 1 == 1
    }

    /// pi(m): number of primes <= m.
    pub fn count_primes_upto(&self, m: u64) -> Result<u64> {
        if m > self.n_max {
            return Err(Error::Range(format!(
                "pi({m}) requested beyond sieved bound {}",
                self.n_max
            )));
        }
        let full_words = (m + 1) / 64;
        let mut count: u64 = self.words[..full_words as usize]
            .iter()
            .map(|w| w.count_ones() as u64)
            .sum();
        let rem = (m + 1) % 64;
        if rem != 0 {
            let mask = (1u64 << rem) - 1;
            count += (self.words[full_words as usize] & mask).count_ones() as u64;
        }
        Ok(count)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.n_max).filter(move |&n| self.is_prime(n))
    }

    /// Underlying words; bit i of the array is integer i.
    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(n_max: u64, words: Vec<u64>) -> Self {
        Self { n_max, words }
    }
}

/// Odd primes up to `limit` inclusive, by a plain sieve. Used both for
/// the segmented sieve's base primes and as trial divisors elsewhere.
pub(crate) fn small_odd_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; (limit + 1) as usize];
    let mut primes = Vec::new();
    let mut p = 3u64;
    while p <= limit {
        if !composite[p as usize] {
            primes.push(p);
            let mut m = p * p;
            while m <= limit {
                composite[m as usize] = true;
                m += 2 * p;
            }
        }
        p += 2;
    }
    primes
}

// Words per parallel segment: 2^15 words = 2^21 bits, i.e. 256 KiB of
// marks per task, small enough to stay cache-resident.
const SEGMENT_WORDS: usize = 1 << 15;

fn sieve_segment(words: &mut [u64], seg_index: usize, n_max: u64, base_primes: &[u64]) {
    let lo_bit = (seg_index * SEGMENT_WORDS * 64) as u64;
    let hi_bit = lo_bit + (words.len() * 64) as u64; // exclusive

    for &p in base_primes {
        let p2 = p * p;
        if p2 >= hi_bit {
            break;
        }
        // first odd multiple of p inside [max(p^2, lo_bit), hi_bit)
        let mut m = if p2 >= lo_bit {
            p2
        } else {
            let mut first = lo_bit.div_ceil(p) * p;
            if first % 2 == 0 {
                first += p;
            }
            first
        };
        while m < hi_bit {
            let idx = m - lo_bit;
            words[(idx >> 6) as usize] &= !(1u64 << (idx & 63));
            m += 2 * p;
        }
    }

    // clear any tail bits beyond n_max in the final segment
    if hi_bit > n_max {
        for bit in (n_max + 1).max(lo_bit)..hi_bit {
            let idx = bit - lo_bit;
            words[(idx >> 6) as usize] &= !(1u64 << (idx & 63));
        }
    }
}

fn sieve_impl(n_max: u64, parallel: bool) -> Result<PrimalityBitmap> {
    if n_max < 2 {
        return Err(Error::Config(format!("sieve bound must be at least 2, got {n_max}")));
    }
    let n_words = ((n_max + 1) as usize).div_ceil(64);
    // every odd number starts out marked prime
    let mut words = vec![0xAAAA_AAAA_AAAA_AAAAu64; n_words];

    let sqrt = (n_max as f64).sqrt() as u64 + 1;
    let base_primes = small_odd_primes(sqrt);

    let run = |(seg_index, chunk): (usize, &mut [u64])| {
        sieve_segment(chunk, seg_index, n_max, &base_primes);
    };

    if parallel {
        #[cfg(feature = "parallel")]
        words.par_chunks_mut(SEGMENT_WORDS).enumerate().for_each(run);
        #[cfg(not(feature = "parallel"))]
        words.chunks_mut(SEGMENT_WORDS).enumerate().for_each(run);
    } else {
        words.chunks_mut(SEGMENT_WORDS).enumerate().for_each(run);
    }

    // 1 is not prime; 2 is the only even prime
    words[0] &= !0b10;
    words[0] |= 0b100;

    Ok(PrimalityBitmap { n_max, words })
}

/// Sieves [1, n_max] exactly. Parallelizes over disjoint segments when
/// the `parallel` feature is enabled; the resulting bitmap is identical
/// either way.
pub fn sieve(n_max: u64) -> Result<PrimalityBitmap> {
    sieve_impl(n_max, cfg!(feature = "parallel"))
}

/// Single-threaded variant of [`sieve`].
pub fn sieve_serial(n_max: u64) -> Result<PrimalityBitmap> {
    sieve_impl(n_max, false)
}
