//! Multi-scale bit-pattern encoding of integer properties.
//!
//! A property of integers (primality, twin-prime membership, ...) is
//! summarized level by level: level 1 packs the property bits of blocks
//! of 8 consecutive integers into one byte; each higher level packs a
//! predicate over 8 consecutive lower-level patterns into one byte
//! again. The crate builds these hierarchies for arbitrary property
//! chains, instantiates them for primes, twin primes and
//! Mersenne-adjacent numbers, reproduces the reference statistics for
//! the standard interval [1, 65,536,000], and inverts the encoding
//! (recovering the underlying integers from a level-3 pattern value).
//!
//! Parallel scans run on rayon when the default `parallel` feature is
//! enabled; every operation has an identical sequential fallback.

pub mod analytic;
pub mod chain;
pub mod encoding;
pub mod error;
pub mod histogram;
pub mod mersenne;
pub mod params;
pub mod primes;
pub mod probable;
pub mod reconstruct;
pub mod reference;
pub mod render;
pub mod sieve;
pub mod storage;
pub mod twins;
pub mod verify;

pub use chain::PropertyChain;
pub use encoding::{
    block_range, build_hierarchy, build_hierarchy_serial, d2b, encode_level1, encode_next_level,
    np, Hierarchy, LevelSequence, Pattern,
};
pub use error::{Error, Result};
pub use histogram::{histogram, histogram_prefix, histogram_serial, PatternHistogram};
pub use params::EncodingParams;
pub use sieve::{sieve, sieve_serial, PrimalityBitmap};

/// Upper bound of the standard analysis interval.
pub const REFERENCE_N: u64 = 65_536_000;
