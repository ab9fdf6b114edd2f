//! Inverse hierarchical decomposition: given a 3-level hierarchy and a
//! target 3-pattern value C, recover every integer whose property bit
//! is encoded under a level-3 block matching C.

use serde::Serialize;

use crate::encoding::{d2b, Hierarchy};
use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Ancestry of one recovered integer: the chain of block indices it was
/// found under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReconstructionRow {
    pub n3: u64,
    pub n2: u64,
    pub n1: u64,
    pub integer: u64,
}

/// All integers recovered for one target pattern, ascending, with their
/// ancestry rows.
#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionResult {
    pub target: u8,
    /// Level-3 indices whose pattern equals the target.
    pub matches: Vec<u64>,
    pub integers: Vec<u64>,
    pub rows: Vec<ReconstructionRow>,
}

impl ReconstructionResult {
    /// `n3,n2,n1,integer` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n3,n2,n1,integer\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.n3, r.n2, r.n1, r.integer));
        }
        out
    }
}

fn expand_match(hier: &Hierarchy, target: u8, n3: u64) -> Vec<ReconstructionRow> {
    let l1 = hier.level(1).expect("level 1 exists");
    let l2 = hier.level(2).expect("level 2 exists");
    // every match shares the target pattern, so decomposing the target
    // is decomposing the match
    debug_assert_eq!(hier.value(3, n3).unwrap(), target as u64);
    let mut rows = Vec::new();
    for j in d2b(target) {
        let n2 = 8 * n3 + j as u64;
        let v2 = l2.get(n2).expect("level-2 index in range") as u8;
        for i in d2b(v2) {
            let n1 = 8 * n2 + i as u64;
            let v1 = l1.get(n1).expect("level-1 index in range") as u8;
            for p in d2b(v1) {
                rows.push(ReconstructionRow { n3, n2, n1, integer: 8 * n1 + p as u64 + 1 });
            }
        }
    }
    rows
}

/// Recovers the integers encoded under every level-3 block whose
/// pattern equals `target`. Matches expand independently (in parallel
/// with the `parallel` feature); the result is globally sorted because
/// blocks are disjoint and scanned in order.
pub fn reconstruct(hier: &Hierarchy, target: u8) -> Result<ReconstructionResult> {
    if hier.params().levels() < 3 {
        return Err(Error::Config(format!(
            "reconstruction needs a 3-level hierarchy, got {} levels",
            hier.params().levels()
        )));
    }
    if hier.params().t() != 3 {
        return Err(Error::Config(format!(
            "reconstruction is defined for 8-bit patterns (t = 3), got t = {}",
            hier.params().t()
        )));
    }
    let l3 = hier.level(3)?;
    let matches: Vec<u64> = l3
        .iter()
        .enumerate()
        .filter(|&(_, v)| v == target as u64)
        .map(|(n, _)| n as u64)
        .collect();

    let per_match: Vec<Vec<ReconstructionRow>> = {
        #[cfg(feature = "parallel")]
        {
            matches.par_iter().map(|&n3| expand_match(hier, target, n3)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            matches.iter().map(|&n3| expand_match(hier, target, n3)).collect()
        }
    };
    let rows: Vec<ReconstructionRow> = per_match.into_iter().flatten().collect();
    let integers: Vec<u64> = rows.iter().map(|r| r.integer).collect();
    debug_assert!(integers.windows(2).all(|w| w[0] < w[1]));

    Ok(ReconstructionResult { target, matches, integers, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{block_range, build_hierarchy};
    use crate::params::EncodingParams;
    use crate::primes::prime_chain;
    use crate::sieve::sieve;
    use std::sync::Arc;

    fn prime_hierarchy(n_max: u64) -> (Hierarchy, Arc<crate::sieve::PrimalityBitmap>) {
        let bitmap = Arc::new(sieve(n_max).unwrap());
        let chain = prime_chain(bitmap.clone());
        let params = EncodingParams::new(3, 3, n_max).unwrap();
        (build_hierarchy(&chain, &params).unwrap(), bitmap)
    }

    #[test]
    fn full_pattern_over_first_block_recovers_all_primes() {
        let (h, bitmap) = prime_hierarchy(512);
        assert_eq!(h.value(3, 0).unwrap(), 255);
        let result = reconstruct(&h, 255).unwrap();
        assert_eq!(result.matches, vec![0]);
        let primes: Vec<u64> = bitmap.primes().collect();
        assert_eq!(result.integers, primes);
        // the classic localization example: [225, 232] holds exactly 227 and 229
        assert!(result.integers.contains(&227));
        assert!(result.integers.contains(&229));
        let in_block: Vec<u64> = result
            .integers
            .iter()
            .copied()
            .filter(|i| block_range(1, 28, h.params()).contains(i))
            .collect();
        assert_eq!(in_block, vec![227, 229]);
    }

    #[test]
    fn absent_pattern_gives_empty_result() {
        let (h, _) = prime_hierarchy(512);
        let result = reconstruct(&h, 0).unwrap();
        assert!(result.matches.is_empty());
        assert!(result.integers.is_empty());
    }

    #[test]
    fn union_over_observed_patterns_partitions_the_primes() {
        let (h, bitmap) = prime_hierarchy(4096);
        let observed: std::collections::BTreeSet<u64> = h.level(3).unwrap().iter().collect();
        let mut recovered: Vec<u64> = Vec::new();
        for &c in &observed {
            recovered.extend(reconstruct(&h, c as u8).unwrap().integers);
        }
        recovered.sort_unstable();
        // no duplicates: blocks are disjoint
        assert!(recovered.windows(2).all(|w| w[0] < w[1]));
        let primes: Vec<u64> = bitmap.primes().collect();
        assert_eq!(recovered, primes);
    }

    #[test]
    fn rows_are_consistent_ancestry() {
        let (h, bitmap) = prime_hierarchy(4096);
        let result = reconstruct(&h, h.value(3, 1).unwrap() as u8).unwrap();
        for r in &result.rows {
            assert_eq!(r.n2 / 8, r.n3);
            assert_eq!(r.n1 / 8, r.n2);
            assert!(block_range(1, r.n1, h.params()).contains(&r.integer));
            assert!(bitmap.is_prime(r.integer));
        }
        let csv = result.to_csv();
        assert!(csv.starts_with("n3,n2,n1,integer\n"));
        assert_eq!(csv.lines().count(), result.rows.len() + 1);
    }

    #[test]
    fn shallow_hierarchy_rejected() {
        let bitmap = Arc::new(sieve(512).unwrap());
        let chain = prime_chain(bitmap);
        let params = EncodingParams::new(3, 2, 512).unwrap();
        let h = build_hierarchy(&chain, &params).unwrap();
        assert!(matches!(reconstruct(&h, 255), Err(Error::Config(_))));
    }

    #[test]
    fn wide_pattern_hierarchy_rejected() {
        let bitmap = Arc::new(sieve(4096).unwrap());
        let chain = prime_chain(bitmap);
        let params = EncodingParams::new(4, 3, 4096).unwrap();
        let h = build_hierarchy(&chain, &params).unwrap();
        assert!(matches!(reconstruct(&h, 255), Err(Error::Config(_))));
    }
}
