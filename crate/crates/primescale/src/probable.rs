//! Probabilistic primality for arbitrary-precision integers: trial
//! division by a fixed table of small primes, then strong-probable-prime
//! rounds with a deterministic witness schedule (the first `rounds`
//! primes as bases), so repeated runs always agree.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::sieve::small_odd_primes;

/// Default number of strong-probable-prime rounds; the false-positive
/// bound 4^-32 is far below anything the analyses could notice.
pub const DEFAULT_ROUNDS: u32 = 32;

// Trial divisors: 2 plus every odd prime below 3600 (503 primes). Any
// value below TRIAL_DETERMINED with no divisor here is certainly prime.
static TRIAL_PRIMES: Lazy<Vec<u64>> = Lazy::new(|| {
    let mut v = vec![2u64];
    v.extend(small_odd_primes(3599));
    v
});

static TRIAL_DETERMINED: Lazy<u64> = Lazy::new(|| {
    let last = *TRIAL_PRIMES.last().unwrap();
    last * last
});

/// A Mersenne-adjacent candidate 2^exponent - offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BigIntCandidate {
    pub exponent: u64,
    pub offset: u8,
}

impl BigIntCandidate {
    pub fn new(exponent: u64, offset: u8) -> Self {
        assert!(
            (offset as u64) < (1u64 << exponent.min(63)),
            "offset {offset} not below 2^{exponent}"
        );
        Self { exponent, offset }
    }

    pub fn value(&self) -> BigUint {
        (BigUint::one() << self.exponent) - self.offset
    }
}

/// Strong-probable-prime test with a fixed witness schedule.
///
/// Composites caught by trial division or by a witness are certainly
/// composite; "true" on a composite has probability at most 4^-rounds.
/// Values small enough for trial division to settle are answered
/// exactly.
pub fn is_probable_prime(value: &BigUint, rounds: u32) -> bool {
    if value.to_u64().is_some_and(|v| v < 2) {
        return false;
    }

    if let Some(v) = value.to_u64() {
        for &p in TRIAL_PRIMES.iter() {
            if v == p {
                return true;
            }
            if p * p > v {
                return true;
            }
            if v % p == 0 {
                return false;
            }
        }
        if v < *TRIAL_DETERMINED {
            return true;
        }
    } else {
        for &p in TRIAL_PRIMES.iter() {
            if (value % p).is_zero() {
                return false;
            }
        }
    }

    strong_probable_prime_rounds(value, rounds)
}

fn strong_probable_prime_rounds(n: &BigUint, rounds: u32) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u8);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n is odd and > 2");
    let d = &n_minus_1 >> s;

    let witnesses = TRIAL_PRIMES
        .iter()
        .take(rounds.max(1) as usize)
        .map(|&p| BigUint::from(p));

    'witness: for a in witnesses {
        // n exceeds the trial-division square here, so every base is < n
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
