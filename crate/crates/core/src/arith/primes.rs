//! Primality testing and an ascending odd-prime iterator.
//!
//! Below 2^64 the Miller-Rabin bases {2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
//! 31, 37} are a proven deterministic witness set. Above 2^64 the test is
//! probabilistic with 40 rounds; the bases are derived from the input by a
//! fixed splitmix step so repeated calls agree.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

// One Miller-Rabin round; true means "probably prime for this base".
fn mr_round_u64(n: u64, base: u64) -> bool {
    let base = base % n;
    if base == 0 {
        return true;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = powmod_u64(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    DETERMINISTIC_BASES.iter().all(|&b| mr_round_u64(n, b))
}

fn mr_round_big(n: &BigUint, base: &BigUint) -> bool {
    let base = base % n;
    if base.is_zero() {
        return true;
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().expect("n > 2 is odd here");
    let d = &nm1 >> s;
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Primality test: deterministic below 2^64, 40 Miller-Rabin rounds above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for p in SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    // Deterministic per input: seed the base stream from the low bits.
    let mut state = n.iter_u64_digits().next().unwrap_or(1) ^ 0xa076_1d64_78bd_642f;
    let span = n - 3u32;
    (0..40).all(|_| {
        let raw = BigUint::from(splitmix(&mut state));
        let base = (raw % &span) + 2u32; // in [2, n-2]
        mr_round_big(n, &base)
    })
}

/// Ascending iterator over odd primes 3, 5, 7, 11, ...
pub struct OddPrimes {
    next: u64,
}

impl OddPrimes {
    pub fn new() -> Self {
        OddPrimes { next: 3 }
    }

    /// Starts at the first odd prime >= lo.
    pub fn from(lo: u64) -> Self {
        OddPrimes {
            next: lo.max(3) | 1,
        }
    }
}

impl Default for OddPrimes {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for OddPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            let c = self.next;
            self.next = c.checked_add(2)?;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
    }
}
