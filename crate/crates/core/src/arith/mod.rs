//! Exact arithmetic kernel: big rationals, integer valuations, CRT,
//! primality, polynomials over Q and over prime fields, and
//! continued-fraction rational reconstruction.
//!
//! Rationals are `num_rational::BigRational`, which already maintains the
//! canonical form this crate relies on (lowest terms, positive denominator,
//! zero as 0/1). The helpers here add the string format used by every JSON
//! interface ("num/den", always with an explicit denominator) and the
//! number-theoretic operations the rest of the crate needs.

mod modpoly;
mod poly;
mod primes;
mod reconstruct;

pub use modpoly::{roots_mod_p, ModPoly};
pub use poly::QPoly;
pub use primes::{is_prime, is_prime_u64, OddPrimes};
pub use reconstruct::rational_reconstruct;

use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational in canonical lowest terms.
pub type Rat = BigRational;

pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical string form "num/den", e.g. "5/8", "-1/2", "0/1".
pub fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses "num/den" or a bare integer "num" (denominator 1).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidArgument(format!("malformed rational {s:?}, expected \"num/den\""));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.trim().parse().map_err(|_| bad())?;
    let d: BigInt = den.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::InvalidArgument(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// p-adic valuation value; `Infinity` is the valuation of 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }
}

/// Exact p-adic valuation of a nonzero integer.
fn valuation_int(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0i64;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        n = q;
    }
}

/// Exact p-adic valuation of a rational, v(num) - v(den); v(0) is Infinity.
pub fn valuation_p(r: &Rat, p: &BigInt) -> Result<Valuation> {
    if p.sign() != num_bigint::Sign::Plus || !is_prime(&p.magnitude().clone()) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if r.is_zero() {
        return Ok(Valuation::Infinity);
    }
    Ok(Valuation::Finite(
        valuation_int(r.numer(), p) - valuation_int(r.denom(), p),
    ))
}

/// Unique x in [0, m1*m2) with x = r1 mod m1 and x = r2 mod m2.
/// The moduli must be coprime.
pub fn crt_pair(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Result<BigInt> {
    if m1.sign() != num_bigint::Sign::Plus || m2.sign() != num_bigint::Sign::Plus {
        return Err(Error::InvalidArgument("CRT moduli must be positive".into()));
    }
    let ext = m1.extended_gcd(m2);
    if !ext.gcd.is_one() {
        return Err(Error::InvalidArgument(format!(
            "CRT moduli {m1} and {m2} share the factor {}",
            ext.gcd
        )));
    }
    // x = r1 + m1 * ((r2 - r1) * m1^{-1} mod m2)
    let inv = ext.x.mod_floor(m2);
    let k = ((r2 - r1) * inv).mod_floor(m2);
    let m = m1 * m2;
    Ok((r1 + m1 * k).mod_floor(&m))
}

/// Modular inverse of a modulo m (coprime inputs).
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    let ext = a.extended_gcd(m);
    if !ext.gcd.is_one() {
        return Err(Error::InvalidArgument(format!(
            "{a} is not invertible modulo {m}"
        )));
    }
    Ok(ext.x.mod_floor(m))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn biguint(n: u64) -> BigUint {
    BigUint::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn branch_poly_n3() -> QPoly {
        // X^2 + X/2 + 5/8
        QPoly::new(vec![rat_frac(5, 8), rat_frac(1, 2), rat_i64(1)])
    }

    #[test]
    fn rational_strings_round_trip() {
        for s in ["5/8", "-1/2", "0/1", "804/1"] {
            assert_eq!(rat_str(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(rat_str(&parse_rat("804").unwrap()), "804/1");
        assert_eq!(rat_str(&parse_rat("6/4").unwrap()), "3/2");
        assert_eq!(rat_str(&parse_rat("5/-10").unwrap()), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
    }

    #[test]
    fn valuation_of_zero_is_infinite() {
        assert_eq!(valuation_p(&rat_i64(0), &big(5)).unwrap(), Valuation::Infinity);
    }

    #[test]
    fn valuation_rejects_composite_modulus() {
        assert!(valuation_p(&rat_i64(10), &big(6)).is_err());
        assert!(valuation_p(&rat_i64(10), &big(-5)).is_err());
    }

    #[test]
    fn valuation_at_the_certified_point() {
        // m(804) = 804^2 + 804/2 + 5/8 = 5174549/8 and 5174549 = 53 * 97633
        // with 53 not dividing 97633, so v_53 = 1.
        let m804 = branch_poly_n3().eval(&rat_i64(804));
        assert_eq!(m804, Rat::new(big(5174549), big(8)));
        assert_eq!(valuation_p(&m804, &big(53)).unwrap(), Valuation::Finite(1));
        // 804^2 + 1 = 646417 = 61 * 10597 with 61 not dividing 10597.
        let t2p1 = rat_i64(804 * 804 + 1);
        assert_eq!(valuation_p(&t2p1, &big(61)).unwrap(), Valuation::Finite(1));
    }

    #[test]
    fn valuation_sees_denominators() {
        assert_eq!(
            valuation_p(&rat_frac(5, 8), &big(2)).unwrap(),
            Valuation::Finite(-3)
        );
        assert_eq!(
            valuation_p(&rat_frac(50, 3), &big(5)).unwrap(),
            Valuation::Finite(2)
        );
    }

    #[test]
    fn crt_fixtures() {
        assert_eq!(crt_pair(&big(0), &big(1), &big(0), &big(1)).unwrap(), big(0));
        assert_eq!(crt_pair(&big(2), &big(3), &big(3), &big(5)).unwrap(), big(8));
        // 804 reduced mod 53^2 and 61^2 recombines to 804 mod 53^2*61^2.
        let (p2, q2) = (big(53 * 53), big(61 * 61));
        let x = crt_pair(&big(804 % 2809), &p2, &big(804 % 3721), &q2).unwrap();
        assert_eq!(x, big(804));
        assert!(crt_pair(&big(1), &big(6), &big(2), &big(4)).is_err());
    }

    #[test]
    fn mod_inverse_small() {
        assert_eq!(mod_inverse(&big(2), &big(53)).unwrap(), big(27));
        assert!(mod_inverse(&big(6), &big(9)).is_err());
    }

    proptest! {
        // v(ab) = v(a) + v(b), and v(a+b) >= min with equality when unique.
        #[test]
        fn valuation_is_additive(an in -2000i64..2000, ad in 1i64..500,
                                 bn in -2000i64..2000, bd in 1i64..500) {
            prop_assume!(an != 0 && bn != 0);
            let p = big(3);
            let (a, b) = (rat_frac(an, ad), rat_frac(bn, bd));
            let (va, vb) = match (valuation_p(&a, &p).unwrap(), valuation_p(&b, &p).unwrap()) {
                (Valuation::Finite(x), Valuation::Finite(y)) => (x, y),
                _ => unreachable!(),
            };
            let prod = valuation_p(&(&a * &b), &p).unwrap();
            prop_assert_eq!(prod, Valuation::Finite(va + vb));
            let sum = &a + &b;
            let vs = valuation_p(&sum, &p).unwrap();
            match vs {
                Valuation::Finite(v) => prop_assert!(v >= va.min(vb)),
                Valuation::Infinity => {}
            }
            if va != vb {
                prop_assert_eq!(vs, Valuation::Finite(va.min(vb)));
            }
        }

        // crt_pair agrees with a brute-force scan for small coprime moduli.
        #[test]
        fn crt_matches_brute_scan(r1 in 0i64..30, r2 in 0i64..30,
                                  i in 0usize..4, j in 0usize..4) {
            let ms = [3i64, 5, 7, 11];
            let (m1, m2) = (ms[i], ms[j]);
            prop_assume!(m1 != m2);
            let x = crt_pair(&big(r1 % m1), &big(m1), &big(r2 % m2), &big(m2)).unwrap();
            let brute = (0..m1 * m2)
                .find(|t| t % m1 == r1 % m1 && t % m2 == r2 % m2)
                .unwrap();
            prop_assert_eq!(x, big(brute));
        }
    }
}
