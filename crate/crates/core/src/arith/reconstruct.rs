//! Best rational approximation under a denominator bound, by continued
//! fractions. Input values arrive as exact rationals (callers convert
//! binary floating values exactly, mantissa times a power of two), so the
//! continued fraction expansion is computed with integer arithmetic only.

use super::Rat;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// The rational p/q with 1 <= q <= den_bound closest to x. The result must
/// additionally lie within `tol` of x, otherwise reconstruction fails; the
/// double gate (denominator bound and tolerance) keeps accidental nearby
/// rationals from slipping through.
pub fn rational_reconstruct(x: &Rat, den_bound: &BigInt, tol: &Rat) -> Result<Rat> {
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if den_bound < &BigInt::one() {
        return Err(Error::InvalidArgument(
            "denominator bound must be at least 1".into(),
        ));
    }
    let negative = x.is_negative();
    let y = x.abs();
    let best = best_abs(&y, den_bound);
    let signed = if negative { -best } else { best };
    if (x - &signed).abs() < *tol {
        Ok(signed)
    } else {
        Err(Error::ReconstructionFailed(format!(
            "nearest rational with denominator <= {den_bound} misses the tolerance"
        )))
    }
}

// Best approximation to a nonnegative rational y with denominator <= bound.
// Walks the continued fraction; when a convergent's denominator overflows the
// bound, the answer is either the previous convergent or the largest
// semiconvergent that still fits, whichever is closer.
fn best_abs(y: &Rat, bound: &BigInt) -> Rat {
    let (mut n, mut d) = (y.numer().clone(), y.denom().clone());
    // convergents h/k; (h1, k1) is the latest within the bound
    let (mut h2, mut k2) = (BigInt::one(), BigInt::zero());
    let (mut h1, mut k1) = (y.numer().div_floor(y.denom()), BigInt::one());
    let a0 = h1.clone();
    let r0 = &n - &a0 * &d;
    if r0.is_zero() {
        return Rat::from_integer(a0);
    }
    n = d;
    d = r0;
    loop {
        let a = n.div_floor(&d);
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        if &k > bound {
            // largest semiconvergent a' <= a with a'*k1 + k2 <= bound
            let a_semi = (bound - &k2).div_floor(&k1);
            let conv = Rat::new(h1.clone(), k1.clone());
            if a_semi.is_positive() {
                let semi = Rat::new(&a_semi * &h1 + &h2, &a_semi * &k1 + &k2);
                if (y - &semi).abs() < (y - &conv).abs() {
                    return semi;
                }
            }
            return conv;
        }
        let r = &n - &a * &d;
        (h2, k2) = (h1, k1);
        (h1, k1) = (h, k);
        if r.is_zero() {
            return Rat::new(h1, k1); // exact
        }
        n = d;
        d = r;
    }
}

#[cfg(test)]
mod tests {
    use super::super::{big, rat_frac, rat_i64};
    use super::*;
    use proptest::prelude::*;

    fn tol(num: i64, den_pow10: u32) -> Rat {
        Rat::new(big(num), BigInt::from(10u64).pow(den_pow10))
    }

    #[test]
    fn exact_dyadic_fixtures() {
        // 0.625 with room to spare
        let x = rat_frac(5, 8);
        assert_eq!(rational_reconstruct(&x, &big(16), &tol(1, 10)).unwrap(), rat_frac(5, 8));
        // 0.4999999999999 snaps to 1/2 under a tight denominator bound
        let x = Rat::new(big(4999999999999), BigInt::from(10u64).pow(13));
        assert_eq!(rational_reconstruct(&x, &big(10), &tol(1, 6)).unwrap(), rat_frac(1, 2));
        // but the same value is NOT within 1e-20 of anything with small denominator
        assert!(rational_reconstruct(&x, &big(10), &tol(1, 20)).is_err());
    }

    #[test]
    fn zero_and_integers() {
        assert_eq!(rational_reconstruct(&rat_i64(0), &big(1), &tol(1, 6)).unwrap(), rat_i64(0));
        assert_eq!(rational_reconstruct(&rat_i64(-7), &big(1), &tol(1, 6)).unwrap(), rat_i64(-7));
    }

    #[test]
    fn negative_values_mirror_positive_ones() {
        let x = rat_frac(-13, 11);
        assert_eq!(
            rational_reconstruct(&x, &big(11), &tol(1, 10)).unwrap(),
            rat_frac(-13, 11)
        );
    }

    #[test]
    fn semiconvergent_beats_last_convergent_when_closer() {
        // pi has convergents 3, 22/7, 333/106, 355/113; a bound of 90 falls
        // between two of them, forcing the semiconvergent logic to decide.
        let pi = Rat::new(big(314159265358979), BigInt::from(10u64).pow(14));
        let got = rational_reconstruct(&pi, &big(90), &rat_frac(1, 100)).unwrap();
        // brute force the truth
        let mut best = rat_i64(3);
        for q in 1..=90i64 {
            let p = (&pi * rat_i64(q)).round();
            let cand = Rat::new(p.numer().clone(), big(q));
            if (&pi - &cand).abs() < (&pi - &best).abs() {
                best = cand;
            }
        }
        assert_eq!(got, best);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(rational_reconstruct(&rat_i64(1), &big(0), &tol(1, 6)).is_err());
        assert!(rational_reconstruct(&rat_i64(1), &big(4), &rat_i64(0)).is_err());
    }

    proptest! {
        // Any rational with denominator within the bound survives a round trip
        // when represented exactly.
        #[test]
        fn round_trips_exact_rationals(n in -100000i64..100000, d in 1i64..1000) {
            let x = rat_frac(n, d);
            let got = rational_reconstruct(&x, &big(1000), &tol(1, 12)).unwrap();
            prop_assert_eq!(got, x);
        }

        // The result is never beaten by another rational under the same bound
        // (checked by brute force over small denominators).
        #[test]
        fn optimality_under_small_bounds(n in -10000i64..10000, d in 1i64..5000, bound in 1i64..40) {
            let x = rat_frac(n, d);
            match rational_reconstruct(&x, &big(bound), &rat_frac(1, 1)) {
                Ok(got) => {
                    for q in 1..=bound {
                        let p = (&x * rat_i64(q)).round();
                        let cand = Rat::new(p.numer().clone(), big(q));
                        prop_assert!(
                            (&x - &got).abs() <= (&x - &cand).abs(),
                            "{}/{} beaten by {} under bound {}", n, d, cand, bound
                        );
                    }
                }
                Err(_) => prop_assert!(false, "tolerance 1 cannot fail for |x| bounded"),
            }
        }
    }
}
