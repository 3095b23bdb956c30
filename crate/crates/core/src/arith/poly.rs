//! Univariate polynomials over Q, dense ascending-coefficient form.

use super::{parse_rat, rat_str, Rat};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Polynomial over Q. Coefficients ascend by degree; the leading
/// coefficient of a nonzero polynomial is never zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| super::rat_i64(c)).collect())
    }

    /// The monomial X.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of X^i, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * super::rat_i64(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; divisor must be nonzero.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dn = d.degree().unwrap();
        let lead_inv = Rat::one() / d.leading().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dn {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dn];
        for i in (dn..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] * &lead_inv;
            rem[i] = Rat::zero();
            for (j, dc) in d.coeffs.iter().take(dn).enumerate() {
                let delta = &q * dc;
                rem[i - dn + j] -= delta;
            }
            quot[i - dn] = q;
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    /// Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        match a.leading() {
            Some(lead) => {
                let inv = Rat::one() / lead;
                a.scale(&inv)
            }
            None => a,
        }
    }

    /// Extended Euclid: returns (g, u, v) with u*self + v*other = g,
    /// g the monic gcd (or zero when both inputs are zero).
    pub(crate) fn xgcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (QPoly::constant(Rat::one()), QPoly::zero());
        let (mut v0, mut v1) = (QPoly::zero(), QPoly::constant(Rat::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            (r0, r1) = (r1, r);
            (u0, u1) = (u1.clone(), u0.sub(&q.mul(&u1)));
            (v0, v1) = (v1.clone(), v0.sub(&q.mul(&v1)));
        }
        if let Some(lead) = r0.leading() {
            let inv = Rat::one() / lead;
            (r0.scale(&inv), u0.scale(&inv), v0.scale(&inv))
        } else {
            (r0, u0, v0)
        }
    }

    /// Resultant Res(f, g) by the Euclidean recurrence
    /// Res(f, g) = (-1)^{mn} lc(g)^{m-k} Res(g, f mod g).
    pub fn resultant(&self, other: &QPoly) -> Rat {
        fn go(f: &QPoly, g: &QPoly) -> Rat {
            let m = match f.degree() {
                None => return Rat::zero(),
                Some(m) => m,
            };
            let n = match g.degree() {
                None => return Rat::zero(),
                Some(n) => n,
            };
            if n == 0 {
                return num_traits::pow::pow(g.coeff(0), m);
            }
            if m < n {
                let sign = if (m * n) % 2 == 1 { -Rat::one() } else { Rat::one() };
                return sign * go(g, f);
            }
            let r = f.rem(g);
            if r.is_zero() {
                return Rat::zero();
            }
            let k = r.degree().unwrap();
            let sign = if (m * n) % 2 == 1 { -Rat::one() } else { Rat::one() };
            sign * num_traits::pow::pow(g.leading().unwrap().clone(), m - k) * go(g, &r)
        }
        if self.is_zero() || other.is_zero() {
            return Rat::zero();
        }
        if self.degree() == Some(0) && other.degree() == Some(0) {
            return Rat::one();
        }
        go(self, other)
    }

    /// Smallest positive D with D*f integral, plus the integer coefficients of D*f.
    pub fn clear_denominators(&self) -> (BigInt, Vec<BigInt>) {
        let mut d = BigInt::one();
        for c in &self.coeffs {
            d = d.lcm(c.denom());
        }
        let ints = self
            .coeffs
            .iter()
            .map(|c| {
                let scaled = c * Rat::from_integer(d.clone());
                debug_assert!(scaled.denom().is_one());
                scaled.numer().clone()
            })
            .collect();
        (d, ints)
    }

    /// Largest absolute value among numerators and denominators, for sizing.
    pub fn height(&self) -> BigInt {
        let mut h = BigInt::one();
        for c in &self.coeffs {
            h = h.max(c.numer().abs()).max(c.denom().clone());
        }
        h
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rat_str).collect()
    }

    pub fn from_strings(strs: &[String]) -> Result<QPoly> {
        let coeffs = strs.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
        let p = QPoly::new(coeffs);
        if !p.is_zero() && p.coeffs.len() != strs.len() {
            return Err(Error::InvalidArgument(
                "leading coefficient of a serialized polynomial must be nonzero".into(),
            ));
        }
        Ok(p)
    }
}
