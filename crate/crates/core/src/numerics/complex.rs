//! Complex numbers over BigFloat parts.

use super::bigfloat::BigFloat;
use crate::arith::Rat;

/// Complex value; both parts always carry the same precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct APComplex {
    re: BigFloat,
    im: BigFloat,
}

impl APComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        let prec = re.precision().min(im.precision());
        APComplex {
            re: re.with_prec(prec),
            im: im.with_prec(prec),
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(BigFloat::zero(prec), BigFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_real(BigFloat::from_i64(1, prec))
    }

    pub fn from_real(re: BigFloat) -> Self {
        let prec = re.precision();
        Self::new(re, BigFloat::zero(prec))
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        Self::from_real(BigFloat::from_rat(r, prec))
    }

    pub fn from_f64_parts(re: f64, im: f64, prec: u32) -> Self {
        Self::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec))
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn precision(&self) -> u32 {
        self.re.precision()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.re.add(&other.re), self.im.add(&other.im))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.re.sub(&other.re), self.im.sub(&other.im))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        Self::new(re, im)
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        Self::new(self.re.mul(s), self.im.mul(s))
    }

    pub fn div(&self, other: &Self) -> Self {
        let d = other.abs2();
        assert!(!d.is_zero(), "complex division by zero");
        let re = self.re.mul(&other.re).add(&self.im.mul(&other.im));
        let im = self.im.mul(&other.re).sub(&self.re.mul(&other.im));
        Self::new(re.div(&d), im.div(&d))
    }

    /// |z|^2, exact-then-rounded.
    pub fn abs2(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> BigFloat {
        self.abs2().sqrt()
    }

    pub fn powi(&self, e: u64) -> Self {
        let mut base = self.clone();
        let mut out = Self::one(self.precision());
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Conservative: true guarantees |z| < 2^e.
    pub fn abs_lt_pow2(&self, e: i64) -> bool {
        // |z| <= |re| + |im| < 2^(max+1)
        self.re.abs_lt_pow2(e - 1) && self.im.abs_lt_pow2(e - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_frac, rat_i64};

    fn c(re: i64, im: i64) -> APComplex {
        APComplex::new(BigFloat::from_i64(re, 192), BigFloat::from_i64(im, 192))
    }

    #[test]
    fn ring_ops() {
        let a = c(3, -2);
        let b = c(-1, 4);
        assert_eq!(a.add(&b), c(2, 2));
        assert_eq!(a.sub(&b), c(4, -6));
        // (3 - 2i)(-1 + 4i) = -3 + 12i + 2i + 8 = 5 + 14i
        assert_eq!(a.mul(&b), c(5, 14));
        assert_eq!(a.conj().mul(&a).re().to_rat(), rat_i64(13));
        assert_eq!(a.abs2().to_rat(), rat_i64(13));
    }

    #[test]
    fn division_round_trips() {
        let a = c(3, -2);
        let b = c(-1, 4);
        let q = a.mul(&b).div(&b);
        assert!(q.sub(&a).abs_lt_pow2(-180));
        let inv = APComplex::one(192).div(&b);
        // 1/(-1+4i) = (-1-4i)/17
        assert!(inv
            .sub(&APComplex::new(
                BigFloat::from_rat(&rat_frac(-1, 17), 192),
                BigFloat::from_rat(&rat_frac(-4, 17), 192)
            ))
            .abs_lt_pow2(-185));
    }

    #[test]
    fn integer_powers() {
        assert_eq!(c(1, 1).powi(4), c(-4, 0));
        assert_eq!(c(0, 1).powi(3), c(0, -1));
        assert_eq!(c(5, -7).powi(0), APComplex::one(192));
        assert_eq!(c(2, 1).powi(5), c(2, 1).mul(&c(2, 1)).mul(&c(2, 1)).mul(&c(2, 1)).mul(&c(2, 1)));
    }
}
