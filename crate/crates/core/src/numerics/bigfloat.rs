//! Binary floating-point numbers with arbitrary mantissa width.

use crate::arith::Rat;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// A real number mantissa * 2^exp with |mantissa| < 2^prec after every
/// operation. Zero is canonical: mantissa 0, exp 0. Addition and
/// multiplication round an exact intermediate to nearest, ties to even;
/// division and square root are correct to within one unit in the last
/// place, which the 2^(-prec/2) consumers never notice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    mantissa: BigInt,
    exp: i64,
    prec: u32,
}

/// Truncating division with a sticky bit: an inexact quotient gets its low
/// bit forced to 1 so a later round-to-nearest never misreads a near-tie.
fn div_sticky(num: &BigInt, den: &BigInt) -> BigInt {
    use num_integer::Integer;
    let (q, r) = num.magnitude().div_rem(den.magnitude());
    let q = if r.is_zero() { q } else { q | BigUint::one() };
    BigInt::from_biguint(num.sign() * den.sign(), q)
}

/// Round-to-nearest, ties to even, dropping `shift` low bits.
fn round_shift(man: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return man.clone();
    }
    let mag = man.magnitude();
    let mut out: BigUint = mag >> shift;
    let top_dropped = (mag >> (shift - 1)) & BigUint::one() == BigUint::one();
    if top_dropped {
        let mask = (BigUint::one() << (shift - 1)) - BigUint::one();
        let lower_nonzero = !(mag & mask).is_zero();
        let odd = (&out & BigUint::one()) == BigUint::one();
        if lower_nonzero || odd {
            out += BigUint::one();
        }
    }
    BigInt::from_biguint(man.sign(), out)
}

impl BigFloat {
    fn normalized(mantissa: BigInt, exp: i64, prec: u32) -> Self {
        assert!(prec >= 8, "mantissa budget too small");
        if mantissa.is_zero() {
            return BigFloat {
                mantissa,
                exp: 0,
                prec,
            };
        }
        let bits = mantissa.bits();
        if bits <= prec as u64 {
            return BigFloat {
                mantissa,
                exp,
                prec,
            };
        }
        let shift = bits - prec as u64;
        let rounded = round_shift(&mantissa, shift);
        // rounding may carry into one extra bit
        Self::normalized(rounded, exp + shift as i64, prec)
    }

    pub fn zero(prec: u32) -> Self {
        Self::normalized(BigInt::zero(), 0, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::normalized(BigInt::from(v), 0, prec)
    }

    /// 2^e at the given precision, exact.
    pub fn pow2(e: i64, prec: u32) -> Self {
        Self::normalized(BigInt::one(), e, prec)
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero(prec);
        }
        let num = r.numer();
        let den = r.denom();
        let target = prec as i64 + 2;
        let s = target - (num.bits() as i64 - den.bits() as i64);
        let (q, exp) = if s >= 0 {
            (div_sticky(&(num << s as u64), den), -s)
        } else {
            (div_sticky(num, &(den << (-s) as u64)), -s)
        };
        Self::normalized(q, exp, prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite());
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Self::normalized(BigInt::from(sign) * BigInt::from(man), exp, prec)
    }

    /// Exact value as a rational; never lossy.
    pub fn to_rat(&self) -> Rat {
        if self.exp >= 0 {
            Rat::from(&self.mantissa << self.exp as u64)
        } else {
            Rat::new(self.mantissa.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest f64; infinite on exponent overflow.
    pub fn to_f64(&self) -> f64 {
        if self.mantissa.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 53).max(0);
        let top = round_shift(&self.mantissa, drop as u64)
            .to_f64()
            .expect("54-bit integer fits in f64");
        top * 2f64.powi((self.exp + drop).clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Round to a new mantissa budget.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::normalized(self.mantissa.clone(), self.exp, prec)
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -&self.mantissa,
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return other.with_prec(prec);
        }
        if other.is_zero() {
            return self.with_prec(prec);
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mantissa << (self.exp - exp) as u64;
        let b = &other.mantissa << (other.exp - exp) as u64;
        Self::normalized(a + b, exp, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalized(
            &self.mantissa * &other.mantissa,
            self.exp + other.exp,
            self.prec.min(other.prec),
        )
    }

    /// Multiply by an exact power of two.
    pub fn mul_pow2(&self, e: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            mantissa: self.mantissa.clone(),
            exp: self.exp + e,
            prec: self.prec,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let target = prec as i64 + 2;
        let s = (target - (self.mantissa.bits() as i64 - other.mantissa.bits() as i64)).max(0);
        let q = div_sticky(&(&self.mantissa << s as u64), &other.mantissa);
        Self::normalized(q, self.exp - other.exp - s, prec)
    }

    /// Square root of a nonnegative value, correct to ~1 ulp.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative value");
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.prec;
        // scale mantissa so the integer square root carries prec + 2 bits
        let target = 2 * (prec as i64 + 2);
        let mut s = (target - self.mantissa.bits() as i64).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let scaled: BigInt = &self.mantissa << s as u64;
        let root = scaled.sqrt();
        let root = if &root * &root == scaled {
            root
        } else {
            root | BigInt::one()
        };
        Self::normalized(root, (self.exp - s) / 2, prec)
    }

    /// Total order on exact values, independent of precision.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let lhs_sign = self.mantissa.sign();
        let rhs_sign = other.mantissa.sign();
        if lhs_sign != rhs_sign {
            return lhs_sign.cmp(&rhs_sign);
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mantissa << (self.exp - exp) as u64;
        let b = &other.mantissa << (other.exp - exp) as u64;
        a.cmp(&b)
    }

    /// Conservative magnitude test: true guarantees |self| < 2^e.
    pub fn abs_lt_pow2(&self, e: i64) -> bool {
        self.is_zero() || (self.mantissa.bits() as i64 + self.exp) <= e
    }

    /// Exponent bound: |self| < 2^(magnitude_exponent()), None for zero.
    pub fn magnitude_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mantissa.bits() as i64 + self.exp)
        }
    }

    /// Decimal scientific form with the given significant digits, exact
    /// decision at every step so equal values format identically.
    pub fn to_scientific(&self, sig_digits: u32) -> String {
        assert!(sig_digits >= 1);
        if self.is_zero() {
            return "0".into();
        }
        let v = self.to_rat().abs();
        // locate e10 with 10^e10 <= v < 10^(e10+1), starting from a float guess
        let guess = ((self.mantissa.bits() as f64 + self.exp as f64) * std::f64::consts::LOG10_2)
            .floor() as i64;
        let mut e10 = guess;
        let pow10 = |e: i64| -> Rat {
            let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
            if e >= 0 {
                Rat::from(p)
            } else {
                Rat::new(BigInt::one(), p)
            }
        };
        while v < pow10(e10) {
            e10 -= 1;
        }
        while v >= pow10(e10 + 1) {
            e10 += 1;
        }
        // round to sig_digits digits
        let scaled = &v * pow10(sig_digits as i64 - 1 - e10);
        let mut digits = (scaled + Rat::new(BigInt::one(), BigInt::from(2))).floor().numer().clone();
        let cap = BigInt::from(10u32).pow(sig_digits);
        if digits >= cap {
            digits /= BigInt::from(10u32);
            e10 += 1;
        }
        let ds = digits.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        if sig_digits == 1 {
            format!("{sign}{ds}e{e10}")
        } else {
            format!("{sign}{}.{}e{e10}", &ds[..1], &ds[1..])
        }
    }
}
