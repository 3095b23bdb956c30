//! Polynomials over F_p and distinct-degree factorization.
//!
//! Only factor degrees are ever needed (they are the Frobenius cycle data),
//! so there is no equal-degree splitting and nothing here is randomized.

use super::QPoly;
use crate::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Dense polynomial over F_p, ascending coefficients reduced into [0, p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    p: BigUint,
    coeffs: Vec<BigUint>,
}

impl ModPoly {
    pub fn new(p: BigUint, mut coeffs: Vec<BigUint>) -> Self {
        for c in &mut coeffs {
            *c %= &p;
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    /// Reduces a rational polynomial mod p. Every coefficient denominator
    /// must be a unit mod p; otherwise the prime is ramified in the
    /// denominator structure and unusable.
    pub fn from_qpoly(f: &QPoly, p: &BigUint) -> Result<ModPoly> {
        let pi = num_bigint::BigInt::from(p.clone());
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| {
                if c.denom().mod_floor(&pi).is_zero() {
                    return Err(Error::RamifiedPrime(format!(
                        "{p} divides a coefficient denominator"
                    )));
                }
                let num = c.numer().mod_floor(&pi).to_biguint().expect("mod_floor is nonnegative");
                let den = c.denom().mod_floor(&pi).to_biguint().expect("mod_floor is nonnegative");
                let den_inv = den.modpow(&(p - 2u32), p); // p prime, den a unit
                Ok((num * den_inv) % p)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModPoly::new(p.clone(), coeffs))
    }

    pub fn zero(p: &BigUint) -> Self {
        ModPoly {
            p: p.clone(),
            coeffs: vec![],
        }
    }

    /// The monomial X over F_p.
    pub fn x(p: &BigUint) -> Self {
        ModPoly::new(p.clone(), vec![BigUint::zero(), BigUint::one()])
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    fn coeff(&self, i: usize) -> BigUint {
        self.coeffs.get(i).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| (self.coeff(i) + &self.p - other.coeff(i)) % &self.p)
            .collect();
        ModPoly::new(self.p.clone(), coeffs)
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(&self.p);
        }
        let mut out = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ModPoly::new(self.p.clone(), out)
    }

    /// Remainder of self by a nonzero divisor.
    pub fn rem(&self, d: &ModPoly) -> ModPoly {
        debug_assert_eq!(self.p, d.p);
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dn = d.degree().unwrap();
        let lead_inv = d.coeffs[dn].modpow(&(&self.p - 2u32), &self.p);
        let mut rem = self.coeffs.clone();
        let mut i = rem.len();
        while i > dn {
            i -= 1;
            let top = std::mem::replace(&mut rem[i], BigUint::zero()) % &self.p;
            if top.is_zero() {
                continue;
            }
            let q = (top * &lead_inv) % &self.p;
            for (j, dc) in d.coeffs.iter().take(dn).enumerate() {
                let sub = (&q * dc) % &self.p;
                let cell = &mut rem[i - dn + j];
                *cell = (&*cell + &self.p - sub) % &self.p;
            }
        }
        rem.truncate(dn);
        ModPoly::new(self.p.clone(), rem)
    }

    pub fn make_monic(&self) -> ModPoly {
        match self.degree() {
            None => self.clone(),
            Some(dn) => {
                let inv = self.coeffs[dn].modpow(&(&self.p - 2u32), &self.p);
                let coeffs = self.coeffs.iter().map(|c| (c * &inv) % &self.p).collect();
                ModPoly::new(self.p.clone(), coeffs)
            }
        }
    }

    /// Monic gcd over F_p.
    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn derivative(&self) -> ModPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| (c * BigUint::from(i)) % &self.p)
            .collect();
        ModPoly::new(self.p.clone(), coeffs)
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => true,
            _ => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// self^exp modulo f, by square and multiply.
    pub fn pow_mod(&self, exp: &BigUint, f: &ModPoly) -> ModPoly {
        assert!(
            f.degree().is_some_and(|d| d >= 1),
            "pow_mod modulus must have positive degree"
        );
        let mut result = ModPoly::new(self.p.clone(), vec![BigUint::one()]);
        let mut base = self.rem(f);
        let mut e = exp.clone();
        while !e.is_zero() {
            if e.is_odd() {
                result = result.mul(&base).rem(f);
            }
            base = base.mul(&base).rem(f);
            e >>= 1;
        }
        result
    }

    /// Distinct-degree factorization pattern of a squarefree polynomial:
    /// map from factor degree d to the number of irreducible factors of
    /// degree d. The degree-weighted count always sums to deg f.
    pub fn ddf_degree_pattern(&self) -> Result<BTreeMap<usize, usize>> {
        let deg = self.degree().ok_or_else(|| {
            Error::InvalidArgument("degree pattern of the zero polynomial".into())
        })?;
        if !self.is_squarefree() {
            return Err(Error::RamifiedPrime(format!(
                "not squarefree mod {}",
                self.p
            )));
        }
        let mut pattern = BTreeMap::new();
        if deg == 0 {
            return Ok(pattern);
        }
        let mut f_star = self.make_monic();
        let x = ModPoly::x(&self.p);
        // h tracks X^(p^d) mod f_star; the Frobenius is iterated by powering.
        let mut h = x.pow_mod(&self.p.clone(), &f_star);
        let mut d = 1usize;
        while 2 * d <= f_star.degree().unwrap_or(0) {
            let g = h.sub(&x).gcd(&f_star);
            if let Some(gd) = g.degree() {
                if gd > 0 {
                    debug_assert_eq!(gd % d, 0);
                    *pattern.entry(d).or_insert(0) += gd / d;
                    f_star = divide_exact(&f_star, &g);
                    h = h.rem(&f_star);
                }
            }
            if f_star.degree() == Some(0) {
                break;
            }
            d += 1;
            h = h.pow_mod(&self.p.clone(), &f_star);
        }
        if let Some(rd) = f_star.degree() {
            if rd > 0 {
                *pattern.entry(rd).or_insert(0) += 1;
            }
        }
        debug_assert_eq!(pattern.iter().map(|(d, c)| d * c).sum::<usize>(), deg);
        Ok(pattern)
    }
}

fn divide_exact(f: &ModPoly, g: &ModPoly) -> ModPoly {
    // long division restricted to the exact case
    let p = f.modulus().clone();
    let dn = g.degree().unwrap();
    let lead_inv = g.coeffs[dn].modpow(&(&p - 2u32), &p);
    let mut rem = f.coeffs.clone();
    let mut quot = vec![BigUint::zero(); rem.len().saturating_sub(dn)];
    let mut i = rem.len();
    while i > dn {
        i -= 1;
        let top = std::mem::replace(&mut rem[i], BigUint::zero()) % &p;
        if top.is_zero() {
            continue;
        }
        let q = (top * &lead_inv) % &p;
        for (j, dc) in g.coeffs.iter().take(dn).enumerate() {
            let sub = (&q * dc) % &p;
            let cell = &mut rem[i - dn + j];
            *cell = (&*cell + &p - sub) % &p;
        }
        quot[i - dn] = q;
    }
    debug_assert!(rem.iter().take(dn).all(Zero::is_zero), "inexact division");
    ModPoly::new(p, quot)
}

/// All residues r in [0, p) with f(r) = 0 mod p, ascending. Requires an odd
/// prime p not dividing any coefficient denominator. The linear-factor part
/// is isolated with gcd(X^p - X, f) first, then its few roots are located by
/// direct evaluation, so p is capped to keep the scan bounded.
pub fn roots_mod_p(f: &QPoly, p: &BigUint) -> Result<Vec<u64>> {
    const SCAN_CAP: u64 = 1 << 26;
    let pu = p
        .to_u64()
        .filter(|&v| v < SCAN_CAP)
        .ok_or_else(|| Error::InvalidArgument(format!("prime {p} exceeds the root-scan cap")))?;
    if pu < 3 || !super::is_prime_u64(pu) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    let fp = match ModPoly::from_qpoly(f, p) {
        Err(Error::RamifiedPrime(msg)) => return Err(Error::InvalidArgument(msg)),
        other => other?,
    };
    match fp.degree() {
        None => {
            return Err(Error::InvalidArgument(
                "root finding on a polynomial that vanishes mod p".into(),
            ))
        }
        Some(0) => return Ok(vec![]),
        Some(_) => {}
    }
    // product of the distinct linear factors; X^p - X is the product of all
    // linear polynomials over F_p, so the gcd shrinks the scan target
    let x = ModPoly::x(p);
    let xp = x.pow_mod(p, &fp);
    let linear_part = xp.sub(&x).gcd(&fp);
    let nroots = match linear_part.degree() {
        None | Some(0) => return Ok(vec![]),
        Some(d) => d,
    };
    let g: Vec<u64> = linear_part
        .coeffs()
        .iter()
        .map(|c| c.to_u64().expect("reduced below the cap"))
        .collect();
    let mut roots = Vec::with_capacity(nroots);
    for r in 0..pu {
        let mut acc: u64 = 0;
        for c in g.iter().rev() {
            acc = ((acc as u128 * r as u128 + *c as u128) % pu as u128) as u64;
        }
        if acc == 0 {
            roots.push(r);
            if roots.len() == nroots {
                break;
            }
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::super::{rat_frac, rat_i64};
    use super::*;
    use crate::arith::biguint;

    fn mp(p: u64, coeffs: &[u64]) -> ModPoly {
        ModPoly::new(biguint(p), coeffs.iter().map(|&c| biguint(c)).collect())
    }

    #[test]
    fn reduction_and_denominators() {
        // X^2 + X/2 + 5/8 mod 53 is x^2 + 27x + 47 (inverse of 8 is 20: 8*20=160=3*53+1)
        let f = QPoly::new(vec![rat_frac(5, 8), rat_frac(1, 2), rat_i64(1)]);
        let fp = ModPoly::from_qpoly(&f, &biguint(53)).unwrap();
        assert_eq!(fp, mp(53, &[47, 27, 1]));
        assert!(matches!(
            ModPoly::from_qpoly(&f, &biguint(2)),
            Err(crate::Error::RamifiedPrime(_))
        ));
    }

    #[test]
    fn gcd_and_rem() {
        // (X^2 + 1)(X + 1) and (X + 1) share X + 1 mod 7
        let f = mp(7, &[1, 1, 1, 1]);
        let g = mp(7, &[1, 1]);
        assert_eq!(f.gcd(&g), mp(7, &[1, 1]));
        assert_eq!(f.rem(&g), ModPoly::zero(&biguint(7)));
        assert_eq!(mp(7, &[3, 0, 1]).rem(&mp(7, &[6, 1])), mp(7, &[4]));
    }

    #[test]
    fn pow_mod_reduces_like_fermat_on_linear_moduli() {
        // X^p mod (X - a) is the constant a^p = a
        for a in 0u64..7 {
            let f = mp(7, &[7 - a, 1]);
            let xp = ModPoly::x(&biguint(7)).pow_mod(&biguint(7), &f);
            assert_eq!(xp, mp(7, &[a % 7]));
        }
    }

    #[test]
    fn ddf_fixtures() {
        // X^2+1 splits mod 5, stays irreducible mod 7, and X^4+1 is two quadratics mod 3.
        let sq = |pairs: &[(usize, usize)]| pairs.iter().cloned().collect::<BTreeMap<_, _>>();
        assert_eq!(mp(5, &[1, 0, 1]).ddf_degree_pattern().unwrap(), sq(&[(1, 2)]));
        assert_eq!(mp(7, &[1, 0, 1]).ddf_degree_pattern().unwrap(), sq(&[(2, 1)]));
        assert_eq!(
            mp(3, &[1, 0, 0, 0, 1]).ddf_degree_pattern().unwrap(),
            sq(&[(2, 2)])
        );
        // X^8 - 2 mod 5 is irreducible; mod 7 it is 1,1,2,2,2; mod 3 it is 4,4.
        let f = QPoly::from_i64(&[-2, 0, 0, 0, 0, 0, 0, 0, 1]);
        let pat = ModPoly::from_qpoly(&f, &biguint(5)).unwrap().ddf_degree_pattern().unwrap();
        assert_eq!(pat, sq(&[(8, 1)]));
        let pat = ModPoly::from_qpoly(&f, &biguint(7)).unwrap().ddf_degree_pattern().unwrap();
        assert_eq!(pat, sq(&[(1, 2), (2, 3)]));
        let pat = ModPoly::from_qpoly(&f, &biguint(3)).unwrap().ddf_degree_pattern().unwrap();
        assert_eq!(pat, sq(&[(4, 2)]));
    }

    #[test]
    fn ddf_rejects_squarefull_input() {
        // (X+1)^2 mod 5
        assert!(matches!(
            mp(5, &[1, 2, 1]).ddf_degree_pattern(),
            Err(crate::Error::RamifiedPrime(_))
        ));
    }

    #[test]
    fn ddf_agrees_with_exhaustive_factorization_for_small_degrees() {
        // Oracle: trial division by every monic polynomial of smaller degree,
        // fully independent of the gcd machinery.
        for &p in &[3u64, 5, 7] {
            for f in all_monic(p, 4) {
                let fp = mp(p, &f);
                if !fp.is_squarefree() {
                    continue;
                }
                let got = fp.ddf_degree_pattern().unwrap();
                let want = exhaustive_pattern(p, &f);
                assert_eq!(got, want, "p={p} f={f:?}");
            }
        }
    }

    // the enumeration helpers for the exhaustive oracle

    fn all_monic(p: u64, deg: usize) -> Vec<Vec<u64>> {
        let mut out = vec![];
        let total = (p as usize).pow(deg as u32);
        for idx in 0..total {
            let mut f = Vec::with_capacity(deg + 1);
            let mut rest = idx;
            for _ in 0..deg {
                f.push((rest % p as usize) as u64);
                rest /= p as usize;
            }
            f.push(1);
            out.push(f);
        }
        out
    }

    fn exhaustive_pattern(p: u64, f: &[u64]) -> BTreeMap<usize, usize> {
        // divide out irreducibles in ascending degree order
        let mut pattern = BTreeMap::new();
        let mut remaining = f.to_vec();
        let irreducibles = irreducibles_up_to(p, 4);
        for cand in irreducibles {
            while remaining.len() > 1 && divides(p, &cand, &remaining) {
                *pattern.entry(cand.len() - 1).or_insert(0) += 1;
                remaining = quotient(p, &remaining, &cand);
            }
        }
        assert_eq!(remaining, vec![1], "leftover factor in oracle");
        pattern
    }

    fn irreducibles_up_to(p: u64, deg: usize) -> Vec<Vec<u64>> {
        let mut irr: Vec<Vec<u64>> = vec![];
        for d in 1..=deg {
            'cand: for f in all_monic(p, d) {
                for g in &irr {
                    if g.len() - 1 <= d / 2 && divides(p, g, &f) {
                        continue 'cand;
                    }
                }
                irr.push(f);
            }
        }
        irr
    }

    fn divides(p: u64, d: &[u64], f: &[u64]) -> bool {
        if f.len() < d.len() {
            return false;
        }
        let (_, r) = divrem_u64(p, f, d);
        r.iter().all(|&c| c == 0)
    }

    fn quotient(p: u64, f: &[u64], d: &[u64]) -> Vec<u64> {
        divrem_u64(p, f, d).0
    }

    fn divrem_u64(p: u64, f: &[u64], d: &[u64]) -> (Vec<u64>, Vec<u64>) {
        // d is monic here
        assert_eq!(*d.last().unwrap(), 1);
        let mut rem = f.to_vec();
        let dn = d.len() - 1;
        let mut quot = vec![0u64; rem.len().saturating_sub(dn)];
        let mut i = rem.len();
        while i > dn {
            i -= 1;
            let q = rem[i] % p;
            rem[i] = 0;
            if q == 0 {
                continue;
            }
            for j in 0..dn {
                rem[i - dn + j] = (rem[i - dn + j] + p * p - q * d[j] % p) % p;
            }
            quot[i - dn] = q;
        }
        rem.truncate(dn);
        while rem.last() == Some(&0) {
            rem.pop();
        }
        while quot.last() == Some(&0) {
            quot.pop();
        }
        if quot.is_empty() {
            quot.push(0);
        }
        (quot, rem)
    }

    #[test]
    fn roots_fixtures() {
        let x2p1 = QPoly::from_i64(&[1, 0, 1]);
        assert_eq!(roots_mod_p(&x2p1, &biguint(5)).unwrap(), vec![2, 3]);
        assert_eq!(roots_mod_p(&x2p1, &biguint(7)).unwrap(), Vec::<u64>::new());
        // branch polynomial for the octic quaternion case: 804 mod 53 = 9 is a root
        let f = QPoly::new(vec![rat_frac(5, 8), rat_frac(1, 2), rat_i64(1)]);
        let roots = roots_mod_p(&f, &biguint(53)).unwrap();
        assert!(roots.contains(&9));
        assert_eq!(roots, vec![9, 17]);
        assert!(roots_mod_p(&f, &biguint(2)).is_err()); // denominator
        assert!(roots_mod_p(&x2p1, &biguint(9)).is_err()); // not prime
    }

    #[test]
    fn roots_match_exhaustive_scan() {
        // independent oracle: evaluate the cleared polynomial at every residue
        let polys = [
            QPoly::new(vec![rat_frac(5, 8), rat_frac(1, 2), rat_i64(1)]),
            QPoly::from_i64(&[1, 0, 1]),
            QPoly::from_i64(&[-2, 1, 0, 3, 1]),
        ];
        for f in &polys {
            let (_, ints) = f.clear_denominators();
            for p in crate::arith::OddPrimes::new().take_while(|&p| p <= 211) {
                let got = roots_mod_p(f, &biguint(p)).unwrap();
                let want: Vec<u64> = (0..p)
                    .filter(|&r| {
                        let mut acc = num_bigint::BigInt::from(0);
                        for c in ints.iter().rev() {
                            acc = (acc * r + c).mod_floor(&num_bigint::BigInt::from(p));
                        }
                        acc.is_zero()
                    })
                    .collect();
                assert_eq!(got, want, "f={f:?} p={p}");
            }
        }
    }
}
