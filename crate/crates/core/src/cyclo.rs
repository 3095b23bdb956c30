//! Exact arithmetic in the cyclotomic field Q(zeta_m).
//!
//! Elements are written in the power basis 1, zeta, ..., zeta^{phi(m)-1}
//! modulo the m-th cyclotomic polynomial, so conjugation is exact and
//! products of all conjugates land in Q. On top of the field ops sit the
//! branch values s_k, their expanded product polynomial, and the integer
//! norm sets that rule out unusable specialization primes.

use crate::arith::{parse_rat, rat_frac, rat_i64, rat_str, QPoly, Rat};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};

/// Units of Z/mZ in ascending order.
pub fn units(m: u32) -> Vec<u32> {
    (1..m).filter(|k| k.gcd(&m) == 1).collect()
}

pub fn euler_phi(m: u32) -> u32 {
    if m == 1 {
        1
    } else {
        units(m).len() as u32
    }
}

fn x_pow_minus_one(d: u32) -> QPoly {
    let mut coeffs = vec![Rat::zero(); d as usize + 1];
    coeffs[0] = -Rat::one();
    coeffs[d as usize] = Rat::one();
    QPoly::new(coeffs)
}

/// The m-th cyclotomic polynomial, computed by exact division of X^m - 1
/// by the cyclotomic polynomials of the proper divisors of m.
pub fn cyclotomic_polynomial(m: u32) -> QPoly {
    assert!(m >= 1, "conductor must be positive");
    let mut table: BTreeMap<u32, QPoly> = BTreeMap::new();
    for d in 1..=m {
        if m % d != 0 {
            continue;
        }
        let mut f = x_pow_minus_one(d);
        for (&e, phi_e) in &table {
            if d % e == 0 {
                let (q, r) = f.divrem(phi_e);
                debug_assert!(r.is_zero());
                f = q;
            }
        }
        table.insert(d, f);
    }
    table.remove(&m).unwrap()
}

fn check_conductor(m: u32) -> Result<()> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!(
            "conductor must be at least 3, got {m}"
        )));
    }
    Ok(())
}

/// Element of Q(zeta_m) in the power basis. Coordinates always have length
/// phi(m) and are already reduced modulo the m-th cyclotomic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElement {
    m: u32,
    coords: Vec<Rat>,
}

impl CycloElement {
    /// Reduce an arbitrary coordinate polynomial; `m` must be valid already.
    fn reduced(m: u32, poly: &QPoly) -> Self {
        let phi = euler_phi(m) as usize;
        let r = poly.rem(&cyclotomic_polynomial(m));
        let mut coords = r.coeffs().to_vec();
        coords.resize(phi, Rat::zero());
        CycloElement { m, coords }
    }

    pub fn new(m: u32, coords: Vec<Rat>) -> Result<Self> {
        check_conductor(m)?;
        Ok(Self::reduced(m, &QPoly::new(coords)))
    }

    pub fn zero(m: u32) -> Result<Self> {
        Self::new(m, vec![])
    }

    pub fn one(m: u32) -> Result<Self> {
        Self::from_rat(m, Rat::one())
    }

    pub fn from_rat(m: u32, c: Rat) -> Result<Self> {
        Self::new(m, vec![c])
    }

    /// zeta^k for any integer exponent, reduced into the power basis.
    pub fn zeta_pow(m: u32, k: i64) -> Result<Self> {
        check_conductor(m)?;
        let k = k.rem_euclid(m as i64) as usize;
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = Rat::one();
        Ok(Self::reduced(m, &QPoly::new(coeffs)))
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// The coordinate polynomial, degree < phi(m).
    pub fn to_poly(&self) -> QPoly {
        QPoly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Some(c) when the element is the rational constant c.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    fn same_field(&self, other: &CycloElement) {
        assert_eq!(self.m, other.m, "conductor mismatch");
    }

    pub fn add(&self, other: &CycloElement) -> CycloElement {
        self.same_field(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        CycloElement { m: self.m, coords }
    }

    pub fn sub(&self, other: &CycloElement) -> CycloElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycloElement {
        CycloElement {
            m: self.m,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> CycloElement {
        CycloElement {
            m: self.m,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &CycloElement) -> CycloElement {
        self.same_field(other);
        Self::reduced(self.m, &self.to_poly().mul(&other.to_poly()))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the cyclotomic polynomial, which is irreducible over Q.
    pub fn inv(&self) -> Result<CycloElement> {
        if self.is_zero() {
            return Err(Error::InvalidArgument(
                "cannot invert zero in a cyclotomic field".into(),
            ));
        }
        let phi_m = cyclotomic_polynomial(self.m);
        let (g, u, _) = self.to_poly().xgcd(&phi_m);
        debug_assert_eq!(g, QPoly::from_i64(&[1]));
        Ok(Self::reduced(self.m, &u))
    }

    /// Galois conjugate zeta |-> zeta^j; j must be a unit mod m.
    pub fn conjugate(&self, j: u32) -> Result<CycloElement> {
        if j.gcd(&self.m) != 1 {
            return Err(Error::InvalidArgument(format!(
                "{j} is not a unit modulo {}",
                self.m
            )));
        }
        let mut coeffs = vec![Rat::zero(); self.m as usize];
        for (i, c) in self.coords.iter().enumerate() {
            let e = (i as u64 * j as u64 % self.m as u64) as usize;
            coeffs[e] = &coeffs[e] + c;
        }
        Ok(Self::reduced(self.m, &QPoly::new(coeffs)))
    }
}

pub fn cyclo_mul(a: &CycloElement, b: &CycloElement) -> CycloElement {
    a.mul(b)
}

pub fn cyclo_inv(e: &CycloElement) -> Result<CycloElement> {
    e.inv()
}

pub fn cyclo_conjugate(e: &CycloElement, j: u32) -> Result<CycloElement> {
    e.conjugate(j)
}

/// Field norm down to Q: the product of all phi(m) Galois conjugates.
/// Cross-checked against the resultant of the cyclotomic polynomial and
/// the coordinate polynomial, which must agree exactly.
pub fn cyclo_norm(e: &CycloElement) -> Rat {
    if e.is_zero() {
        return Rat::zero();
    }
    let mut acc = CycloElement::one(e.m).unwrap();
    for j in units(e.m) {
        acc = acc.mul(&e.conjugate(j).unwrap());
    }
    let norm = acc
        .as_rational()
        .expect("product of all conjugates must be rational");
    let via_resultant = cyclotomic_polynomial(e.m).resultant(&e.to_poly());
    assert_eq!(norm, via_resultant, "conjugate product vs resultant");
    norm
}

/// Branch values s_k for k coprime to m, plus their expanded monic product
/// polynomial of degree phi(m) over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchData {
    pub m: u32,
    pub s_values: BTreeMap<u32, CycloElement>,
    pub branch_poly: QPoly,
}

/// Computes s_k = -(1 - zeta^k)/2 + 1/(2(1 - zeta^k)) for every k coprime
/// to m and expands prod_k (X - s_k) exactly. The s_k are checked pairwise
/// distinct and, when i lies in the field, distinct from +-i.
pub fn branch_values(m: u32) -> Result<BranchData> {
    check_conductor(m)?;
    let one = CycloElement::one(m)?;
    let half = rat_frac(1, 2);
    let mut s_values = BTreeMap::new();
    for k in units(m) {
        let w = one.sub(&CycloElement::zeta_pow(m, k as i64)?);
        let s = w.scale(&half).neg().add(&w.inv()?.scale(&half));
        s_values.insert(k, s);
    }

    let ss: Vec<&CycloElement> = s_values.values().collect();
    for (a, sa) in ss.iter().enumerate() {
        for sb in &ss[a + 1..] {
            assert_ne!(sa, sb, "branch values must be pairwise distinct");
        }
    }
    if m % 4 == 0 {
        let i = CycloElement::zeta_pow(m, m as i64 / 4)?;
        for s in &ss {
            assert_ne!(**s, i, "branch value collides with i");
            assert_ne!(**s, i.neg(), "branch value collides with -i");
        }
    }

    let mut coeffs = vec![one];
    for s in s_values.values() {
        let mut next = vec![CycloElement::zero(m)?; coeffs.len() + 1];
        let neg_s = s.neg();
        for (i, c) in coeffs.iter().enumerate() {
            next[i] = next[i].add(&c.mul(&neg_s));
            next[i + 1] = next[i + 1].add(c);
        }
        coeffs = next;
    }
    let rational_coeffs: Vec<Rat> = coeffs
        .iter()
        .map(|c| {
            c.as_rational()
                .expect("symmetric product coefficients must be rational")
        })
        .collect();
    let branch_poly = QPoly::new(rational_coeffs);
    debug_assert_eq!(branch_poly.degree(), Some(euler_phi(m) as usize));

    Ok(BranchData {
        m,
        s_values,
        branch_poly,
    })
}

/// Absolute values of the integer norms whose prime divisors disqualify a
/// specialization prime, over the conductor m = 2^(n-1). Two families enter:
/// N((1 - zeta^k)(1 - zeta) + 1) for units k != 1, and
/// N(zeta^k (2 - zeta) +- 2i (1 - zeta^k)) for every unit k, both signs,
/// with i = zeta^(m/4). Every member is at most 7^(2^(n-2)), so primes past
/// that bound divide none of them.
pub fn ssssoi_bad_norms(n: u32) -> Result<BTreeSet<BigUint>> {
    if !(3..=24).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "group exponent parameter must lie in [3, 24], got {n}"
        )));
    }
    let m = 1u32 << (n - 1);
    let one = CycloElement::one(m)?;
    let two = CycloElement::from_rat(m, rat_i64(2))?;
    let zeta = CycloElement::zeta_pow(m, 1)?;
    let i = CycloElement::zeta_pow(m, m as i64 / 4)?;
    let two_i = i.scale(&rat_i64(2));

    let mut out = BTreeSet::new();
    let mut push = |e: &CycloElement| {
        let nrm = cyclo_norm(e);
        assert!(nrm.is_integer(), "norm of an algebraic integer");
        let abs = nrm.numer().abs();
        assert!(!abs.is_zero());
        out.insert(abs.to_biguint().unwrap());
    };

    for k in units(m) {
        let zk = CycloElement::zeta_pow(m, k as i64)?;
        if k != 1 {
            push(&one.sub(&zk).mul(&one.sub(&zeta)).add(&one));
        }
        let lhs = zk.mul(&two.sub(&zeta));
        let rhs = two_i.mul(&one.sub(&zk));
        push(&lhs.add(&rhs));
        push(&lhs.sub(&rhs));
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct CycloWire {
    m: u32,
    coords: Vec<String>,
}

impl Serialize for CycloElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloWire {
            m: self.m,
            coords: self.coords.iter().map(rat_str).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CycloWire::deserialize(d)?;
        let coords = w
            .coords
            .iter()
            .map(|c| parse_rat(c))
            .collect::<Result<Vec<Rat>>>()
            .map_err(serde::de::Error::custom)?;
        CycloElement::new(w.m, coords).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct BranchWire {
    m: u32,
    s_values: BTreeMap<u32, CycloElement>,
    branch_poly: Vec<String>,
}

impl Serialize for BranchData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BranchWire {
            m: self.m,
            s_values: self.s_values.clone(),
            branch_poly: self.branch_poly.to_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BranchData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = BranchWire::deserialize(d)?;
        let branch_poly = QPoly::from_strings(&w.branch_poly).map_err(serde::de::Error::custom)?;
        Ok(BranchData {
            m: w.m,
            s_values: w.s_values,
            branch_poly,
        })
    }
}
