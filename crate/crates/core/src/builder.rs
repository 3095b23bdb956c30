//! Specialized realizations: the monic product polynomial over the full
//! conjugate set of a group at a rational parameter, with coefficients
//! recovered exactly from a high-precision floating expansion.

use crate::arith::{parse_rat, rat_str, rational_reconstruct, QPoly, Rat};
use crate::groups::{conjugate_index_set, spec_from_parts, ConjugateLabel, GroupFamily, GroupSpec};
use crate::numerics::{build_context, mu_values, v_value, APComplex, BigFloat, RadicalContext};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;

/// Ceiling for the automatic precision escalation.
const MAX_BUILD_PRECISION: u32 = 4096;

/// Product polynomial over the full conjugate set of `spec` at `t`, monic of
/// degree equal to the group order, coefficients exactly rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedRealization {
    spec: GroupSpec,
    t: Rat,
    poly: QPoly,
    residual: Rat,
    precision_used: u32,
    conjugates_distinct: bool,
    notes: Vec<String>,
}

impl SpecializedRealization {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn t(&self) -> &Rat {
        &self.t
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    /// Largest distance between a floating coefficient and its reconstructed
    /// rational; always below 2^(-precision_used/4).
    pub fn residual(&self) -> &Rat {
        &self.residual
    }

    pub fn precision_used(&self) -> u32 {
        self.precision_used
    }

    pub fn conjugates_distinct(&self) -> bool {
        self.conjugates_distinct
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }
}

/// The full conjugate set of the family at the context's parameter, in the
/// order of `conjugate_index_set`: 2m values (-1)^eps sqrt(t^2+1) + v_delta
/// for the semidirect families, 2^n values (+-)sqrt(t^2+1) + (mu_a + v_delta)^2
/// for the quaternion family with +sqrt paired to {mu, -mu} and -sqrt to
/// {mu', -mu'}.
pub fn conjugate_set(spec: &GroupSpec, ctx: &RadicalContext) -> Result<Vec<APComplex>> {
    let values = match spec.family() {
        GroupFamily::Quaternion => {
            let n = spec.n().unwrap();
            let m = 1u32 << (n - 1);
            if ctx.m() != m {
                return Err(Error::InvalidArgument(format!(
                    "context has m = {}, but the order-2^{n} quaternion group needs m = {m}",
                    ctx.m()
                )));
            }
            let mu = mu_values(ctx)?;
            let quarter = 1u32 << (n - 2);
            let vs: Vec<APComplex> = (0..quarter as i64)
                .map(|delta| v_value(ctx, -1, delta))
                .collect::<Result<_>>()?;
            let sqrt = APComplex::from_real(ctx.sqrt_t2p1().clone());
            let mut out = Vec::with_capacity(4 * quarter as usize);
            for (idx, mu_a) in mu.iter().enumerate() {
                let signed_sqrt = if idx < 2 { sqrt.clone() } else { sqrt.neg() };
                for v in &vs {
                    out.push(signed_sqrt.add(&mu_a.add(v).powi(2)));
                }
            }
            out
        }
        _ => {
            let m = spec.m().unwrap();
            if ctx.m() != m {
                return Err(Error::InvalidArgument(format!(
                    "context has m = {}, but the group spec has m = {m}",
                    ctx.m()
                )));
            }
            let d = spec.d().unwrap() as i64;
            let sqrt = APComplex::from_real(ctx.sqrt_t2p1().clone());
            let mut out = Vec::with_capacity(2 * m as usize);
            for delta in 1..=m as i64 {
                // d is an involution mod m, so both epsilon branches twist
                // by the same d
                let v = v_value(ctx, d, delta)?;
                out.push(v.add(&sqrt));
                out.push(v.sub(&sqrt));
            }
            out
        }
    };
    let index = conjugate_index_set(spec);
    debug_assert_eq!(values.len(), index.cardinality());
    check_distinct(&values, &index.labels, ctx.precision())?;
    Ok(values)
}

// Pairwise separation gate: two conjugates within 2^(-precision/2) abort
// the build with both labels named.
fn check_distinct(values: &[APComplex], labels: &[ConjugateLabel], precision: u32) -> Result<()> {
    let e = -(precision as i64) / 2;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i].sub(&values[j]).abs_lt_pow2(e) {
                return Err(Error::ConjugateCollision(format!(
                    "{:?} and {:?} agree to within 2^{e}",
                    labels[i], labels[j]
                )));
            }
        }
    }
    Ok(())
}

/// Builds the realization at rational `t`. The floating expansion runs at
/// `precision` bits and doubles (up to 4096) whenever a gate shows the
/// working precision cannot support exact coefficient recovery.
pub fn build_specialized(
    spec: &GroupSpec,
    t: &Rat,
    precision: u32,
) -> Result<SpecializedRealization> {
    if spec.family() == GroupFamily::Quaternion && t.is_zero() {
        return Err(Error::BranchPoint(
            "t = 0 is a branch point of the quaternion family".into(),
        ));
    }
    let mut prec = precision;
    loop {
        match attempt(spec, t, prec) {
            Ok(r) => return Ok(r),
            Err(Error::ReconstructionFailed(reason)) => {
                if prec >= MAX_BUILD_PRECISION {
                    return Err(Error::RationalizationFailed { bits: prec, reason });
                }
                prec = (prec * 2).min(MAX_BUILD_PRECISION);
            }
            Err(e) => return Err(e),
        }
    }
}

fn attempt(spec: &GroupSpec, t: &Rat, prec: u32) -> Result<SpecializedRealization> {
    let m_ctx = match spec.family() {
        GroupFamily::Quaternion => 1u32 << (spec.n().unwrap() - 1),
        _ => spec.m().unwrap(),
    };
    let ctx = build_context(m_ctx, t, prec)?;
    let ws = conjugate_set(spec, &ctx)?;
    let deg = ws.len();

    // expand prod (X - w) one linear factor at a time
    let mut acc = vec![APComplex::one(prec)];
    for w in &ws {
        let mut next = vec![APComplex::zero(prec); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i] = next[i].sub(&c.mul(w));
            next[i + 1] = next[i + 1].add(c);
        }
        acc = next;
    }

    // the set is closed under complex conjugation, so every coefficient
    // must be real to within 2^(-prec/2); a larger imaginary part means
    // the working precision is too coarse
    let half = -(prec as i64) / 2;
    for (i, c) in acc.iter().enumerate() {
        if !c.im().abs_lt_pow2(half) {
            return Err(Error::ReconstructionFailed(format!(
                "imaginary part of coefficient {i} exceeds 2^{half} at {prec} bits"
            )));
        }
    }

    // a coefficient must fit within the top quarter of the mantissa,
    // keeping its unit-in-last-place error below the reconstruction
    // tolerance; without this gate a coarse float sits closer to a
    // large-denominator impostor than to the true rational
    let mag_cap = prec as i64 / 4 - 16;
    for (i, c) in acc.iter().enumerate() {
        if !c.re().abs_lt_pow2(mag_cap) {
            return Err(Error::ReconstructionFailed(format!(
                "coefficient {i} is too large for exact recovery at {prec} bits"
            )));
        }
    }

    // tolerance 2^(-3 prec/4): continued-fraction impostors under the
    // denominator bound lie at distance >= 2^(-prec/2) from the true
    // value, far outside it; true coefficients land within ulp error
    let den_bound = BigInt::one() << (prec / 4);
    let tol = Rat::new(BigInt::one(), BigInt::one() << (3 * (prec as u64) / 4));
    let mut residual = Rat::zero();
    let mut coeffs = Vec::with_capacity(acc.len());
    for (i, c) in acc.iter().enumerate() {
        let x = c.re().to_rat();
        let r = rational_reconstruct(&x, &den_bound, &tol).map_err(|e| match e {
            Error::ReconstructionFailed(msg) => {
                Error::ReconstructionFailed(format!("coefficient {i}: {msg}"))
            }
            other => other,
        })?;
        let err = (&x - &r).abs();
        if err > residual {
            residual = err;
        }
        coeffs.push(r);
    }
    let poly = QPoly::new(coeffs);
    if poly.degree() != Some(deg) || !poly.is_monic() {
        return Err(Error::ReconstructionFailed(format!(
            "reconstructed polynomial is not monic of degree {deg} at {prec} bits"
        )));
    }

    // the reconstructed polynomial must vanish at every conjugate to within
    // 2^(-prec/4) * (1 + max|w|)^deg
    let pc: Vec<APComplex> = poly
        .coeffs()
        .iter()
        .map(|c| APComplex::from_rat(c, prec))
        .collect();
    let mut max_abs = BigFloat::zero(prec);
    for w in &ws {
        let a = w.abs();
        if a.cmp_value(&max_abs) == Ordering::Greater {
            max_abs = a;
        }
    }
    let base = BigFloat::from_i64(1, prec).add(&max_abs);
    let mut eval_bound = BigFloat::pow2(-(prec as i64) / 4, prec);
    for _ in 0..deg {
        eval_bound = eval_bound.mul(&base);
    }
    for (i, w) in ws.iter().enumerate() {
        let mut val = APComplex::zero(prec);
        for c in pc.iter().rev() {
            val = val.mul(w).add(c);
        }
        if val.abs().cmp_value(&eval_bound) != Ordering::Less {
            return Err(Error::ReconstructionFailed(format!(
                "reconstructed polynomial does not vanish at conjugate {i} at {prec} bits"
            )));
        }
    }

    // exact squarefreeness; failure here is not a precision problem
    let g = poly.gcd(&poly.derivative());
    if g.degree() != Some(0) {
        return Err(Error::Internal(format!(
            "product polynomial at t = {} is not squarefree (gcd degree {:?})",
            rat_str(t),
            g.degree()
        )));
    }

    let notes = match spec.family() {
        GroupFamily::Quaternion => vec![
            "mu radicand: mu^2 = t^2 + 1 + t*sqrt(t^2+1), so that mu*mu' = sqrt(t^2+1)".to_string(),
        ],
        _ => Vec::new(),
    };
    Ok(SpecializedRealization {
        spec: spec.clone(),
        t: t.clone(),
        poly,
        residual,
        precision_used: prec,
        conjugates_distinct: true,
        notes,
    })
}

fn residual_string(r: &Rat) -> String {
    BigFloat::from_rat(r, 64).to_scientific(2)
}

// Parses the scientific form residual_string produces ("1.2e-40", "0").
fn parse_scientific(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidArgument(format!("malformed residual {s:?}"));
    if s == "0" {
        return Ok(Rat::zero());
    }
    let (mant, exp) = s.split_once('e').ok_or_else(bad)?;
    let exp: i64 = exp.parse().map_err(|_| bad())?;
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if frac_part.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rat::from_integer(digits * ten.pow(scale as u32))
    } else {
        Rat::new(digits, ten.pow(-scale as u32))
    })
}

#[derive(Serialize, Deserialize)]
struct RealizationWire {
    family: GroupFamily,
    m: Option<u32>,
    d: Option<u32>,
    n: Option<u32>,
    t: String,
    poly: Vec<String>,
    residual: String,
    precision_bits: u32,
    conjugates_distinct: bool,
    notes: Vec<String>,
}

impl Serialize for SpecializedRealization {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RealizationWire {
            family: self.spec.family(),
            m: self.spec.m(),
            d: self.spec.d(),
            n: self.spec.n(),
            t: rat_str(&self.t),
            poly: self.poly.to_strings(),
            residual: residual_string(&self.residual),
            precision_bits: self.precision_used,
            conjugates_distinct: self.conjugates_distinct,
            notes: self.notes.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpecializedRealization {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = RealizationWire::deserialize(d)?;
        let spec =
            spec_from_parts(w.family, w.m, w.d, w.n).map_err(serde::de::Error::custom)?;
        let t = parse_rat(&w.t).map_err(serde::de::Error::custom)?;
        let poly = QPoly::from_strings(&w.poly).map_err(serde::de::Error::custom)?;
        if poly.degree() != Some(spec.group_order() as usize) {
            return Err(serde::de::Error::custom(format!(
                "polynomial degree {:?} does not match the group order {}",
                poly.degree(),
                spec.group_order()
            )));
        }
        if !poly.is_monic() {
            return Err(serde::de::Error::custom("serialized polynomial is not monic"));
        }
        let residual = parse_scientific(&w.residual).map_err(serde::de::Error::custom)?;
        Ok(SpecializedRealization {
            spec,
            t,
            poly,
            residual,
            precision_used: w.precision_bits,
            conjugates_distinct: w.conjugates_distinct,
            notes: w.notes,
        })
    }
}
