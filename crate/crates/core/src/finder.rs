//! Certified arithmetic progressions of quaternion specialization points.
//!
//! For the group Q_{2^n} the usable specializations form full arithmetic
//! progressions t = t0 mod p^2 q^2, where p and q are primes subject to
//! congruence and non-divisibility conditions, and t0 is chosen so that
//! v_p(m(t0)) = 1 and v_q(t0^2 + 1) = 1 for the branch polynomial m of
//! conductor 2^(n-1). This module checks candidate prime pairs, searches
//! for a valid t0, and re-certifies any claimed (p, q, t0) from scratch in
//! exact arithmetic.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{crt_pair, is_prime_u64, roots_mod_p, valuation_p, OddPrimes, QPoly, Rat, Valuation};
use crate::cyclo::{branch_values, ssssoi_bad_norms};
use crate::{Error, Result};

/// Largest n for which the excluded-norm set is computed exactly. The norms
/// live in a field of degree 2^(n-2), so the exact products grow too
/// expensive past this point and only the size-bound route remains.
pub const NORM_ROUTE_MAX_N: u32 = 7;

/// How a prime satisfied the ramification conditions: by dividing none of
/// the excluded norms, or by exceeding 7^(2^(n-2)), which every excluded
/// norm is bounded by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PassRoute {
    NormCheck,
    SizeBound,
}

/// Outcome of checking a candidate prime pair, with one reason per failed
/// condition. The norm route is preferred whenever the norm set is
/// available, since it admits primes far below the size bound; the two
/// routes never disagree on a prime that both can judge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub good: bool,
    pub reasons: Vec<String>,
    pub route_p: Option<PassRoute>,
    pub route_q: Option<PassRoute>,
    pub norms_checked: Vec<String>,
    pub used_7power_shortcut: bool,
}

/// Exact data a third party can re-check: the root residues, the two
/// valuations (both must be exactly 1), and which norm conditions were
/// verified. The norm list is in ascending order, empty when the size
/// bound was used instead.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub root_mod_p: u64,
    pub v_p_of_m_t0: i64,
    pub root_mod_q: u64,
    pub v_q_of_t0sq_plus_1: i64,
    pub ssssoi_norms_checked: Vec<String>,
    pub used_7power_shortcut: bool,
}

/// A certified progression: t0 lies in [0, p^2 q^2) and every member
/// t = t0 mod p^2 q^2 keeps both certificate valuations equal to 1, since
/// they depend only on t mod p^2 and t mod q^2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    pub n: u32,
    pub p: u64,
    pub q: u64,
    pub t0: u64,
    pub modulus: u64,
    pub certificate: Certificate,
}

/// Result of re-checking a claimed specialization point. The certificate
/// is present whenever the pair itself was usable, recording the computed
/// valuations even when they disqualify t0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub ok: bool,
    pub reasons: Vec<String>,
    pub certificate: Option<Certificate>,
}

/// (2^(2^(n-2)) + 1) mod x by n-2 modular squarings; the tower exponent is
/// never materialized.
fn fermat_term_mod(n: u32, x: u64) -> u64 {
    debug_assert!(n >= 3 && x >= 3);
    let mut acc = 2u64 % x;
    for _ in 0..(n - 2) {
        acc = ((acc as u128 * acc as u128) % x as u128) as u64;
    }
    (acc + 1) % x
}

/// True when x >= 7^(2^(n-2)) + 1, the size past which every excluded norm
/// is automatically avoided. No 64-bit value reaches the bound once n >= 7,
/// since 7^32 already exceeds 2^64.
pub fn meets_size_shortcut(n: u32, x: u64) -> bool {
    if !(3..7).contains(&n) {
        return false;
    }
    (x as u128) >= 7u128.pow(1 << (n - 2)) + 1
}

/// True when x divides none of the excluded norms for n. Errors when the
/// norm set is out of the computable range [3, NORM_ROUTE_MAX_N].
pub fn avoids_excluded_norms(n: u32, x: u64) -> Result<bool> {
    if !(3..=NORM_ROUTE_MAX_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "the excluded-norm set is only computed for n in [3, {NORM_ROUTE_MAX_N}], got {n}"
        )));
    }
    if x < 2 {
        return Err(Error::InvalidArgument(format!(
            "norm divisibility is only meaningful for x >= 2, got {x}"
        )));
    }
    let xb = BigUint::from(x);
    Ok(!ssssoi_bad_norms(n)?.iter().any(|v| (v % &xb).is_zero()))
}

/// Checks one prime of the pair. `pow2_congruence` selects the requirement
/// p = 1 mod 2^(n-1) (for p) versus q = 1 mod 4 (for q). Returns the route
/// by which the norm conditions passed, pushing a reason for every failed
/// condition.
fn prime_side(
    n: u32,
    x: u64,
    label: &str,
    pow2_congruence: bool,
    norms: Option<&BTreeSet<BigUint>>,
    reasons: &mut Vec<String>,
) -> Option<PassRoute> {
    if x < 3 || !is_prime_u64(x) {
        reasons.push(format!("{label} = {x} is not an odd prime"));
        return None;
    }
    let modulus = if pow2_congruence { 1u64 << (n - 1) } else { 4 };
    if x % modulus != 1 {
        reasons.push(format!("{label} = {x} is not 1 mod {modulus}"));
    }
    if fermat_term_mod(n, x) == 0 {
        reasons.push(format!("{label} = {x} divides 2^{} + 1", 1u64 << (n - 2)));
    }
    match norms {
        Some(set) => {
            let xb = BigUint::from(x);
            match set.iter().find(|v| (*v % &xb).is_zero()) {
                Some(hit) => {
                    reasons.push(format!("{label} = {x} divides the excluded norm {hit}"));
                    None
                }
                None => Some(PassRoute::NormCheck),
            }
        }
        None => {
            if meets_size_shortcut(n, x) {
                Some(PassRoute::SizeBound)
            } else {
                reasons.push(format!(
                    "{label} = {x} is below 7^{} + 1 and the excluded-norm set is not computed for n = {n}",
                    1u64 << (n - 2)
                ));
                None
            }
        }
    }
}

/// Checks that (p, q) is a usable prime pair for Q_{2^n}: distinct odd
/// primes, p = 1 mod 2^(n-1), q = 1 mod 4, neither divides 2^(2^(n-2)) + 1,
/// and each passes the norm conditions by one of the two routes. Never
/// errors; a bad pair comes back with the full list of reasons.
pub fn is_good_prime_pair(n: u32, p: u64, q: u64) -> PairCheck {
    if !(3..=24).contains(&n) {
        return PairCheck {
            good: false,
            reasons: vec![format!("n must lie in [3, 24], got {n}")],
            route_p: None,
            route_q: None,
            norms_checked: vec![],
            used_7power_shortcut: false,
        };
    }
    let norms = if n <= NORM_ROUTE_MAX_N {
        Some(ssssoi_bad_norms(n).expect("n range checked above"))
    } else {
        None
    };
    let mut reasons = Vec::new();
    if p == q {
        reasons.push(format!("p and q must be distinct, both are {p}"));
    }
    let route_p = prime_side(n, p, "p", true, norms.as_ref(), &mut reasons);
    let route_q = prime_side(n, q, "q", false, norms.as_ref(), &mut reasons);
    let used_7power_shortcut = norms.is_none();
    PairCheck {
        good: reasons.is_empty(),
        reasons,
        route_p,
        route_q,
        norms_checked: norms
            .map(|s| s.iter().map(|v| v.to_string()).collect())
            .unwrap_or_default(),
        used_7power_shortcut,
    }
}

/// Smallest usable pair in (p, q) search order: p runs ascending over
/// primes 1 mod 2^(n-1), and for the first p passing its own conditions, q
/// runs ascending over primes 1 mod 4 distinct from p.
pub fn smallest_good_pair(n: u32) -> Result<(u64, u64)> {
    if !(3..=NORM_ROUTE_MAX_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "pair search requires the excluded-norm route, available for n in [3, {NORM_ROUTE_MAX_N}], got {n}"
        )));
    }
    let norms = ssssoi_bad_norms(n)?;
    let step = 1u64 << (n - 1);
    const CAP: u64 = 1 << 22;
    let mut p = step + 1;
    while p < CAP {
        let mut rs = Vec::new();
        if is_prime_u64(p) && prime_side(n, p, "p", true, Some(&norms), &mut rs).is_some() && rs.is_empty() {
            for q in OddPrimes::new().take_while(|&q| q < CAP) {
                if q % 4 != 1 || q == p {
                    continue;
                }
                let mut rq = Vec::new();
                if prime_side(n, q, "q", false, Some(&norms), &mut rq).is_some() && rq.is_empty() {
                    return Ok((p, q));
                }
            }
        }
        p += step;
    }
    Err(Error::Internal(format!(
        "no usable pair with p < {CAP} for n = {n}"
    )))
}

fn rat_u64(t: u64) -> Rat {
    Rat::from_integer(BigInt::from(t))
}

/// Finite p-adic valuation of f(t); the polynomials used here have no
/// integer roots, so a vanishing value is reported as degenerate.
fn finite_valuation(f: &QPoly, t: u64, p: u64) -> Result<i64> {
    match valuation_p(&f.eval(&rat_u64(t)), &BigInt::from(p))? {
        Valuation::Finite(v) => Ok(v),
        Valuation::Infinity => Err(Error::DegenerateRoot(format!(
            "f({t}) vanishes exactly; no shift can set the valuation to 1"
        ))),
    }
}

/// Picks the smallest root r of f mod p and returns (r, t) with t = r mod p,
/// t in [0, p^2), and v_p(f(t)) = 1. A simple root with excess valuation is
/// fixed by one shift: f(r + p) = f(r) + p f'(r) mod p^2 has valuation
/// exactly 1 when p divides f(r) twice but not f'(r). For a non-simple root
/// every lift keeps valuation >= 2, so the scan documents the failure
/// rather than looping forever.
fn lift_to_valuation_one(f: &QPoly, p: u64) -> Result<(u64, u64)> {
    let roots = roots_mod_p(f, &BigUint::from(p))?;
    let &root = roots.first().ok_or_else(|| {
        Error::Internal(format!(
            "no root mod {p}; the congruence conditions guarantee one"
        ))
    })?;
    let v = finite_valuation(f, root, p)?;
    debug_assert!(v >= 1, "a residue root has positive valuation");
    if v == 1 {
        return Ok((root, root));
    }
    let dv = valuation_p(&f.derivative().eval(&rat_u64(root)), &BigInt::from(p))?;
    if dv == Valuation::Finite(0) {
        let t = root + p;
        let shifted = finite_valuation(f, t, p)?;
        if shifted != 1 {
            return Err(Error::Internal(format!(
                "simple-root shift gave valuation {shifted} at {t} over p = {p}"
            )));
        }
        return Ok((root, t));
    }
    for j in 1..p {
        let t = root + j * p;
        if finite_valuation(f, t, p)? == 1 {
            return Ok((root, t));
        }
    }
    Err(Error::DegenerateRoot(format!(
        "every lift of the non-simple root {root} mod {p} has valuation >= 2"
    )))
}

/// Finds a progression for the pair: roots of the branch polynomial mod p
/// and of X^2 + 1 mod q, both lifted to valuation exactly 1, then combined
/// by CRT into t0 in [0, p^2 q^2). The returned certificate is recomputed
/// from scratch by `certify`, not assembled from the search state.
pub fn find_t0(n: u32, p: u64, q: u64) -> Result<Progression> {
    let pair = is_good_prime_pair(n, p, q);
    if !pair.good {
        return Err(Error::InvalidArgument(format!(
            "({p}, {q}) is not a usable prime pair for n = {n}: {}",
            pair.reasons.join("; ")
        )));
    }
    if (p as u128) * (q as u128) >= 1u128 << 32 {
        return Err(Error::InvalidArgument(format!(
            "p^2 q^2 overflows the progression's u64 fields (p q = {} >= 2^32)",
            (p as u128) * (q as u128)
        )));
    }
    let m_poly = branch_values(1u32 << (n - 1))?.branch_poly;
    let (root_p, tp) = lift_to_valuation_one(&m_poly, p)?;
    let (root_q, tq) = lift_to_valuation_one(&QPoly::from_i64(&[1, 0, 1]), q)?;
    let t0 = crt_pair(
        &BigInt::from(tp),
        &BigInt::from(p * p),
        &BigInt::from(tq),
        &BigInt::from(q * q),
    )?
    .to_u64()
    .expect("CRT lift is bounded by p^2 q^2 < 2^64");
    let pq = p * q;
    let certification = certify(n, p, q, t0);
    if !certification.ok {
        return Err(Error::Internal(format!(
            "fresh certificate failed for t0 = {t0}: {}",
            certification.reasons.join("; ")
        )));
    }
    let certificate = certification.certificate.expect("present when ok");
    debug_assert_eq!(certificate.root_mod_p, root_p);
    debug_assert_eq!(certificate.root_mod_q, root_q);
    Ok(Progression {
        n,
        p,
        q,
        t0,
        modulus: pq * pq,
        certificate,
    })
}

/// Re-checks a claimed specialization point from scratch: the pair
/// conditions, then v_p(m(t0)) = 1 and v_q(t0^2 + 1) = 1 in exact rational
/// arithmetic. Pure in its four arguments, and deliberately free of any
/// range condition on t0 so that every member of a certified progression
/// certifies too.
pub fn certify(n: u32, p: u64, q: u64, t0: u64) -> Certification {
    let pair = is_good_prime_pair(n, p, q);
    if !pair.good {
        return Certification {
            ok: false,
            reasons: pair.reasons,
            certificate: None,
        };
    }
    // a good pair implies n <= NORM_ROUTE_MAX_N, so the conductor 2^(n-1)
    // is well within range
    let m_poly = branch_values(1u32 << (n - 1))
        .expect("conductor in range for a good pair")
        .branch_poly;
    let t = rat_u64(t0);
    let vp = match valuation_p(&m_poly.eval(&t), &BigInt::from(p)).expect("p prime for a good pair")
    {
        Valuation::Finite(v) => v,
        Valuation::Infinity => {
            return Certification {
                ok: false,
                reasons: vec![format!("m({t0}) = 0; the branch polynomial has no integer roots")],
                certificate: None,
            }
        }
    };
    let t0_sq_plus_1 = &t * &t + Rat::from_integer(BigInt::from(1));
    let vq = match valuation_p(&t0_sq_plus_1, &BigInt::from(q)).expect("q prime for a good pair") {
        Valuation::Finite(v) => v,
        Valuation::Infinity => unreachable!("t0^2 + 1 is positive"),
    };
    let mut reasons = Vec::new();
    if vp != 1 {
        reasons.push(format!("v_{p}(m({t0})) = {vp}, need exactly 1"));
    }
    if vq != 1 {
        reasons.push(format!("v_{q}({t0}^2 + 1) = {vq}, need exactly 1"));
    }
    Certification {
        ok: reasons.is_empty(),
        reasons,
        certificate: Some(Certificate {
            root_mod_p: t0 % p,
            v_p_of_m_t0: vp,
            root_mod_q: t0 % q,
            v_q_of_t0sq_plus_1: vq,
            ssssoi_norms_checked: pair.norms_checked,
            used_7power_shortcut: pair.used_7power_shortcut,
        }),
    }
}
