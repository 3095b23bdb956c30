//! Statistical check of a polynomial's Galois group by factor-degree
//! sampling. A monic squarefree polynomial whose roots are permuted
//! regularly by the Galois group G factors modulo every unramified prime
//! into irreducibles of one common degree, the order of the Frobenius
//! element, and by Chebotarev that degree e appears with asymptotic
//! frequency (elements of order e)/|G|. Mixed degrees at a single prime,
//! or a degree outside the order support, disprove the target outright;
//! frequency mismatches only withhold confirmation.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rat_frac, rat_str, ModPoly, OddPrimes, QPoly, Rat};
use crate::groups::{expected_pattern_distribution, GroupSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Inconclusive,
}

/// Outcome of sampling factor-degree patterns modulo the first `num_primes`
/// odd primes. Frequencies are exact rationals in "num/den" form, taken
/// over the unramified primes with a uniform pattern; `degree_counts` keeps
/// the raw tallies. `best_alternative` names the closest order-8 group by
/// order distribution when a degree-8 input is refuted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub polynomial: Vec<String>,
    pub target: GroupSpec,
    pub primes_sampled: usize,
    pub skipped_ramified: usize,
    pub degree_counts: BTreeMap<u64, usize>,
    pub empirical_frequencies: BTreeMap<u64, String>,
    pub expected_frequencies: BTreeMap<u64, String>,
    pub max_abs_deviation: String,
    pub uniformity_violations: usize,
    pub forbidden_pattern_hits: usize,
    pub best_alternative: Option<String>,
    pub verdict: Verdict,
}

/// Exact discriminant (-1)^(d(d-1)/2) Res(f, f') / lc(f).
pub fn discriminant(poly: &QPoly) -> Result<Rat> {
    let d = match poly.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::InvalidArgument(
                "discriminant of a constant polynomial".into(),
            ))
        }
    };
    let res = poly.resultant(&poly.derivative());
    let lead = poly.leading().expect("nonconstant").clone();
    let signed = if (d * (d - 1) / 2) % 2 == 1 { -res } else { res };
    Ok(signed / lead)
}

/// Order distributions of the five groups of order 8, used to name the
/// nearest alternative when a degree-8 target is refuted.
fn order8_candidates() -> Vec<(&'static str, BTreeMap<u64, Rat>)> {
    let dist = |pairs: &[(u64, i64)]| -> BTreeMap<u64, Rat> {
        pairs.iter().map(|&(e, c)| (e, rat_frac(c, 8))).collect()
    };
    vec![
        ("Q8", dist(&[(1, 1), (2, 1), (4, 6)])),
        ("D8", dist(&[(1, 1), (2, 5), (4, 2)])),
        ("Z8", dist(&[(1, 1), (2, 1), (4, 2), (8, 4)])),
        ("Z4xZ2", dist(&[(1, 1), (2, 3), (4, 4)])),
        ("Z2^3", dist(&[(1, 1), (2, 7)])),
    ]
}

/// Largest |empirical - expected| over the union of the two supports,
/// with absent entries read as zero.
fn max_deviation(empirical: &BTreeMap<u64, Rat>, expected: &BTreeMap<u64, Rat>) -> Rat {
    let mut dev = Rat::zero();
    for key in empirical.keys().chain(expected.keys()) {
        let e = empirical.get(key).cloned().unwrap_or_else(Rat::zero);
        let x = expected.get(key).cloned().unwrap_or_else(Rat::zero);
        let d = (e - x).abs();
        if d > dev {
            dev = d;
        }
    }
    dev
}

/// Samples the factorization of `poly` modulo the first `num_primes` odd
/// primes, skipping any prime that divides the discriminant's numerator or
/// denominator or a coefficient denominator. Each unramified prime yields
/// a degree pattern; mixed degrees and degrees outside the expected support
/// are hard failures, frequency deviation beyond the tolerance (0.10 for
/// num_primes >= 200, 0.15 below) merely withholds the consistent verdict.
/// The seed is reserved for optional subsampling; the prime sequence is
/// fixed and ascending, so reports are deterministic.
pub fn verify(
    poly: &QPoly,
    spec: &GroupSpec,
    num_primes: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let _ = seed;
    let degree = poly.degree().unwrap_or(0);
    if degree as u64 != spec.group_order() {
        return Err(Error::InvalidArgument(format!(
            "degree {degree} does not match the group order {}",
            spec.group_order()
        )));
    }
    if !poly.is_monic() {
        return Err(Error::InvalidArgument("polynomial must be monic".into()));
    }
    if num_primes < 50 {
        return Err(Error::InvalidArgument(format!(
            "at least 50 primes are needed for a meaningful sample, got {num_primes}"
        )));
    }
    if poly.gcd(&poly.derivative()).degree() != Some(0) {
        return Err(Error::InvalidArgument(
            "polynomial must be squarefree".into(),
        ));
    }
    let disc = discriminant(poly)?;
    // one product captures every prime that must be skipped
    let mut ramified_product: BigUint = disc.numer().magnitude() * disc.denom().magnitude();
    for c in poly.coeffs() {
        ramified_product *= c.denom().magnitude();
    }

    let expected = expected_pattern_distribution(spec);
    let mut skipped = 0usize;
    let mut sampled = 0usize;
    let mut violations = 0usize;
    let mut forbidden = 0usize;
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for p in OddPrimes::new().take(num_primes) {
        let pb = BigUint::from(p);
        if ramified_product.is_multiple_of(&pb) {
            skipped += 1;
            continue;
        }
        // p divides neither the discriminant nor a denominator, so the
        // reduction exists and stays squarefree
        let pattern = ModPoly::from_qpoly(poly, &pb)?.ddf_degree_pattern()?;
        sampled += 1;
        if pattern.len() > 1 {
            violations += 1;
        }
        if pattern.keys().any(|&d| !expected.contains_key(&(d as u64))) {
            forbidden += 1;
        }
        if pattern.len() == 1 {
            let (&d, _) = pattern.iter().next().expect("single entry");
            *counts.entry(d as u64).or_insert(0) += 1;
        }
    }

    let uniform_total: usize = counts.values().sum();
    let empirical: BTreeMap<u64, Rat> = counts
        .iter()
        .map(|(&d, &c)| (d, rat_frac(c as i64, uniform_total as i64)))
        .collect();
    let deviation = max_deviation(&empirical, &expected);

    let tolerance = if num_primes >= 200 {
        rat_frac(1, 10)
    } else {
        rat_frac(3, 20)
    };
    let verdict = if violations > 0 || forbidden > 0 {
        Verdict::Inconsistent
    } else if sampled < 50 {
        Verdict::Inconclusive
    } else if deviation <= tolerance {
        Verdict::Consistent
    } else {
        Verdict::Inconclusive
    };

    let best_alternative = if verdict == Verdict::Inconsistent && degree == 8 {
        let mut best: Option<(&str, Rat)> = None;
        for (name, dist) in order8_candidates() {
            let d = max_deviation(&empirical, &dist);
            if best.as_ref().map_or(true, |(_, b)| d < *b) {
                best = Some((name, d));
            }
        }
        best.map(|(name, _)| name.to_string())
    } else {
        None
    };

    Ok(VerificationReport {
        polynomial: poly.to_strings(),
        target: spec.clone(),
        primes_sampled: sampled,
        skipped_ramified: skipped,
        degree_counts: counts,
        empirical_frequencies: empirical.iter().map(|(&d, r)| (d, rat_str(r))).collect(),
        expected_frequencies: expected.iter().map(|(&d, r)| (d, rat_str(r))).collect(),
        max_abs_deviation: rat_str(&deviation),
        uniformity_violations: violations,
        forbidden_pattern_hits: forbidden,
        best_alternative,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_rat, rat_i64};
    use crate::builder::build_specialized;
    use crate::groups::GroupSpec;
    use num_bigint::BigInt;

    fn x8_minus_2() -> QPoly {
        QPoly::from_i64(&[-2, 0, 0, 0, 0, 0, 0, 0, 1])
    }

    #[test]
    fn discriminant_fixtures() {
        assert_eq!(discriminant(&QPoly::from_i64(&[1, 0, 1])).unwrap(), rat_i64(-4));
        assert_eq!(discriminant(&QPoly::from_i64(&[0, -1, 1])).unwrap(), rat_i64(1));
        assert_eq!(discriminant(&QPoly::from_i64(&[0, -1, 0, 1])).unwrap(), rat_i64(4));
        assert_eq!(discriminant(&QPoly::from_i64(&[5, 1])).unwrap(), rat_i64(1));
        assert!(discriminant(&QPoly::from_i64(&[7])).is_err());
    }

    #[test]
    fn input_validation() {
        let q8 = GroupSpec::quaternion(3).unwrap();
        let wrong_degree = QPoly::from_i64(&[1, 0, 1]);
        assert!(matches!(
            verify(&wrong_degree, &q8, 300, 0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            verify(&x8_minus_2(), &q8, 49, 0),
            Err(Error::InvalidArgument(_))
        ));
        let not_monic = QPoly::from_i64(&[-2, 0, 0, 0, 0, 0, 0, 0, 3]);
        assert!(matches!(
            verify(&not_monic, &q8, 300, 0),
            Err(Error::InvalidArgument(_))
        ));
        let squareful = QPoly::from_i64(&[0, 0, 1]).mul(&QPoly::from_i64(&[0, 0, 0, 0, 0, 0, 1]));
        assert!(matches!(
            verify(&squareful, &q8, 300, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    // X^8 - 2 has a degree-16 splitting field, so against Q8 the sampler
    // must see both mixed patterns and octic factors, and the nearest
    // order-8 distribution is the one with elements of order 8
    #[test]
    fn octic_non_galois_input_is_refuted() {
        let q8 = GroupSpec::quaternion(3).unwrap();
        let report = verify(&x8_minus_2(), &q8, 300, 0).unwrap();
        assert_eq!(report.verdict, Verdict::Inconsistent);
        assert_eq!(report.primes_sampled, 300);
        assert_eq!(report.skipped_ramified, 0);
        assert_eq!(report.uniformity_violations, 77);
        assert_eq!(report.forbidden_pattern_hits, 78);
        let counts: Vec<(u64, usize)> = report.degree_counts.iter().map(|(&d, &c)| (d, c)).collect();
        assert_eq!(counts, [(1, 18), (2, 16), (4, 111), (8, 78)]);
        assert_eq!(report.best_alternative.as_deref(), Some("Z8"));
        assert_eq!(report.max_abs_deviation, "78/223");

        // frequencies over the 223 uniform primes sum to exactly 1
        let total: Rat = report
            .empirical_frequencies
            .values()
            .map(|s| parse_rat(s).unwrap())
            .sum();
        assert_eq!(total, rat_i64(1));
    }

    #[test]
    fn specific_prime_patterns_match_direct_factorization() {
        for (p, want) in [
            (3u64, vec![(4usize, 2usize)]),
            (5, vec![(8, 1)]),
            (7, vec![(1, 2), (2, 3)]),
        ] {
            let pattern = ModPoly::from_qpoly(&x8_minus_2(), &BigUint::from(p))
                .unwrap()
                .ddf_degree_pattern()
                .unwrap();
            let got: Vec<(usize, usize)> = pattern.into_iter().collect();
            assert_eq!(got, want, "mod {p}");
        }
    }

    // (X^2+1)(X^2-2)(X^4+1) is squarefree of degree 8 but reducible, so
    // split primes deliver mixed degrees: refuted by uniformity alone
    #[test]
    fn reducible_input_is_refuted_by_uniformity() {
        let poly = QPoly::from_i64(&[1, 0, 1])
            .mul(&QPoly::from_i64(&[-2, 0, 1]))
            .mul(&QPoly::from_i64(&[1, 0, 0, 0, 1]));
        assert_eq!(poly.to_strings()[..3], ["-2/1", "0/1", "-1/1"]);
        let q8 = GroupSpec::quaternion(3).unwrap();
        let report = verify(&poly, &q8, 300, 0).unwrap();
        assert_eq!(report.verdict, Verdict::Inconsistent);
        // disc = -2^17 3^4 5^4, so exactly the candidates 3 and 5 drop out
        assert_eq!(report.skipped_ramified, 2);
        assert_eq!(report.primes_sampled, 298);
        assert_eq!(report.uniformity_violations, 154);
        assert_eq!(report.forbidden_pattern_hits, 0);
        let counts: Vec<(u64, usize)> = report.degree_counts.iter().map(|(&d, &c)| (d, c)).collect();
        assert_eq!(counts, [(1, 68), (2, 76)]);
        // D8 and Z2^3 tie at deviation 25/72; the fixed candidate order
        // keeps the first
        assert_eq!(report.best_alternative.as_deref(), Some("D8"));
    }

    #[test]
    fn built_quaternion_realization_is_consistent() {
        let spec = GroupSpec::quaternion(3).unwrap();
        let built = build_specialized(&spec, &rat_i64(804), 256).unwrap();
        let report = verify(built.poly(), &spec, 300, 0).unwrap();
        assert_eq!(report.verdict, Verdict::Consistent, "report: {report:?}");
        assert_eq!(report.uniformity_violations, 0);
        assert_eq!(report.forbidden_pattern_hits, 0);
        assert_eq!(report.primes_sampled + report.skipped_ramified, 300);
        assert!(report.degree_counts.keys().all(|d| [1, 2, 4].contains(d)));
        assert!(parse_rat(&report.max_abs_deviation).unwrap() <= rat_frac(1, 10));
        let expected: Vec<(u64, String)> = report
            .expected_frequencies
            .iter()
            .map(|(&d, s)| (d, s.clone()))
            .collect();
        assert_eq!(
            expected,
            [(1, "1/8".into()), (2, "1/8".into()), (4, "3/4".into())]
        );

        // determinism: the seed is reserved and the prime sequence fixed
        let again = verify(built.poly(), &spec, 300, 7).unwrap();
        assert_eq!(again, report);
    }

    // a polynomial whose discriminant is divisible by every candidate
    // prime leaves nothing to sample: inconclusive, not consistent
    #[test]
    fn exhausted_prime_supply_is_inconclusive() {
        let primorial: BigInt = OddPrimes::new().take(300).map(BigInt::from).product();
        let mut poly = QPoly::from_i64(&[1]);
        for j in 0..6 {
            let root = Rat::from_integer(BigInt::from(j) * &primorial);
            poly = poly.mul(&QPoly::new(vec![-root, rat_i64(1)]));
        }
        let s3 = GroupSpec::dihedral(3).unwrap();
        let report = verify(&poly, &s3, 300, 0).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
        assert_eq!(report.primes_sampled, 0);
        assert_eq!(report.skipped_ramified, 300);
        assert_eq!(report.uniformity_violations, 0);
        assert_eq!(report.forbidden_pattern_hits, 0);
        assert!(report.empirical_frequencies.is_empty());
        assert_eq!(report.max_abs_deviation, "1/2");
    }

    #[test]
    fn report_serialization_shape() {
        let q8 = GroupSpec::quaternion(3).unwrap();
        let report = verify(&x8_minus_2(), &q8, 300, 0).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.starts_with(
            "{\"polynomial\":[\"-2/1\",\"0/1\",\"0/1\",\"0/1\",\"0/1\",\"0/1\",\"0/1\",\"0/1\",\"1/1\"],\
             \"target\":{\"family\":\"quaternion\",\"m\":null,\"d\":null,\"n\":3},"
        ), "{json}");
        assert!(json.contains("\"degree_counts\":{\"1\":18,\"2\":16,\"4\":111,\"8\":78}"));
        assert!(json.contains("\"expected_frequencies\":{\"1\":\"1/8\",\"2\":\"1/8\",\"4\":\"3/4\"}"));
        assert!(json.contains("\"best_alternative\":\"Z8\""));
        assert!(json.ends_with("\"verdict\":\"inconsistent\"}"));
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
