//! Finite models of the target Galois groups.
//!
//! Each group is enumerated concretely: pairs over Z/m x Z/2 with a twisted
//! multiplication for the semidirect families, normal forms L^a S^b for the
//! generalized quaternion groups. Element-order statistics derived here feed
//! the factor-degree expectations used by the verifier.

use crate::arith::{rat_frac, Rat};
use crate::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

/// Practical ceiling on the cyclic part; keeps full enumeration cheap.
const MAX_M: u32 = 4096;
const MAX_N: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupFamily {
    #[serde(rename = "semidirect")]
    SemidirectC2,
    #[serde(rename = "dihedral")]
    Dihedral,
    #[serde(rename = "quasidihedral")]
    QuasiDihedral,
    #[serde(rename = "modular")]
    Modular,
    #[serde(rename = "quaternion")]
    Quaternion,
}

/// Validated parameters of one target group.
///
/// Semidirect families carry the cyclic order m and the twist d (a unit mod
/// m with d^2 = 1); the named 2-power families pin m and d as functions of
/// n; Quaternion carries only n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    family: GroupFamily,
    m: Option<u32>,
    d: Option<u32>,
    n: Option<u32>,
}

impl GroupSpec {
    /// Z/m twisted by d, where conjugation by the involution raises to the
    /// d-th power. Any d with d^2 = 1 mod m is accepted, including 1 and -1.
    pub fn semidirect(m: u32, d: i64) -> Result<Self> {
        Self::build(GroupFamily::SemidirectC2, Some(m), Some(d), None)
    }

    /// Dihedral group of order 2m (twist d = -1).
    pub fn dihedral(m: u32) -> Result<Self> {
        Self::build(GroupFamily::Dihedral, Some(m), None, None)
    }

    /// Quasidihedral group of order 2^n (m = 2^(n-1), d = 2^(n-2) - 1).
    pub fn quasidihedral(n: u32) -> Result<Self> {
        Self::build(GroupFamily::QuasiDihedral, None, None, Some(n))
    }

    /// Modular group of order 2^n (m = 2^(n-1), d = 2^(n-2) + 1).
    pub fn modular(n: u32) -> Result<Self> {
        Self::build(GroupFamily::Modular, None, None, Some(n))
    }

    /// Generalized quaternion group of order 2^n.
    pub fn quaternion(n: u32) -> Result<Self> {
        Self::build(GroupFamily::Quaternion, None, None, Some(n))
    }

    fn build(family: GroupFamily, m: Option<u32>, d: Option<i64>, n: Option<u32>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        let check_n = |n: Option<u32>| -> Result<u32> {
            match n {
                Some(n) if (3..=MAX_N).contains(&n) => Ok(n),
                Some(n) => Err(Error::InvalidArgument(format!(
                    "n must lie in [3, {MAX_N}], got {n}"
                ))),
                None => Err(Error::InvalidArgument("n is required".into())),
            }
        };
        let check_m = |m: Option<u32>| -> Result<u32> {
            match m {
                Some(m) if (3..=MAX_M).contains(&m) => Ok(m),
                Some(m) => Err(Error::InvalidArgument(format!(
                    "m must lie in [3, {MAX_M}], got {m}"
                ))),
                None => Err(Error::InvalidArgument("m is required".into())),
            }
        };
        match family {
            GroupFamily::SemidirectC2 => {
                let m = check_m(m)?;
                let d = match d {
                    Some(d) => d.rem_euclid(m as i64) as u32,
                    None => return bad("semidirect groups need a twist d".into()),
                };
                if d.gcd(&m) != 1 {
                    return bad(format!("twist {d} is not a unit mod {m}"));
                }
                if (d as u64 * d as u64) % m as u64 != 1 {
                    return bad(format!("twist {d} is not an involution mod {m}"));
                }
                Ok(GroupSpec {
                    family,
                    m: Some(m),
                    d: Some(d),
                    n: None,
                })
            }
            GroupFamily::Dihedral => {
                let m = check_m(m)?;
                Ok(GroupSpec {
                    family,
                    m: Some(m),
                    d: Some(m - 1),
                    n: None,
                })
            }
            GroupFamily::QuasiDihedral | GroupFamily::Modular => {
                let n = check_n(n)?;
                let m = 1u32 << (n - 1);
                let half = 1u32 << (n - 2);
                let d = if family == GroupFamily::QuasiDihedral {
                    half - 1
                } else {
                    half + 1
                };
                Ok(GroupSpec {
                    family,
                    m: Some(m),
                    d: Some(d % m),
                    n: Some(n),
                })
            }
            GroupFamily::Quaternion => {
                let n = check_n(n)?;
                Ok(GroupSpec {
                    family,
                    m: None,
                    d: None,
                    n: Some(n),
                })
            }
        }
    }

    pub fn family(&self) -> GroupFamily {
        self.family
    }

    pub fn m(&self) -> Option<u32> {
        self.m
    }

    pub fn d(&self) -> Option<u32> {
        self.d
    }

    pub fn n(&self) -> Option<u32> {
        self.n
    }

    pub fn group_order(&self) -> u64 {
        match self.family {
            GroupFamily::Quaternion => 1u64 << self.n.unwrap(),
            _ => 2 * self.m.unwrap() as u64,
        }
    }
}

/// Multiset of element orders of a finite group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderDistribution {
    pub orders: BTreeMap<u64, u64>,
    pub group_order: u64,
}

fn order_of<T: Copy + Eq>(x: T, id: T, mul: impl Fn(T, T) -> T) -> u64 {
    let mut acc = x;
    let mut k = 1u64;
    while acc != id {
        acc = mul(acc, x);
        k += 1;
    }
    k
}

/// Exact element-order multiset, computed by enumerating every element and
/// finding its order by repeated multiplication.
pub fn element_orders(spec: &GroupSpec) -> OrderDistribution {
    let mut orders: BTreeMap<u64, u64> = BTreeMap::new();
    match spec.family {
        GroupFamily::Quaternion => {
            let n = spec.n.unwrap();
            let m = 1u64 << (n - 1);
            let half = 1u64 << (n - 2);
            // normal form L^a S^b; S L = L^{-1} S and S^2 = L^{2^{n-2}}
            let mul = |x: (u64, u8), y: (u64, u8)| -> (u64, u8) {
                let c = if x.1 == 0 { y.0 } else { (m - y.0) % m };
                let wrap = if x.1 == 1 && y.1 == 1 { half } else { 0 };
                ((x.0 + c + wrap) % m, x.1 ^ y.1)
            };
            for a in 0..m {
                for b in 0..2u8 {
                    *orders.entry(order_of((a, b), (0, 0), mul)).or_insert(0) += 1;
                }
            }
        }
        _ => {
            let m = spec.m.unwrap() as u64;
            let d = spec.d.unwrap() as u64;
            // (a, e)(a', e') = (a + d^e a', e + e')
            let mul = |x: (u64, u8), y: (u64, u8)| -> (u64, u8) {
                let twisted = if x.1 == 0 { y.0 } else { d * y.0 % m };
                ((x.0 + twisted) % m, x.1 ^ y.1)
            };
            for a in 0..m {
                for e in 0..2u8 {
                    *orders.entry(order_of((a, e), (0, 0), mul)).or_insert(0) += 1;
                }
            }
        }
    }
    let dist = OrderDistribution {
        orders,
        group_order: spec.group_order(),
    };
    debug_assert_eq!(dist.orders.values().sum::<u64>(), dist.group_order);
    debug_assert_eq!(dist.orders.get(&1), Some(&1));
    dist
}

/// Expected distribution of irreducible factor degrees of the splitting
/// polynomial modulo a large unramified prime. The Galois group acts
/// regularly on the conjugates, so all factors share the degree of the
/// Frobenius element and the probability of degree e is count(e)/|G|.
pub fn expected_pattern_distribution(spec: &GroupSpec) -> BTreeMap<u64, Rat> {
    let dist = element_orders(spec);
    dist.orders
        .iter()
        .map(|(&e, &c)| (e, rat_frac(c as i64, dist.group_order as i64)))
        .collect()
}

/// Index labels of the conjugate set the polynomial is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConjugateLabel {
    /// (delta, epsilon) in [1, m] x {0, 1} for the semidirect families.
    DeltaEpsilon { delta: u32, epsilon: u8 },
    /// (a, delta) in [1, 4] x [0, 2^(n-2) - 1] for the quaternion family.
    ADelta { a: u32, delta: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugateIndexSet {
    pub description: String,
    pub labels: Vec<ConjugateLabel>,
}

impl ConjugateIndexSet {
    pub fn cardinality(&self) -> usize {
        self.labels.len()
    }
}

/// The label set indexing the conjugates: 2m labels for the semidirect
/// families, 2^n for the quaternion family.
pub fn conjugate_index_set(spec: &GroupSpec) -> ConjugateIndexSet {
    match spec.family {
        GroupFamily::Quaternion => {
            let quarter = 1u32 << (spec.n.unwrap() - 2);
            let mut labels = Vec::new();
            for a in 1..=4 {
                for delta in 0..quarter {
                    labels.push(ConjugateLabel::ADelta { a, delta });
                }
            }
            ConjugateIndexSet {
                description: format!("(a, delta) in [1, 4] x [0, {}]", quarter - 1),
                labels,
            }
        }
        _ => {
            let m = spec.m.unwrap();
            let mut labels = Vec::new();
            for delta in 1..=m {
                for epsilon in 0..2u8 {
                    labels.push(ConjugateLabel::DeltaEpsilon { delta, epsilon });
                }
            }
            ConjugateIndexSet {
                description: format!("(delta, epsilon) in [1, {m}] x {{0, 1}}"),
                labels,
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GroupSpecWire {
    family: GroupFamily,
    m: Option<u32>,
    d: Option<u32>,
    n: Option<u32>,
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupSpecWire {
            family: self.family,
            m: self.m,
            d: self.d,
            n: self.n,
        }
        .serialize(s)
    }
}

/// Builds a validated spec from a family tag plus whichever parameters that
/// family needs; omitted fields are filled from the family, present fields
/// must agree with it.
pub fn spec_from_parts(
    family: GroupFamily,
    m: Option<u32>,
    d: Option<u32>,
    n: Option<u32>,
) -> Result<GroupSpec> {
    let need = |v: Option<u32>, name: &str| {
        v.ok_or_else(|| Error::InvalidArgument(format!("{name} is required")))
    };
    let built = match family {
        GroupFamily::SemidirectC2 => {
            GroupSpec::semidirect(need(m, "m")?, need(d, "d")? as i64)?
        }
        GroupFamily::Dihedral => GroupSpec::dihedral(need(m, "m")?)?,
        GroupFamily::QuasiDihedral => GroupSpec::quasidihedral(need(n, "n")?)?,
        GroupFamily::Modular => GroupSpec::modular(need(n, "n")?)?,
        GroupFamily::Quaternion => GroupSpec::quaternion(need(n, "n")?)?,
    };
    // declared fields must agree with the family's derived values
    for (given, derived, name) in [(m, built.m, "m"), (d, built.d, "d"), (n, built.n, "n")] {
        if let (Some(g), Some(v)) = (given, derived) {
            if g != v {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {g} conflicts with the family's value {v}"
                )));
            }
        }
    }
    Ok(built)
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = GroupSpecWire::deserialize(d)?;
        spec_from_parts(w.family, w.m, w.d, w.n).map_err(serde::de::Error::custom)
    }
}
