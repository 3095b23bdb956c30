//! Evaluation of the nested radical tower at a rational point t.
//!
//! The tower under conductor m: the root of unity xi, the positive real
//! sqrt(t^2+1), the m-th roots x_{l,k} of t + 1 + (-1)^l sqrt(t^2+1) - xi^k,
//! the unit-indexed products y, the twisted sums z, the pair sums v, and
//! the real radicals mu. All branch choices are principal and fixed at
//! context construction.

use super::bigfloat::BigFloat;
use super::complex::APComplex;
use crate::arith::Rat;
use crate::cyclo::units;
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::OnceLock;

const MIN_PRECISION: u32 = 64;
const MAX_PRECISION: u32 = 1 << 16;

fn inv_mod_u64(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "inverse requires a unit");
    t.rem_euclid(m as i128) as u64
}

/// Newton iterations that take a ~2^-45 relative seed error below
/// 2^-(prec+guard) under quadratic convergence.
fn newton_steps(prec: u32) -> u32 {
    let mut err_bits = 45u64;
    let mut steps = 0;
    while err_bits < 2 * prec as u64 {
        err_bits *= 2;
        steps += 1;
    }
    steps
}

/// The root of z^m = c nearest the seed, which must already be accurate to
/// f64 precision so the iteration stays inside the right basin.
fn newton_root(seed: APComplex, m: u32, c: &APComplex) -> APComplex {
    let prec = c.precision();
    let m_f = BigFloat::from_i64(m as i64, prec);
    let mut z = seed;
    for _ in 0..newton_steps(prec) {
        let zm1 = z.powi(m as u64 - 1);
        let zm = zm1.mul(&z);
        let delta = zm.sub(c).div(&zm1.scale(&m_f));
        z = z.sub(&delta);
    }
    z
}

/// Principal m-th root: the root with argument in [0, 2pi/m).
fn principal_mth_root(c: &APComplex, m: u32) -> APComplex {
    assert!(!c.is_zero(), "m-th root of zero has no principal branch");
    let re = c.re().to_f64();
    let im = c.im().to_f64();
    let r = re.hypot(im);
    let mut theta = im.atan2(re);
    if theta < 0.0 {
        theta += std::f64::consts::TAU;
    }
    let root_r = r.powf(1.0 / m as f64);
    let a = theta / m as f64;
    let seed = APComplex::from_f64_parts(root_r * a.cos(), root_r * a.sin(), c.precision());
    newton_root(seed, m, c)
}

/// exp(2pi i/m) to the given precision.
fn root_of_unity(m: u32, prec: u32) -> APComplex {
    let angle = std::f64::consts::TAU / m as f64;
    let seed = APComplex::from_f64_parts(angle.cos(), angle.sin(), prec);
    newton_root(seed, m, &APComplex::one(prec))
}

/// Immutable cache of every radical the conjugate formulas draw from, at
/// one conductor, specialization point, and working precision.
pub struct RadicalContext {
    m: u32,
    t: Rat,
    precision: u32,
    xi: Vec<APComplex>,
    sqrt_t2p1: BigFloat,
    x: [BTreeMap<u32, APComplex>; 2],
    z: [OnceLock<Vec<APComplex>>; 2],
}

/// Builds the cache: xi and its powers, the positive sqrt(t^2+1), and the
/// principal m-th roots x_{l,k} for l in {1,2} and k coprime to m.
pub fn build_context(m: u32, t: &Rat, precision: u32) -> Result<RadicalContext> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!(
            "conductor must be at least 3, got {m}"
        )));
    }
    if !(MIN_PRECISION..=MAX_PRECISION).contains(&precision) {
        return Err(Error::InvalidArgument(format!(
            "precision must lie in [{MIN_PRECISION}, {MAX_PRECISION}], got {precision}"
        )));
    }

    let xi1 = root_of_unity(m, precision);
    let mut xi = Vec::with_capacity(m as usize);
    xi.push(APComplex::one(precision));
    for k in 1..m {
        xi.push(xi[(k - 1) as usize].mul(&xi1));
    }

    let t2p1 = t * t + Rat::from_integer(1.into());
    let sqrt_t2p1 = BigFloat::from_rat(&t2p1, precision).sqrt();
    let t_plus_1 = APComplex::from_rat(&(t + Rat::from_integer(1.into())), precision);
    let sqrt_c = APComplex::from_real(sqrt_t2p1.clone());

    let mut x = [BTreeMap::new(), BTreeMap::new()];
    for (idx, base) in [t_plus_1.sub(&sqrt_c), t_plus_1.add(&sqrt_c)]
        .into_iter()
        .enumerate()
    {
        for k in units(m) {
            let c = base.sub(&xi[k as usize]);
            x[idx].insert(k, principal_mth_root(&c, m));
        }
    }

    Ok(RadicalContext {
        m,
        t: t.clone(),
        precision,
        xi,
        sqrt_t2p1,
        x: x,
        z: [OnceLock::new(), OnceLock::new()],
    })
}

impl RadicalContext {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn t(&self) -> &Rat {
        &self.t
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The positive real sqrt(t^2 + 1).
    pub fn sqrt_t2p1(&self) -> &BigFloat {
        &self.sqrt_t2p1
    }

    /// xi^k for any integer k.
    pub fn xi_pow(&self, k: i64) -> &APComplex {
        &self.xi[k.rem_euclid(self.m as i64) as usize]
    }

    /// x_{l,k}; l in {1,2}, k coprime to m.
    pub fn x_value(&self, ell: u8, k: u32) -> Result<&APComplex> {
        let table = match ell {
            1 | 2 => &self.x[ell as usize - 1],
            _ => return Err(Error::InvalidArgument(format!("l must be 1 or 2, got {ell}"))),
        };
        table.get(&(k % self.m)).ok_or_else(|| {
            Error::InvalidArgument(format!("k = {k} is not a unit modulo {}", self.m))
        })
    }

    fn z_table(&self, ell: u8) -> &[APComplex] {
        let idx = ell as usize - 1;
        self.z[idx].get_or_init(|| {
            let m = self.m as u64;
            let us = units(self.m);
            // y_j = prod_k x_{l,k}^{r(j/k)} with r(j/k) = j k^{-1} mod m in [0, m-1]
            let ys: BTreeMap<u32, APComplex> = us
                .iter()
                .map(|&j| {
                    let mut y = APComplex::one(self.precision);
                    for &k in &us {
                        let r = j as u64 * inv_mod_u64(k as u64, m) % m;
                        y = y.mul(&self.x[idx][&k].powi(r));
                    }
                    (j, y)
                })
                .collect();
            // z_l = sum_j xi^(l j) y_j, tabulated over l mod m
            (0..self.m)
                .map(|l| {
                    let mut s = APComplex::zero(self.precision);
                    for &j in &us {
                        let e = (l as u64 * j as u64 % m) as i64;
                        s = s.add(&self.xi[e as usize].mul(&ys[&j]));
                    }
                    s
                })
                .collect()
        })
    }

    /// z_{l, idx} for any integer index; periodic with period m.
    pub fn z_value(&self, ell: u8, index: i64) -> Result<&APComplex> {
        if !(1..=2).contains(&ell) {
            return Err(Error::InvalidArgument(format!("l must be 1 or 2, got {ell}")));
        }
        let table = self.z_table(ell);
        Ok(&table[index.rem_euclid(self.m as i64) as usize])
    }
}

/// The m values z_{l,1}, ..., z_{l,m}.
pub fn z_values(ctx: &RadicalContext, ell: u8) -> Result<Vec<APComplex>> {
    (1..=ctx.m as i64)
        .map(|l| ctx.z_value(ell, l).cloned())
        .collect()
}

/// v_delta(d) = sum_{l=1}^m z_{2,l} z_{1,-dl+delta}; d must square to 1
/// modulo m.
pub fn v_value(ctx: &RadicalContext, d: i64, delta: i64) -> Result<APComplex> {
    let m = ctx.m as i64;
    let dd = d.rem_euclid(m);
    if (dd * dd).rem_euclid(m) != 1 {
        return Err(Error::InvalidArgument(format!(
            "twist {d} is not an involution modulo {m}"
        )));
    }
    let mut s = APComplex::zero(ctx.precision);
    for l in 1..=m {
        s = s.add(&ctx.z_value(2, l)?.mul(ctx.z_value(1, delta - dd * l)?));
    }
    Ok(s)
}

/// The four real radicals (mu, -mu, mu', -mu') with mu the positive square
/// root of t^2 + 1 + t sqrt(t^2+1) and mu' = sqrt(t^2+1)/mu. Values in
/// {mu, -mu} belong with the + sign of sqrt(t^2+1) in the conjugate
/// formula, values in {mu', -mu'} with the - sign.
pub fn mu_values(ctx: &RadicalContext) -> Result<[APComplex; 4]> {
    if ctx.t.is_zero() {
        return Err(Error::BranchPoint(
            "t = 0 is a branch point; the inner radical degenerates".into(),
        ));
    }
    let t2p1 = BigFloat::from_rat(&(&ctx.t * &ctx.t + Rat::from_integer(1.into())), ctx.precision);
    let t_f = BigFloat::from_rat(&ctx.t, ctx.precision);
    // sqrt(t^2+1) > |t| makes the radicand positive for every rational t
    let radicand = t2p1.add(&t_f.mul(&ctx.sqrt_t2p1));
    let mu = radicand.sqrt();
    let mu_prime = ctx.sqrt_t2p1.div(&mu);
    Ok([
        APComplex::from_real(mu.clone()),
        APComplex::from_real(mu.neg()),
        APComplex::from_real(mu_prime.clone()),
        APComplex::from_real(mu_prime.neg()),
    ])
}
