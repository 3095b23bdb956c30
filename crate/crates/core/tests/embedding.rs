//! Cross-layer checks: the exact cyclotomic arithmetic and the floating
//! radical evaluation must describe the same field. Norms computed by
//! resultants are compared against products over all complex embeddings,
//! and the branch polynomial must vanish at the embedded branch values.

use metagal_core::arith::{rat_frac, rat_i64, QPoly};
use metagal_core::cyclo::{branch_values, cyclo_norm, units, CycloElement};
use metagal_core::numerics::{build_context, APComplex, RadicalContext};

/// Image of the element under zeta -> xi^k, at the context's precision.
fn embed(e: &CycloElement, ctx: &RadicalContext, k: u32) -> APComplex {
    let mut acc = APComplex::zero(ctx.precision());
    for (i, c) in e.coords().iter().enumerate() {
        let term = ctx
            .xi_pow(k as i64 * i as i64)
            .scale(&metagal_core::numerics::BigFloat::from_rat(c, ctx.precision()));
        acc = acc.add(&term);
    }
    acc
}

fn eval_complex(f: &QPoly, x: &APComplex) -> APComplex {
    let prec = x.precision();
    f.coeffs().iter().rev().fold(APComplex::zero(prec), |acc, c| {
        acc.mul(x).add(&APComplex::from_rat(c, prec))
    })
}

#[test]
fn norm_matches_product_of_embeddings() {
    for m in [4u32, 8, 16] {
        let ctx = build_context(m, &rat_i64(1), 256).unwrap();
        let one = CycloElement::one(m).unwrap();
        let zeta = CycloElement::zeta_pow(m, 1).unwrap();
        let candidates = [
            one.sub(&zeta),
            CycloElement::from_rat(m, rat_i64(2)).unwrap().sub(&zeta),
            one.scale(&rat_frac(5, 3)).add(&zeta.scale(&rat_frac(7, 2))),
        ];
        for e in &candidates {
            let exact = cyclo_norm(e);
            let mut numeric = APComplex::one(256);
            for k in units(m) {
                numeric = numeric.mul(&embed(e, &ctx, k));
            }
            let diff = numeric.sub(&APComplex::from_rat(&exact, 256));
            assert!(
                diff.abs_lt_pow2(-64),
                "m = {m}: embedding product differs from the resultant norm {exact}"
            );
        }
    }
}

#[test]
fn branch_poly_vanishes_at_embedded_branch_values() {
    for m in [4u32, 8] {
        let data = branch_values(m).unwrap();
        let ctx = build_context(m, &rat_i64(1), 256).unwrap();
        for (&k, s) in &data.s_values {
            let s_num = embed(s, &ctx, 1);

            // the embedded value satisfies its defining formula
            let one = APComplex::one(256);
            let w = one.sub(ctx.xi_pow(k as i64));
            let half = metagal_core::numerics::BigFloat::from_rat(&rat_frac(1, 2), 256);
            let direct = one.div(&w).sub(&w).scale(&half);
            assert!(
                s_num.sub(&direct).abs_lt_pow2(-100),
                "m = {m}, k = {k}: stored branch value disagrees with -(1-xi^k)/2 + 1/(2(1-xi^k))"
            );

            // and it is a root of the expanded branch polynomial
            let value = eval_complex(&data.branch_poly, &s_num);
            assert!(
                value.abs_lt_pow2(-64),
                "m = {m}, k = {k}: branch polynomial does not vanish at the embedded value"
            );
        }
    }
}
