//! Exact construction of polynomials over Q whose Galois groups are prescribed
//! metacyclic groups (dihedral, quasidihedral, modular, generalized quaternion,
//! and general Z/m x| Z/2), together with certified arithmetic progressions of
//! specialization points for the quaternion family and a statistical verifier
//! that checks Frobenius factor-degree patterns against the target group.
//!
//! Layer map, bottom to top:
//! - [`arith`]: big rationals, polynomials over Q and over F_p, CRT, valuations,
//!   primality, distinct-degree factorization, rational reconstruction.
//! - [`cyclo`]: exact arithmetic in Q(zeta_m), branch values and the branch
//!   polynomial, and the norm sets that decide which primes are usable.
//! - [`groups`]: finite models of the target groups and their element-order
//!   statistics, which drive the verifier's expectations.
//! - [`numerics`]: arbitrary-precision complex evaluation of the radical
//!   expressions (roots of unity, nested square roots, m-th roots).
//! - [`builder`]: assembles the conjugate set at a rational point t, expands
//!   the product polynomial, and rationalizes the coefficients exactly.
//! - [`finder`]: produces and certifies progressions t = t0 mod p^2 q^2 whose
//!   members all realize the generalized quaternion group.
//! - [`verifier`]: samples factorization patterns modulo many primes and
//!   compares them with the group's order distribution.

pub mod arith;
pub mod builder;
pub mod cyclo;
mod error;
pub mod finder;
pub mod groups;
pub mod numerics;
pub mod verifier;

pub use error::{Error, Result};
