//! Arbitrary-precision complex evaluation of the nested radical
//! expressions at a rational specialization point.
//!
//! The carrier is a binary floating value with an explicit mantissa-width
//! budget; every operation rounds back to the working precision of its
//! inputs. Branch choices are fixed once: square roots of positive reals
//! are positive, m-th roots take the argument window [0, 2pi/m), and the
//! root of unity is the one nearest exp(2pi i/m). Derived quantities carry
//! roughly the working precision and are always consumed with a 2^(-prec/2)
//! tolerance, which precision doubling can make arbitrarily strict.

mod bigfloat;
mod complex;
mod radical;

pub use bigfloat::BigFloat;
pub use complex::APComplex;
pub use radical::{build_context, mu_values, v_value, z_values, RadicalContext};
