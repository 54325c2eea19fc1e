//! Exact coefficient arithmetic.
//!
//! [`Cyc`] is the field of cyclotomic numbers (with `sqrt(p)` realized by a
//! Gauss sum), [`Scalar`] adds the indeterminates `at, bt, omg, lam`, and
//! [`RationalFunction`] is the field of rational functions in `X` over
//! [`Scalar`].

pub mod cyc;
pub mod mpoly;
pub mod ratfun;
pub mod scalar;
pub mod text;

pub use cyc::{Cyc, UnitRootExp, Q};
pub use mpoly::{MPoly, Var};
pub use ratfun::{geometric_closed_form, RationalFunction};
pub use scalar::Scalar;
pub use text::{parse_ratfun, parse_scalar};

use crate::error::Result;

/// `zeta_n^(n e)` for a declared cyclotomic order `n`.
pub fn root_of_unity(e: UnitRootExp, n: u64) -> Result<Scalar> {
    Ok(Scalar::from_cyc(Cyc::root_checked(e, n)?))
}
