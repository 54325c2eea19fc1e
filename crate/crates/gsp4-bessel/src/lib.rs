//! Exact arithmetic for Bessel models of the Steinberg representation of
//! `GSp(4)` over `Q_p`.
//!
//! The crate is layered bottom-up:
//!
//! * [`scalars`]: cyclotomic numbers, multivariate rational functions over
//!   them, and univariate rational functions in `X = q^-s`.
//! * [`padic`]: the base field `Q` with a `p`-adic valuation and the
//!   quadratic algebra `L`.
//! * [`grp`]: 4x4 matrices, similitudes, Iwahori membership and the named
//!   matrices `s1`, `s2`, `eta0`, `h(l,m)`, `W_w`, ...
//! * [`bessel`]: the characters, coset addresses, the Bessel value table
//!   and the reduction of group elements to addresses.
//! * [`hecke`]: Hecke and Atkin-Lehner checks, character sums, sampling
//!   checks and volume oracles.
//! * [`zeta`]: newform values, the local zeta integral and L-factors.
//! * [`cli`]: configuration and JSON-lines reporting.

pub mod bessel;
pub mod cli;
pub mod error;
pub mod grp;
pub mod hecke;
pub mod padic;
pub mod report;
pub mod scalars;
pub mod zeta;

pub use error::{Error, Result};
