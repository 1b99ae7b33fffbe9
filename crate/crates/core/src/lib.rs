//! Cesàro summability and spectral asymptotics.
//!
//! Divergent series and weighted Dirac combs are evaluated in the Cesàro
//! sense; zeta values at non-positive integers, eigenvalue counting
//! functions, Lagrange reversion of symbols and small-t heat-trace
//! expansions are built on top of that.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod counting;
pub mod error;
pub mod expansion;
pub mod fit;
pub mod heat;
pub mod par;
pub mod poly;
pub mod precise;
pub mod quad;
pub mod reversion;
pub mod scalar;
pub mod spectra;
pub mod summability;
pub mod testfn;
pub mod zeta;

pub use error::{Error, Result};
pub use par::Exec;
pub use scalar::{Rational, Scalar};
