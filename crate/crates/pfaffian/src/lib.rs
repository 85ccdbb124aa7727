//! Certified computation with Pfaffian functions.
//!
//! The crate represents Pfaffian chains and functions with exact format/degree
//! bookkeeping, evaluates them rigorously through validated ODE stepping, and builds
//! on that kernel: three-valued membership for semi-Pfaffian sets, certified root
//! isolation and cell decomposition in dimensions <= 2, cellular r-parameterization
//! with machine-checkable norm certificates, rational point enumeration with
//! hypersurface covers, and torsion-structure computations on products of elliptic
//! curves.
//!
//! All numerics run over exact rationals and outward-rounded dyadic intervals, so
//! every decided answer (a sign, a membership, a containment receipt) is certified.

pub mod error;
pub mod num;
pub mod poly;
pub mod chain;
pub mod ode;
pub mod realfn;
pub mod roots;
pub mod setdesc;
pub mod celldec;
pub mod expr;
pub mod param;
pub mod heights;
pub mod linalg;
pub mod counting;
pub mod elliptic;
pub mod catalog;

pub use error::{Error, Result};

/// Exact rational scalar used for all serializable data.
pub type Rat = num_rational::BigRational;
/// Exact big integer.
pub type Int = num_bigint::BigInt;

pub(crate) fn rat_i64(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}
