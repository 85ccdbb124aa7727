//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("point outside the chain domain")]
    OutOfDomain,
    #[error("requested certification not reachable within the precision cap")]
    PrecisionExhausted,
    #[error("defining polynomial P[{i},{j}] references a chain entry above its level")]
    ArityViolation { i: usize, j: usize },
    #[error("chain data malformed: {0}")]
    MalformedChain(String),
    #[error("interval division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("interval sqrt of a negative interval")]
    SqrtOfNegative,
    #[error("function suspected identically zero on the domain")]
    IdenticallyZeroSuspected,
    #[error("fiber degenerate at the queried base point")]
    DegenerateFiber,
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("parameter hypothesis violated: need d >= (g+1) n, got d={d}, g={g}, n={n}")]
    HypothesisViolated { g: u32, n: u32, d: u32 },
    #[error("norm certification failed: bound {got} exceeds contract {want}")]
    CertificationFailed { got: f64, want: f64 },
    #[error("curve map carries no certificate at the required order")]
    CertificationMissing,
    #[error("cover piece still overflows after reaching the split depth cap")]
    PieceOverflow,
    #[error("height query invalid: {0}")]
    BadHeightQuery(String),
    #[error("analytic/algebraic torsion cross-check mismatch: {0}")]
    CrossCheckMismatch(String),
    #[error("evaluation point too close to a lattice pole")]
    NearPole,
    #[error("variety degenerate for encoding: {0}")]
    DegenerateVariety(String),
    #[error("elliptic curve is singular (4a^3 + 27b^2 = 0)")]
    SingularCurve,
    #[error("input is not valid: {0}")]
    BadInput(String),
    #[error("torsion structure unstable when doubling the search order: {0}")]
    StructureUnstable(String),
}
