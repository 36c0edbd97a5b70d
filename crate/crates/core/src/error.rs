use thiserror::Error;

use crate::lattice::LatticePoint;

/// Errors raised by the lattice, homology, spectral, motivic and classifier layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inconsistent semigroup: {0}")]
    InconsistentSemigroup(String),

    #[error("path inconsistency at {point}: increments along different monotone paths disagree")]
    PathInconsistency { point: LatticePoint },

    #[error("grid bound {bound} too small: {reason}")]
    MarginTooSmall { bound: LatticePoint, reason: String },

    #[error("invalid series input: {0}")]
    InvalidSeries(String),

    #[error("Euler characteristic {eu} does not match delta {delta}")]
    EulerMismatch { eu: i64, delta: i64 },

    #[error("torsion {invariants:?} found in E1 entry at {point}, k={k}, n={n}")]
    TorsionFound {
        point: LatticePoint,
        k: usize,
        n: i64,
        invariants: Vec<u64>,
    },

    #[error("no minimal spectral cycle group of degree k={k} at weight n={n} for |m|={mult}")]
    UndefinedWeight { k: usize, n: i64, mult: u32 },

    #[error("cannot certify truncation at depth {depth}: {reason}")]
    TruncationUnsound { depth: i64, reason: String },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("classifier routes disagree: pointwise={pointwise}, homological={homological}, motivic={motivic}")]
    RouteDisagreement {
        pointwise: String,
        homological: String,
        motivic: String,
    },

    #[error("unknown germ {0:?}")]
    UnknownGerm(String),

    #[error("bad parameters for {name}: {reason}")]
    BadParams { name: String, reason: String },

    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
