//! Error type shared across the crate.
//!
//! Everything here is a hard precondition or internal-consistency failure;
//! verification *outcomes* (a conjecture failing, a bound not met) are not
//! errors — they are reported through [`crate::report::VerificationReport`].

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A size parameter is outside the range an operation supports.
    #[error("{what} = {value} outside supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    /// Double factorial of a positive even number is not defined here.
    #[error("double factorial is undefined for {0}")]
    BadDoubleFactorial(i64),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition {partition} does not sum to {expected}")]
    WrongPartitionSum { partition: String, expected: usize },

    #[error("rank {rank} out of range for n = {n} (must be < {count})")]
    RankOutOfRange { n: usize, rank: u64, count: u64 },

    #[error("matchings have different sizes: n = {0} vs n = {1}")]
    SizeMismatch(usize, usize),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("vertex {vertex} invalid for n = {n} (vertices are 1..={max})")]
    InvalidVertex { vertex: usize, n: usize, max: usize },

    /// The sphere-size formula must divide exactly; a remainder means the
    /// formula was applied to something that is not a partition of n.
    #[error("exact division failed in {0}")]
    InexactDivision(String),

    /// An association-scheme axiom that should hold by theory failed in
    /// computation (representative dependence, non-symmetric tensor, ...).
    #[error("scheme property violated: {0}")]
    SchemeViolation(String),

    /// The characteristic polynomial of an intersection matrix did not
    /// factor completely over the integers.
    #[error("non-integer eigenvalue: {0}")]
    NonIntegerEigenvalue(String),

    /// Joint eigenspace refinement stalled above dimension one.
    #[error("eigenspace of dimension {0} could not be split to dimension 1")]
    Degenerate(usize),

    /// Column labeling by (multiplicity, zonal value) was not unique.
    #[error("character table column labeling failed: {0}")]
    Labeling(String),

    /// Two independent routes to the same quantity disagree.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("randomized construction failed after {restarts} restarts (seed {seed})")]
    SearchFailed { restarts: u32, seed: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
