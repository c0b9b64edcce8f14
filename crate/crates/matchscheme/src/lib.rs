//! Exact-arithmetic construction of the association scheme of perfect
//! matchings of K_2n, its character table, idempotents and zonal spherical
//! functions, with verification suites for the matching derangement graph,
//! Erdős–Ko–Rado extremal families, and the perfect matching polytope at
//! desk scale (n ≤ 7).
//!
//! All counting and algebra is exact: arbitrary-precision integers and
//! rationals, no floating point anywhere. Heavy scans are data-parallel via
//! rayon (default feature `parallel`); disabling the feature yields a
//! sequential build that produces bit-identical results.

pub mod cache;
pub mod combinatorics;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod matching;
pub mod polytope;
pub mod report;
pub mod derangement;
pub mod ekr;
pub mod scheme;
pub mod spectrum;
pub mod verify;

pub use combinatorics::{Partition, PartitionIndex};
pub use error::{Error, Result};
pub use matching::Matching;
pub use cache::SchemeTables;
pub use report::{ReportSet, Status, VerificationReport};
