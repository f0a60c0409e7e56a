//! Exact computation with K-k-Schur functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`partition`]: partitions, cells, residues, strips.
//! * [`cores`]: `(k+1)`-cores, the bounded/core bijection, weak strips.
//! * [`hring`]: exact polynomials in `h_1, ..., h_k` and K-k-Schur vectors.
//! * [`engine`]: the Pieri rule and conversion between the two bases.
//! * [`verify`]: exhaustive checks of factorization identities.
//! * [`cache`]: on-disk cache of expansions used by the command line tool.

pub mod binomial;
pub mod cache;
pub mod cores;
pub mod engine;
pub mod error;
pub mod hring;
pub mod partition;
pub mod verify;

pub use cores::{BoundedPartition, CoreCache, CorePartition};
pub use engine::ExpansionTable;
pub use error::{Error, Result};
pub use hring::{HMonomial, HPolynomial, KksVector};
pub use partition::{Cell, LevelContext, Partition};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
