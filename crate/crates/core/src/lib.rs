//! Weyl modules, Jantzen sums and branching for the classical groups of
//! types A, B and D over fields of arbitrary characteristic.
//!
//! Weights are integer vectors in fundamental-weight coordinates. All
//! arithmetic is exact.

pub mod branching;
pub mod charcalc;
pub mod cli;
pub mod error;
pub mod jantzen;
pub mod rootdata;
pub mod structure;
pub mod weylact;

pub use error::{Error, Result};
pub use rootdata::{EpsVector, Family, GroupType, RootSystem, Weight};
