use thiserror::Error;

use crate::rootdata::{Family, Weight};

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. `code()` gives a stable
/// machine-readable tag used by the CLI and the C ABI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported family {0}")]
    UnsupportedFamily(String),

    #[error("rank {rank} is not valid for family {family:?} (minimum {min})")]
    InvalidRank { family: Family, rank: usize, min: usize },

    #[error("weight has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight {0:?} is not dominant")]
    NotDominant(Weight),

    #[error("{0} is not a prime (use 0 for characteristic zero)")]
    InvalidPrime(u64),

    #[error("characteristic {0} is not supported here")]
    UnsupportedCharacteristic(u64),

    #[error("vector {0:?} is not in the weight lattice")]
    NotInLattice(Vec<i64>),

    #[error("vector {0:?} is not in the root lattice")]
    NotInRootLattice(Vec<i64>),

    #[error("pairing with the zero vector")]
    ZeroRoot,

    #[error("{0} is not of the form required here")]
    InvalidWeight(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("character is not Weyl-group invariant")]
    NotInvariant,

    #[error("no composition factor data for L({nu:?}) above {mu:?}")]
    UnknownFactorization { nu: Weight, mu: Weight },

    #[error("multiplicity of L({0:?}) is not determined by the available bounds")]
    AmbiguousMultiplicity(Weight),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnsupportedFamily(_) => "unsupported-family",
            Error::InvalidRank { .. } => "invalid-rank",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NotDominant(_) => "not-dominant",
            Error::InvalidPrime(_) => "invalid-prime",
            Error::UnsupportedCharacteristic(_) => "unsupported-characteristic",
            Error::NotInLattice(_) => "not-in-lattice",
            Error::NotInRootLattice(_) => "not-in-root-lattice",
            Error::ZeroRoot => "zero-root",
            Error::InvalidWeight(_) => "invalid-weight",
            Error::Overflow(_) => "overflow",
            Error::NotInvariant => "not-invariant",
            Error::UnknownFactorization { .. } => "unknown-factorization",
            Error::AmbiguousMultiplicity(_) => "ambiguous-multiplicity",
            Error::Internal(_) => "internal",
        }
    }

    /// True for errors caused by the caller's input rather than by the library.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::Overflow(_)
                | Error::NotInvariant
                | Error::UnknownFactorization { .. }
                | Error::AmbiguousMultiplicity(_)
                | Error::Internal(_)
        )
    }
}
