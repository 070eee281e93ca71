use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {q} exceeds the supported bound {bound}")]
    OrderTooLarge { q: u32, bound: u32 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("generator matrix is singular")]
    SingularMatrix,
    #[error("lattice does not fit the precision window (needs {needed}, have {available})")]
    PrecisionOverflow { needed: u32, available: u32 },
    #[error("lattice is not contained in the other")]
    NotContained,
    #[error("lattice is not between the given bounds")]
    NotInWindow,
    #[error("vertices are not adjacent")]
    NotAdjacent,
    #[error("vertices are not close")]
    NotClose,
    #[error("vertex is not special of type 0")]
    NotSpecial,
    #[error("enumeration exceeds the cap of {cap} objects")]
    EnumerationTooLarge { cap: usize },
    #[error("face is not a simplex of the complex")]
    FaceNotInComplex,
    #[error("chambers do not lie in a common apartment")]
    NotInCommonApartment,
    #[error("integer overflow in exact count")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
