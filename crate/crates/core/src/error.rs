use thiserror::Error;

use crate::set::ElementSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set must contain at least one element")]
    EmptyGround,
    #[error("ground set has {0} elements; at most {max} are supported", max = ElementSet::MAX_ELEMENTS)]
    TooManyElements(usize),
    #[error("duplicate ground-set label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown ground-set label {0:?}")]
    UnknownLabel(String),
    #[error("matroid needs at least one basis")]
    EmptyBases,
    #[error("bases have unequal cardinality: expected {expected}, found {found}")]
    UnequalCardinality { expected: usize, found: usize },
    #[error("basis exchange fails for bases {first:?} and {second:?} at element {element}")]
    ExchangeAxiomViolated { first: ElementSet, second: ElementSet, element: usize },
    #[error("invalid rank {r} for a ground set of size {n}")]
    InvalidRank { r: i64, n: i64 },
    #[error("set {0:?} is not contained in the ground set")]
    OutOfGround(ElementSet),
    #[error("set {0:?} is not a flat")]
    NotAFlat(ElementSet),
    #[error("flat {lower:?} is not contained in {upper:?}")]
    NotNested { lower: ElementSet, upper: ElementSet },
    #[error("invalid flag of flats: {0}")]
    InvalidFlag(String),
    #[error("matroid has loops; its Bergman fan is empty")]
    HasLoops,
    #[error("lattice has {flats} flats, above the limit of {limit}")]
    SizeLimit { flats: usize, limit: usize },
    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index i = {i} out of range for a flag of length {d}")]
    IndexOutOfRange { i: usize, d: usize },
    #[error("k = {k} outside the admissible range {min}..={max}")]
    KOutOfRange { k: usize, min: usize, max: usize },
    #[error("weight function does not match the skeleton cells: {0}")]
    DomainMismatch(String),
    #[error("inconsistent dimensions: {0}")]
    InconsistentDimensions(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
