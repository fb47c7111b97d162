use thiserror::Error;

/// Errors raised across the library. Most operations are total; the
/// variants here cover precondition violations and internal consistency
/// checks that indicate a convention bug rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pole: factor (1 - q^{a} t^{b}) vanishes at the evaluation point")]
    Pole { a: u32, b: u32 },
    #[error("exponent vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("expansion is not symmetric: {0:?} and its sorted rearrangement differ")]
    NotSymmetric(Vec<u32>),
    #[error("cell (row {row}, col {col}) is not in the diagram")]
    CellOutOfShape { row: usize, col: usize },
    #[error("rarm is undefined for cells in row 1")]
    RowOneHasNoRarm,
    #[error("partition has {len} parts but only {n} sites/variables")]
    ShapeTooWide { len: usize, n: usize },
    #[error("columns {0} and {1} have different heights")]
    UnequalColumnHeights(usize, usize),
    #[error("columns have heights {0} and {1}")]
    HeightMismatch(usize, usize),
    #[error("quinv {quinv} exceeds n(lambda) = {n_lambda}")]
    NegativeCoquinv { quinv: usize, n_lambda: usize },
    #[error("sum is not divisible by perm(lambda)")]
    InexactPermDivision,
    #[error("negative power of t survived the global factor")]
    NegativePowerResidue,
    #[error("expansions have {0} and {1} variables")]
    ArityMismatch(usize, usize),
    #[error("Markov chain is not irreducible")]
    Reducible,
    #[error("singular linear system")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid object: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
