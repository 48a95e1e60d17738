use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cell ({p}, {q}) lies outside the square [0, {n}]^2")]
    OutOfRangeCell { p: i64, q: i64, n: usize },

    #[error("cell ({p}, {q}) listed more than once")]
    DuplicateCell { p: usize, q: usize },

    #[error("cell ({p}, {q}) has negative value {value}")]
    NegativeValue { p: usize, q: usize, value: i128 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shifting a dimension-{n} table by {shift} does not fit in dimension {ambient}")]
    ShiftOverflow {
        n: usize,
        shift: usize,
        ambient: usize,
    },

    #[error("arithmetic overflow in {0}")]
    ArithmeticOverflow(&'static str),

    #[error("row {p} is outside [0, {n}]")]
    RowOutOfRange { p: i64, n: usize },

    #[error("bundle rank must be positive")]
    ZeroRank,

    #[error("{0}")]
    InvalidModel(String),

    #[error("line bundle of degree {degree} on a genus-{genus} curve needs an explicit {which}")]
    AmbiguousSpecialBundle {
        genus: u64,
        degree: i64,
        which: &'static str,
    },

    #[error("codimension {0} is below 2")]
    CodimTooSmall(i64),

    #[error("not a blow-up: cell ({p}, {q}) would become negative")]
    NotABlowUp { p: usize, q: usize },

    #[error("rank {rank} at q = {q} exceeds available dimension {bound}")]
    RankExceedsDimension { q: usize, rank: u64, bound: u64 },

    #[error("step {index}: {source}")]
    Step { index: usize, source: Box<Error> },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("unknown operation `{0}`")]
    UnknownOperation(String),

    #[error("undefined name `{0}`")]
    UndefinedName(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),
}

impl Error {
    pub(crate) fn at_step(self, index: usize) -> Self {
        Error::Step {
            index,
            source: Box::new(self),
        }
    }
}
