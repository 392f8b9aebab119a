use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed direction ({a},{b}): {reason}")]
    MalformedDirection {
        a: i64,
        b: i64,
        reason: &'static str,
    },

    #[error("duplicate direction ({a},{b})")]
    DuplicateDirection { a: i64, b: i64 },

    #[error("direction set with M={big_m}, N={big_n} is not valid for a {m}x{n} grid")]
    InvalidDirectionSet {
        big_m: i64,
        big_n: i64,
        m: usize,
        n: usize,
    },

    #[error("empty direction set")]
    EmptyDirectionSet,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index ({u},{v}) out of range")]
    IndexOutOfRange { u: usize, v: usize },

    #[error("grid does not have zero line sums along direction ({a},{b})")]
    NotZeroSum { a: i64, b: i64 },

    #[error("switching decomposition left a nonzero residual")]
    DecompositionResidual,

    #[error("line sums are not compatible (residual {residual:e})")]
    IncompatibleLineSums { residual: f64 },

    #[error("inconsistent totals: {0}")]
    InconsistentTotals(String),

    #[error("no binary solution: D - |f0|^2 is negative")]
    NegativeRadicand,

    #[error("no binary solution: D - E - |f0|^2 is negative")]
    NegativeSlack,

    #[error("value is not an integer: {0}")]
    NonIntegerResult(String),

    #[error("lattice dimension {dim} too large for vertex enumeration (cap {cap})")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("direction ({a},{b}) is not admissible on the {n}x{n} torus")]
    NotAdmissible { a: i64, b: i64, n: usize },

    #[error("directions ({a},{b}) and ({c},{d}) are not independent modulo {n}")]
    DependentDirections {
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        n: usize,
    },

    #[error("rectangles {0} and {1} overlap")]
    OverlappingRectangles(usize, usize),

    #[error("invalid rectangle {index}: {reason}")]
    InvalidRectangle { index: usize, reason: String },

    #[error("binary grid entry at ({i},{j}) is not 0 or 1")]
    NotBinary { i: usize, j: usize },

    #[error("non-finite value at ({i},{j})")]
    NonFinite { i: usize, j: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code used in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedDirection { .. } => "malformed_direction",
            Error::DuplicateDirection { .. } => "duplicate_direction",
            Error::InvalidDirectionSet { .. } => "invalid_direction_set",
            Error::EmptyDirectionSet => "empty_direction_set",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::NotZeroSum { .. } => "not_zero_sum",
            Error::DecompositionResidual => "decomposition_residual",
            Error::IncompatibleLineSums { .. } => "incompatible_line_sums",
            Error::InconsistentTotals(_) => "inconsistent_totals",
            Error::NegativeRadicand | Error::NegativeSlack => "no_binary_solution",
            Error::NonIntegerResult(_) => "non_integer_result",
            Error::DimensionTooLarge { .. } => "dimension_too_large",
            Error::NotAdmissible { .. } => "not_admissible",
            Error::DependentDirections { .. } => "dependent_directions",
            Error::OverlappingRectangles(..) => "overlapping_rectangles",
            Error::InvalidRectangle { .. } => "invalid_rectangle",
            Error::NotBinary { .. } => "not_binary",
            Error::NonFinite { .. } => "non_finite",
            Error::Parse(_) => "parse_error",
        }
    }
}
