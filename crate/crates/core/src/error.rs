use thiserror::Error;

/// Errors raised by ring, matrix and stabilizer operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("negative exponent at byte {pos} is not allowed in polynomial mode")]
    NegativeExponent { pos: usize },

    #[error("operands live in different rings ({left} vs {right})")]
    RingMismatch { left: String, right: String },

    #[error("variable index {index} out of range for a ring in {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("no exact quotient: {dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },

    #[error("{0} is not a unit multiple of a product of c-powers")]
    NotCProduct(String),

    #[error("{element} does not lie in the ideal {ideal}")]
    NotInIdeal { element: String, ideal: String },

    #[error("denominator c^{exp} is deeper than allowed")]
    DenomTooDeep { exp: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("determinant {det} is not a unit")]
    NotAUnit { det: String },

    #[error("index constraint violated: {0}")]
    IndexConstraint(String),

    #[error("matrix does not stabilize the column; defect A*c - c = [{}]", .defect.join(", "))]
    NotStabilizing { defect: Vec<String> },

    #[error("matrix is not invertible; determinant {det}")]
    NotInvertible { det: String },

    #[error("residue relation failed: {0}")]
    RelationFailed(String),

    #[error("matrix is not in the 2x2 column stabilizer: entry ({row},{col}) = {witness}")]
    NotInStab2 { row: usize, col: usize, witness: String },

    #[error("ring mode or size unsupported: {0}")]
    ModeMismatch(String),

    #[error("matrix is outside the congruence scheme: {0}")]
    NotInScheme(String),

    #[error("malformed document: {0}")]
    Document(String),
}

impl Error {
    /// Whether the error stems from malformed input text rather than a
    /// mathematical precondition.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::NegativeExponent { .. } | Error::Document(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
