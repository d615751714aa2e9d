use thiserror::Error;

/// Errors produced by construction, validation and measure evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace} but a density matrix must have trace 1")]
    BadTrace { trace: f64 },

    #[error("factor index {index} out of range for {len} tensor factors")]
    BadIndex { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("expected a {expected} state, got factor dimensions {got:?}")]
    BadDims { expected: String, got: Vec<usize> },

    #[error("size {size} exceeds the dense cap of {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("transfer map has {multiplicity} unit eigenvalues; invariant state is not unique")]
    DegenerateFixedPoint { multiplicity: usize },

    #[error("Kraus pair is not unital (residual {residual:.3e})")]
    NotUnital { residual: f64 },

    #[error("invalid parameters: {0}")]
    BadParams(String),

    #[error("the paper gives no closed form for {measure} in family {family}")]
    Undefined { family: String, measure: String },

    #[error("invalid sweep specification: {0}")]
    BadSpec(String),

    #[error("objective is not finite at {at}")]
    NonFinite { at: String },
}

impl Error {
    /// Short machine-readable tag, stable across message rewording.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotPsd { .. } => "NotPSD",
            Error::BadTrace { .. } => "BadTrace",
            Error::BadIndex { .. } => "BadIndex",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::BadDims { .. } => "BadDims",
            Error::TooLarge { .. } => "TooLarge",
            Error::DegenerateFixedPoint { .. } => "DegenerateFixedPoint",
            Error::NotUnital { .. } => "NotUnital",
            Error::BadParams(_) => "BadParams",
            Error::Undefined { .. } => "Undefined",
            Error::BadSpec(_) => "BadSpec",
            Error::NonFinite { .. } => "NonFinite",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
