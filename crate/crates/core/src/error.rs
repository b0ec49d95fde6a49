use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: incompatible shapes {left_rows}x{left_cols} and {right_rows}x{right_cols}")]
    ShapeMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare { op: &'static str, rows: usize, cols: usize },

    #[error("{op}: invalid dimension: {detail}")]
    InvalidDimension { op: &'static str, detail: String },

    #[error("matrix is not Hermitian (defect norm {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary (defect norm {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("malformed angular momentum value: {0}")]
    MalformedAngularMomentum(String),

    #[error("tensor index out of range: j={j}, k={k}, q={q}")]
    TensorIndex { j: String, k: i64, q: i64 },

    #[error("basis is not orthogonal with a common positive norm (defect {defect:.3e})")]
    DegenerateBasis { defect: f64 },

    #[error("outcome has no support (weight {weight:.3e})")]
    ZeroProbability { weight: f64 },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("POVM element not found: {0}")]
    UnknownElement(String),
}
