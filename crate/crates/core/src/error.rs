use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size overflow: {0} does not fit in 64 bits")]
    SizeOverflow(String),

    #[error("size cap exceeded: {what} needs {len} elements, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        len: u128,
        cap: u128,
    },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("multi-index has modulus {found}, expected {expected}")]
    ModulusMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Components `first` and `other` (1-based, full-space positions) belong to
    /// class `class` but differ beyond tolerance.
    #[error("vector is not symmetric: components {first} and {other} of class {class} differ")]
    NotSymmetric {
        class: usize,
        first: usize,
        other: usize,
    },

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("matrix is not unitary: ||U*U - Id||_F = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("parameter condition {condition} violated: residual {residual:e} > tol {tol:e}")]
    ParamViolation {
        condition: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("inconsistent polynomial table: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}
