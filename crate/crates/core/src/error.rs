use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid width {a} does not divide window side {side} into an integer number of cells")]
    NonIntegerGrid { side: f64, a: f64 },

    #[error("prediction {value} for class {class} at a = {a} leaves [0, 1]; the truncated expansion is not valid here")]
    OutOfRange { class: usize, a: f64, value: f64 },

    #[error("spherical quadrature did not converge: last two estimates {previous} and {current}")]
    QuadratureNotConverged { previous: f64, current: f64 },

    #[error("weight equations are infeasible on the given support (residual norm {residual:.3e})")]
    Infeasible { residual: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("weight file has no entry for class {0}")]
    MissingClass(usize),

    #[error("histogram has no interior windows")]
    EmptyWindow,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
