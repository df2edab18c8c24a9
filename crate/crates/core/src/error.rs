use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subsystem index {index} out of range for {count} factors")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e}, tolerance {tolerance:e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("not a density operator: {0}")]
    NotAState(String),

    #[error("not a channel: {0}")]
    NotAChannel(String),

    #[error("invalid private-state specification: {0}")]
    InvalidSpec(String),

    #[error("states are not orthogonal (overlap {0:e})")]
    NotOrthogonal(f64),

    #[error("total dimension {requested} exceeds cap {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),

    #[error("invalid matrix data: {0}")]
    InvalidMatrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(Error::Domain(format!("{name} = {x} is not in [0, 1]")));
    }
    Ok(())
}

pub(crate) fn check_dimension(name: &str, d: usize, min: usize) -> Result<()> {
    if d < min {
        return Err(Error::Domain(format!("{name} = {d} must be at least {min}")));
    }
    Ok(())
}
