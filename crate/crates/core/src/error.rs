use crate::opalg::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("grading violation: commutator term q^{a} p^{b} carries hbar^0")]
    GradingViolation { a: u32, b: u32 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate endpoints: q_A = q_B = {0}")]
    DegenerateEndpoints(f64),
    #[error("shooting did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("conjugate point: normalized endpoint Jacobian {jacobian:e} below threshold")]
    ConjugatePoint { jacobian: f64 },
    #[error("numeric overflow at t = {t}")]
    Overflow { t: f64 },
    #[error("symbol has p-degree {degree} > 2 and no momentum cutoff was supplied")]
    PDegree { degree: usize },
    #[error("magnetic term not supported here: {0}")]
    MagneticUnsupported(&'static str),
    #[error("eigensolver failure: {0}")]
    Eigen(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
