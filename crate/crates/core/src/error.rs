use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("floor certification failed at {bits} bits for {what}")]
    Certification { what: String, bits: usize },
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("FFT output {value} at index {index} is farther than {margin} from an integer")]
    MarginViolation { index: usize, value: f64, margin: f64 },
    #[error("no admissible N0 below {0}")]
    NoThreshold(u64),
    #[error("sphere is empty at lambda = {0}")]
    EmptySphere(u64),
    #[error("quadrature resolution insufficient: {0}")]
    Resolution(String),
    #[error("second derivative sandwich violated: {0}")]
    Sandwich(String),
    #[error("tolerance breach: {0}")]
    Tolerance(String),
    #[error("horizon guard: {0}")]
    Horizon(String),
}

pub type Result<T> = std::result::Result<T, Error>;
