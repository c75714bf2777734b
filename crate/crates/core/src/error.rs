use crate::rational::Rational;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("interval [{lo}, {hi}] is not contained in [0, 1]")]
    OutOfDomain { lo: Rational, hi: Rational },
    #[error("empty interval: lower bound {lo} exceeds upper bound {hi}")]
    EmptyInterval { lo: Rational, hi: Rational },
    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),
    #[error("invalid piecewise-linear function: {0}")]
    InvalidPiecewise(String),
    #[error("arithmetic failure on piece [{lo}, {hi})")]
    PieceArithmetic { lo: Rational, hi: Rational },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid density: {0}")]
    InvalidDensity(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("profile has {got} locations but the game has {expected} agents")]
    ProfileLength { expected: usize, got: usize },
    #[error("agent {agent} at {location} is outside its feasible range [{lo}, {hi}]")]
    InvalidLocation {
        agent: usize,
        location: Rational,
        lo: Rational,
        hi: Rational,
    },
    #[error("operation requires the {required} utility mode")]
    ModeMismatch { required: &'static str },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("degenerate instance: {0}")]
    Degenerate(String),
    #[error("construction {case} failed certification: {detail}")]
    CertificationFailed { case: String, detail: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
