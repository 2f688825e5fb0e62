//! Error type shared by every stage of the solver.

use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by the solver. Each variant names the stage that produced it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero {0} is not in the open upper half-plane")]
    NotUpperHalfPlane(Complex64),

    #[error("zero {0} appears more than once")]
    RepeatedZero(Complex64),

    #[error("zero set is not closed under a -> -conj(a): missing partner of {0}")]
    NotSymmetric(Complex64),

    #[error("sample set is not closed under reflection in the imaginary axis")]
    NotReflectionClosed,

    #[error("point {0} is the pole of the transfer map")]
    ExcludedPoint(Complex64),

    #[error("hypothesis |b_a(z)| >= gamma fails for zero a = {zero} (|b_a(z)| = {value})")]
    BlasEstHypothesis { zero: Complex64, value: f64 },

    #[error("no point in the top half of the square has |B| >= eta = {eta} (best {best})")]
    NoTopHalfWitness { eta: f64, best: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("generation limit of {0} exceeded")]
    GenerationLimit(usize),

    #[error("slit geometry check failed: {0}")]
    SlitGeometry(String),

    #[error("sign condition violated between y = {y_low} and y = {y_high}")]
    SignCondition { y_low: f64, y_high: f64 },

    #[error("branch tracking failed: {0}")]
    Branch(String),

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("grid mismatch")]
    GridMismatch,

    #[error("numerical tolerance exceeded in {stage}: {detail}")]
    Tolerance { stage: &'static str, detail: String },

    #[error("interpolation is ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("f1 and f2 share a zero; the pair is not unimodular")]
    CommonZero,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
