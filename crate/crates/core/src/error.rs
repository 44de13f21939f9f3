use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a discriminant (must be nonzero and congruent to 0 or 1 mod 4)")]
    NotDiscriminant(i64),
    #[error("{0} is a perfect square: no quadratic field discriminant")]
    SquareDiscriminant(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("input out of range: {0}")]
    OutOfRange(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("divergent series: {0}")]
    Divergent(String),
    #[error("gamma function pole at {0}")]
    Pole(String),
    #[error("quadrature did not converge: estimated error {estimate:e} exceeds {tolerance:e}")]
    Quadrature { estimate: f64, tolerance: f64 },
    #[error("invalid gamma shape: {0}")]
    InvalidShape(String),
    #[error("not a Galois cubic: {0}")]
    NotGaloisCubic(String),
    #[error("point is not on the discriminant zero locus (disc = {0})")]
    NotSingular(f64),
    #[error("finite-difference step {0:e} too small for double precision")]
    StepUnderflow(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
