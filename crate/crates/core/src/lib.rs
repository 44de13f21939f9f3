//! Approximate functional equations of quadratic and Artin-type
//! L-functions, class-number-formula volume terms, GL(2)/GL(3) elliptic
//! orbital products, and numerical probes of the smoothing of real orbital
//! integrals near the discriminant locus.

pub mod arith;
pub mod cli;
pub mod elliptic;
pub mod error;
pub mod gamma_afe;
pub mod lfunctions;
pub mod numeric;
pub mod polynomials;
pub mod smoothing;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
