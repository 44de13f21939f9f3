use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma_complex;
use crate::error::{Error, Result};

/// Archimedean type of an Artin L-function: degree `d`, the total
/// multiplicities `d_plus`/`d_minus` of the eigenvalues `±1` of complex
/// conjugation over the real places, and the numbers of real and complex
/// places `r1`, `r2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct GammaShape {
    pub d: u32,
    pub d_plus: u32,
    pub d_minus: u32,
    pub r1: u32,
    pub r2: u32,
}

impl GammaShape {
    pub fn new(d: u32, d_plus: u32, d_minus: u32, r1: u32, r2: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidShape("degree 0".into()));
        }
        if d_plus + d_minus != d * r1 {
            return Err(Error::InvalidShape(format!(
                "d_plus + d_minus = {} but d * r1 = {}",
                d_plus + d_minus,
                d * r1
            )));
        }
        if r1 + r2 == 0 {
            return Err(Error::InvalidShape("no archimedean places".into()));
        }
        Ok(Self { d, d_plus, d_minus, r1, r2 })
    }

    /// Even quadratic Dirichlet character (`D > 0`).
    pub fn quadratic_even() -> Self {
        Self { d: 1, d_plus: 1, d_minus: 0, r1: 1, r2: 0 }
    }

    /// Odd quadratic Dirichlet character (`D < 0`).
    pub fn quadratic_odd() -> Self {
        Self { d: 1, d_plus: 0, d_minus: 1, r1: 1, r2: 0 }
    }

    pub fn quadratic(d: i64) -> Self {
        if d > 0 {
            Self::quadratic_even()
        } else {
            Self::quadratic_odd()
        }
    }

    /// `L(s, chi) L(s, chi^-1)` for the cubic character of a cyclic cubic field.
    pub fn cubic_galois() -> Self {
        Self { d: 2, d_plus: 2, d_minus: 0, r1: 1, r2: 0 }
    }

    /// Exponent of `Gamma(s/2)`.
    pub fn a(&self) -> u32 {
        self.d_plus + self.d * self.r2
    }

    /// Exponent of `Gamma((s+1)/2)`.
    pub fn b(&self) -> u32 {
        self.d_minus + self.d * self.r2
    }

    /// Decay rate of `|gamma(sigma + i t)|` in `|t|`: `(a+b) pi / 4`.
    pub fn decay_rate(&self) -> f64 {
        (self.a() + self.b()) as f64 * PI / 4.0
    }
}

/// `log gamma(s)`; poles are reported as [`Error::Pole`].
pub fn ln_gamma_factor(shape: &GammaShape, s: Complex64) -> Result<Complex64> {
    let (a, b) = (shape.a(), shape.b());
    let mut out = -((shape.d * (shape.r1 + shape.r2)) as f64) * PI.ln() / 2.0 * s;
    if a > 0 {
        out += a as f64 * ln_gamma_complex(s / 2.0)?;
    }
    if b > 0 {
        out += b as f64 * ln_gamma_complex((s + 1.0) / 2.0)?;
    }
    Ok(out)
}

/// `pi^(-d s (r1+r2)/2) Gamma(s/2)^a Gamma((s+1)/2)^b`.
pub fn gamma_factor(shape: &GammaShape, s: Complex64) -> Result<Complex64> {
    Ok(ln_gamma_factor(shape, s)?.exp())
}
