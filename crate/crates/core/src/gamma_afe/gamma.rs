//! Complex gamma function (Lanczos, g = 7, n = 9) and Stirling's modulus
//! approximation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `log Gamma(z)` on some branch; only `exp` of integer multiples of it is
/// meaningful to callers.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("{z}")));
    }
    Ok(ln_gamma_unchecked(z))
}

fn ln_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_unchecked(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(format!("{z}")));
    }
    if z.im == 0.0 && z.re > 0.0 && z.re <= 171.0 && z.re.fract() == 0.0 {
        // exact factorials for small positive integers
        let n = z.re as u32;
        return Ok(Complex64::new((1..n).map(f64::from).product(), 0.0));
    }
    Ok(ln_gamma_unchecked(z).exp())
}

/// `sqrt(2 pi) |t|^(sigma - 1/2) e^(-pi |t| / 2)`, the leading Stirling
/// approximation to `|Gamma(sigma + i t)|`, valid for `|t| >= 1`.
pub fn stirling_gamma(sigma: f64, t: f64) -> Result<f64> {
    let at = t.abs();
    if at < 1.0 {
        return Err(Error::OutOfRange(format!("|t| = {at} < 1")));
    }
    Ok((2.0 * PI).sqrt() * at.powf(sigma - 0.5) * (-PI * at / 2.0).exp())
}
