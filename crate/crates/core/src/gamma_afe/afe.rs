//! Evaluation of `L(s)` by the approximate functional equation.

use num_complex::Complex64;

use super::kernel::{AfeConfig, CutoffKernel};
use super::shape::{ln_gamma_factor, GammaShape};
use crate::error::{Error, Result};
use crate::lfunctions::QuadraticCharacter;
use crate::numeric::CompensatedSum;

/// Dirichlet coefficients `lambda(n)`, `n >= 1`, with a uniform bound.
pub trait Coefficients {
    fn coeff(&self, n: u64) -> f64;
    /// `sup |lambda(n)|`.
    fn bound(&self) -> f64;
}

impl Coefficients for QuadraticCharacter {
    fn coeff(&self, n: u64) -> f64 {
        self.value(n) as f64
    }

    fn bound(&self) -> f64 {
        1.0
    }
}

/// Coefficients given by a closure.
pub struct FnCoefficients<F> {
    pub f: F,
    pub bound: f64,
}

impl<F: Fn(u64) -> f64> Coefficients for FnCoefficients<F> {
    fn coeff(&self, n: u64) -> f64 {
        (self.f)(n)
    }

    fn bound(&self) -> f64 {
        self.bound
    }
}

/// A truncated smoothed Dirichlet series.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub error: f64,
    pub terms: u64,
}

/// Decay orders tried when sizing the series cutoff.
const DECAY_ORDERS: [f64; 6] = [4.0, 6.0, 8.0, 12.0, 16.0, 24.0];

/// Smallest `N` with `C_m Y^m N^(1-e-m) / (e+m-1) < target` over the
/// candidate `m`, where the summand is `n^-e kernel(n / Y)`; also returns the
/// resulting tail bound.
fn series_cutoff(kernel: &CutoffKernel, e: f64, scale: f64, target: f64) -> Result<(u64, f64)> {
    let mut best: Option<(u64, f64)> = None;
    for m in DECAY_ORDERS {
        let c = kernel.decay_constant(m)?;
        let k = e + m - 1.0;
        // ln N >= (ln(c) + m ln(Y) - ln(k target)) / k
        let ln_n = (c.ln() + m * scale.ln() - (k * target).ln()) / k;
        let n = ln_n.exp().ceil().max(1.0);
        if n > 1e9 {
            continue;
        }
        let tail = c * scale.powf(m) * n.powf(1.0 - k) / k;
        if best.is_none_or(|(bn, _)| (n as u64) < bn) {
            best = Some((n as u64, tail));
        }
    }
    best.ok_or_else(|| Error::OutOfRange("series cutoff exceeds 10^9 terms".into()))
}

fn smoothed_sum(
    kernel: &CutoffKernel,
    coeffs: &dyn Coefficients,
    e: f64,
    scale: f64,
    cfg: &AfeConfig,
) -> Result<SeriesValue> {
    let (auto_n, auto_tail) = series_cutoff(kernel, e, scale, cfg.tol / 10.0)?;
    let (n, tail) = match cfg.n_max {
        Some(n) if n < auto_n => {
            let m = 8.0;
            let k = e + m - 1.0;
            let c = kernel.decay_constant(m)?;
            (n, c * scale.powf(m) * (n as f64).powf(1.0 - k) / k)
        }
        Some(n) => (n, auto_tail),
        None => (auto_n, auto_tail),
    };
    let mut sum = CompensatedSum::new();
    let mut err = CompensatedSum::new();
    for k in 1..=n {
        let c = coeffs.coeff(k);
        if c == 0.0 {
            continue;
        }
        let w = (k as f64).powf(-e);
        let v = kernel.eval(k as f64 / scale);
        sum.add(c * w * v.value);
        err.add(c.abs() * w * v.error);
    }
    Ok(SeriesValue {
        value: sum.value(),
        error: err.value() + coeffs.bound() * tail,
        terms: n,
    })
}

/// First sum `sum lambda(n) n^-s V_s(n / (X sqrt q))`.
pub fn afe_first_term(
    shape: &GammaShape,
    s: f64,
    coeffs: &dyn Coefficients,
    cfg: &AfeConfig,
) -> Result<SeriesValue> {
    check_s(s)?;
    let kernel = CutoffKernel::cutoff(shape, s, cfg)?;
    smoothed_sum(&kernel, coeffs, s, cfg.x * (cfg.q as f64).sqrt(), cfg)
}

/// Second sum `eps(s) sum conj(lambda(n)) n^(s-1) V_(1-s)(n X / sqrt q)`,
/// computed as `eps q^(1/2-s) / gamma(s) * sum conj(lambda(n)) n^(s-1) K(n X / sqrt q)`
/// with `K(y) = (1/2 pi i) int y^-u gamma(1-s+u) du/u`. This stays finite
/// when `gamma(1-s)` has a pole.
pub fn afe_second_term(
    shape: &GammaShape,
    s: f64,
    coeffs: &dyn Coefficients,
    cfg: &AfeConfig,
) -> Result<SeriesValue> {
    check_s(s)?;
    let prefactor = second_prefactor(shape, s, cfg)?;
    let kernel = CutoffKernel::combined(shape, s, cfg)?;
    let series = smoothed_sum(&kernel, coeffs, 1.0 - s, (cfg.q as f64).sqrt() / cfg.x, cfg)?;
    Ok(SeriesValue {
        value: prefactor * series.value,
        error: prefactor.abs() * series.error,
        terms: series.terms,
    })
}

fn second_prefactor(shape: &GammaShape, s: f64, cfg: &AfeConfig) -> Result<f64> {
    if cfg.root_number.im.abs() > 1e-12 {
        return Err(Error::InvalidArgument(
            "real-valued evaluation needs a real root number".into(),
        ));
    }
    let ln_gamma_s = ln_gamma_factor(shape, Complex64::new(s, 0.0))?;
    let q = cfg.q as f64;
    Ok(cfg.root_number.re * q.powf(0.5 - s) * (-ln_gamma_s).exp().re)
}

/// `eps(s) = eps q^(1/2-s) gamma(1-s)/gamma(s)`; a pole of `gamma(1-s)` is an error.
pub fn epsilon_factor(shape: &GammaShape, s: f64, cfg: &AfeConfig) -> Result<f64> {
    let ln_ratio = ln_gamma_factor(shape, Complex64::new(1.0 - s, 0.0))?
        - ln_gamma_factor(shape, Complex64::new(s, 0.0))?;
    Ok(cfg.root_number.re * (cfg.q as f64).powf(0.5 - s) * ln_ratio.exp().re)
}

/// Second sum by the naive route `eps(s) * sum conj(lambda) n^(s-1) V_(1-s)`,
/// available only when `gamma(1-s)` is finite. Used to cross-check
/// [`afe_second_term`].
pub fn afe_second_term_naive(
    shape: &GammaShape,
    s: f64,
    coeffs: &dyn Coefficients,
    cfg: &AfeConfig,
) -> Result<SeriesValue> {
    check_s(s)?;
    let eps = epsilon_factor(shape, s, cfg)?;
    let kernel = CutoffKernel::cutoff(shape, 1.0 - s, cfg)?;
    let series = smoothed_sum(&kernel, coeffs, 1.0 - s, (cfg.q as f64).sqrt() / cfg.x, cfg)?;
    Ok(SeriesValue {
        value: eps * series.value,
        error: eps.abs() * series.error,
        terms: series.terms,
    })
}

/// `L(s)` from the approximate functional equation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AfeValue {
    pub value: f64,
    pub error: f64,
    pub first: SeriesValue,
    pub second: SeriesValue,
}

pub fn afe_evaluate(
    shape: &GammaShape,
    s: f64,
    coeffs: &dyn Coefficients,
    cfg: &AfeConfig,
) -> Result<AfeValue> {
    let first = afe_first_term(shape, s, coeffs, cfg)?;
    let second = afe_second_term(shape, s, coeffs, cfg)?;
    let value = first.value + second.value;
    let rounding = 4.0 * f64::EPSILON * (first.value.abs() + second.value.abs());
    Ok(AfeValue { value, error: first.error + second.error + rounding, first, second })
}

/// `L(s, chi_D)` for a fundamental discriminant `D`, conductor `|D|`, root
/// number +1.
pub fn afe_quadratic(d: i64, s: f64, x: f64) -> Result<AfeValue> {
    if !crate::arith::is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let chi = QuadraticCharacter::new(d)?;
    let cfg = AfeConfig::new(d.unsigned_abs()).with_x(x);
    afe_evaluate(&GammaShape::quadratic(d), s, &chi, &cfg)
}

fn check_s(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange(format!("s = {s} outside [0, 1]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn afe_examples() {
        let v = afe_quadratic(-4, 1.0, 1.0).unwrap();
        assert!((v.value - PI / 4.0).abs() < 1e-6, "{v:?}");
        let v = afe_quadratic(5, 1.0, 1.0).unwrap();
        assert!((v.value - 0.430_408_940_964_004_4).abs() < 1e-6, "{v:?}");
        let a = afe_quadratic(-4, 1.0, 10.0).unwrap();
        let b = afe_quadratic(-4, 1.0, 0.1).unwrap();
        assert!((a.value - b.value).abs() <= a.error + b.error + 1e-12);
        assert!(a.error < 1e-8 && b.error < 1e-8);
    }

    #[test]
    fn zero_stream_gives_zero() {
        let zero = FnCoefficients { f: |_| 0.0, bound: 0.0 };
        let cfg = AfeConfig::new(4);
        let v = afe_second_term(&GammaShape::quadratic_odd(), 1.0, &zero, &cfg).unwrap();
        assert_eq!(v.value, 0.0);
        assert_eq!(afe_evaluate(&GammaShape::quadratic_odd(), 1.0, &zero, &cfg).unwrap().value, 0.0);
    }

    #[test]
    fn combined_kernel_is_finite_at_even_pole() {
        let chi = QuadraticCharacter::new(5).unwrap();
        let cfg = AfeConfig::new(5);
        let shape = GammaShape::quadratic_even();
        assert!(matches!(epsilon_factor(&shape, 1.0, &cfg), Err(Error::Pole(_))));
        assert!(afe_second_term_naive(&shape, 1.0, &chi, &cfg).is_err());
        let v = afe_second_term(&shape, 1.0, &chi, &cfg).unwrap();
        assert!(v.value.is_finite());
    }

    #[test]
    fn combined_kernel_matches_naive_route_for_odd_characters() {
        let shape = GammaShape::quadratic_odd();
        for d in [-3i64, -4, -7, -23, -84] {
            let chi = QuadraticCharacter::new(d).unwrap();
            let cfg = AfeConfig::new(d.unsigned_abs());
            let a = afe_second_term(&shape, 1.0, &chi, &cfg).unwrap();
            let b = afe_second_term_naive(&shape, 1.0, &chi, &cfg).unwrap();
            assert!((a.value - b.value).abs() < 1e-8, "d={d}: {a:?} vs {b:?}");
        }
    }

    #[test]
    fn interior_s_values_are_x_independent() {
        // For 0 < s < 1 both routes apply and the value must not depend on X.
        let shape = GammaShape::quadratic_odd();
        let chi = QuadraticCharacter::new(-7).unwrap();
        for s in [0.0, 0.25, 0.5, 0.8] {
            let v: Vec<AfeValue> = [0.5, 1.0, 2.0]
                .iter()
                .map(|&x| afe_evaluate(&shape, s, &chi, &AfeConfig::new(7).with_x(x)).unwrap())
                .collect();
            for w in v.windows(2) {
                assert!((w[0].value - w[1].value).abs() <= w[0].error + w[1].error, "s={s}");
            }
        }
        // L(0, chi_-7) = 2 h / w = 1
        let l0 = afe_evaluate(&shape, 0.0, &chi, &AfeConfig::new(7)).unwrap();
        assert!((l0.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn s_outside_unit_interval_rejected() {
        let chi = QuadraticCharacter::new(-4).unwrap();
        let cfg = AfeConfig::new(4);
        assert!(afe_evaluate(&GammaShape::quadratic_odd(), 1.5, &chi, &cfg).is_err());
        assert!(afe_quadratic(-16, 1.0, 1.0).is_err());
    }

    #[test]
    fn truncation_respected_when_n_max_given() {
        let chi = QuadraticCharacter::new(-4).unwrap();
        let cfg = AfeConfig { n_max: Some(3), ..AfeConfig::new(4) };
        let v = afe_evaluate(&GammaShape::quadratic_odd(), 1.0, &chi, &cfg).unwrap();
        assert_eq!(v.first.terms, 3);
        assert!((v.value - PI / 4.0).abs() <= v.error);
    }
}
