//! Probes of `f(x) = |D(x)|^-beta phi(|D(x)|^-alpha)` near the zero locus
//! of the discriminant map `D` on the coefficient space of GL(2) and GL(3).
//! `f` is taken to be 0 on the locus; when `M alpha - 1 - beta > 0`, for
//! `phi` decaying like `z^-M`, its values and first partials should vanish
//! there.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma_afe::{AfeConfig, CutoffKernel, GammaShape};
use crate::polynomials::{discriminant, CharPoly};

/// The discriminant of `X^n - x_1 X^(n-1) + ... + (-1)^n a_n` as a function
/// of `(x_1, ..., x_(n-1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiscMap {
    pub n: usize,
    pub a_n: i64,
}

pub fn disc_map_gl_n(a_n: i64, n: usize) -> Result<DiscMap> {
    match n {
        2 | 3 => Ok(DiscMap { n, a_n }),
        _ => Err(Error::UnsupportedDegree(n)),
    }
}

impl DiscMap {
    pub fn dim(&self) -> usize {
        self.n - 1
    }

    /// Expanded polynomial form, for real arguments.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let a = self.a_n as f64;
        match self.n {
            2 => x[0] * x[0] - 4.0 * a,
            _ => {
                let (b, c, d) = (-x[0], x[1], -a);
                b * b * c * c - 4.0 * c * c * c - 4.0 * b * b * b * d - 27.0 * d * d + 18.0 * b * c * d
            }
        }
    }

    /// Exact value at an integer point, through the Sylvester resultant.
    pub fn eval_exact(&self, x: &[i64]) -> Result<i128> {
        if x.len() != self.dim() {
            return Err(Error::InvalidArgument(format!("expected {} coordinates", self.dim())));
        }
        let mut a = x.to_vec();
        a.push(self.a_n);
        discriminant(&CharPoly::new(a)?)
    }
}

/// Schwartz cutoff applied to `|D|^-alpha`.
#[derive(Clone)]
pub enum Phi {
    Gaussian,
    /// `(1 + z^2)^(-M/2)`: decays exactly like `z^-M`.
    PowerSurrogate(u32),
    /// `V_1` of an even or odd quadratic character.
    Kernel { odd: bool, kernel: Arc<CutoffKernel> },
}

impl fmt::Debug for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl Phi {
    pub fn kernel(odd: bool) -> Result<Self> {
        let shape = if odd { GammaShape::quadratic_odd() } else { GammaShape::quadratic_even() };
        let kernel = CutoffKernel::cutoff(&shape, 1.0, &AfeConfig::new(1))?;
        Ok(Phi::Kernel { odd, kernel: Arc::new(kernel) })
    }

    pub fn name(&self) -> String {
        match self {
            Phi::Gaussian => "gaussian".into(),
            Phi::PowerSurrogate(m) => format!("power{m}"),
            Phi::Kernel { odd: true, .. } => "v1-odd".into(),
            Phi::Kernel { odd: false, .. } => "v1-even".into(),
        }
    }

    /// Decay order `M`; infinite for rapidly decreasing cutoffs.
    pub fn decay_order(&self) -> f64 {
        match self {
            Phi::PowerSurrogate(m) => *m as f64,
            _ => f64::INFINITY,
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        match self {
            Phi::Gaussian => (-z * z).exp(),
            Phi::PowerSurrogate(m) => (1.0 + z * z).powf(-(*m as f64) / 2.0),
            Phi::Kernel { kernel, .. } => kernel.eval(z).value,
        }
    }
}

/// A discriminant map together with the singular weight and cutoff.
#[derive(Debug, Clone)]
pub struct SmoothProbeSpec {
    pub disc_map: DiscMap,
    pub beta: f64,
    pub alpha: f64,
    pub phi: Phi,
    /// Distances along rays for the value probe.
    pub value_steps: Vec<f64>,
    /// Finite-difference steps for the derivative probe.
    pub fd_steps: Vec<f64>,
    /// Threshold for values and difference quotients at the finest step.
    pub threshold: f64,
}

impl SmoothProbeSpec {
    /// Requires `M alpha - 1 - beta > 0`.
    pub fn new(disc_map: DiscMap, beta: f64, alpha: f64, phi: Phi) -> Result<Self> {
        let spec = Self::unchecked(disc_map, beta, alpha, phi)?;
        if !(spec.margin() > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "M alpha - 1 - beta = {} <= 0 for {}",
                spec.margin(),
                spec.phi.name()
            )));
        }
        Ok(spec)
    }

    /// Skips the decay condition; used for negative controls.
    pub fn unchecked(disc_map: DiscMap, beta: f64, alpha: f64, phi: Phi) -> Result<Self> {
        if !(beta >= 0.0) || !(alpha > 0.0) {
            return Err(Error::InvalidArgument(format!("need beta >= 0, alpha > 0; got {beta}, {alpha}")));
        }
        Ok(SmoothProbeSpec {
            disc_map,
            beta,
            alpha,
            phi,
            value_steps: (1..=6).map(|e| 10f64.powi(-e)).collect(),
            fd_steps: (2..=5).map(|e| 10f64.powi(-e)).collect(),
            threshold: 1e-6,
        })
    }

    /// `M alpha - 1 - beta`.
    pub fn margin(&self) -> f64 {
        self.phi.decay_order() * self.alpha - 1.0 - self.beta
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let d = self.disc_map.eval(x).abs();
        if d == 0.0 {
            return 0.0;
        }
        d.powf(-self.beta) * self.phi.eval(d.powf(-self.alpha))
    }

    fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.disc_map.dim() {
            return Err(Error::InvalidArgument(format!("expected {} coordinates", self.disc_map.dim())));
        }
        let exact = point.iter().all(|t| t.fract() == 0.0 && t.abs() < 1e9);
        let d = if exact {
            let ints: Vec<i64> = point.iter().map(|&t| t as i64).collect();
            self.disc_map.eval_exact(&ints)? as f64
        } else {
            self.disc_map.eval(point)
        };
        if d.abs() > 1e-12 {
            return Err(Error::NotSingular(d));
        }
        Ok(())
    }
}

fn directions(dim: usize) -> Vec<Vec<f64>> {
    if dim == 1 {
        return vec![vec![1.0], vec![-1.0]];
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        vec![1.0, 0.0],
        vec![-1.0, 0.0],
        vec![0.0, 1.0],
        vec![0.0, -1.0],
        vec![r, r],
        vec![-r, -r],
        vec![r, -r],
        vec![-r, r],
    ]
}

fn offset(point: &[f64], dir: &[f64], h: f64) -> Vec<f64> {
    point.iter().zip(dir).map(|(a, d)| a + h * d).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayProfile {
    pub direction: Vec<f64>,
    /// `(h, |f(point + h direction)|)` from coarse to fine.
    pub samples: Vec<(f64, f64)>,
    /// Non-increasing as `h` decreases, up to [`NOISE_FLOOR`].
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueDecayReport {
    pub point: Vec<f64>,
    pub beta: f64,
    pub alpha: f64,
    pub phi: String,
    pub rays: Vec<RayProfile>,
    /// Largest `|f|` at the finest distance.
    pub finest: f64,
    pub passed: bool,
}

pub const VALUE_THRESHOLD: f64 = 1e-8;
/// Values below this are treated as converged when checking monotonicity;
/// the contour quadrature of the kernel cutoffs resolves nothing smaller.
pub const NOISE_FLOOR: f64 = 1e-15;

/// Samples `f` along rays into a point of the zero locus.
pub fn probe_value_decay(spec: &SmoothProbeSpec, point: &[f64]) -> Result<ValueDecayReport> {
    spec.check_point(point)?;
    let rays: Vec<RayProfile> = directions(point.len())
        .into_par_iter()
        .map(|dir| {
            let samples: Vec<(f64, f64)> =
                spec.value_steps.iter().map(|&h| (h, spec.eval(&offset(point, &dir, h)).abs())).collect();
            let monotone = samples.windows(2).all(|w| w[1].1 <= w[0].1 || w[1].1 < NOISE_FLOOR);
            RayProfile { direction: dir, samples, monotone }
        })
        .collect();
    let finest = rays.iter().map(|r| r.samples.last().map_or(0.0, |s| s.1)).fold(0.0, f64::max);
    let passed = finest < VALUE_THRESHOLD && rays.iter().all(|r| r.monotone);
    Ok(ValueDecayReport {
        point: point.to_vec(),
        beta: spec.beta,
        alpha: spec.alpha,
        phi: spec.phi.name(),
        rays,
        finest,
        passed,
    })
}

/// Difference quotients at one step along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRow {
    pub h: f64,
    pub forward: f64,
    pub backward: f64,
    pub central: f64,
    /// One Richardson step on the central (or second) difference, `h` and `h/2`.
    pub richardson: f64,
    /// Largest absolute value among the above.
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialProfile {
    pub axis: usize,
    pub rows: Vec<StepRow>,
    /// Fitted slope of `log worst` against `log h` over quotients above
    /// [`NOISE_FLOOR`]; infinite when fewer than two remain.
    pub empirical_order: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeReport {
    pub point: Vec<f64>,
    pub order: u32,
    pub beta: f64,
    pub alpha: f64,
    pub phi: String,
    pub margin: f64,
    pub expected_order: f64,
    pub partials: Vec<PartialProfile>,
    /// Largest quotient at the finest step.
    pub finest: f64,
    pub passed: bool,
}

fn check_step(h: f64, a: f64) -> Result<()> {
    if !(h > 0.0) || h < 1e-12 * a.abs().max(1.0) {
        return Err(Error::StepUnderflow(h));
    }
    Ok(())
}

/// Central first difference of `f` along `axis` at any point.
pub fn central_difference(spec: &SmoothProbeSpec, point: &[f64], axis: usize, h: f64) -> Result<f64> {
    check_step(h, point[axis])?;
    let mut e = vec![0.0; point.len()];
    e[axis] = 1.0;
    Ok((spec.eval(&offset(point, &e, h)) - spec.eval(&offset(point, &e, -h))) / (2.0 * h))
}

fn step_row(spec: &SmoothProbeSpec, point: &[f64], axis: usize, h: f64, order: u32) -> Result<StepRow> {
    check_step(h / 2.0, point[axis])?;
    let mut e = vec![0.0; point.len()];
    e[axis] = 1.0;
    let f = |t: f64| spec.eval(&offset(point, &e, t));
    // f vanishes at the point by definition.
    let (forward, backward, central, richardson) = if order == 1 {
        let c = |t: f64| (f(t) - f(-t)) / (2.0 * t);
        (f(h) / h, -f(-h) / h, c(h), (4.0 * c(h / 2.0) - c(h)) / 3.0)
    } else {
        let c = |t: f64| (f(t) + f(-t)) / (t * t);
        (2.0 * f(h) / (h * h), 2.0 * f(-h) / (h * h), c(h), (4.0 * c(h / 2.0) - c(h)) / 3.0)
    };
    let worst = [forward, backward, central, richardson].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(StepRow { h, forward, backward, central, richardson, worst })
}

fn fitted_order(rows: &[StepRow]) -> f64 {
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.worst > NOISE_FLOOR).map(|r| (r.h.ln(), r.worst.ln())).collect();
    if pts.len() < 2 {
        return f64::INFINITY;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Difference quotients of order 1 or 2 at a point of the zero locus,
/// where `f` is 0. Passes when every quotient at the finest step is below
/// the threshold and the fitted order is at least `min(1, M alpha - 1 - beta)`
/// (less 0.1 for fitting noise).
pub fn probe_derivatives(spec: &SmoothProbeSpec, point: &[f64], order: u32) -> Result<DerivativeReport> {
    if !(1..=2).contains(&order) {
        return Err(Error::InvalidArgument(format!("derivative order {order} not in {{1, 2}}")));
    }
    spec.check_point(point)?;
    let partials: Vec<PartialProfile> = (0..point.len())
        .into_par_iter()
        .map(|axis| -> Result<PartialProfile> {
            let rows = spec
                .fd_steps
                .iter()
                .map(|&h| step_row(spec, point, axis, h, order))
                .collect::<Result<Vec<_>>>()?;
            let empirical_order = fitted_order(&rows);
            Ok(PartialProfile { axis, rows, empirical_order })
        })
        .collect::<Result<Vec<_>>>()?;
    let margin = spec.margin() - (order as f64 - 1.0);
    let expected_order = margin.min(1.0);
    let finest = partials.iter().map(|p| p.rows.last().map_or(0.0, |r| r.worst)).fold(0.0, f64::max);
    let passed = finest < spec.threshold
        && partials.iter().all(|p| p.empirical_order >= expected_order - 0.1);
    Ok(DerivativeReport {
        point: point.to_vec(),
        order,
        beta: spec.beta,
        alpha: spec.alpha,
        phi: spec.phi.name(),
        margin: spec.margin(),
        expected_order,
        partials,
        finest,
        passed,
    })
}

/// A spec violating the decay condition: `(1 + z^2)^-1` (M = 2) with
/// `beta = 0.8`, `alpha = 0.5`, so `M alpha - 1 - beta = -0.8`.
pub fn negative_control(disc_map: DiscMap) -> Result<SmoothProbeSpec> {
    SmoothProbeSpec::unchecked(disc_map, 0.8, 0.5, Phi::PowerSurrogate(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl2() -> DiscMap {
        disc_map_gl_n(1, 2).unwrap()
    }

    fn gl3() -> DiscMap {
        disc_map_gl_n(1, 3).unwrap()
    }

    #[test]
    fn disc_map_examples() {
        assert_eq!(gl2().eval(&[2.0]), 0.0);
        assert_eq!(gl2().eval(&[-2.0]), 0.0);
        assert_eq!(gl3().eval(&[0.0, -3.0]), 81.0);
        assert_eq!(gl3().eval_exact(&[0, -3]).unwrap(), 81);
        assert_eq!(gl3().eval(&[3.0, 3.0]), 0.0);
        assert!(disc_map_gl_n(1, 4).is_err());
    }

    #[test]
    fn expanded_form_matches_resultant() {
        for a in [-3i64, -1, 1, 2, 5] {
            let dm = disc_map_gl_n(a, 3).unwrap();
            for x1 in -6i64..=6 {
                for x2 in -6i64..=6 {
                    let exact = dm.eval_exact(&[x1, x2]).unwrap();
                    assert_eq!(dm.eval(&[x1 as f64, x2 as f64]), exact as f64);
                }
            }
            let dm = disc_map_gl_n(a, 2).unwrap();
            for x in -9i64..=9 {
                assert_eq!(dm.eval(&[x as f64]), dm.eval_exact(&[x]).unwrap() as f64);
            }
        }
    }

    #[test]
    fn value_decay_gl2() {
        for beta in [0.0, 0.3, 0.8] {
            let spec = SmoothProbeSpec::new(gl2(), beta, 0.5, Phi::Gaussian).unwrap();
            let r = probe_value_decay(&spec, &[2.0]).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(spec.eval(&[2.0 + 1e-6]) < 1e-8);
        }
        let spec = SmoothProbeSpec::new(gl2(), 0.3, 0.5, Phi::Gaussian).unwrap();
        assert!(matches!(probe_value_decay(&spec, &[1.0]), Err(Error::NotSingular(_))));
    }

    #[test]
    fn value_decay_with_kernel_cutoffs() {
        for odd in [true, false] {
            let spec = SmoothProbeSpec::new(gl2(), 0.3, 0.5, Phi::kernel(odd).unwrap()).unwrap();
            let r = probe_value_decay(&spec, &[2.0]).unwrap();
            assert!(r.passed, "{r:?}");
            let r = probe_derivatives(&spec, &[-2.0], 1).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn derivatives_vanish() {
        for beta in [0.0, 0.3, 0.8] {
            let spec = SmoothProbeSpec::new(gl2(), beta, 0.5, Phi::Gaussian).unwrap();
            let r = probe_derivatives(&spec, &[2.0], 1).unwrap();
            assert!(r.passed && r.finest < 1e-6, "{r:?}");
            let r = probe_derivatives(&spec, &[2.0], 2).unwrap();
            assert!(r.passed, "{r:?}");
            let spec = SmoothProbeSpec::new(gl3(), beta, 0.5, Phi::Gaussian).unwrap();
            let r = probe_derivatives(&spec, &[3.0, 3.0], 1).unwrap();
            assert!(r.passed && r.finest < 1e-6, "{r:?}");
            assert!(probe_value_decay(&spec, &[3.0, 3.0]).unwrap().passed);
        }
    }

    #[test]
    fn power_surrogate_orders() {
        // M = 8, alpha = 0.5, beta = 0.3: margin 2.7.
        let spec = SmoothProbeSpec::new(gl2(), 0.3, 0.5, Phi::PowerSurrogate(8)).unwrap();
        let r = probe_derivatives(&spec, &[2.0], 1).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.partials[0].empirical_order > 1.0);
        assert!(SmoothProbeSpec::new(gl2(), 0.8, 0.5, Phi::PowerSurrogate(2)).is_err());
    }

    #[test]
    fn negative_control_fails() {
        let spec = negative_control(gl2()).unwrap();
        assert!(spec.margin() < 0.0);
        let r = probe_derivatives(&spec, &[2.0], 1).unwrap();
        assert!(!r.passed);
        assert!(r.finest > 1e-2, "{r:?}");
        assert!(r.partials[0].empirical_order < 0.0);
    }

    #[test]
    fn regular_point_matches_analytic_derivative() {
        // f = exp(-1/|x^2 - 4|) near x = 3, beta = 0, alpha = 1/2.
        let spec = SmoothProbeSpec::new(gl2(), 0.0, 0.5, Phi::Gaussian).unwrap();
        let x = 3.0f64;
        let d = x * x - 4.0;
        let exact = (-1.0 / d).exp() * 2.0 * x / (d * d);
        let approx = central_difference(&spec, &[x], 0, 1e-4).unwrap();
        assert!((approx - exact).abs() < 1e-8 * exact.abs().max(1.0));
        assert!(matches!(central_difference(&spec, &[x], 0, 1e-20), Err(Error::StepUnderflow(_))));
    }
}
