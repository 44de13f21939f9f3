//! Vertical-line integrals `(1/2 pi i) int_(sigma) y^-u H(u) du/u` for the
//! cutoff functions of the approximate functional equation.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::shape::{ln_gamma_factor, GammaShape};
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, gauss_legendre};

/// Parameters of the approximate functional equation and of its contour
/// quadrature.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AfeConfig {
    /// Conductor.
    pub q: u64,
    /// Balance parameter between the two sums.
    pub x: f64,
    /// Abscissa of the integration contour.
    pub sigma0: f64,
    /// Truncation height; `None` picks it from the decay bound.
    pub t_max: Option<f64>,
    /// Series cutoff; `None` picks it from the decay bound.
    pub n_max: Option<u64>,
    /// Root number, `|eps| = 1`.
    #[serde(serialize_with = "ser_complex")]
    pub root_number: Complex64,
    /// Target accuracy of the series truncation and the quadrature.
    pub tol: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

impl AfeConfig {
    pub fn new(q: u64) -> Self {
        Self {
            q,
            x: 1.0,
            sigma0: 3.0,
            t_max: None,
            n_max: None,
            root_number: Complex64::new(1.0, 0.0),
            tol: 1e-10,
        }
    }

    pub fn with_x(mut self, x: f64) -> Self {
        self.x = x;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.q == 0 {
            return Err(Error::InvalidArgument("conductor q = 0".into()));
        }
        if !(self.x > 0.0 && self.x.is_finite()) {
            return Err(Error::InvalidArgument(format!("X = {} must be positive", self.x)));
        }
        if !(self.sigma0 > 0.0) {
            return Err(Error::InvalidArgument(format!("sigma0 = {} must be positive", self.sigma0)));
        }
        if (self.root_number.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("root number must have modulus 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Shape-only bound `T^(((a+b) m + b)/2 - 1) e^(-(a+b) pi T / 4)` on the
/// horizontal contour pieces at height `T`.
pub fn truncation_bound(shape: &GammaShape, m: f64, t: f64) -> f64 {
    let (a, b) = (shape.a() as f64, shape.b() as f64);
    t.powf(((a + b) * m + b) / 2.0 - 1.0) * (-(a + b) * PI * t / 4.0).exp()
}

/// Smallest integer height where [`truncation_bound`] drops below `1e-17`.
pub fn default_height(shape: &GammaShape, sigma: f64) -> f64 {
    let mut t = 4.0;
    while truncation_bound(shape, sigma, t) > 1e-17 && t < 10_000.0 {
        t += 1.0;
    }
    t
}

/// Value of a kernel together with an estimate of its numerical error
/// (quadrature discrepancy + truncation tail + rounding).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct KernelValue {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `V_s(y)`, integrand `gamma(s+u)/gamma(s)`.
    Cutoff,
    /// `K(y)`, integrand `gamma(1-s+u)`: the second-sum kernel with the
    /// `gamma(1-s)` of the root-number factor cancelled analytically.
    Combined,
}

struct Node {
    t: f64,
    w: f64,
    g: Complex64,
}

struct LineRule {
    sigma: f64,
    fine: Vec<Node>,
    coarse: Vec<Node>,
    abs_mass: f64,
    tail: f64,
}

fn gl_rules() -> &'static ((Vec<f64>, Vec<f64>), (Vec<f64>, Vec<f64>)) {
    static RULES: OnceLock<((Vec<f64>, Vec<f64>), (Vec<f64>, Vec<f64>))> = OnceLock::new();
    RULES.get_or_init(|| (gauss_legendre(24), gauss_legendre(12)))
}

/// Panel boundaries on `[0, t_max]`: width `min(1, sigma)` up to height 4,
/// where `1/u` is largest, unit width beyond.
fn panels(sigma: f64, t_max: f64) -> Vec<(f64, f64)> {
    let near = sigma.min(1.0);
    let mut out = Vec::new();
    let mut lo = 0.0;
    while lo < t_max {
        let w = if lo < 4.0 { near } else { 1.0 };
        let hi = (lo + w).min(t_max);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

impl LineRule {
    fn build(
        ln_h: &dyn Fn(Complex64) -> Result<Complex64>,
        sigma: f64,
        t_max: f64,
        rate: f64,
    ) -> Result<Self> {
        let ((xf, wf), (xc, wc)) = gl_rules();
        let g_at = |t: f64| -> Result<Complex64> {
            let u = Complex64::new(sigma, t);
            Ok(ln_h(u)?.exp() / u)
        };
        let mut fine = Vec::new();
        let mut coarse = Vec::new();
        for (lo, hi) in panels(sigma, t_max) {
            let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
            for (x, w) in xf.iter().zip(wf) {
                let t = mid + half * x;
                fine.push(Node { t, w: w * half, g: g_at(t)? });
            }
            for (x, w) in xc.iter().zip(wc) {
                let t = mid + half * x;
                coarse.push(Node { t, w: w * half, g: g_at(t)? });
            }
        }
        let abs_mass = compensated_sum(fine.iter().map(|n| n.w * n.g.norm())) / PI;
        let tail = g_at(t_max)?.norm() / (PI * rate);
        Ok(Self { sigma, fine, coarse, abs_mass, tail })
    }

    fn sum(nodes: &[Node], ly: f64) -> f64 {
        compensated_sum(nodes.iter().map(|n| {
            let (sin, cos) = (n.t * ly).sin_cos();
            // Re(e^{-i t ly} g)
            n.w * (cos * n.g.re + sin * n.g.im)
        })) / PI
    }

    fn eval(&self, y: f64) -> KernelValue {
        let ly = y.ln();
        let scale = (-self.sigma * ly).exp();
        let fine = Self::sum(&self.fine, ly);
        let coarse = Self::sum(&self.coarse, ly);
        let error = ((fine - coarse).abs() + self.tail + 8.0 * f64::EPSILON * self.abs_mass) * scale;
        KernelValue { value: fine * scale, error }
    }
}

/// Precomputed quadrature of a cutoff kernel for a fixed shape and `s`;
/// evaluation at any `y > 0` reuses the tabulated integrand.
pub struct CutoffKernel {
    shape: GammaShape,
    s: f64,
    kind: KernelKind,
    ln_norm: Complex64,
    high: LineRule,
    low: Option<LineRule>,
}

/// Contour abscissa used for `y < 1`, limiting the `y^-sigma` amplification
/// of rounding error. No poles lie in `Re u > 0`.
const LOW_SIGMA: f64 = 0.5;

impl CutoffKernel {
    pub fn new(shape: &GammaShape, s: f64, kind: KernelKind, cfg: &AfeConfig) -> Result<Self> {
        cfg.validate()?;
        let ln_norm = match kind {
            KernelKind::Cutoff => ln_gamma_factor(shape, Complex64::new(s, 0.0))?,
            KernelKind::Combined => Complex64::new(0.0, 0.0),
        };
        let mut k = Self {
            shape: *shape,
            s,
            kind,
            ln_norm,
            high: LineRule { sigma: 0.0, fine: vec![], coarse: vec![], abs_mass: 0.0, tail: 0.0 },
            low: None,
        };
        let rate = shape.decay_rate();
        let build = |sigma: f64| -> Result<LineRule> {
            let t_max = cfg.t_max.unwrap_or_else(|| default_height(shape, sigma));
            LineRule::build(&|u| k.ln_h(u), sigma, t_max, rate)
        };
        let high = build(cfg.sigma0)?;
        let low = if cfg.sigma0 > LOW_SIGMA { Some(build(LOW_SIGMA)?) } else { None };
        k.high = high;
        k.low = low;
        Ok(k)
    }

    pub fn cutoff(shape: &GammaShape, s: f64, cfg: &AfeConfig) -> Result<Self> {
        Self::new(shape, s, KernelKind::Cutoff, cfg)
    }

    pub fn combined(shape: &GammaShape, s: f64, cfg: &AfeConfig) -> Result<Self> {
        Self::new(shape, s, KernelKind::Combined, cfg)
    }

    /// `log H(u)` for the integrand `y^-u H(u) / u`.
    pub fn ln_h(&self, u: Complex64) -> Result<Complex64> {
        let arg = match self.kind {
            KernelKind::Cutoff => self.s + u,
            KernelKind::Combined => 1.0 - self.s + u,
        };
        Ok(ln_gamma_factor(&self.shape, arg)? - self.ln_norm)
    }

    pub fn eval(&self, y: f64) -> KernelValue {
        match &self.low {
            Some(low) if y < 1.0 => low.eval(y),
            _ => self.high.eval(y),
        }
    }

    /// `C_m = (1/2 pi) int |H(m + it)| / |m + it| dt`, so that
    /// `|kernel(y)| <= C_m y^-m` for every `y > 0` (contour moved to `Re u = m`).
    pub fn decay_constant(&self, m: f64) -> Result<f64> {
        let t_max = default_height(&self.shape, m);
        let rule = LineRule::build(&|u| self.ln_h(u), m, t_max, self.shape.decay_rate())?;
        Ok(rule.abs_mass + rule.tail)
    }

    pub fn shape(&self) -> &GammaShape {
        &self.shape
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// `V_s(y)` by contour quadrature. Fails if the error estimate exceeds
/// `cfg.tol`.
#[allow(non_snake_case)]
pub fn cutoff_V(shape: &GammaShape, s: f64, y: f64, cfg: &AfeConfig) -> Result<KernelValue> {
    if !(y > 0.0) {
        return Err(Error::InvalidArgument(format!("y = {y} must be positive")));
    }
    let v = CutoffKernel::cutoff(shape, s, cfg)?.eval(y);
    if v.error > cfg.tol {
        return Err(Error::Quadrature { estimate: v.error, tolerance: cfg.tol });
    }
    Ok(v)
}

/// Result of [`decay_check`].
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DecayReport {
    pub m: f64,
    /// `sup |V_s(y)| y^m` over the grid.
    pub sup: f64,
    pub sup_at: f64,
    /// Explicit constant `C_m` with `|V_s(y)| <= C_m y^-m`.
    pub contour_constant: f64,
    /// `|V_s(y)| y^m` is non-increasing over the upper half of the grid,
    /// up to the quadrature error.
    pub tail_decreasing: bool,
    pub passed: bool,
}

pub fn decay_check(
    shape: &GammaShape,
    s: f64,
    m: f64,
    y_grid: &[f64],
    cfg: &AfeConfig,
) -> Result<DecayReport> {
    if !(m > 3.0) {
        return Err(Error::InvalidArgument(format!("decay order m = {m} must exceed 3")));
    }
    if y_grid.is_empty() || y_grid.iter().any(|&y| !(1.0..=100.0).contains(&y)) {
        return Err(Error::InvalidArgument("grid must be a nonempty subset of [1, 100]".into()));
    }
    let kernel = CutoffKernel::cutoff(shape, s, cfg)?;
    let constant = kernel.decay_constant(m)?;
    let samples: Vec<(f64, KernelValue)> = y_grid.iter().map(|&y| (y, kernel.eval(y))).collect();
    let (mut sup, mut sup_at) = (0.0f64, y_grid[0]);
    for (y, v) in &samples {
        let w = v.value.abs() * y.powf(m);
        if w > sup || (w == sup && *y < sup_at) {
            sup = w;
            sup_at = *y;
        }
    }
    let half = samples.len() / 2;
    let tail_decreasing = samples[half..].windows(2).all(|w| {
        let (y0, v0) = w[0];
        let (y1, v1) = w[1];
        let a = v0.value.abs() * y0.powf(m);
        let b = v1.value.abs() * y1.powf(m);
        b <= a + (v0.error * y0.powf(m) + v1.error * y1.powf(m))
    });
    let worst_err = samples.iter().map(|(y, v)| v.error * y.powf(m)).fold(0.0, f64::max);
    let passed = sup.is_finite() && sup <= constant + worst_err && tail_decreasing;
    Ok(DecayReport { m, sup, sup_at, contour_constant: constant, tail_decreasing, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> AfeConfig {
        AfeConfig::new(1)
    }

    /// Closed forms: for the odd shape `V_1(y) = exp(-pi y^2)`, for the even
    /// shape `V_1(y) = erfc(sqrt(pi) y)`. Independent of the quadrature.
    fn erfc(x: f64) -> f64 {
        // continued fraction for large x, series for small x
        if x < 2.5 {
            let mut sum: f64 = 0.0;
            let mut term = x;
            let mut k = 0;
            while term.abs() > 1e-18 * sum.abs().max(1e-300) || k < 5 {
                sum += term / (2 * k + 1) as f64;
                k += 1;
                term *= -x * x / k as f64;
            }
            1.0 - 2.0 / PI.sqrt() * sum
        } else {
            let mut f = 0.0;
            for k in (1..200).rev() {
                f = (k as f64 / 2.0) / (x + f);
            }
            (-x * x).exp() / PI.sqrt() / (x + f)
        }
    }

    #[test]
    fn cutoff_matches_closed_forms() {
        let odd = CutoffKernel::cutoff(&GammaShape::quadratic_odd(), 1.0, &cfg()).unwrap();
        let even = CutoffKernel::cutoff(&GammaShape::quadratic_even(), 1.0, &cfg()).unwrap();
        for &y in &[1e-3, 0.01, 0.1, 0.3, 0.7, 1.0, 1.3, 2.0, 3.0] {
            let v = odd.eval(y);
            let exact = (-PI * y * y).exp();
            assert!((v.value - exact).abs() < 1e-12, "odd y={y}: {} vs {exact}", v.value);
            assert!((v.value - exact).abs() <= v.error.max(1e-15) * 10.0);
            let v = even.eval(y);
            let exact = erfc(PI.sqrt() * y);
            assert!((v.value - exact).abs() < 1e-12, "even y={y}: {} vs {exact}", v.value);
        }
    }

    #[test]
    fn combined_kernel_matches_closed_forms() {
        // even, s = 1: K(y) = E1(pi y^2); odd, s = 1: K(y) = Gamma(1/2, pi y^2) = sqrt(pi) erfc(sqrt(pi) y)
        let odd = CutoffKernel::combined(&GammaShape::quadratic_odd(), 1.0, &cfg()).unwrap();
        for &y in &[0.05, 0.5, 1.0, 2.0] {
            let exact = PI.sqrt() * erfc(PI.sqrt() * y);
            assert!((odd.eval(y).value - exact).abs() < 1e-12, "y={y}");
        }
        let even = CutoffKernel::combined(&GammaShape::quadratic_even(), 1.0, &cfg()).unwrap();
        // E1(1) = 0.219383934395520...
        let y = (1.0 / PI).sqrt();
        assert!((even.eval(y).value - 0.219_383_934_395_520_3).abs() < 1e-12);
    }

    #[test]
    fn cutoff_examples() {
        let odd = GammaShape::quadratic_odd();
        let v = cutoff_V(&odd, 1.0, 1e-3, &cfg()).unwrap();
        assert!((v.value - 1.0).abs() < 1e-2);
        let v = cutoff_V(&odd, 1.0, 50.0, &cfg()).unwrap();
        assert!(v.value.abs() < 1e-6);
        assert!(cutoff_V(&odd, 1.0, 0.0, &cfg()).is_err());
        assert!(matches!(
            cutoff_V(&GammaShape::quadratic_even(), 0.0, 1.0, &cfg()),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn small_y_normalization() {
        for shape in [GammaShape::quadratic_odd(), GammaShape::quadratic_even()] {
            let k = CutoffKernel::cutoff(&shape, 1.0, &cfg()).unwrap();
            let ys: Vec<f64> = (0..=30).map(|i| 1e-4 * 10f64.powf(i as f64 / 10.0)).collect();
            let c = ys.iter().map(|&y| (k.eval(y).value - 1.0).abs() / y).fold(0.0, f64::max);
            // erfc(sqrt(pi) y) = 1 - 2y + O(y^3): the fitted constant is 2.
            assert!(c < 2.01, "{shape:?}: C = {c}");
        }
    }

    #[test]
    fn doubling_height_within_estimate() {
        for shape in [GammaShape::quadratic_odd(), GammaShape::quadratic_even()] {
            let base = cfg();
            let t = default_height(&shape, base.sigma0);
            let k1 = CutoffKernel::cutoff(&shape, 1.0, &AfeConfig { t_max: Some(t), ..base.clone() })
                .unwrap();
            let k2 =
                CutoffKernel::cutoff(&shape, 1.0, &AfeConfig { t_max: Some(2.0 * t), ..base.clone() })
                    .unwrap();
            for i in 0..=40 {
                let y = 0.01 * 5000f64.powf(i as f64 / 40.0);
                let (a, b) = (k1.eval(y), k2.eval(y));
                assert!((a.value - b.value).abs() <= a.error, "y={y} {a:?} {b:?}");
            }
        }
    }

    #[test]
    fn decay_reports() {
        let odd = GammaShape::quadratic_odd();
        let grid: Vec<f64> = (1..=50).map(f64::from).collect();
        let r = decay_check(&odd, 1.0, 4.0, &grid, &cfg()).unwrap();
        assert!(r.passed && r.sup.is_finite(), "{r:?}");
        let r = decay_check(&odd, 1.0, 3.5, &grid, &cfg()).unwrap();
        assert!(r.passed);
        let r = decay_check(&odd, 1.0, 4.0, &[1.0], &cfg()).unwrap();
        assert!((r.sup - (-PI).exp()).abs() < 1e-12);
        assert!(decay_check(&odd, 1.0, 3.0, &grid, &cfg()).is_err());
        assert!(decay_check(&odd, 1.0, 4.0, &[0.5], &cfg()).is_err());
    }

    #[test]
    fn real_shapes_give_real_kernels() {
        // conjugate symmetry: the imaginary part of the full-line integral vanishes
        let k = CutoffKernel::cutoff(&GammaShape::cubic_galois(), 0.5, &cfg()).unwrap();
        let u = Complex64::new(3.0, 2.0);
        let a = k.ln_h(u).unwrap().exp();
        let b = k.ln_h(u.conj()).unwrap().exp();
        assert!((a - b.conj()).norm() < 1e-14 * a.norm());
        assert!(k.eval(0.7).value.is_finite());
    }
}
