//! Python bindings for `trace_afe`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::PyErr;
use trace_afe::elliptic::KottwitzVariant;
use trace_afe::lfunctions::LRoute;
use trace_afe::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Quadrature { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn route(name: &str) -> Result<LRoute, PyErr> {
    match name {
        "direct" => Ok(LRoute::Direct),
        "cnf" => Ok(LRoute::Cnf),
        "afe" => Ok(LRoute::Afe),
        _ => Err(PyValueError::new_err(format!("unknown route {name:?} (direct, cnf, afe)"))),
    }
}

fn kottwitz_variant(name: &str, val: u32) -> Result<KottwitzVariant, PyErr> {
    match name {
        "unramified" => Ok(KottwitzVariant::Unramified),
        "ramified" => Ok(KottwitzVariant::Ramified(val)),
        _ => Err(PyValueError::new_err(format!("unknown variant {name:?} (unramified, ramified)"))),
    }
}

#[pyo3::pymodule]
mod pytrace_afe {
    use pyo3::prelude::*;
    use pyo3::types::PyModule;
    use serde::Serialize;

    use trace_afe::arith;
    use trace_afe::elliptic::{self, EllipticClassGL2, SplitConfig, ThetaModel};
    use trace_afe::gamma_afe::{self, AfeConfig, GammaShape};
    use trace_afe::lfunctions;
    use trace_afe::polynomials::{self, CharPoly};
    use trace_afe::smoothing::{self, Phi, SmoothProbeSpec};

    use super::{kottwitz_variant, py_err};

    #[pymodule_init]
    fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
        m.add("__version__", trace_afe::VERSION)
    }

    fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
        let text = serde_json::to_string(value).map_err(|e| pyo3::exceptions::PyValueError::new_err(e.to_string()))?;
        py.import("json")?.call_method1("loads", (text,))
    }

    fn fraction<'py>(py: Python<'py>, text: String) -> PyResult<Bound<'py, PyAny>> {
        py.import("fractions")?.getattr("Fraction")?.call1((text,))
    }

    /// Kronecker symbol (a/n).
    #[pyfunction]
    fn kronecker(a: i64, n: i64) -> i32 {
        arith::kronecker(a, n)
    }

    #[pyfunction]
    fn is_fundamental(d: i64) -> bool {
        arith::is_fundamental(d)
    }

    /// `(s, D)` with `delta = s^2 D`, `D` fundamental (or 1 for squares).
    #[pyfunction]
    fn decompose_discriminant(delta: i64) -> PyResult<(u64, i64)> {
        let d = arith::decompose_discriminant(delta).map_err(py_err)?;
        Ok((d.s, d.fund))
    }

    /// Discriminant of `X^n - a_1 X^(n-1) + ... + (-1)^n a_n` from `[a_1, ..., a_n]`.
    #[pyfunction]
    fn discriminant(a: Vec<i64>) -> PyResult<i128> {
        polynomials::discriminant(&CharPoly::new(a).map_err(py_err)?).map_err(py_err)
    }

    /// Degrees of the irreducible factors mod p and whether p ramifies.
    #[pyfunction]
    fn factor_type_mod_p(a: Vec<i64>, p: u64) -> PyResult<(Vec<u32>, bool)> {
        let t = polynomials::factor_type_mod_p(&CharPoly::new(a).map_err(py_err)?, p).map_err(py_err)?;
        Ok((t.degrees, t.ramified))
    }

    /// `(value, error_bound)` of `L(s, chi_D)`.
    #[pyfunction]
    #[pyo3(signature = (d, s = 1.0, route = "direct", tol = 1e-10))]
    fn l_value(d: i64, s: f64, route: &str, tol: f64) -> PyResult<(f64, f64)> {
        let l = lfunctions::l_value_route(d, s, super::route(route)?, tol).map_err(py_err)?;
        Ok((l.value, l.error_bound))
    }

    /// Class number of a quadratic field of discriminant `d`.
    #[pyfunction]
    fn class_number(d: i64) -> PyResult<u64> {
        Ok(lfunctions::class_data(d, 1 << 20).map_err(py_err)?.h)
    }

    /// `(value, error)` of `L(s, chi_D)` by the approximate functional equation.
    #[pyfunction]
    #[pyo3(signature = (d, s = 1.0, x = 1.0))]
    fn afe_quadratic(d: i64, s: f64, x: f64) -> PyResult<(f64, f64)> {
        let v = gamma_afe::afe_quadratic(d, s, x).map_err(py_err)?;
        Ok((v.value, v.error))
    }

    /// `(value, error)` of `V_s(y)` for the odd or even quadratic gamma factor.
    #[pyfunction]
    #[pyo3(signature = (y, s = 1.0, odd = true))]
    fn cutoff_v(y: f64, s: f64, odd: bool) -> PyResult<(f64, f64)> {
        let shape = if odd { GammaShape::quadratic_odd() } else { GammaShape::quadratic_even() };
        let v = gamma_afe::cutoff_V(&shape, s, y, &AfeConfig::new(1)).map_err(py_err)?;
        Ok((v.value, v.error))
    }

    /// Leading Stirling approximation to `|Gamma(sigma + i t)|`.
    #[pyfunction]
    fn stirling_gamma(sigma: f64, t: f64) -> PyResult<f64> {
        gamma_afe::stirling_gamma(sigma, t).map_err(py_err)
    }

    /// `|Gamma(sigma + i t)|` by the Lanczos approximation.
    #[pyfunction]
    fn gamma_abs(sigma: f64, t: f64) -> PyResult<f64> {
        Ok(gamma_afe::gamma_complex(num_complex::Complex64::new(sigma, t)).map_err(py_err)?.norm())
    }

    /// Product of p-adic orbital integrals of the class `(m, sign p^k)`.
    #[pyfunction]
    fn padic_orbital_product<'py>(py: Python<'py>, m: i64, sign: i8, p: u64, k: u32) -> PyResult<Bound<'py, PyAny>> {
        let c = EllipticClassGL2::new(m, sign, p, k).map_err(py_err)?;
        fraction(py, elliptic::padic_orbital_product(&c).to_string())
    }

    /// Both sides of the summed-L identity for the class `(m, sign p^k)`.
    #[pyfunction]
    #[pyo3(signature = (m, sign, p, k, tol = 1e-6))]
    fn verify_lfun_sum<'py>(py: Python<'py>, m: i64, sign: i8, p: u64, k: u32, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let c = EllipticClassGL2::new(m, sign, p, k).map_err(py_err)?;
        to_python(py, &elliptic::verify_lfun_sum(&c, tol).map_err(py_err)?)
    }

    /// Rows of the elliptic table, with a unit bump weight.
    #[pyfunction]
    #[pyo3(signature = (p, k, m_max, include_squares = false, route = "direct", tol = 1e-8))]
    fn elliptic_table<'py>(
        py: Python<'py>,
        p: u64,
        k: u32,
        m_max: i64,
        include_squares: bool,
        route: &str,
        tol: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let theta = ThetaModel::default();
        let rows = elliptic::elliptic_table(p, k, m_max, include_squares, &theta, super::route(route)?, tol)
            .map_err(py_err)?;
        to_python(py, &rows)
    }

    /// Direct and residue-grouped sums of the Kronecker-weighted `m`-sum.
    #[pyfunction]
    #[pyo3(signature = (ell, f, p, k, sign, m_max, include_squares = false, alpha = 0.4))]
    #[allow(clippy::too_many_arguments)]
    fn residue_split_check<'py>(
        py: Python<'py>,
        ell: u64,
        f: u64,
        p: u64,
        k: u32,
        sign: i8,
        m_max: i64,
        include_squares: bool,
        alpha: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let cfg = SplitConfig { ell, f, p, k, sign, m_max, include_squares };
        let theta = ThetaModel::bump(m_max as f64 + 1.0).map_err(py_err)?;
        let r = elliptic::residue_split_check(&cfg, &theta, elliptic::gaussian_bracket(ell, f, alpha))
            .map_err(py_err)?;
        to_python(py, &r)
    }

    /// Kottwitz's GL(3) orbital integral, exactly, as a `Fraction`.
    #[pyfunction]
    #[pyo3(signature = (p, n, variant = "unramified", val = 1))]
    fn kottwitz_gl3<'py>(py: Python<'py>, p: u64, n: u32, variant: &str, val: u32) -> PyResult<Bound<'py, PyAny>> {
        let v = elliptic::kottwitz_gl3(p, n, kottwitz_variant(variant, val)?).map_err(py_err)?;
        fraction(py, v.to_string())
    }

    /// Value-decay and first-derivative probes at a point of the
    /// discriminant locus, with a Gaussian cutoff.
    #[pyfunction]
    #[pyo3(signature = (n, a_n, point, beta, alpha = 0.5))]
    fn smoothing_probe<'py>(
        py: Python<'py>,
        n: usize,
        a_n: i64,
        point: Vec<f64>,
        beta: f64,
        alpha: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let dm = smoothing::disc_map_gl_n(a_n, n).map_err(py_err)?;
        let spec = SmoothProbeSpec::new(dm, beta, alpha, Phi::Gaussian).map_err(py_err)?;
        let values = smoothing::probe_value_decay(&spec, &point).map_err(py_err)?;
        let partials = smoothing::probe_derivatives(&spec, &point, 1).map_err(py_err)?;
        to_python(py, &serde_json::json!({ "values": values, "partials": partials }))
    }

    /// Runs the command-line interface; returns `(exit_code, report)`.
    #[pyfunction]
    fn run_cli(args: Vec<String>) -> (i32, String) {
        let mut out = Vec::new();
        let code = trace_afe::cli::run(std::iter::once("trace-afe".to_string()).chain(args), &mut out);
        (code, String::from_utf8_lossy(&out).into_owned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_map_to_library_values() {
        assert_eq!(route("afe").unwrap(), LRoute::Afe);
        assert!(route("other").is_err());
        assert_eq!(kottwitz_variant("ramified", 2).unwrap(), KottwitzVariant::Ramified(2));
        assert!(kottwitz_variant("split", 1).is_err());
    }
}
