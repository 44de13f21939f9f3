//! Quadratic Dirichlet L-values by direct summation, by the class number
//! formula, and (in [`crate::gamma_afe`]) by the approximate functional
//! equation; Euler products for cyclic cubic fields.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::arith::{is_discriminant, is_fundamental, is_perfect_square, kronecker, primes_up_to};
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::polynomials::{discriminant, factor_type_mod_p, is_elliptic, CharPoly};

/// `n -> kronecker(d, n)` for a discriminant `d`, tabulated over one period.
#[derive(Debug, Clone)]
pub struct QuadraticCharacter {
    d: i64,
    table: Vec<i8>,
}

impl QuadraticCharacter {
    pub fn new(d: i64) -> Result<Self> {
        if !is_discriminant(d) {
            return Err(Error::NotDiscriminant(d));
        }
        let q = d.unsigned_abs();
        if q > 100_000_000 {
            return Err(Error::OutOfRange(format!("|D| = {q} too large to tabulate")));
        }
        let table = (0..q as i64).map(|n| kronecker(d, n) as i8).collect();
        Ok(Self { d, table })
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub fn period(&self) -> u64 {
        self.table.len() as u64
    }

    /// Principal characters come from square discriminants.
    pub fn is_principal(&self) -> bool {
        is_perfect_square(self.d)
    }

    pub fn is_even(&self) -> bool {
        self.d > 0
    }

    pub fn value(&self, n: u64) -> i32 {
        self.table[(n % self.period()) as usize] as i32
    }
}

/// A computed L-value with a rigorous truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LValue {
    pub value: f64,
    pub error_bound: f64,
    /// Number of Dirichlet series terms summed.
    pub terms: u64,
}

const BLOCK: u64 = 1 << 16;

fn partial_sum(chi: &QuadraticCharacter, s: f64, n: u64) -> f64 {
    let term = |k: u64| -> f64 {
        let c = chi.value(k);
        if c == 0 {
            0.0
        } else if s == 1.0 {
            c as f64 / k as f64
        } else {
            c as f64 * (k as f64).powf(-s)
        }
    };
    let blocks = n.div_ceil(BLOCK);
    // Fixed block decomposition, reduced in ascending order: the result does
    // not depend on the number of worker threads.
    let partials: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK + 1;
            let hi = ((b + 1) * BLOCK).min(n);
            compensated_sum((lo..=hi).map(term))
        })
        .collect();
    compensated_sum(partials)
}

/// `sum_{n <= N} chi(n) n^-s` plus a tail correction, with a rigorous bound.
///
/// For nonprincipal characters the sum runs over whole periods so the
/// character sum `S(N)` vanishes; the tail is then `Sbar (N+1)^-s` plus a
/// remainder bounded by Abel summation, where `Sbar` is the mean of the
/// partial character sums over a period.
pub fn l_value_direct(chi: &QuadraticCharacter, s: f64, n_max: u64) -> Result<LValue> {
    if !(s >= 1.0) {
        return Err(Error::OutOfRange(format!("s = {s} < 1")));
    }
    if n_max == 0 {
        return Err(Error::OutOfRange("N_max = 0".into()));
    }
    if chi.is_principal() {
        if s == 1.0 {
            return Err(Error::Divergent(format!(
                "L(1, chi_{}) with principal character",
                chi.discriminant()
            )));
        }
        let value = partial_sum(chi, s, n_max);
        let bound = (n_max as f64).powf(1.0 - s) / (s - 1.0);
        return Ok(LValue { value, error_bound: bound, terms: n_max });
    }
    let q = chi.period();
    let n = (n_max / q).max(1) * q;

    let mut running = 0i64;
    let sums: Vec<f64> = (1..=q)
        .map(|r| {
            running += chi.value(r) as i64;
            running as f64
        })
        .collect();
    debug_assert_eq!(running, 0);
    let mean = compensated_sum(sums.iter().copied()) / q as f64;
    let mut u = 0.0f64;
    let mut max_u = 0.0f64;
    for &sr in &sums {
        u += sr - mean;
        max_u = max_u.max(u.abs());
    }

    let nf = n as f64;
    let b_next = (nf + 1.0).powf(-s) - (nf + 2.0).powf(-s);
    let value = partial_sum(chi, s, n) + mean * (nf + 1.0).powf(-s);
    let rounding = 4.0 * f64::EPSILON * (nf.ln() + 1.0);
    Ok(LValue { value, error_bound: max_u * b_next + rounding, terms: n })
}

/// `L(s, chi_delta)` for a possibly non-fundamental discriminant `delta`.
pub fn l_modified(delta: i64, s: f64, n_max: u64) -> Result<LValue> {
    if is_discriminant(delta) && is_perfect_square(delta) {
        return Err(Error::SquareDiscriminant(delta));
    }
    l_value_direct(&QuadraticCharacter::new(delta)?, s, n_max)
}

/// Class group data of a quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ClassData {
    pub d: i64,
    pub h: u64,
    /// Number of roots of unity (imaginary fields).
    pub w: Option<u32>,
    /// Regulator `log(eps)` (real fields).
    pub reg: Option<f64>,
}

fn roots_of_unity(d: i64) -> u32 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// Class number of an imaginary quadratic field by counting reduced forms.
pub fn class_number_bf(d: i64) -> Result<ClassData> {
    if d >= 0 || d <= -1_000_000 {
        return Err(Error::OutOfRange(format!("D = {d} outside (-10^6, 0)")));
    }
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let abs_d = -d;
    let mut h = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= abs_d {
        let mut b = -a + 1;
        while b <= a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a && !(b < 0 && (a == c || -b == a)) {
                    h += 1;
                }
            }
            b += 1;
        }
        a += 1;
    }
    Ok(ClassData { d, h, w: Some(roots_of_unity(d)), reg: None })
}

/// Regulator of a real quadratic field from the continued fraction of the
/// reduced irrational `(b + sqrt(D)) / 2`: the sum of the logarithms of the
/// complete quotients over one period.
pub fn regulator_bf(d: i64) -> Result<f64> {
    if d <= 0 || d >= 1_000_000 {
        return Err(Error::OutOfRange(format!("D = {d} outside (0, 10^6)")));
    }
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let root = (d as f64).sqrt();
    let r = crate::arith::isqrt(d as u64) as i64;
    let b0 = if (r - d) % 2 == 0 { r } else { r - 1 };
    let (p0, q0) = (b0, 2i64);
    let (mut p, mut q) = (p0, q0);
    let mut logs = Vec::new();
    loop {
        logs.push(((p as f64 + root) / q as f64).ln());
        let a = (p + r) / q;
        p = a * q - p;
        q = (d - p * p) / q;
        if (p, q) == (p0, q0) {
            break;
        }
    }
    Ok(compensated_sum(logs))
}

/// Class data of a real quadratic field; `h` from the analytic class number
/// formula rounded to the nearest integer.
pub fn class_data_real(d: i64, n_max: u64) -> Result<ClassData> {
    let reg = regulator_bf(d)?;
    let l = l_value_direct(&QuadraticCharacter::new(d)?, 1.0, n_max)?;
    let h_real = l.value * (d as f64).sqrt() / (2.0 * reg);
    let h = h_real.round();
    if h < 1.0 || (h_real - h).abs() > 0.05 {
        return Err(Error::OutOfRange(format!(
            "analytic class number {h_real} for D = {d} is not near an integer"
        )));
    }
    Ok(ClassData { d, h: h as u64, w: None, reg: Some(reg) })
}

/// Class data for any fundamental discriminant.
pub fn class_data(d: i64, n_max: u64) -> Result<ClassData> {
    if d < 0 {
        class_number_bf(d)
    } else {
        class_data_real(d, n_max)
    }
}

/// `L(1, chi_D)` from the class number formula.
pub fn l_value_cnf(cd: &ClassData) -> Result<f64> {
    let abs_d = (cd.d.unsigned_abs() as f64).sqrt();
    match (cd.d < 0, cd.w, cd.reg) {
        (true, Some(w), _) => Ok(2.0 * PI * cd.h as f64 / (w as f64 * abs_d)),
        (false, _, Some(reg)) => Ok(2.0 * cd.h as f64 * reg / abs_d),
        _ => Err(Error::InvalidArgument(format!("incomplete class data {cd:?}"))),
    }
}

/// Partial Euler product of `zeta_E(s) / zeta(s)` for a cyclic cubic field.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EulerProduct {
    pub value: f64,
    pub prime_bound: u64,
    pub split: usize,
    pub inert: usize,
    /// Ramified primes, whose local factor is set to 1.
    pub ramified: Vec<u64>,
}

pub fn dedekind_ratio_euler(f: &CharPoly, s: f64, prime_bound: u64) -> Result<EulerProduct> {
    if f.degree() != 3 {
        return Err(Error::UnsupportedDegree(f.degree()));
    }
    if !(s > 1.0) {
        return Err(Error::OutOfRange(format!("s = {s} <= 1")));
    }
    if !is_elliptic(f)? {
        return Err(Error::NotGaloisCubic("reducible over Q".into()));
    }
    let disc = discriminant(f)?;
    if disc <= 0 || disc > i64::MAX as i128 || !is_perfect_square(disc as i64) {
        return Err(Error::NotGaloisCubic(format!("discriminant {disc} is not a square")));
    }
    let mut out = EulerProduct {
        value: 1.0,
        prime_bound,
        split: 0,
        inert: 0,
        ramified: Vec::new(),
    };
    for p in primes_up_to(prime_bound) {
        let t = factor_type_mod_p(f, p)?;
        let x = (p as f64).powf(-s);
        if t.ramified {
            out.ramified.push(p);
        } else if t.is_split() {
            out.split += 1;
            out.value /= (1.0 - x) * (1.0 - x);
        } else if t.is_inert() {
            out.inert += 1;
            out.value /= 1.0 + x + x * x;
        } else {
            return Err(Error::NotGaloisCubic(format!("type {:?} at p = {p}", t.degrees)));
        }
    }
    Ok(out)
}

/// Method used to obtain `L(s, chi_D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LRoute {
    Direct,
    Cnf,
    Afe,
}

impl LRoute {
    pub fn name(self) -> &'static str {
        match self {
            LRoute::Direct => "direct",
            LRoute::Cnf => "cnf",
            LRoute::Afe => "afe",
        }
    }
}

const DIRECT_START: u64 = 1 << 16;
const DIRECT_LIMIT: u64 = 1 << 28;

/// Direct summation, growing the cutoff until the error bound is below `tol`.
pub fn l_value_direct_tol(delta: i64, s: f64, tol: f64) -> Result<LValue> {
    let chi = QuadraticCharacter::new(delta)?;
    if is_perfect_square(delta) && s == 1.0 {
        return Err(Error::SquareDiscriminant(delta));
    }
    let mut n = DIRECT_START.max(chi.period());
    loop {
        let l = l_value_direct(&chi, s, n)?;
        if l.error_bound <= tol {
            return Ok(l);
        }
        if n >= DIRECT_LIMIT {
            return Err(Error::Quadrature { estimate: l.error_bound, tolerance: tol });
        }
        n *= 4;
    }
}

/// `L(s, chi_D)` by the requested route. The direct route accepts any
/// non-square discriminant; the class number formula needs `s = 1` and a
/// fundamental `D`; the approximate functional equation needs `0 <= s <= 1`.
pub fn l_value_route(d: i64, s: f64, route: LRoute, tol: f64) -> Result<LValue> {
    if !is_discriminant(d) {
        return Err(Error::NotDiscriminant(d));
    }
    if is_perfect_square(d) {
        return Err(Error::SquareDiscriminant(d));
    }
    match route {
        LRoute::Direct => l_value_direct_tol(d, s, tol),
        LRoute::Cnf => {
            if s != 1.0 {
                return Err(Error::OutOfRange(format!("class number formula needs s = 1, got {s}")));
            }
            if !is_fundamental(d) {
                return Err(Error::NotFundamental(d));
            }
            let value = l_value_cnf(&class_data(d, 1 << 20)?)?;
            Ok(LValue { value, error_bound: 16.0 * f64::EPSILON * value, terms: 0 })
        }
        LRoute::Afe => {
            let v = crate::gamma_afe::afe_quadratic(d, s, 1.0)?;
            if v.error > tol {
                return Err(Error::Quadrature { estimate: v.error, tolerance: tol });
            }
            Ok(LValue { value: v.value, error_bound: v.error, terms: v.first.terms + v.second.terms })
        }
    }
}
