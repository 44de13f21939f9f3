//! Elliptic terms of the GL(2) trace formula: enumeration of elliptic
//! conjugacy classes with determinant `±p^k`, p-adic orbital products,
//! volume factors, the Kronecker-symbol residue split, and Kottwitz's
//! GL(3) orbital integrals.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    decompose_discriminant, divisors, is_perfect_square, is_prime, kronecker, prime_divisors,
    DiscriminantDecomposition,
};
use crate::error::{Error, Result};
use crate::lfunctions::{l_value_direct_tol, l_value_route, LRoute};
use crate::numeric::CompensatedSum;

/// An elliptic class of GL(2, Q) with trace `m` and determinant `sign p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EllipticClassGL2 {
    pub m: i64,
    pub sign: i8,
    pub p: u64,
    pub k: u32,
    pub delta: i64,
    pub decomp: DiscriminantDecomposition,
}

impl EllipticClassGL2 {
    pub fn new(m: i64, sign: i8, p: u64, k: u32) -> Result<Self> {
        let delta = discriminant_gl2(m, sign, p, k)?;
        if is_perfect_square(delta) {
            return Err(Error::SquareDiscriminant(delta));
        }
        Ok(EllipticClassGL2 { m, sign, p, k, delta, decomp: decompose_discriminant(delta)? })
    }

    pub fn s_gamma(&self) -> u64 {
        self.decomp.s
    }

    pub fn field_discriminant(&self) -> i64 {
        self.decomp.fund
    }

    /// `m / (2 p^(k/2))`, the argument of the archimedean weight.
    pub fn normalized_trace(&self) -> f64 {
        normalized_trace(self.m, self.p, self.k)
    }
}

fn normalized_trace(m: i64, p: u64, k: u32) -> f64 {
    m as f64 / (2.0 * (p as f64).powf(k as f64 / 2.0))
}

fn check_prime_power(p: u64, k: u32) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    i64::try_from(p)
        .ok()
        .and_then(|p| p.checked_pow(k))
        .filter(|q| q.checked_mul(4).is_some())
        .ok_or(Error::Overflow("p^k"))
}

/// `m^2 - 4 sign p^k`.
pub fn discriminant_gl2(m: i64, sign: i8, p: u64, k: u32) -> Result<i64> {
    let q = check_prime_power(p, k)?;
    let det = if sign >= 0 { q } else { -q };
    m.checked_mul(m)
        .and_then(|m2| m2.checked_sub(4 * det))
        .ok_or(Error::Overflow("m^2 - 4 det"))
}

/// A trace `m` and determinant sign with the discriminant, whether or not
/// it is elliptic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceClass {
    pub m: i64,
    pub sign: i8,
    pub delta: i64,
}

/// All `(m, sign)` with `|m| <= bound`, in ascending `m` with `+` before `-`.
pub fn trace_classes(p: u64, k: u32, bound: i64, include_squares: bool) -> Result<Vec<TraceClass>> {
    let mut out = Vec::new();
    for m in -bound..=bound {
        for sign in [1i8, -1] {
            let delta = discriminant_gl2(m, sign, p, k)?;
            if include_squares || !is_perfect_square(delta) {
                out.push(TraceClass { m, sign, delta });
            }
        }
    }
    Ok(out)
}

/// Elliptic classes with `|m| <= bound`, ordered by ascending `m`, `+`
/// before `-`.
pub fn enumerate_elliptic(p: u64, k: u32, bound: i64) -> Result<Vec<EllipticClassGL2>> {
    if bound < 0 {
        return Err(Error::InvalidArgument(format!("trace bound {bound} < 0")));
    }
    trace_classes(p, k, bound, false)?
        .into_iter()
        .map(|c| EllipticClassGL2::new(c.m, c.sign, p, k))
        .collect()
}

/// `sum_{f | s} f prod_{q | f} (1 - (D/q)/q)`, exactly.
pub fn padic_orbital_product(cls: &EllipticClassGL2) -> Ratio<i128> {
    padic_product(cls.decomp.s, cls.decomp.fund)
}

fn padic_product(s: u64, d: i64) -> Ratio<i128> {
    let mut total = Ratio::zero();
    for f in divisors(s) {
        let mut term = Ratio::from_integer(f as i128);
        for q in prime_divisors(f) {
            let chi = kronecker(d, q as i64) as i128;
            term *= Ratio::new(q as i128 - chi, q as i128);
        }
        total += term;
    }
    total
}

fn ratio_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `sqrt|D| L(1, chi_D)` for a fundamental discriminant.
pub fn volume(d: i64, route: LRoute, tol: f64) -> Result<f64> {
    let l = l_value_route(d, 1.0, route, tol)?;
    Ok((d.unsigned_abs() as f64).sqrt() * l.value)
}

/// Both sides of the summed-L identity for one class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LfunSumReport {
    pub m: i64,
    pub sign: i8,
    pub delta: i64,
    pub s_gamma: u64,
    pub d_e: i64,
    /// The `f` admitted to the left-hand sum.
    pub admissible_f: Vec<u64>,
    pub lhs: f64,
    pub rhs: f64,
    pub discrepancy: f64,
    /// `sqrt|D| L(1, chi_D) sum_f ...` divided by `lhs`; equals `sqrt|delta|`.
    pub unnormalized_ratio: f64,
    pub passed: bool,
}

/// Checks
/// `sum' (1/f) L(1, chi_{delta/f^2}) = (1/s) L(1, chi_D) sum_{f|s} f prod_{q|f} (1 - chi_D(q)/q)`
/// where `sum'` runs over `f` with `f^2 | delta` and `delta/f^2 = 0, 1 mod 4`.
pub fn verify_lfun_sum(cls: &EllipticClassGL2, tol: f64) -> Result<LfunSumReport> {
    let delta = cls.delta;
    let s = cls.decomp.s;
    let d = cls.decomp.fund;
    let inner_tol = tol * 1e-3;

    let admissible: Vec<u64> = divisors(s)
        .into_iter()
        .filter(|&f| {
            let f2 = (f * f) as i64;
            delta % f2 == 0 && matches!((delta / f2).rem_euclid(4), 0 | 1)
        })
        .collect();
    let mut lhs = CompensatedSum::new();
    for &f in &admissible {
        let l = l_value_direct_tol(delta / (f * f) as i64, 1.0, inner_tol)?;
        lhs.add(l.value / f as f64);
    }
    let lhs = lhs.value();

    let l_d = l_value_direct_tol(d, 1.0, inner_tol)?.value;
    let product = ratio_f64(&padic_product(s, d));
    let rhs = l_d * product / s as f64;
    let unnormalized = (d.unsigned_abs() as f64).sqrt() * l_d * product;
    let discrepancy = (lhs - rhs).abs();
    Ok(LfunSumReport {
        m: cls.m,
        sign: cls.sign,
        delta,
        s_gamma: s,
        d_e: d,
        admissible_f: admissible,
        lhs,
        rhs,
        discrepancy,
        unnormalized_ratio: unnormalized / lhs,
        passed: discrepancy < tol,
    })
}

type Weight = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// Archimedean weight on the coefficient space, with a declared
/// singularity exponent and compact support.
#[derive(Clone)]
pub struct ThetaModel {
    weight: Arc<Weight>,
    pub beta: f64,
    pub support_radius: f64,
    pub name: String,
}

impl fmt::Debug for ThetaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThetaModel")
            .field("name", &self.name)
            .field("beta", &self.beta)
            .field("support_radius", &self.support_radius)
            .finish()
    }
}

fn bump(r: f64) -> f64 {
    if r >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    }
}

impl ThetaModel {
    pub fn new<F>(name: &str, weight: F, beta: f64, support_radius: f64) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if !(beta >= 0.0) || !(support_radius > 0.0) || !support_radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "theta needs beta >= 0 and a finite positive support radius, got {beta}, {support_radius}"
            )));
        }
        Ok(ThetaModel { weight: Arc::new(weight), beta, support_radius, name: name.into() })
    }

    /// `exp(1 - 1/(1 - |x/R|^2))` on `|x| < R`, so `theta(0) = 1`.
    pub fn bump(radius: f64) -> Result<Self> {
        Self::new(
            "bump",
            move |x: &[f64]| bump(x.iter().map(|t| t * t).sum::<f64>().sqrt() / radius),
            0.0,
            radius,
        )
    }

    /// 1 on `|x| < R`, 0 outside.
    pub fn indicator(radius: f64) -> Result<Self> {
        Self::new(
            "indicator",
            |_: &[f64]| 1.0,
            0.0,
            radius,
        )
    }

    pub fn zero() -> Self {
        ThetaModel { weight: Arc::new(|_: &[f64]| 0.0), beta: 0.0, support_radius: 1.0, name: "zero".into() }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        if x.iter().map(|t| t * t).sum::<f64>() >= self.support_radius * self.support_radius {
            0.0
        } else {
            (self.weight)(x)
        }
    }
}

impl Default for ThetaModel {
    fn default() -> Self {
        ThetaModel::bump(1.0).expect("unit bump")
    }
}

/// One row of the elliptic table. Volume and term are absent for square
/// discriminants; for `delta = 0` the decomposition is absent too.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipticTerm {
    pub m: i64,
    pub sign: i8,
    pub delta: i64,
    pub s_gamma: Option<u64>,
    pub d_e: Option<i64>,
    pub volume: Option<f64>,
    pub padic_product: Option<String>,
    pub theta: f64,
    pub term: Option<f64>,
}

fn term_for(c: &TraceClass, p: u64, k: u32, theta: &ThetaModel, route: LRoute, tol: f64) -> Result<EllipticTerm> {
    let th = theta.eval(&[normalized_trace(c.m, p, k)]);
    let mut row = EllipticTerm {
        m: c.m,
        sign: c.sign,
        delta: c.delta,
        s_gamma: None,
        d_e: None,
        volume: None,
        padic_product: None,
        theta: th,
        term: None,
    };
    if c.delta == 0 {
        return Ok(row);
    }
    let dec = decompose_discriminant(c.delta)?;
    let product = padic_product(dec.s, dec.fund);
    row.s_gamma = Some(dec.s);
    row.d_e = Some(dec.fund);
    row.padic_product = Some(product.to_string());
    if !dec.is_square() {
        let l = l_value_route(dec.fund, 1.0, route, tol)?.value;
        row.volume = Some((dec.fund.unsigned_abs() as f64).sqrt() * l);
        row.term = Some(l * th * ratio_f64(&product) / dec.s as f64);
    }
    Ok(row)
}

/// Rows for `|m| <= bound`, evaluated in parallel and returned in
/// ascending `m`, `+` before `-`.
pub fn elliptic_table(
    p: u64,
    k: u32,
    bound: i64,
    include_squares: bool,
    theta: &ThetaModel,
    route: LRoute,
    tol: f64,
) -> Result<Vec<EllipticTerm>> {
    if bound < 0 {
        return Err(Error::InvalidArgument(format!("trace bound {bound} < 0")));
    }
    trace_classes(p, k, bound, include_squares)?
        .par_iter()
        .map(|c| term_for(c, p, k, theta, route, tol))
        .collect()
}

/// Sum of the table's terms, reduced in table order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipticSum {
    pub value: f64,
    pub terms: Vec<EllipticTerm>,
}

/// `sum_{+-p^k} sum'_m (1/s) L(1, chi_D) theta(m / 2p^(k/2)) prod_q Orb`,
/// over elliptic classes with `|m| <= bound` and inside the support of
/// theta.
pub fn elliptic_sum_gl2(
    p: u64,
    k: u32,
    theta: &ThetaModel,
    route: LRoute,
    bound: i64,
    tol: f64,
) -> Result<EllipticSum> {
    check_prime_power(p, k)?;
    let reach = (theta.support_radius * 2.0 * (p as f64).powf(k as f64 / 2.0)).ceil();
    let bound = bound.min(reach as i64);
    let terms = elliptic_table(p, k, bound.max(0), false, theta, route, tol)?;
    let value = terms.iter().filter_map(|t| t.term).collect::<CompensatedSum>().value();
    Ok(EllipticSum { value, terms })
}

/// Parameters of the residue-class split of the `m`-sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitConfig {
    pub ell: u64,
    pub f: u64,
    pub p: u64,
    pub k: u32,
    pub sign: i8,
    pub m_max: i64,
    pub include_squares: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitReport {
    pub config: SplitConfig,
    pub direct: f64,
    pub grouped: f64,
    pub discrepancy: f64,
    /// Residues `a mod 4 l f^2` satisfying the congruence conditions.
    pub residues: usize,
    pub terms: usize,
    pub passed: bool,
}

pub const SPLIT_TOLERANCE: f64 = 1e-12;

/// `F(l f^2 / |delta|^alpha) + l f^2 / sqrt|delta| H(l f^2 / |delta|^(1 - alpha))`
/// with Gaussian `F` and `H`; zero at `delta = 0`.
pub fn gaussian_bracket(ell: u64, f: u64, alpha: f64) -> impl Fn(i64) -> f64 + Send + Sync {
    let lf2 = (ell * f * f) as f64;
    move |delta: i64| {
        if delta == 0 {
            return 0.0;
        }
        let ad = (delta.unsigned_abs()) as f64;
        let x = lf2 / ad.powf(alpha);
        let y = lf2 / ad.powf(1.0 - alpha);
        (-x * x).exp() + lf2 / ad.sqrt() * (-y * y).exp()
    }
}

/// Computes
/// `sum_m (delta(m)/f^2 | l) theta(m / 2p^(k/2)) G(delta(m))`
/// over `|m| <= M` with `f^2 | delta(m)` and `delta(m)/f^2 = 0, 1 mod 4`,
/// once directly and once grouped by `a mod 4 l f^2` with the symbol
/// `(delta(a)/f^2 | l)` taken outside the inner sum.
pub fn residue_split_check<G>(cfg: &SplitConfig, theta: &ThetaModel, g: G) -> Result<SplitReport>
where
    G: Fn(i64) -> f64,
{
    if cfg.ell == 0 || cfg.f == 0 {
        return Err(Error::InvalidArgument("l and f must be positive".into()));
    }
    let modulus = 4 * cfg.ell * cfg.f * cfg.f;
    let modulus = i64::try_from(modulus).map_err(|_| Error::Overflow("4 l f^2"))?;
    if cfg.m_max < 0 || cfg.m_max % modulus != 0 {
        return Err(Error::InvalidArgument(format!(
            "M = {} must be a non-negative multiple of 4 l f^2 = {modulus}",
            cfg.m_max
        )));
    }
    let f2 = (cfg.f * cfg.f) as i64;
    let ell = cfg.ell as i64;
    let admissible = |delta: i64| -> bool {
        delta % f2 == 0
            && matches!((delta / f2).rem_euclid(4), 0 | 1)
            && (cfg.include_squares || !is_perfect_square(delta))
    };
    let weight = |m: i64, delta: i64| theta.eval(&[normalized_trace(m, cfg.p, cfg.k)]) * g(delta);

    let mut direct = CompensatedSum::new();
    let mut terms = 0;
    for m in -cfg.m_max..=cfg.m_max {
        let delta = discriminant_gl2(m, cfg.sign, cfg.p, cfg.k)?;
        if admissible(delta) {
            terms += 1;
            direct.add(kronecker(delta / f2, ell) as f64 * weight(m, delta));
        }
    }

    let mut grouped = CompensatedSum::new();
    let mut residues = 0;
    for a in 0..modulus {
        let delta_a = discriminant_gl2(a, cfg.sign, cfg.p, cfg.k)?;
        if delta_a % f2 != 0 || !matches!((delta_a / f2).rem_euclid(4), 0 | 1) {
            continue;
        }
        residues += 1;
        let symbol = kronecker(delta_a / f2, ell);
        let mut inner = CompensatedSum::new();
        let mut m = -cfg.m_max + (a + cfg.m_max).rem_euclid(modulus);
        while m <= cfg.m_max {
            let delta = discriminant_gl2(m, cfg.sign, cfg.p, cfg.k)?;
            if cfg.include_squares || !is_perfect_square(delta) {
                inner.add(weight(m, delta));
            }
            m += modulus;
        }
        grouped.add(symbol as f64 * inner.value());
    }

    let (direct, grouped) = (direct.value(), grouped.value());
    let discrepancy = (direct - grouped).abs();
    Ok(SplitReport {
        config: *cfg,
        direct,
        grouped,
        discrepancy,
        residues,
        terms,
        passed: discrepancy < SPLIT_TOLERANCE,
    })
}

/// The cubic extension generated by a GL(3) elliptic element `alpha + pi^n beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KottwitzVariant {
    Unramified,
    /// Ramified, with `val(beta)` equal to 1 or 2.
    Ramified(u32),
}

/// Kottwitz's closed forms for the GL(3) orbital integral of the unit of
/// the Hecke algebra, evaluated exactly as printed.
pub fn kottwitz_gl3(p: u64, n: u32, variant: KottwitzVariant) -> Result<BigRational> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let pb = BigInt::from(p);
    let pow = |e: u32| -> BigInt { Pow::pow(&pb, e) };
    let one = BigInt::one();
    let numer = match variant {
        KottwitzVariant::Unramified => {
            let c = &pb * &pb + &pb + &one;
            pow(3 * n + 1) * (&pb + &one) * &c - BigInt::from(3) * pow(2 * n) * &c + BigInt::from(3)
        }
        KottwitzVariant::Ramified(v) => {
            if !(1..=2).contains(&v) {
                return Err(Error::InvalidArgument(format!("val(beta) = {v} not in {{1, 2}}")));
            }
            pow(3 * n + 1) * (&pb + &one) * pow(1 + v) - pow(2 * n) * (pow(2) + (&pb + &one) * pow(2 * v))
                + &one
        }
    };
    let pm1 = &pb - &one;
    let denom = &pm1 * &pm1 * (&pb + &one);
    Ok(BigRational::new(numer, denom))
}
