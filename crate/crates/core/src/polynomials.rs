//! Characteristic polynomials of GL(n) elements: discriminants by exact
//! resultants, ellipticity, and splitting types modulo primes.

use crate::arith::{divisors, is_perfect_square};
use crate::error::{Error, Result};

/// Monic integer polynomial `X^n - a1 X^(n-1) + a2 X^(n-2) - ... + (-1)^n a_n`,
/// stored by the coefficients `a1..an` (trace, ..., determinant).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CharPoly {
    a: Vec<i64>,
}

impl CharPoly {
    pub fn new(a: Vec<i64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::InvalidPolynomial(format!("degree {} < 2", a.len())));
        }
        if *a.last().unwrap() == 0 {
            return Err(Error::InvalidPolynomial("a_n = 0 (singular element)".into()));
        }
        Ok(Self { a })
    }

    /// Build from ascending coefficients of a monic polynomial `c0 + c1 X + ... + X^n`.
    pub fn from_monic_ascending(c: &[i64]) -> Result<Self> {
        let n = c.len().checked_sub(1).ok_or_else(|| Error::InvalidPolynomial("empty".into()))?;
        if c[n] != 1 {
            return Err(Error::InvalidPolynomial("not monic".into()));
        }
        let a = (1..=n)
            .map(|j| if j % 2 == 0 { c[n - j] } else { -c[n - j] })
            .collect();
        Self::new(a)
    }

    pub fn degree(&self) -> usize {
        self.a.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.a
    }

    /// Ascending integer coefficients, leading coefficient 1.
    pub fn ascending(&self) -> Vec<i64> {
        let n = self.degree();
        let mut c = vec![0i64; n + 1];
        c[n] = 1;
        for (j, &aj) in self.a.iter().enumerate() {
            let j = j + 1;
            c[n - j] = if j % 2 == 0 { aj } else { -aj };
        }
        c
    }

    pub fn eval(&self, x: i64) -> i128 {
        self.ascending()
            .iter()
            .rev()
            .fold(0i128, |acc, &c| acc * x as i128 + c as i128)
    }
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<i128>>) -> Result<i128> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j]
                    .checked_mul(m[k][k])
                    .and_then(|x| m[i][k].checked_mul(m[k][j]).and_then(|y| x.checked_sub(y)))
                    .ok_or(Error::Overflow("bareiss_determinant"))?;
                m[i][j] = num / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// Sylvester matrix of two polynomials given by ascending coefficients.
pub fn sylvester_matrix(f: &[i64], g: &[i64]) -> Vec<Vec<i128>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![0i128; size];
        for (j, &c) in f.iter().rev().enumerate() {
            row[i + j] = c as i128;
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![0i128; size];
        for (j, &c) in g.iter().rev().enumerate() {
            row[i + j] = c as i128;
        }
        rows.push(row);
    }
    rows
}

pub fn resultant(f: &[i64], g: &[i64]) -> Result<i128> {
    bareiss_determinant(sylvester_matrix(f, g))
}

/// `prod_{i<j} (r_i - r_j)^2`, computed as `(-1)^(n(n-1)/2) Res(f, f')`.
pub fn discriminant(p: &CharPoly) -> Result<i128> {
    let c = p.ascending();
    let n = p.degree();
    let deriv: Vec<i64> = (1..=n).map(|i| c[i] * i as i64).collect();
    let res = resultant(&c, &deriv)?;
    Ok(if (n * (n - 1) / 2) % 2 == 0 { res } else { -res })
}

/// Irreducibility over Q for degree 2 and 3.
pub fn is_elliptic(p: &CharPoly) -> Result<bool> {
    match p.degree() {
        2 => {
            let d = discriminant(p)?;
            Ok(!(d >= 0 && d <= i64::MAX as i128 && is_perfect_square(d as i64)))
        }
        3 => {
            let c0 = p.ascending()[0];
            let has_root = divisors(c0.unsigned_abs())
                .into_iter()
                .flat_map(|d| [d as i64, -(d as i64)])
                .any(|r| p.eval(r) == 0);
            Ok(!has_root)
        }
        n => Err(Error::UnsupportedDegree(n)),
    }
}

/// Degrees of the irreducible factors of `f mod p`, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FactorizationType {
    pub degrees: Vec<u32>,
    pub ramified: bool,
}

impl FactorizationType {
    pub fn is_split(&self) -> bool {
        !self.ramified && self.degrees.iter().all(|&d| d == 1)
    }

    pub fn is_inert(&self) -> bool {
        !self.ramified && self.degrees.len() == 1
    }
}

/// Dense polynomials over F_p, ascending coefficients, no trailing zeros.
mod fp {
    pub type Poly = Vec<u64>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &Poly) -> Option<usize> {
        a.len().checked_sub(1)
    }

    fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = mul_mod(r, b, p);
            }
            b = mul_mod(b, b, p);
            e >>= 1;
        }
        r
    }

    pub fn monic(a: Poly, p: u64) -> Poly {
        match a.last() {
            None => a,
            Some(&lc) => {
                let li = inv(lc, p);
                a.into_iter().map(|c| mul_mod(c, li, p)).collect()
            }
        }
    }

    pub fn sub(a: &Poly, b: &Poly, p: u64) -> Poly {
        let n = a.len().max(b.len());
        let r = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(r)
    }

    pub fn mul(a: &Poly, b: &Poly, p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(r)
    }

    /// Quotient and remainder; `b` nonzero.
    pub fn divrem(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
        let db = deg(b).expect("division by zero polynomial");
        let mut r = a.clone();
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let li = inv(b[db], p);
        let mut q = vec![0u64; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = mul_mod(r[i], li, p);
            q[i - db] = c;
            if c != 0 {
                for j in 0..=db {
                    let t = mul_mod(c, b[j], p);
                    r[i - db + j] = (r[i - db + j] + p - t) % p;
                }
            }
        }
        r.truncate(db);
        (trim(q), trim(r))
    }

    pub fn rem(a: &Poly, b: &Poly, p: u64) -> Poly {
        divrem(a, b, p).1
    }

    pub fn gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        monic(x, p)
    }

    pub fn derivative(a: &Poly, p: u64) -> Poly {
        trim(a.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect())
    }

    /// `base^e mod m`.
    pub fn powmod(base: &Poly, mut e: u64, m: &Poly, p: u64) -> Poly {
        let mut result: Poly = rem(&vec![1], m, p);
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = rem(&mul(&result, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        result
    }

    pub fn eval(a: &Poly, x: u64, p: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
    }
}

fn reduce_mod_p(f: &CharPoly, p: u64) -> fp::Poly {
    fp::trim(
        f.ascending()
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect(),
    )
}

/// Splitting type of `f mod p` via distinct-degree factorization.
pub fn factor_type_mod_p(f: &CharPoly, p: u64) -> Result<FactorizationType> {
    if !crate::arith::is_prime(p) || p > 1_000_000 {
        return Err(Error::OutOfRange(format!("p = {p} must be a prime <= 10^6")));
    }
    let fbar = reduce_mod_p(f, p);
    let g = fp::gcd(&fbar, &fp::derivative(&fbar, p), p);
    let ramified = fp::deg(&g).unwrap_or(0) > 0;

    let x: fp::Poly = vec![0, 1];
    let mut h = fbar;
    let mut xpi = fp::rem(&x, &h, p);
    let mut degrees = Vec::new();
    let mut i = 1u32;
    while fp::deg(&h).is_some_and(|d| 2 * i as usize <= d) {
        xpi = fp::powmod(&xpi, p, &h, p);
        // product of the distinct degree-i irreducible factors of h
        let mut g = fp::gcd(&h, &fp::sub(&xpi, &x, p), p);
        while fp::deg(&g).is_some_and(|d| d > 0) {
            let dg = fp::deg(&g).unwrap() as u32;
            degrees.extend(std::iter::repeat_n(i, (dg / i) as usize));
            h = fp::divrem(&h, &g, p).0;
            g = fp::gcd(&h, &g, p);
        }
        xpi = fp::rem(&xpi, &h, p);
        i += 1;
    }
    if let Some(d) = fp::deg(&h).filter(|&d| d > 0) {
        degrees.push(d as u32);
    }
    degrees.sort_unstable();
    Ok(FactorizationType { degrees, ramified })
}

/// Number of distinct roots of `f` in F_p by exhaustive scan.
pub fn count_roots_mod_p(f: &CharPoly, p: u64) -> usize {
    let fbar = reduce_mod_p(f, p);
    (0..p).filter(|&x| fp::eval(&fbar, x, p) == 0).count()
}
