//! Exact integer kernels: Kronecker symbol, factorization, discriminant
//! decomposition.

use crate::error::{Error, Result};

/// Kronecker symbol `(a/n)`, the completely multiplicative extension of the
/// Legendre symbol to all integers `n` (including `n <= 0` and even `n`).
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n as i128;
    let mut a = a as i128;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // Strip the power of two from n using (a/2) = 0, 1, -1 for a even, ±1, ±3 mod 8.
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a & 1 == 0 {
            return 0;
        }
        n >>= twos;
        if twos & 1 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // n is now odd and positive: Jacobi symbol by reciprocity.
    a = a.rem_euclid(n);
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t & 1 == 1 {
            let r = n & 7;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        if a & 3 == 3 && n & 3 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn gcd(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::OutOfRange("factorize(0)".into()));
    }
    if n > i64::MAX as u64 {
        return Err(Error::Overflow("factorize"));
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut m);
    push(3, &mut m);
    let mut p = 5u64;
    while p * p <= m {
        push(p, &mut m);
        push(p + 2, &mut m);
        p += 6;
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(out)
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n.max(1))
        .map(|f| f.into_iter().map(|(p, _)| p).collect())
        .unwrap_or_default()
}

/// Positive divisors of `n`, ascending. `divisors(0)` is empty.
pub fn divisors(n: u64) -> Vec<u64> {
    let Ok(fac) = factorize(n) else {
        return Vec::new();
    };
    let mut divs = vec![1u64];
    for (p, e) in fac {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_perfect_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u64);
    r * r == n as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    matches!(factorize(n).as_deref(), Ok([(_, 1)]))
}

/// Primes `<= bound`, by sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| p.then_some(i as u64))
        .collect()
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n.max(1)).map(|f| f.iter().all(|&(_, e)| e == 1)).unwrap_or(false)
}

/// Whether `d` is the discriminant of a quadratic field.
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// A discriminant written as `delta = s^2 * fund` with `fund` fundamental.
///
/// Positive perfect squares decompose with `fund == 1`; they carry no
/// quadratic field and [`DiscriminantDecomposition::is_square`] is true.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DiscriminantDecomposition {
    pub delta: i64,
    pub s: u64,
    pub fund: i64,
}

impl DiscriminantDecomposition {
    pub fn is_square(&self) -> bool {
        self.fund == 1
    }

    /// The field discriminant; errors for square `delta`.
    pub fn field_discriminant(&self) -> Result<i64> {
        if self.is_square() {
            Err(Error::SquareDiscriminant(self.delta))
        } else {
            Ok(self.fund)
        }
    }
}

pub fn is_discriminant(delta: i64) -> bool {
    delta != 0 && matches!(delta.rem_euclid(4), 0 | 1)
}

pub fn decompose_discriminant(delta: i64) -> Result<DiscriminantDecomposition> {
    if !is_discriminant(delta) {
        return Err(Error::NotDiscriminant(delta));
    }
    let mut s = 1u64;
    let mut core = 1i64;
    for (p, e) in factorize(delta.unsigned_abs())? {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p as i64;
        }
    }
    if delta < 0 {
        core = -core;
    }
    let fund = if core.rem_euclid(4) == 1 {
        core
    } else {
        // delta ≡ 0 mod 4 forces s even here
        debug_assert!(s % 2 == 0);
        s /= 2;
        4 * core
    };
    Ok(DiscriminantDecomposition { delta, s, fund })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_euler(a: i64, p: i64) -> i32 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        let mut r = 1i64;
        let mut b = a;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        if r == 1 {
            1
        } else {
            -1
        }
    }

    fn squares_mod(n: i64) -> Vec<i64> {
        (0..n).map(|x| x * x % n).collect()
    }

    #[test]
    fn kronecker_examples() {
        assert!(!squares_mod(3).contains(&(-4i64).rem_euclid(3)));
        assert_eq!(kronecker(-4, 3), -1);
        assert!(squares_mod(11).contains(&5));
        assert_eq!(kronecker(5, 11), 1);
        assert_eq!(kronecker(-4, 2), 0);
        for d in -50..50 {
            assert_eq!(kronecker(d, 1), 1);
        }
    }

    #[test]
    fn kronecker_edge_arguments() {
        assert_eq!(kronecker(5, 0), 0);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(-3, -1), -1);
        assert_eq!(kronecker(3, -1), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(i64::MIN + 1, 3), kronecker((i64::MIN + 1).rem_euclid(3), 3));
    }

    #[test]
    fn kronecker_multiplicative_exhaustive() {
        for d in -200i64..=200 {
            for m in -200i64..=200 {
                let km = kronecker(d, m);
                if m == 0 {
                    continue;
                }
                for n in [-200i64, -37, -8, -1, 1, 2, 3, 4, 12, 49, 97, 128, 200] {
                    assert_eq!(kronecker(d, m * n), km * kronecker(d, n), "d={d} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn kronecker_zero_iff_common_factor() {
        for d in -100i64..=100 {
            for n in -100i64..=100 {
                assert_eq!(kronecker(d, n) == 0, gcd(d, n) > 1 || (n == 0 && d.abs() != 1));
            }
        }
    }

    #[test]
    fn kronecker_period_fundamental() {
        for d in (-100i64..=100).filter(|&d| is_fundamental(d)) {
            let q = d.abs();
            for n in 1..=3 * q {
                assert_eq!(kronecker(d, n), kronecker(d, n + q), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in primes_up_to(97).into_iter().filter(|&p| p > 2) {
            let p = p as i64;
            for a in -300..300 {
                assert_eq!(kronecker(a, p), legendre_euler(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).unwrap(), vec![]);
        assert_eq!(factorize(12).unwrap(), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(255).unwrap(), vec![(3, 1), (5, 1), (17, 1)]);
        assert!(factorize(0).is_err());
        assert!(factorize(u64::MAX).is_err());
        let big = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factorize(big).unwrap(), vec![(998_244_353, 1), (1_000_000_007, 1)]);
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(2), vec![1, 2]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        for n in 1..500u64 {
            let brute: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(divisors(n), brute);
        }
    }

    #[test]
    fn perfect_squares() {
        assert!(is_perfect_square(9));
        assert!(is_perfect_square(0));
        assert!(!is_perfect_square(-4));
        assert!(!is_perfect_square(2));
        assert!(is_perfect_square(3_037_000_499i64 * 3_037_000_499));
        assert!(!is_perfect_square(3_037_000_499i64 * 3_037_000_499 - 1));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose_discriminant(-16).unwrap();
        assert_eq!((d.s, d.fund), (2, -4));
        let d = decompose_discriminant(-7).unwrap();
        assert_eq!((d.s, d.fund), (1, -7));
        let d = decompose_discriminant(45).unwrap();
        assert_eq!((d.s, d.fund), (3, 5));
        let d = decompose_discriminant(12).unwrap();
        assert_eq!((d.s, d.fund), (1, 12));
        let d = decompose_discriminant(-12).unwrap();
        assert_eq!((d.s, d.fund), (2, -3));
        let d = decompose_discriminant(-48).unwrap();
        assert_eq!((d.s, d.fund), (4, -3));
        let d = decompose_discriminant(-20).unwrap();
        assert_eq!((d.s, d.fund), (1, -20));
        let d = decompose_discriminant(-75).unwrap();
        assert_eq!((d.s, d.fund), (5, -3));
    }

    #[test]
    fn decompose_rejections_and_squares() {
        assert_eq!(decompose_discriminant(0), Err(Error::NotDiscriminant(0)));
        assert_eq!(decompose_discriminant(2), Err(Error::NotDiscriminant(2)));
        assert_eq!(decompose_discriminant(-5), Err(Error::NotDiscriminant(-5)));
        let sq = decompose_discriminant(36).unwrap();
        assert!(sq.is_square());
        assert_eq!((sq.s, sq.fund), (6, 1));
        assert_eq!(sq.field_discriminant(), Err(Error::SquareDiscriminant(36)));
        assert!(decompose_discriminant(1).unwrap().is_square());
    }

    #[test]
    fn decompose_round_trip() {
        for fund in (-500i64..=500).filter(|&d| is_fundamental(d)) {
            for s in 1..=20i64 {
                let d = decompose_discriminant(s * s * fund).unwrap();
                assert_eq!((d.s as i64, d.fund), (s, fund));
            }
        }
    }

    #[test]
    fn fundamental_discriminants() {
        let small: Vec<i64> = (-30..=30).filter(|&d| is_fundamental(d)).collect();
        assert_eq!(
            small,
            vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17, 21, 24, 28, 29]
        );
    }
}
