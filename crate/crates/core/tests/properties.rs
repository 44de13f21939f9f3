use proptest::prelude::*;

use trace_afe::arith::{decompose_discriminant, is_discriminant, is_fundamental, kronecker};
use trace_afe::elliptic::{
    enumerate_elliptic, gaussian_bracket, padic_orbital_product, residue_split_check, SplitConfig, ThetaModel,
};
use trace_afe::gamma_afe::afe_quadratic;
use trace_afe::lfunctions::{class_number_bf, l_value_cnf, l_value_direct, QuadraticCharacter};
use trace_afe::polynomials::{discriminant, CharPoly};
use trace_afe::smoothing::disc_map_gl_n;

fn discriminants() -> impl Strategy<Value = i64> {
    (-5000i64..5000).prop_filter("discriminant", |&d| is_discriminant(d))
}

proptest! {
    #[test]
    fn kronecker_is_periodic_mod_discriminant(d in discriminants(), n in 1i64..10_000) {
        prop_assert_eq!(kronecker(d, n), kronecker(d, n + d.abs()));
    }

    #[test]
    fn kronecker_is_multiplicative(d in -500i64..500, m in 1i64..3000, n in 1i64..3000) {
        prop_assert_eq!(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
    }

    #[test]
    fn decomposition_round_trip(d in discriminants()) {
        let dec = decompose_discriminant(d).unwrap();
        prop_assert_eq!((dec.s * dec.s) as i64 * dec.fund, d);
        prop_assert!(dec.fund == 1 || is_fundamental(dec.fund));
    }

    // disc of a monic cubic with integer roots is the product of squared
    // root differences.
    #[test]
    fn cubic_discriminant_from_roots(
        r in proptest::array::uniform3((-40i64..40).prop_filter("nonzero determinant", |&x| x != 0)),
    ) {
        let a1 = r[0] + r[1] + r[2];
        let a2 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
        let a3 = r[0] * r[1] * r[2];
        let p = CharPoly::new(vec![a1, a2, a3]).unwrap();
        let expected: i128 = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| ((r[i] - r[j]) as i128).pow(2))
            .product();
        prop_assert_eq!(discriminant(&p).unwrap(), expected);
        let dm = disc_map_gl_n(a3, 3).unwrap();
        prop_assert_eq!(dm.eval(&[a1 as f64, a2 as f64]), expected as f64);
    }

    #[test]
    fn padic_product_at_least_one(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), k in 1u32..5) {
        for c in enumerate_elliptic(p, k, 50).unwrap() {
            let r = padic_orbital_product(&c);
            prop_assert!(r.numer() >= r.denom());
        }
    }

    #[test]
    fn residue_split_is_exact(
        ell in 1u64..=5,
        f in 1u64..=4,
        p in prop::sample::select(vec![2u64, 3, 5]),
        k in 1u32..=3,
        minus in any::<bool>(),
        squares in any::<bool>(),
        t in 1i64..=5,
    ) {
        let modulus = (4 * ell * f * f) as i64;
        let cfg = SplitConfig { ell, f, p, k, sign: if minus { -1 } else { 1 }, m_max: modulus * t, include_squares: squares };
        let theta = ThetaModel::bump(cfg.m_max as f64).unwrap();
        let r = residue_split_check(&cfg, &theta, gaussian_bracket(ell, f, 0.3)).unwrap();
        prop_assert!(r.discrepancy < 1e-12, "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn direct_bound_contains_class_number_value(d in (-3000i64..-2).prop_filter("fundamental", |&d| is_fundamental(d))) {
        let exact = l_value_cnf(&class_number_bf(d).unwrap()).unwrap();
        let l = l_value_direct(&QuadraticCharacter::new(d).unwrap(), 1.0, 200_000).unwrap();
        prop_assert!((l.value - exact).abs() <= l.error_bound, "{} vs {} bound {}", l.value, exact, l.error_bound);
    }

    #[test]
    fn afe_is_independent_of_x(
        d in (-400i64..400).prop_filter("fundamental", |&d| d != 1 && is_fundamental(d)),
        x in 0.3f64..3.0,
        s in 0.0f64..=1.0,
    ) {
        let a = afe_quadratic(d, s, x).unwrap();
        let b = afe_quadratic(d, s, 1.0).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.error + b.error + 1e-12, "{:?} {:?}", a, b);
    }
}
