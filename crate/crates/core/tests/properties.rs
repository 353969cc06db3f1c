use hardy_core::constants::{constant_curly_c, constants_c2_c3, curly_c_from, curly_c_grid, phi, ConstantBundle};
use hardy_core::pointwise::{
    check_fraction_vs_log, check_fundamental, check_gufetti, check_log_inequality, check_lucio, check_picone_discrete,
    check_rutto, VIOLATION_TOL,
};
use hardy_core::quadrature::{gagliardo_seminorm_p, hardy_weighted_norm, lp_norm_p, truncated_nonlocal_operator};
use hardy_core::{ConvexBody, Params, QuadratureSpec, Sequential, TestFunction};
use proptest::prelude::*;

fn log_uniform() -> impl Strategy<Value = f64> {
    (-6.0f64..6.0).prop_map(|e| 10f64.powf(e))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #[test]
    fn pointwise_inequalities_hold(a in log_uniform(), b in log_uniform(), c in 0.0f64..1e3, d in 0.0f64..1e3, p in 1.05f64..5.0, s in 0.001f64..0.999) {
        let (c2, c3) = constants_c2_c3(p, 2.0).unwrap();
        for r in [
            check_log_inequality(a, b, p).unwrap(),
            check_fraction_vs_log(a, b).unwrap(),
            check_lucio(a, b, p).unwrap(),
            check_gufetti(a, b, s).unwrap(),
            check_picone_discrete(a, b, c, d, p).unwrap(),
            check_fundamental(a, b, c, d, p, c2, c3).unwrap(),
        ] {
            prop_assert!(r.relative() >= VIOLATION_TOL, "{r:?}");
        }
    }

    #[test]
    fn lucio_follows_from_its_parents(a in log_uniform(), b in log_uniform(), p in 1.05f64..5.0) {
        let parents = check_log_inequality(a, b, p).unwrap().relative() >= VIOLATION_TOL
            && check_fraction_vs_log(a, b).unwrap().relative() >= VIOLATION_TOL;
        if parents {
            prop_assert!(check_lucio(a, b, p).unwrap().relative() >= VIOLATION_TOL);
        }
    }

    #[test]
    fn rutto_holds(s in 0.001f64..0.999, a in 0.0f64..=1.0, p in 1.01f64..=2.0) {
        let r = check_rutto(s, a, p).unwrap();
        prop_assert!(r.relative() >= VIOLATION_TOL, "{r:?}");
    }

    #[test]
    fn curly_c_is_the_minimum_of_phi(a in 1e-6f64..1.0, b in 1e-6f64..1.0, p in 1.05f64..6.0, t in 0.0f64..=1.0) {
        let (c, s_star) = curly_c_from(a, b, p);
        prop_assert!(c <= phi(a, b, p, t) / 2.0 * (1.0 + 1e-12));
        prop_assert!(rel(c, phi(a, b, p, s_star) / 2.0) < 1e-12);
        let (g, _) = curly_c_grid(a, b, p, 2001);
        prop_assert!(rel(c, g) < 1e-10, "{c} vs {g}");
    }

    #[test]
    fn curly_c_below_local_constant(n in 1usize..=6, p in 1.05f64..6.0) {
        let k = ConstantBundle::compute(n, p, 2.0).unwrap();
        prop_assert!(k.curly_c <= k.local_sharp * k.alpha);
        prop_assert!(k.curly_c > 0.0);
        prop_assert_eq!(k.curly_c, constant_curly_c(n, p, 2.0).unwrap().0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn seminorm_scales_like_lambda_to_n_minus_sp(lambda in 0.3f64..3.0, s in 0.15f64..0.85, p in 1.3f64..3.5) {
        let u = TestFunction::radial_bump(vec![0.2], 0.7, 2.0).unwrap();
        let params = Params::new(1, p, s).unwrap();
        let spec = QuadratureSpec::tensor_grid(32);
        let base = gagliardo_seminorm_p(&u, &params, &spec, &Sequential).unwrap().value;
        let scaled = gagliardo_seminorm_p(&u.dilated(lambda).unwrap(), &params, &spec, &Sequential).unwrap().value;
        prop_assert!(rel(scaled, lambda.powf(1.0 - s * p) * base) < 1e-6, "{scaled} vs {base}");
    }

    #[test]
    fn seminorm_is_translation_invariant_and_p_homogeneous(v in -5.0f64..5.0, k in 0.1f64..10.0, s in 0.15f64..0.85, p in 1.3f64..3.5) {
        let u = TestFunction::radial_bump(vec![0.0], 1.0, 2.0).unwrap();
        let params = Params::new(1, p, s).unwrap();
        let spec = QuadratureSpec::tensor_grid(32);
        let base = gagliardo_seminorm_p(&u, &params, &spec, &Sequential).unwrap().value;
        let moved = gagliardo_seminorm_p(&u.translated(&[v]).unwrap(), &params, &spec, &Sequential).unwrap().value;
        let times = gagliardo_seminorm_p(&u.scaled(k), &params, &spec, &Sequential).unwrap().value;
        prop_assert!(rel(moved, base) < 1e-8);
        prop_assert!(rel(times, k.powf(p) * base) < 1e-10);
    }

    #[test]
    fn hardy_norm_moves_with_the_body(v0 in -3.0f64..3.0, v1 in -3.0f64..3.0, s in 0.15f64..0.85) {
        let u = TestFunction::radial_bump(vec![0.1, -0.2], 0.6, 2.0).unwrap();
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
        let params = Params::new(2, 2.0, s).unwrap();
        let spec = QuadratureSpec::tensor_grid(24);
        let v = [v0, v1];
        let base = hardy_weighted_norm(&u, &k, &params, &spec, &Sequential).unwrap().value;
        let moved = hardy_weighted_norm(&u.translated(&v).unwrap(), &k.translated(&v).unwrap(), &params, &spec, &Sequential).unwrap().value;
        prop_assert!(rel(moved, base) < 1e-8);
    }

    // only for small ε: coarse truncations near the boundary are genuinely negative
    // (about -1.1155 at x = 0.928, ε = 0.3·d, s = 0.84, p = 1.5)
    #[test]
    fn interval_operator_is_nonnegative(x in -0.8f64..0.8, eps_frac in 1e-4f64..1e-3, s in 0.15f64..0.85, p in 1.5f64..3.5) {
        let k = ConvexBody::interval(-1.0, 1.0).unwrap();
        let params = Params::new(1, p, s).unwrap();
        let eps = eps_frac * (1.0 - x.abs());
        let t = truncated_nonlocal_operator(&k, &[x], eps, &params, &QuadratureSpec::tensor_grid(32), &Sequential).unwrap();
        prop_assert!(t.value >= -1e-9, "{t:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn monte_carlo_is_seed_deterministic(seed in any::<u64>()) {
        let u = TestFunction::radial_bump(vec![0.0, 0.0], 1.0, 2.0).unwrap();
        let params = Params::new(2, 2.0, 0.5).unwrap();
        let spec = QuadratureSpec::monte_carlo(1000, 8, seed);
        let a = gagliardo_seminorm_p(&u, &params, &spec, &Sequential).unwrap();
        let b = gagliardo_seminorm_p(&u, &params, &spec, &Sequential).unwrap();
        prop_assert_eq!(a, b);
        let c = gagliardo_seminorm_p(&u, &params, &spec.clone().with_seed(seed ^ 1), &Sequential).unwrap();
        prop_assert!(a.value != c.value);
        prop_assert!(c.std_error > 0.0);
    }

    #[test]
    fn lp_error_shrinks_like_inverse_root(seed in any::<u64>()) {
        let u = TestFunction::radial_bump(vec![0.0, 0.0], 1.0, 1.0).unwrap();
        let small = lp_norm_p(&u, 2.0, &QuadratureSpec::monte_carlo(1000, 4, seed), &Sequential).unwrap();
        let large = lp_norm_p(&u, 2.0, &QuadratureSpec::monte_carlo(1000, 64, seed), &Sequential).unwrap();
        let ratio = small.std_error / large.std_error;
        prop_assert!((2.5..6.5).contains(&ratio), "{ratio}");
    }
}
