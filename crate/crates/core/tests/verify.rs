use hardy_core::constants::{constant_curly_c, ConstantBundle};
use hardy_core::verify::*;
use hardy_core::{ConvexBody, Params, QuadratureSpec, Sequential, TestFunction};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn interval_family() -> BumpFamily {
    BumpFamily {
        center_lower: vec![0.46],
        center_upper: vec![0.54],
        radius: (0.05, 0.45),
        q: (1.0, 4.0),
    }
}

fn disc_bumps() -> Vec<TestFunction> {
    vec![
        TestFunction::radial_bump(vec![0.0, 0.0], 0.8, 2.0).unwrap(),
        TestFunction::radial_bump(vec![0.3, -0.2], 0.5, 1.5).unwrap(),
        TestFunction::tensor_bump(vec![-0.2, 0.1], vec![0.4, 0.6], 2.0).unwrap(),
    ]
}

#[test]
fn interval_quotient_is_the_ratio_of_the_oracles() {
    let k = ConvexBody::interval(-2.0, 2.0).unwrap();
    let u = TestFunction::radial_bump(vec![0.0], 1.0, 2.0).unwrap();
    let params = Params::new(1, 2.0, 0.5).unwrap();
    let (q, report) = hardy_quotient(&u, &k, &params, &QuadratureSpec::tensor_grid(32), &Sequential, 2.0).unwrap();
    assert!(rel(q, (64.0 / 9.0) / 0.468_414_679_282_568_8) < 1e-6, "{q}");
    assert!(report.passed);
    assert_eq!(report.bound, constant_curly_c(1, 2.0, 2.0).unwrap().0);
    assert_eq!(report.c3_choice, 2.0);
    assert!(report.constants.contains_key("curly_C"));
}

#[test]
fn disc_campaign_passes_and_repeats() {
    let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
    let spec = QuadratureSpec::monte_carlo(1000, 16, 42);
    let s = [0.3, 0.5, 0.7, 0.9];
    let p = [1.5, 2.0, 3.0];
    let a = verify_hardy_campaign(&k, &disc_bumps(), &s, &p, &spec, &Sequential, 2.0).unwrap();
    assert_eq!(a.len(), 36);
    assert!(a.iter().all(|r| r.passed), "{:?}", a.iter().find(|r| !r.passed));
    let b = verify_hardy_campaign(&k, &disc_bumps(), &s, &p, &spec, &Sequential, 2.0).unwrap();
    assert_eq!(a, b);
    // cells draw from distinct streams
    assert_ne!(a[0].seed, a[1].seed);
}

#[test]
fn slab_campaign_passes() {
    let k = ConvexBody::slab(vec![0.0, 1.0], -1.0, 1.0).unwrap();
    let spec = QuadratureSpec::monte_carlo(1000, 16, 3);
    let r = verify_hardy_campaign(&k, &disc_bumps(), &[0.3, 0.7], &[2.0], &spec, &Sequential, 2.0).unwrap();
    assert!(r.iter().all(|r| r.passed));
}

#[test]
fn constants_follow_the_c3_choice() {
    let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
    let params = Params::new(2, 1.5, 0.5).unwrap();
    let u = &disc_bumps()[0];
    let spec = QuadratureSpec::monte_carlo(1000, 4, 1);
    let (_, r2) = hardy_quotient(u, &k, &params, &spec, &Sequential, 2.0).unwrap();
    let (_, r3) = hardy_quotient(u, &k, &params, &spec, &Sequential, 1.01).unwrap();
    assert_eq!(r3.c3_choice, 1.01);
    assert_eq!(r3.bound, ConstantBundle::compute(2, 1.5, 1.01).unwrap().curly_c);
    assert_ne!(r2.bound, r3.bound);
}

#[test]
fn sharp_search_matches_the_grid_oracle() {
    let k = ConvexBody::interval(0.0, 1.0).unwrap();
    let params = Params::new(1, 2.0, 0.5).unwrap();
    let spec = QuadratureSpec::tensor_grid(32);
    let family = interval_family();
    let mut grid = f64::INFINITY;
    for i in 0..5 {
        for j in 0..9 {
            for l in 0..7 {
                let x = [0.46 + 0.02 * i as f64, 0.05 + 0.05 * j as f64, 1.0 + 0.5 * l as f64];
                let (q, _) = hardy_quotient(&family.member(&x).unwrap(), &k, &params, &spec, &Sequential, 2.0).unwrap();
                grid = grid.min(0.25 * q);
            }
        }
    }
    // golden value: the grid minimum sits at the corner (0.46, 0.45, 1)
    assert!(rel(grid, 1.310_533_933_438_99) < 1e-9, "{grid}");
    let est = estimate_sharp_constant(
        &k,
        &params,
        &family,
        None,
        &SearchBudget::default(),
        &spec,
        &Sequential,
        2.0,
    )
    .unwrap();
    assert!(est.best <= est.initial);
    assert!(est.best <= grid * (1.0 + 1e-9));
    assert!(rel(est.best, grid) < 1e-6);
    assert!(est.report.passed);
    assert!(est.best >= constant_curly_c(1, 2.0, 2.0).unwrap().0);
}

#[test]
fn superharmonicity_in_the_disc() {
    let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
    let params = Params::new(2, 2.0, 0.4).unwrap();
    let points = depth_quantile_points(&k, 5, 9).unwrap();
    let spec = QuadratureSpec::monte_carlo(1000, 8, 9);
    let r = verify_superharmonicity(&k, &points, &Epsilons::default(), &params, &spec, &Sequential).unwrap();
    assert_eq!(r.len(), 5);
    assert!(r.iter().all(|r| r.passed && r.series.len() == 3));
}

#[test]
fn interval_operator_is_nonnegative_but_not_zero_at_the_center() {
    let k = ConvexBody::interval(-1.0, 1.0).unwrap();
    let params = Params::new(1, 2.0, 0.5).unwrap();
    let r = verify_superharmonicity(
        &k,
        &[vec![0.0]],
        &Epsilons::default(),
        &params,
        &QuadratureSpec::tensor_grid(32),
        &Sequential,
    )
    .unwrap();
    assert!(r[0].passed);
    // d^s peaks at the midpoint, so the trace grows as ε shrinks
    assert!(r[0].series.windows(2).all(|w| w[1].value > w[0].value));
}

#[test]
fn half_space_harmonicity() {
    for n in [1, 2] {
        let k = ConvexBody::upper_half_space(n).unwrap();
        let params = Params::new(n, 2.0, 0.5).unwrap();
        let points = depth_quantile_points(&k, 5, 1).unwrap();
        let r = verify_half_space_harmonicity(
            &k,
            &points,
            &Epsilons::default(),
            &params,
            &QuadratureSpec::tensor_grid(32),
            &Sequential,
        )
        .unwrap();
        assert!(r.iter().all(|r| r.passed), "{:?}", r.iter().find(|r| !r.passed));
    }
    let k = ConvexBody::ball(vec![0.0], 1.0).unwrap();
    let params = Params::new(1, 2.0, 0.5).unwrap();
    assert!(verify_half_space_harmonicity(
        &k,
        &[vec![0.0]],
        &Epsilons::default(),
        &params,
        &QuadratureSpec::tensor_grid(32),
        &Sequential
    )
    .is_err());
}

#[test]
fn expedient_bound_holds_in_the_interval_and_disc() {
    let params = Params::new(1, 2.0, 0.5).unwrap();
    let k = ConvexBody::interval(0.0, 2.0).unwrap();
    let r = verify_expedient(
        &k,
        &[vec![0.5], vec![0.01], vec![1.0]],
        &params,
        &QuadratureSpec::tensor_grid(32),
        &Sequential,
    )
    .unwrap();
    for r in &r {
        assert!(r.passed);
        assert!(r.value / r.bound >= 1.0);
    }
    let disc = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
    let params = Params::new(2, 3.0, 0.7).unwrap();
    let points = depth_quantile_points(&disc, 5, 2).unwrap();
    let r = verify_expedient(
        &disc,
        &points,
        &params,
        &QuadratureSpec::monte_carlo(1000, 16, 2),
        &Sequential,
    )
    .unwrap();
    assert!(r.iter().all(|r| r.passed));
}

#[test]
fn asymptotic_limits() {
    let u = TestFunction::radial_bump(vec![0.0], 1.0, 2.0).unwrap();
    let spec = QuadratureSpec::tensor_grid(32);
    let one = verify_asymptotics_s_to_1(&u, 2.0, &[0.9, 0.95, 0.99], &spec, &Sequential).unwrap();
    assert!(one.passed, "{one:?}");
    assert_eq!(one.constants["alpha"].value, 1.0);
    assert!(rel(one.estimates["limit_integral"].value, 256.0 / 105.0) < 1e-9);
    let zero = verify_asymptotics_s_to_0(&u, 2.0, &[0.1, 0.05, 0.02], &spec, &Sequential).unwrap();
    assert!(zero.passed, "{zero:?}");

    let v = TestFunction::radial_bump(vec![0.0], 1.0, 1.0).unwrap();
    let r = verify_asymptotics_s_to_0(&v, 2.0, &[0.1, 0.05, 0.02], &spec, &Sequential).unwrap();
    let target = r.constants["beta"].value * r.estimates["limit_integral"].value;
    assert!(rel(target, 2.0 * 16.0 / 15.0) < 1e-9);
    // both sides are p-homogeneous, so the deviations do not move
    let scaled = verify_asymptotics_s_to_0(&v.scaled(3.0), 2.0, &[0.1, 0.05, 0.02], &spec, &Sequential).unwrap();
    for (a, b) in r.series.iter().zip(&scaled.series) {
        assert!((a.value - b.value).abs() < 1e-9);
    }
}

#[test]
fn eigenvalue_sandwich_and_golden_value() {
    let k = ConvexBody::interval(0.0, 1.0).unwrap();
    let params = Params::new(1, 2.0, 0.5).unwrap();
    let spec = QuadratureSpec::tensor_grid(32);
    let upper = eigenvalue_upper_search(
        &k,
        &params,
        &interval_family(),
        &SearchBudget::default(),
        &spec,
        &Sequential,
    )
    .unwrap();
    // golden value of the grid search: every q = 1, r = 0.45 member gives 50/3
    assert!(rel(upper.value, 50.0 / 3.0) < 1e-9, "{upper:?}");
    let r = verify_eigen_sandwich(
        &k,
        &params,
        &interval_family(),
        &SearchBudget::default(),
        &spec,
        &Sequential,
        2.0,
    )
    .unwrap();
    assert!(r.passed);

    let members: Vec<TestFunction> = (1..=4)
        .map(|i| TestFunction::radial_bump(vec![0.5], 0.1 * i as f64, 2.0).unwrap())
        .collect();
    let few = eigenvalue_upper_bound(&k, &params, &members[..2], &spec, &Sequential).unwrap();
    let all = eigenvalue_upper_bound(&k, &params, &members, &spec, &Sequential).unwrap();
    assert!(all.value <= few.value);
    assert!(all.value >= eigenvalue_lower_bound(&k, &params, 2.0).unwrap());
}
