//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Run with `cargo test -p hardy --test acceptance`.

use std::time::Instant;

use hardy::commands::default_family;
use hardy::RayonExecutor;
use hardy_core::constants::{
    constant_a, constant_b, constant_c1, constant_curly_c, local_sharp_constant, phi, ConstantBundle,
};
use hardy_core::pointwise::inequality_suite;
use hardy_core::quadrature::{gagliardo_seminorm_p, hardy_weighted_norm};
use hardy_core::verify::{
    depth_quantile_points, verify_asymptotics_s_to_0, verify_asymptotics_s_to_1, verify_eigen_sandwich,
    verify_expedient, verify_half_space_harmonicity, verify_hardy_campaign, verify_superharmonicity, BumpFamily,
    Epsilons, SearchBudget, VerificationReport,
};
use hardy_core::{ConvexBody, Params, QuadratureSpec, TestFunction};

/// `[u]²` of `(1 - x²)²₊` at `s = 1/2`, by adaptive Simpson on the reduced
/// double integral (see the core oracle tests).
const SEMINORM_ORACLE: f64 = 64.0 / 9.0;
/// `∫ u²/d` on `(-2, 2)` for the same bump, by adaptive Simpson.
const HARDY_NORM_ORACLE: f64 = 0.4684146792825688;

const S_GRID: [f64; 4] = [0.3, 0.5, 0.7, 0.9];
const P_GRID: [f64; 3] = [1.5, 2.0, 3.0];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn mc(seed: u64) -> QuadratureSpec {
    // 10⁶ samples per integral
    QuadratureSpec::monte_carlo(1000, 1000, seed)
}

fn all_passed(reports: &[VerificationReport]) -> (bool, String) {
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| {
            format!(
                "{} N={} p={} s={} margin={:e}",
                r.check_name, r.params.dim, r.params.p, r.params.s, r.margin
            )
        })
        .collect();
    let worst = reports
        .iter()
        .filter_map(|r| r.sigma_margin)
        .fold(f64::INFINITY, f64::min);
    let detail = if failed.is_empty() {
        format!("{} reports, smallest sigma margin {worst:.2}", reports.len())
    } else {
        format!("{} of {} failed: {}", failed.len(), reports.len(), failed.join("; "))
    };
    (failed.is_empty(), detail)
}

fn inequality_suite_criterion(exec: &RayonExecutor) -> Outcome {
    let start = Instant::now();
    let mut violations = 0;
    let mut lemmas = 0;
    for p in [1.1, 1.5, 2.0, 3.0, 4.0] {
        match inequality_suite(exec, p, 1_000_000, 2024, 2.0) {
            Ok(summaries) => {
                lemmas += summaries.len();
                violations += summaries.iter().map(|s| s.violations).sum::<u64>();
            }
            Err(e) => return outcome(false, format!("p = {p}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        violations == 0 && secs <= 120.0,
        format!("{lemmas} lemma runs of 10^6 tuples, {violations} violations, {secs:.1} s"),
    )
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn constant_pipeline() -> Outcome {
    let mut worst = (0.0, 0, 0.0);
    // true when every closed-form value lies below its grid minimum by no
    // more than the grid can resolve: Φ''(s*)/2 · (h/2)² / 2
    let mut within_resolution = true;
    for n in [1, 2, 3] {
        for p in [1.5, 2.0, 3.0, 4.0] {
            let (a, b) = (constant_a(n, p, 2.0).unwrap(), constant_b(n, p).unwrap());
            let (closed, s_star) = constant_curly_c(n, p, 2.0).unwrap();
            let points = 100_000;
            let h = 1.0 / (points - 1) as f64;
            let grid = (0..points)
                .map(|i| phi(a, b, p, i as f64 * h) / 2.0)
                .fold(f64::INFINITY, f64::min);
            let resolution = a * (p + 1.0) * p * s_star.powf(p - 1.0) / 2.0 * (h / 2.0).powi(2) / 2.0;
            within_resolution &=
                closed <= grid && grid - closed <= resolution * (1.0 + 1e-6) + 4.0 * f64::EPSILON * grid;
            let r = rel(closed, grid);
            if r > worst.0 {
                worst = (r, n, p);
            }
        }
    }
    let mut c1_ok = true;
    for p in [1.5, 2.0, 3.0, 4.0] {
        let r = rel(constant_c1(1, p).unwrap().0, 1.0 / p);
        c1_ok &= r <= 1e-8;
    }
    let r3 = rel(constant_c1(3, 2.0).unwrap().0, 4.0 * std::f64::consts::PI / 27.0);
    c1_ok &= r3 <= 1e-8;
    let local = local_sharp_constant(2.0).unwrap() == 0.25;
    outcome(
        worst.0 <= 1e-10 && c1_ok && local,
        format!(
            "12 pairs, worst rel gap to the 10^5 grid {:.2e} at (N={}, p={}), closed form below the grid within its spacing error: {within_resolution}; C1 analytic: {c1_ok}; local_sharp(2) = 0.25: {local}",
            worst.0, worst.1, worst.2
        ),
    )
}

fn local_consistency() -> Outcome {
    let mut tested = 0;
    let mut bad = Vec::new();
    for n in 1..=6 {
        for p in [1.1, 1.5, 2.0, 3.0, 4.0] {
            let b = ConstantBundle::compute(n, p, 2.0).unwrap();
            tested += 1;
            let holds = b.curly_c <= b.local_sharp * b.alpha;
            if !holds {
                bad.push(format!("(N={n}, p={p})"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{tested} (N, p) pairs, violations: {}", bad.join(" ")),
    )
}

fn hardy_campaigns(exec: &RayonExecutor) -> Outcome {
    let start = Instant::now();
    let bodies = [
        ConvexBody::ball(vec![0.0], 1.0).unwrap(),
        ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap(),
        ConvexBody::slab(vec![0.0, 1.0], -1.0, 1.0).unwrap(),
    ];
    let mut reports = Vec::new();
    for (i, k) in bodies.iter().enumerate() {
        let family = default_family(k.dim()).unwrap();
        match verify_hardy_campaign(k, &family, &S_GRID, &P_GRID, &mc(40 + i as u64), exec, 2.0) {
            Ok(r) => reports.extend(r),
            Err(e) => return outcome(false, format!("{}: {e}", k.descriptor())),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let (ok, detail) = all_passed(&reports);
    outcome(
        ok && reports.len() == 108 && secs <= 600.0,
        format!("{detail}, {secs:.1} s"),
    )
}

fn oracle_equivalence(exec: &RayonExecutor) -> Outcome {
    let u = TestFunction::radial_bump(vec![0.0], 1.0, 2.0).unwrap();
    let params = Params::new(1, 2.0, 0.5).unwrap();
    let k = ConvexBody::interval(-2.0, 2.0).unwrap();
    let semi = gagliardo_seminorm_p(&u, &params, &mc(5), exec).unwrap();
    let hardy = hardy_weighted_norm(&u, &k, &params, &mc(6), exec).unwrap();
    let check = |v: f64, sigma: f64, oracle: f64| (v - oracle).abs() <= 3.0 * sigma && rel(v, oracle) <= 0.01;
    let ok =
        check(semi.value, semi.std_error, SEMINORM_ORACLE) && check(hardy.value, hardy.std_error, HARDY_NORM_ORACLE);
    outcome(
        ok,
        format!(
            "seminorm {:.6} ± {:.1e} vs {:.6}; Hardy norm {:.6} ± {:.1e} vs {:.6}",
            semi.value, semi.std_error, SEMINORM_ORACLE, hardy.value, hardy.std_error, HARDY_NORM_ORACLE
        ),
    )
}

fn half_space(exec: &RayonExecutor) -> Outcome {
    let mut reports = Vec::new();
    for n in [1, 2] {
        let k = ConvexBody::upper_half_space(n).unwrap();
        let points = depth_quantile_points(&k, 5, 17).unwrap();
        let params = Params::new(n, 2.0, 0.5).unwrap();
        let eps = Epsilons::DepthFractions(vec![1e-1, 1e-2, 1e-3]);
        match verify_half_space_harmonicity(&k, &points, &eps, &params, &QuadratureSpec::tensor_grid(32), exec) {
            Ok(r) => reports.extend(r),
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let (ok, detail) = all_passed(&reports);
    let worst = reports.iter().map(|r| r.value / r.bound).fold(0.0, f64::max);
    outcome(ok, format!("{detail}; largest |T|/tolerance {worst:.3} (tensor grid)"))
}

fn superharmonicity(exec: &RayonExecutor) -> Outcome {
    let k = ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap();
    let points = depth_quantile_points(&k, 5, 17).unwrap();
    let mut reports = Vec::new();
    for s in [0.4, 0.7] {
        for p in [2.0, 3.0] {
            let params = Params::new(2, p, s).unwrap();
            match verify_superharmonicity(&k, &points, &Epsilons::default(), &params, &mc(70), exec) {
                Ok(r) => reports.extend(r),
                Err(e) => return outcome(false, e.to_string()),
            }
        }
    }
    let (ok, detail) = all_passed(&reports);
    outcome(ok && reports.len() == 20, detail)
}

fn expedient(exec: &RayonExecutor) -> Outcome {
    let mut reports = Vec::new();
    for n in [1, 2] {
        let k = ConvexBody::ball(vec![0.0; n], 1.0).unwrap();
        let points = depth_quantile_points(&k, 5, 17).unwrap();
        for s in [0.3, 0.7] {
            for p in [2.0, 3.0] {
                let params = Params::new(n, p, s).unwrap();
                match verify_expedient(&k, &points, &params, &mc(80), exec) {
                    Ok(r) => reports.extend(r),
                    Err(e) => return outcome(false, e.to_string()),
                }
            }
        }
    }
    let (ok, detail) = all_passed(&reports);
    outcome(ok && reports.len() == 40, detail)
}

fn asymptotics(exec: &RayonExecutor) -> Outcome {
    let u = TestFunction::radial_bump(vec![0.0], 1.0, 2.0).unwrap();
    let spec = QuadratureSpec::tensor_grid(32);
    let one = verify_asymptotics_s_to_1(&u, 2.0, &[0.9, 0.95, 0.99], &spec, exec).unwrap();
    let zero = verify_asymptotics_s_to_0(&u, 2.0, &[0.1, 0.05, 0.02], &spec, exec).unwrap();
    let trace = |r: &VerificationReport| {
        r.series
            .iter()
            .map(|q| format!("{:.4}", q.value))
            .collect::<Vec<_>>()
            .join(" ")
    };
    outcome(
        one.passed && zero.passed,
        format!("s -> 1 deviations {}; s -> 0 deviations {}", trace(&one), trace(&zero)),
    )
}

fn scaling_and_determinism(exec: &RayonExecutor) -> Outcome {
    let u = TestFunction::radial_bump(vec![0.1, -0.2], 0.7, 2.0).unwrap();
    let params = Params::new(2, 2.0, 0.5).unwrap();
    let base = gagliardo_seminorm_p(&u, &params, &mc(100), exec).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for (i, lambda) in [0.5, 2.0].into_iter().enumerate() {
        let scaled = gagliardo_seminorm_p(&u.dilated(lambda).unwrap(), &params, &mc(101 + i as u64), exec).unwrap();
        let factor = lambda.powf(2.0 - params.sp());
        let sigma = scaled.std_error.hypot(factor * base.std_error);
        let gap = (scaled.value - factor * base.value).abs();
        ok &= gap <= 3.0 * sigma;
        notes.push(format!("lambda={lambda}: {:.2} sigma", gap / sigma));
    }
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("t{threads}.json"));
        let code = hardy::run([
            "hardy",
            "verify-hardy",
            "--seed",
            "77",
            "--samples",
            "100000",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        ok &= code == 0;
        outputs.push(std::fs::read(out).unwrap_or_default());
    }
    let identical = !outputs[0].is_empty() && outputs[0] == outputs[1];
    notes.push(format!("reports byte-identical across 1 and 4 threads: {identical}"));
    outcome(ok && identical, notes.join("; "))
}

fn eigen_sandwich(exec: &RayonExecutor) -> Outcome {
    let bodies = [
        ConvexBody::ball(vec![0.0], 1.0).unwrap(),
        ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap(),
        ConvexBody::slab(vec![0.0, 1.0], -1.0, 1.0).unwrap(),
    ];
    let budget = SearchBudget {
        max_evals: 60,
        restarts: 1,
    };
    let mut reports = Vec::new();
    for k in &bodies {
        let params = Params::new(k.dim(), 2.0, 0.5).unwrap();
        let family = BumpFamily::inside(k).unwrap();
        match verify_eigen_sandwich(
            k,
            &params,
            &family,
            &budget,
            &QuadratureSpec::monte_carlo(1000, 100, 110),
            exec,
            2.0,
        ) {
            Ok(r) => reports.push(r),
            Err(e) => return outcome(false, format!("{}: {e}", k.descriptor())),
        }
    }
    let detail = reports
        .iter()
        .map(|r| format!("{}: lower {:.4} <= upper {:.4}", r.body, r.bound, r.value))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(reports.iter().all(|r| r.passed), detail)
}

fn main() {
    let exec = RayonExecutor::new(None).expect("thread pool");
    let criteria: [(&str, &dyn Fn() -> Outcome); 11] = [
        ("inequality suite", &|| inequality_suite_criterion(&exec)),
        ("constant pipeline", &constant_pipeline),
        ("constant below local sharp constant", &local_consistency),
        ("Hardy campaigns", &|| hardy_campaigns(&exec)),
        ("oracle equivalence", &|| oracle_equivalence(&exec)),
        ("half-space harmonicity", &|| half_space(&exec)),
        ("superharmonicity", &|| superharmonicity(&exec)),
        ("expedient estimate", &|| expedient(&exec)),
        ("asymptotics", &|| asymptotics(&exec)),
        ("scaling and determinism", &|| scaling_and_determinism(&exec)),
        ("eigenvalue sandwich", &|| eigen_sandwich(&exec)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        if !o.passed {
            failures += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} [{:.1} s]",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
