//! One function per subcommand. Each resolves its settings (flag, then
//! config key, then default), runs the checks and returns a [`Document`].

use std::collections::BTreeMap;
use std::time::Instant;

use hardy_core::constants::{formula, ConstantBundle, DEFAULT_C3};
use hardy_core::pointwise::{inequality_suite, VIOLATION_TOL};
use hardy_core::quadrature::MIN_SAMPLES;
use hardy_core::verify::{
    depth_quantile_points, estimate_sharp_constant, verify_asymptotics_s_to_0, verify_asymptotics_s_to_1,
    verify_eigen_sandwich, verify_expedient, verify_half_space_harmonicity, verify_hardy_campaign,
    verify_superharmonicity, BumpFamily, VerificationReport,
};
use hardy_core::{ConvexBody, Method, Params, QuadratureSpec, Shape, TestFunction};
use serde_json::{json, Value};

use crate::args::{Command, Format, MethodArg, Options};
use crate::config::{self, Common};
use crate::error::{config, CliError};
use crate::exec::RayonExecutor;
use crate::output::{to_value, Document, PlotBlock, Row};

/// Default exponents of `verify-inequalities`.
pub const INEQUALITY_P: [f64; 5] = [1.1, 1.5, 2.0, 3.0, 4.0];
pub const INEQUALITY_SAMPLES: usize = 10_000;

/// Where the output goes and in which form.
pub struct Target {
    pub out: Option<std::path::PathBuf>,
    pub format: Format,
}

/// Runs `command` and returns its document and output target.
pub fn dispatch(command: Command, opts: &Options) -> Result<(Document, Target), CliError> {
    let path = opts.config.as_deref();
    match command {
        Command::Constants => {
            let (c, _) = config::load::<config::ConstantsConfig>(path)?;
            let target = target(opts, c.out.clone(), c.format);
            Ok((constants(opts, &c)?, target))
        }
        Command::VerifyInequalities => {
            let (c, _) = config::load::<config::InequalitiesConfig>(path)?;
            let target = target(opts, c.out.clone(), c.format);
            Ok((inequalities(opts, &c)?, target))
        }
        Command::VerifyHardy => {
            let (c, qs) = config::load::<config::HardyConfig>(path)?;
            let run = Run::new(opts, Common::from(&c), qs, Method::MonteCarlo)?;
            let k = body(opts, c.body.clone())?;
            let family = match c.family.clone() {
                Some(f) => f,
                None => default_family(k.dim())?,
            };
            let reports = run.timed(|| {
                verify_hardy_campaign(
                    &k,
                    &family,
                    &grid(&opts.s, c.s.as_ref(), &[0.25, 0.5, 0.75]),
                    &grid(&opts.p, c.p.as_ref(), &[1.5, 2.0, 3.0]),
                    &run.spec,
                    &run.exec,
                    run.c3,
                )
            })?;
            Ok((Document::from_reports(&reports)?, run.target))
        }
        Command::Superharmonicity => {
            let (c, qs) = config::load::<config::SuperharmonicityConfig>(path)?;
            let run = Run::new(opts, Common::from(&c), qs, Method::MonteCarlo)?;
            let k = body(opts, c.body.clone())?;
            let points = match c.points.clone() {
                Some(p) => p,
                None => depth_quantile_points(&k, c.point_count.unwrap_or(5), run.spec.seed)?,
            };
            let epsilons = c.epsilons.clone().unwrap_or_default();
            let harmonic = c.harmonic.unwrap_or(matches!(k.shape(), Shape::HalfSpace { .. }));
            let mut reports = Vec::new();
            for params in params_grid(k.dim(), opts, c.s.as_ref(), c.p.as_ref())? {
                reports.extend(run.timed(|| {
                    if harmonic {
                        verify_half_space_harmonicity(&k, &points, &epsilons, &params, &run.spec, &run.exec)
                    } else {
                        verify_superharmonicity(&k, &points, &epsilons, &params, &run.spec, &run.exec)
                    }
                })?);
            }
            Ok((Document::from_reports(&reports)?, run.target))
        }
        Command::Expedient => {
            let (c, qs) = config::load::<config::ExpedientConfig>(path)?;
            let run = Run::new(opts, Common::from(&c), qs, Method::MonteCarlo)?;
            let k = body(opts, c.body.clone())?;
            let points = match c.points.clone() {
                Some(p) => p,
                None => depth_quantile_points(&k, c.point_count.unwrap_or(5), run.spec.seed)?,
            };
            let mut reports = Vec::new();
            for params in params_grid(k.dim(), opts, c.s.as_ref(), c.p.as_ref())? {
                reports.extend(run.timed(|| verify_expedient(&k, &points, &params, &run.spec, &run.exec))?);
            }
            Ok((Document::from_reports(&reports)?, run.target))
        }
        Command::Asymptotics => {
            let (c, qs) = config::load::<config::AsymptoticsConfig>(path)?;
            let run = Run::new(opts, Common::from(&c), qs, Method::TensorGrid)?;
            let u = match c.function.clone() {
                Some(u) => u,
                None => TestFunction::radial_bump(vec![0.0; opts.dim.unwrap_or(1)], 1.0, 2.0)?,
            };
            if let Some(n) = opts.dim.filter(|&n| n != u.dim()) {
                return Err(config(format!(
                    "--dim {n} does not match the function dimension {}",
                    u.dim()
                )));
            }
            let to_one = c.s_to_one.clone().unwrap_or_else(|| vec![0.9, 0.95, 0.99]);
            let to_zero = c.s_to_zero.clone().unwrap_or_else(|| vec![0.1, 0.05, 0.02]);
            let mut reports = Vec::new();
            for p in grid(&opts.p, c.p.as_ref(), &[2.0]) {
                reports.push(run.timed(|| verify_asymptotics_s_to_1(&u, p, &to_one, &run.spec, &run.exec))?);
                reports.push(run.timed(|| verify_asymptotics_s_to_0(&u, p, &to_zero, &run.spec, &run.exec))?);
            }
            Ok((Document::from_reports(&reports)?, run.target))
        }
        Command::SharpSearch => {
            let (c, qs) = config::load::<config::SharpConfig>(path)?;
            let run = Run::new(opts, Common::from(&c), qs, Method::MonteCarlo)?;
            let k = body(opts, c.body.clone())?;
            let family = match c.family.clone() {
                Some(f) => f,
                None => BumpFamily::inside(&k)?,
            };
            let budget = c.budget.clone().unwrap_or_default();
            let mut estimates = Vec::new();
            for params in params_grid(k.dim(), opts, c.s.as_ref(), c.p.as_ref())? {
                let start = Instant::now();
                let mut e = estimate_sharp_constant(
                    &k,
                    &params,
                    &family,
                    c.start.as_deref(),
                    &budget,
                    &run.spec,
                    &run.exec,
                    run.c3,
                )?;
                if run.timing {
                    e.report.wall_time = Some(start.elapsed().as_secs_f64());
                }
                estimates.push(e);
            }
            let reports: Vec<VerificationReport> = estimates.iter().map(|e| e.report.clone()).collect();
            let mut doc = Document::from_reports(&reports)?;
            doc.json = to_value(&estimates)?;
            Ok((doc, run.target))
        }
        Command::EigenBounds => {
            let (c, qs) = config::load::<config::EigenConfig>(path)?;
            let run = Run::new(opts, Common::from(&c), qs, Method::MonteCarlo)?;
            let k = body(opts, c.body.clone())?;
            let family = match c.family.clone() {
                Some(f) => f,
                None => BumpFamily::inside(&k)?,
            };
            let budget = c.budget.clone().unwrap_or_default();
            let mut reports = Vec::new();
            for params in params_grid(k.dim(), opts, c.s.as_ref(), c.p.as_ref())? {
                reports.push(
                    run.timed(|| verify_eigen_sandwich(&k, &params, &family, &budget, &run.spec, &run.exec, run.c3))?,
                );
            }
            Ok((Document::from_reports(&reports)?, run.target))
        }
    }
}

fn target(opts: &Options, out: Option<std::path::PathBuf>, format: Option<Format>) -> Target {
    Target {
        out: opts.out.clone().or(out),
        format: opts.format.or(format).unwrap_or_default(),
    }
}

/// Resolved settings of an integrating command.
struct Run {
    spec: QuadratureSpec,
    exec: RayonExecutor,
    c3: f64,
    timing: bool,
    target: Target,
}

impl Run {
    fn new(opts: &Options, common: Common, quadrature_seed: Option<u64>, default: Method) -> Result<Self, CliError> {
        let spec = resolve_spec(opts, &common, quadrature_seed, default)?;
        Ok(Run {
            spec,
            exec: RayonExecutor::new(opts.threads.or(common.threads))?,
            c3: opts.c3.or(common.c3).unwrap_or(DEFAULT_C3),
            timing: opts.timing,
            target: target(opts, common.out, common.format),
        })
    }

    /// Runs `f`, stamping its reports with the elapsed time under `--timing`.
    fn timed<R: Stamp>(&self, f: impl FnOnce() -> hardy_core::Result<R>) -> Result<R, CliError> {
        let start = Instant::now();
        let mut r = f()?;
        if self.timing {
            r.stamp(start.elapsed().as_secs_f64());
        }
        Ok(r)
    }
}

trait Stamp {
    fn stamp(&mut self, secs: f64);
}

impl Stamp for VerificationReport {
    fn stamp(&mut self, secs: f64) {
        self.wall_time = Some(secs);
    }
}

impl Stamp for Vec<VerificationReport> {
    fn stamp(&mut self, secs: f64) {
        self.iter_mut().for_each(|r| r.stamp(secs));
    }
}

/// Flags win over the config; `--samples M` becomes `outer × inner ≈ M` with
/// at least the minimum outer count. Monte Carlo runs need an explicit seed.
fn resolve_spec(
    opts: &Options,
    common: &Common,
    quadrature_seed: Option<u64>,
    default: Method,
) -> Result<QuadratureSpec, CliError> {
    let mut spec = common.quadrature.clone().unwrap_or_else(|| QuadratureSpec {
        method: default,
        ..QuadratureSpec::default()
    });
    match opts.method {
        Some(MethodArg::MonteCarlo) => spec.method = Method::MonteCarlo,
        Some(MethodArg::TensorGrid) => spec.method = Method::TensorGrid,
        None => {}
    }
    if let Some(m) = opts.samples {
        let outer = MIN_SAMPLES.max((m as f64).sqrt().ceil() as usize);
        spec.outer_samples = outer;
        spec.inner_samples = (m / outer).max(1);
    }
    if let Some(g) = opts.grid {
        spec.grid_points_per_axis = g;
    }
    let seed = opts.seed.or(common.seed).or(quadrature_seed);
    if spec.method == Method::MonteCarlo && seed.is_none() {
        return Err(config(
            "a seed is mandatory for Monte Carlo runs: pass --seed or set `seed` in the config",
        ));
    }
    spec.seed = seed.unwrap_or(0);
    spec.validate()?;
    Ok(spec)
}

fn grid(flag: &[f64], cfg: Option<&Vec<f64>>, default: &[f64]) -> Vec<f64> {
    if !flag.is_empty() {
        flag.to_vec()
    } else {
        cfg.cloned().unwrap_or_else(|| default.to_vec())
    }
}

fn params_grid(
    dim: usize,
    opts: &Options,
    s: Option<&Vec<f64>>,
    p: Option<&Vec<f64>>,
) -> Result<Vec<Params>, CliError> {
    let mut out = Vec::new();
    for s in grid(&opts.s, s, &[0.5]) {
        for &p in &grid(&opts.p, p, &[2.0]) {
            out.push(Params::new(dim, p, s)?);
        }
    }
    Ok(out)
}

/// The config body, or the unit ball of `--dim` (default 2).
fn body(opts: &Options, cfg: Option<ConvexBody>) -> Result<ConvexBody, CliError> {
    match cfg {
        Some(k) => {
            if let Some(n) = opts.dim.filter(|&n| n != k.dim()) {
                return Err(config(format!(
                    "--dim {n} does not match the body dimension {}",
                    k.dim()
                )));
            }
            Ok(k)
        }
        None => Ok(ConvexBody::ball(vec![0.0; opts.dim.unwrap_or(2)], 1.0)?),
    }
}

/// Three bumps inside the unit ball: centered, shifted, and a tensor bump.
pub fn default_family(n: usize) -> Result<Vec<TestFunction>, CliError> {
    let shifted: Vec<f64> = (0..n).map(|i| [0.3, -0.2].get(i).copied().unwrap_or(0.0)).collect();
    let tensor_center: Vec<f64> = (0..n).map(|i| [-0.2, 0.1].get(i).copied().unwrap_or(0.0)).collect();
    let widths: Vec<f64> = (0..n)
        .map(|i| if i == 0 { 0.4 } else { 0.6 / ((n - 1) as f64).sqrt() })
        .collect();
    Ok(vec![
        TestFunction::radial_bump(vec![0.0; n], 0.8, 2.0)?,
        TestFunction::radial_bump(shifted, 0.5, 1.5)?,
        TestFunction::tensor_bump(tensor_center, widths, 2.0)?,
    ])
}

fn constants(opts: &Options, c: &config::ConstantsConfig) -> Result<Document, CliError> {
    let dims = match opts.dim {
        Some(n) => vec![n],
        None => c.dim.clone().unwrap_or_else(|| vec![2]),
    };
    let ps = grid(&opts.p, c.p.as_ref(), &[2.0]);
    let c3 = opts.c3.or(c.c3).unwrap_or(DEFAULT_C3);
    let mut json = Vec::new();
    let mut rows = Vec::new();
    let mut plot = Vec::new();
    for &n in &dims {
        let mut points = Vec::new();
        for &p in &ps {
            let b = ConstantBundle::compute(n, p, c3)?;
            let local_alpha = b.local_sharp * b.alpha;
            let below = b.curly_c <= local_alpha;
            json.push(json!({
                "N": n,
                "p": p,
                "C1": b.c1,
                "sigma_star": b.sigma_star,
                "C2": b.c2,
                "C3": b.c3,
                "A": b.a_const,
                "B": b.b_const,
                "curly_C": b.curly_c,
                "s_star": b.s_star,
                "alpha": b.alpha,
                "beta": b.beta,
                "local_sharp": b.local_sharp,
                "omega": b.omega,
                "c3_choice": b.c3_choice,
                "formulas": {
                    "C1": formula::C1,
                    "C2": b.c2_formula(),
                    "A": formula::A,
                    "B": formula::B,
                    "curly_C": formula::CURLY_C,
                    "alpha": formula::ALPHA,
                    "beta": formula::BETA,
                    "local_sharp": formula::LOCAL,
                },
                "checks": { "curly_C_below_local_sharp_alpha": below },
            }));
            rows.push(Row {
                check: String::from("curly_C_below_local_sharp_alpha"),
                dim: Some(n),
                p: Some(p),
                value: b.curly_c,
                bound: local_alpha,
                margin: local_alpha - b.curly_c,
                passed: below,
                ..Row::default()
            });
            points.push((p, b.curly_c));
        }
        plot.push(PlotBlock {
            title: format!("curly_C N={n}"),
            columns: ("p", "curly_C"),
            points,
        });
    }
    Ok(Document {
        json: Value::Array(json),
        rows,
        plot,
    })
}

fn inequalities(opts: &Options, c: &config::InequalitiesConfig) -> Result<Document, CliError> {
    let seed = opts
        .seed
        .or(c.seed)
        .ok_or_else(|| config("a seed is mandatory for verify-inequalities: pass --seed or set `seed`"))?;
    let samples = opts.samples.or(c.samples).unwrap_or(INEQUALITY_SAMPLES);
    if samples == 0 {
        return Err(config("samples must be positive"));
    }
    let c3 = opts.c3.or(c.c3).unwrap_or(DEFAULT_C3);
    let exec = RayonExecutor::new(opts.threads.or(c.threads))?;
    let mut json = Vec::new();
    let mut rows = Vec::new();
    let mut plot = Vec::new();
    for p in grid(&opts.p, c.p.as_ref(), &INEQUALITY_P) {
        let start = Instant::now();
        let (c2, c3v) = hardy_core::constants::constants_c2_c3(p, c3)?;
        let lemmas = inequality_suite(&exec, p, samples, seed, c3)?;
        let elapsed = start.elapsed().as_secs_f64();
        let mut entries = Vec::new();
        for l in &lemmas {
            let mut v = to_value(l)?;
            v["passed"] = json!(l.passed());
            entries.push(v);
            rows.push(Row {
                check: l.lemma.name().to_string(),
                p: Some(p),
                value: l.worst_relative,
                bound: VIOLATION_TOL,
                margin: l.worst_relative - VIOLATION_TOL,
                passed: l.passed(),
                seed: Some(seed),
                ..Row::default()
            });
        }
        let mut entry: BTreeMap<&str, Value> = BTreeMap::new();
        entry.insert("p", json!(p));
        entry.insert("samples", json!(samples));
        entry.insert("seed", json!(seed));
        entry.insert("c3_choice", json!(c3));
        entry.insert("C2", json!(c2));
        entry.insert("C3", json!(c3v));
        entry.insert("lemmas", Value::Array(entries));
        if opts.timing {
            entry.insert("wall_time", json!(elapsed));
        }
        json.push(to_value(&entry)?);
        plot.push(PlotBlock {
            title: format!("worst relative residual p={p}"),
            columns: ("lemma", "worst_relative"),
            points: lemmas
                .iter()
                .enumerate()
                .map(|(i, l)| (i as f64, l.worst_relative))
                .collect(),
        });
    }
    Ok(Document {
        json: Value::Array(json),
        rows,
        plot,
    })
}
