//! Pointwise kernel integrals of the distance function: the truncated
//! operator `∫_{|y-x|>ε} J_p(d^s(x) - d^s(y)) |x-y|^{-N-sp} dy` and the
//! restricted integral `∫_{d(y) ≤ d(x)} (d(x) - d(y))ᵖ |x-y|^{-N-sp} dy`.

use alloc::vec;
use alloc::vec::Vec;

use super::exec::{batch_len, batch_rng, batches, derive_seed, tag_of, Executor, Stats};
use super::{tags, IntegralEstimate, Method, QuadratureSpec};
use crate::error::{invalid, Error, Result};
use crate::geometry::{ConvexBody, Params};
use crate::math::{along, integrate, open01, random_direction, sphere_area};
use crate::pointwise::j_p;
#[allow(unused_imports)]
use num_traits::Float;

fn check_point(body: &ConvexBody, x: &[f64], params: &Params) -> Result<f64> {
    if body.dim() != params.dim {
        return Err(Error::DimensionMismatch {
            expected: params.dim,
            got: body.dim(),
        });
    }
    let d = body.distance_to_boundary(x)?;
    if d <= 0.0 {
        return Err(Error::OutsideBody);
    }
    Ok(d)
}

/// Draws `ρ ∈ [lo, hi]` with density `∝ ρ^{c-1}`; returns `(ρ, ∫_lo^hi ρ^{c-1})`.
fn power_radius(lo: f64, hi: f64, c: f64, u: f64) -> (f64, f64) {
    if c.abs() < 1e-9 {
        let l = (hi / lo).ln();
        (lo * (u * l).exp(), l)
    } else {
        let (a, b) = (lo.powf(c), hi.powf(c));
        ((a + u * (b - a)).powf(1.0 / c), (b - a) / c)
    }
}

/// Draws `ρ ∈ [lo, hi]` with density `∝ ρ^{-1-sp}`; returns `(ρ, ∫_lo^hi ρ^{-1-sp})`.
fn kernel_radius(lo: f64, hi: f64, sp: f64, u: f64) -> (f64, f64) {
    let a = lo.powf(-sp);
    let b = if hi.is_finite() { hi.powf(-sp) } else { 0.0 };
    ((a - u * (a - b)).powf(-1.0 / sp), (a - b) / sp)
}

struct Operator<'a> {
    body: &'a ConvexBody,
    x: &'a [f64],
    p: f64,
    s: f64,
    sp: f64,
    ds: f64,
    jd: f64,
    far: f64,
    tol: f64,
}

impl Operator<'_> {
    fn f(&self, rho: f64, dir: &[f64], y: &mut [f64]) -> f64 {
        along(self.x, dir, rho, y);
        j_p(self.ds - self.body.dist_unchecked(y).powf(self.s), self.p)
    }

    /// `∫_lo^hi f(ρ) ρ^{-1-sp} dρ` with `t = log ρ`.
    fn piece(&self, lo: f64, hi: f64, dirs: &[&[f64]], y: &mut [f64], abs_tol: f64) -> f64 {
        if !(hi > lo) {
            return 0.0;
        }
        integrate(
            |t| {
                let rho = t.exp();
                let k = rho.powf(-self.sp);
                dirs.iter().map(|d| self.f(rho, d, y)).sum::<f64>() * k
            },
            lo.ln(),
            hi.ln(),
            self.tol,
            abs_tol,
            2000,
        )
        .value
    }

    /// `∫_R^∞ f(ρ) ρ^{-1-sp} dρ` with `w = (R/ρ)^s`, which keeps the integrand
    /// bounded when `d` grows linearly along the ray.
    fn remainder(&self, r: f64, dir: &[f64], y: &mut [f64]) -> f64 {
        let (s, p) = (self.s, self.p);
        let q = integrate(
            |w| {
                if w <= 0.0 {
                    return 0.0;
                }
                self.f(r * w.powf(-1.0 / s), dir, y) * w.powf(p - 1.0)
            },
            0.0,
            1.0,
            self.tol,
            self.tol * self.jd.abs(),
            400,
        );
        r.powf(-self.sp) / s * q.value
    }

    /// Everything beyond `d(x)` along one ray: the kernel-sampled or quadrature
    /// part on `[d(x), min(exit, R)]` and the tail past it.
    fn outward_tail(&self, dir: &[f64], y: &mut [f64]) -> (f64, f64) {
        let exit = self.body.ray_exit(self.x, dir);
        let d = self.ds.powf(1.0 / self.s);
        if exit <= self.far {
            (exit.min(self.far).max(d), self.jd * exit.powf(-self.sp) / self.sp)
        } else {
            (self.far.max(d), self.remainder(self.far.max(d), dir, y))
        }
    }
}

/// `∫_{|y-x|>ε} J_p(d^s(x) - d^s(y)) / |x-y|^{N+sp} dy` with `d = d_K`.
///
/// Directions come in antithetic pairs `±ω`. On `[ε, d(x)]` both points of a
/// pair stay in `K` and their contributions are summed before weighting, which
/// keeps the principal-value cancellation inside each sample; radii there are
/// drawn with density `∝ ρ^{c-1}`, `c = min(p, 2p-2) - sp`. Beyond `d(x)`
/// each side is handled separately; past the exit point `d = 0` and the tail is
/// exact. For rays that leave `B(x, R)` before leaving `K` the remainder is a
/// deterministic one-dimensional quadrature. The tail may be negative.
pub fn truncated_nonlocal_operator<E: Executor>(
    body: &ConvexBody,
    x: &[f64],
    eps: f64,
    params: &Params,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<IntegralEstimate> {
    spec.validate()?;
    let d = check_point(body, x, params)?;
    if !(eps > 0.0 && eps < d) {
        return Err(invalid("eps", "need 0 < ε < d(x)"));
    }
    let n = params.dim;
    let (s, p, sp) = (params.s, params.p, params.sp());
    let far = match spec.far_radius {
        Some(r) => r.max(d),
        None if body.is_bounded() => f64::INFINITY,
        None => 10.0 * d,
    };
    let ds = d.powf(s);
    let op = Operator {
        body,
        x,
        p,
        s,
        sp,
        ds,
        jd: j_p(ds, p),
        far,
        tol: spec.target_rel_error,
    };
    let half_sphere = sphere_area(n) / 2.0;
    // where d is smooth the antithetic pair vanishes like ρ^min(p, 2p-2); the
    // matching radial density keeps the weight bounded near ε
    let c = p.min(2.0 * p - 2.0) - sp;
    match spec.method {
        Method::MonteCarlo => {
            let total = spec.total_samples();
            let seed = derive_seed(spec.seed, tag_of(&[tags::OPERATOR, eps.to_bits()]));
            let parts = exec.map(batches(total), |b| {
                let mut rng = batch_rng(seed, b);
                let mut dir = vec![0.0; n];
                let mut back = vec![0.0; n];
                let mut y = vec![0.0; n];
                let mut all = Stats::default();
                let mut tails = Stats::default();
                for _ in 0..batch_len(total, b) {
                    random_direction(&mut rng, &mut dir);
                    back.iter_mut().zip(&dir).for_each(|(b, v)| *b = -v);
                    let (rho, z) = power_radius(eps, d, c, open01(&mut rng));
                    let pair = op.f(rho, &dir, &mut y) + op.f(rho, &back, &mut y);
                    let mut value = z * pair * rho.powf(-sp - c);
                    let mut tail = 0.0;
                    for side in [&dir, &back] {
                        let (upper, t) = op.outward_tail(side, &mut y);
                        if upper > d {
                            let (rho, z) = kernel_radius(d, upper, sp, open01(&mut rng));
                            value += z * op.f(rho, side, &mut y);
                        }
                        tail += t;
                    }
                    all.push(half_sphere * (value + tail));
                    tails.push(half_sphere * tail);
                }
                (all, tails)
            });
            let all = Stats::combine(parts.iter().map(|t| &t.0));
            let tails = Stats::combine(parts.iter().map(|t| &t.1));
            Ok(IntegralEstimate {
                value: all.mean,
                std_error: all.std_error(),
                samples_used: all.count,
                tail_contribution: tails.mean,
            })
        }
        Method::TensorGrid => {
            let scale = op.jd.abs() * d.powf(-sp) / sp;
            let abs_tol = spec.target_rel_error * scale;
            let mut y = vec![0.0; n];
            let mut evals = 0u64;
            let mut ray = |dir: &[f64]| -> (f64, f64) {
                evals += 1;
                let back: Vec<f64> = dir.iter().map(|v| -v).collect();
                let mut value = op.piece(eps, d, &[dir, &back], &mut y, abs_tol);
                let mut tail = 0.0;
                for side in [dir, &back[..]] {
                    let (upper, t) = op.outward_tail(side, &mut y);
                    value += op.piece(d, upper, &[side], &mut y, abs_tol);
                    tail += t;
                }
                (value + tail, tail)
            };
            match n {
                1 => {
                    let (value, tail) = ray(&[1.0]);
                    Ok(IntegralEstimate::exact(value, evals, tail))
                }
                2 => {
                    let value = integrate(
                        |t| ray(&[t.cos(), t.sin()]).0,
                        0.0,
                        core::f64::consts::PI,
                        spec.target_rel_error,
                        abs_tol,
                        400,
                    )
                    .value;
                    let mut y = vec![0.0; n];
                    let tail = integrate(
                        |t| {
                            let (c, sn) = (t.cos(), t.sin());
                            op.outward_tail(&[c, sn], &mut y).1 + op.outward_tail(&[-c, -sn], &mut y).1
                        },
                        0.0,
                        core::f64::consts::PI,
                        spec.target_rel_error,
                        abs_tol,
                        400,
                    )
                    .value;
                    Ok(IntegralEstimate::exact(value, evals, tail))
                }
                _ => Err(Error::Unsupported(alloc::format!(
                    "tensor-grid operator is available for N ≤ 2, got N = {n}"
                ))),
            }
        }
    }
}

/// `∫_{y∈K, d(y)≤d(x)} (d(x) - d(y))ᵖ / |x-y|^{N+sp} dy` for bounded `K`.
///
/// Radii along each ray are drawn with density `∝ ρ^{a-1}` on `[0, exit]`,
/// `a = p(1-s)`; since `d` is 1-Lipschitz the weight `((d(x)-d(y))₊/ρ)ᵖ exitᵃ/a`
/// is bounded.
pub fn expedient_lhs<E: Executor>(
    body: &ConvexBody,
    x: &[f64],
    params: &Params,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<IntegralEstimate> {
    spec.validate()?;
    let d = check_point(body, x, params)?;
    if !body.is_bounded() {
        return Err(Error::UnboundedBody);
    }
    let n = params.dim;
    let (p, a) = (params.p, params.p * (1.0 - params.s));
    let weight = |rho: f64, exit: f64, y: &[f64]| -> f64 {
        let gap = (d - body.dist_unchecked(y)).max(0.0);
        (gap / rho).powf(p) * exit.powf(a) / a
    };
    match spec.method {
        Method::MonteCarlo => {
            let total = spec.total_samples();
            let sphere = sphere_area(n);
            let seed = derive_seed(spec.seed, tags::EXPEDIENT);
            let parts = exec.map(batches(total), |b| {
                let mut rng = batch_rng(seed, b);
                let mut dir = vec![0.0; n];
                let mut y = vec![0.0; n];
                let mut stats = Stats::default();
                for _ in 0..batch_len(total, b) {
                    random_direction(&mut rng, &mut dir);
                    let exit = body.ray_exit(x, &dir);
                    let rho = exit * open01(&mut rng).powf(1.0 / a);
                    along(x, &dir, rho, &mut y);
                    stats.push(sphere * weight(rho, exit, &y));
                }
                stats
            });
            let stats = Stats::combine(&parts);
            Ok(IntegralEstimate {
                value: stats.mean,
                std_error: stats.std_error(),
                samples_used: stats.count,
                tail_contribution: 0.0,
            })
        }
        Method::TensorGrid => {
            let tol = spec.target_rel_error;
            let mut y = vec![0.0; n];
            let mut evals = 0u64;
            let mut ray = |dir: &[f64]| -> f64 {
                let exit = body.ray_exit(x, dir);
                integrate(
                    |v| {
                        evals += 1;
                        let rho = exit * v.powf(1.0 / a);
                        if rho <= 0.0 {
                            return 0.0;
                        }
                        along(x, dir, rho, &mut y);
                        weight(rho, exit, &y)
                    },
                    0.0,
                    1.0,
                    0.1 * tol,
                    0.0,
                    400,
                )
                .value
            };
            let value = match n {
                1 => ray(&[1.0]) + ray(&[-1.0]),
                2 => {
                    integrate(
                        |t| ray(&[t.cos(), t.sin()]),
                        0.0,
                        2.0 * core::f64::consts::PI,
                        tol,
                        0.0,
                        400,
                    )
                    .value
                }
                _ => {
                    return Err(Error::Unsupported(alloc::format!(
                        "tensor-grid expedient integral is available for N ≤ 2, got N = {n}"
                    )))
                }
            };
            Ok(IntegralEstimate::exact(value, evals, 0.0))
        }
    }
}
