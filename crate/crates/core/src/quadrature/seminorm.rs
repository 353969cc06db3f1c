//! Gagliardo seminorms `∬ |u(x) - u(y)|ᵖ |x - y|^{-N-sp}`.
//!
//! With `S` the support of `u`, the integral over `ℝᴺ × ℝᴺ` equals
//! `∬_{S×S} + 2 ∬_{S×Sᶜ}`. The base point `x` ranges over `S`; the kernel
//! integral around `x` is taken in polar coordinates and split at a near radius
//! `ρ₀` and a far radius `R`:
//!
//! * on `[0, ρ₀]`, radii are drawn with density `∝ ρ^{a-1}`, `a = p(1-s)`,
//!   leaving the bounded weight `|Δu/ρ|ᵖ ρ₀ᵃ/a`;
//! * on `[ρ₀, R]`, radii follow the kernel `∝ ρ^{-1-sp}`;
//! * beyond `R ≥ diam S` every `y` lies outside `S` and the tail
//!   `2|u(x)|ᵖ |S^{N-1}| R^{-sp}/(sp)` is added in closed form.

use alloc::vec;

use super::exec::{batch_rng, derive_seed, Executor, Stats, BATCH};
use super::{tags, IntegralEstimate, Method, QuadratureSpec, Region, TestFunction};
use crate::error::{invalid, Error, Result};
use crate::geometry::{ConvexBody, Params};
use crate::math::{along, composite_rule, dot, integrate, open01, random_direction, sphere_area};
#[allow(unused_imports)]
use num_traits::Float;

struct Kernel<'a> {
    u: &'a TestFunction,
    support: ConvexBody,
    omega: Option<&'a ConvexBody>,
    p: f64,
    sp: f64,
    a: f64,
    diameter: f64,
}

impl Kernel<'_> {
    fn inside_omega(&self, y: &[f64]) -> bool {
        self.omega.is_none_or(|o| o.dist_unchecked(y) > 0.0)
    }

    /// `h(x, y)`: `|u(x) - u(y)|ᵖ` on the support, `2|u(x)|ᵖ` off it, and 0
    /// outside the restricting domain.
    fn h(&self, ux: f64, y: &[f64]) -> f64 {
        if !self.inside_omega(y) {
            return 0.0;
        }
        if self.support.dist_unchecked(y) > 0.0 {
            (ux - self.u.eval(y)).abs().powf(self.p)
        } else {
            2.0 * ux.abs().powf(self.p)
        }
    }

    /// Radial integral `∫_0^L |u(x) - u(x+ρω)|ᵖ ρ^{-1-sp} dρ` through the
    /// substitution `ρ = L v^{1/a}`, plus the exact exterior part along the ray.
    fn ray(
        &self,
        x: &[f64],
        ux: f64,
        dir: &[f64],
        y: &mut [f64],
        rel_tol: f64,
        nodes: Option<&[(f64, f64)]>,
    ) -> (f64, f64) {
        let exit_s = self.support.ray_exit(x, dir);
        let exit_o = self.omega.map_or(f64::INFINITY, |o| o.ray_exit(x, dir));
        let len = exit_s.min(exit_o);
        let mut interior = 0.0;
        if len > 0.0 {
            let scale = len.powf(self.a) / self.a;
            // below this radius the difference quotient is mostly rounding
            // noise; the midpoint derivative is accurate to O(ρ²) there
            let taylor = 1e-5 * self.diameter;
            let mut g = |v: f64| {
                let rho = len * v.powf(1.0 / self.a);
                if rho <= 0.0 {
                    return 0.0;
                }
                let slope = if rho < taylor {
                    along(x, dir, 0.5 * rho, y);
                    dot(&self.u.gradient(y), dir).abs()
                } else {
                    along(x, dir, rho, y);
                    let du = if self.support.dist_unchecked(y) > 0.0 {
                        self.u.eval(y)
                    } else {
                        0.0
                    };
                    (ux - du).abs() / rho
                };
                slope.powf(self.p) * scale
            };
            interior = match nodes {
                Some(rule) => rule.iter().map(|&(v, w)| w * g(v)).sum(),
                None => integrate(&mut g, 0.0, 1.0, rel_tol, 1e-300, 400).value,
            };
        }
        let mut tail = 0.0;
        if ux != 0.0 && exit_o > exit_s {
            let outer = if exit_o.is_finite() { exit_o.powf(-self.sp) } else { 0.0 };
            tail = 2.0 * ux.abs().powf(self.p) * (exit_s.powf(-self.sp) - outer) / self.sp;
        }
        (interior, tail)
    }
}

fn setup<'a>(
    u: &'a TestFunction,
    omega: Option<&'a ConvexBody>,
    params: &Params,
    spec: &QuadratureSpec,
) -> Result<(Kernel<'a>, f64, f64)> {
    spec.validate()?;
    u.validate()?;
    if u.dim() != params.dim {
        return Err(Error::DimensionMismatch {
            expected: params.dim,
            got: u.dim(),
        });
    }
    if let Some(o) = omega {
        if o.dim() != params.dim {
            return Err(Error::DimensionMismatch {
                expected: params.dim,
                got: o.dim(),
            });
        }
    }
    let diameter = u.support_diameter();
    let near = spec.near_radius.unwrap_or(0.1 * diameter);
    let far = spec.far_radius.unwrap_or(2.0 * diameter);
    if far < diameter {
        return Err(invalid(
            "far_radius",
            "far radius must be at least the support diameter so that the tail is exact",
        ));
    }
    if !(near < far) {
        return Err(invalid("near_radius", "need near_radius < far_radius"));
    }
    let kernel = Kernel {
        u,
        support: u.support_body(),
        omega,
        p: params.p,
        sp: params.sp(),
        a: params.p * (1.0 - params.s),
        diameter: u.support_diameter(),
    };
    Ok((kernel, near, far))
}

fn estimate<E: Executor>(
    kernel: &Kernel,
    near: f64,
    far: f64,
    spec: &QuadratureSpec,
    exec: &E,
    tag: u64,
) -> Result<IntegralEstimate> {
    match spec.method {
        Method::MonteCarlo => monte_carlo(kernel, near, far, spec, exec, tag),
        Method::TensorGrid => tensor(kernel, spec),
    }
}

fn monte_carlo<E: Executor>(
    k: &Kernel,
    near: f64,
    far: f64,
    spec: &QuadratureSpec,
    exec: &E,
    tag: u64,
) -> Result<IntegralEstimate> {
    let n = k.support.dim();
    let region = Region::covering(&k.support)?;
    let volume = region.volume();
    let sphere = sphere_area(n);
    let (a, sp, p) = (k.a, k.sp, k.p);
    let near_weight = near.powf(a) / a;
    let (near_sp, far_sp) = (near.powf(-sp), far.powf(-sp));
    let far_norm = (near_sp - far_sp) / sp;
    let inner = spec.inner_samples;
    let per_batch = (BATCH / inner).max(1);
    let outer = spec.outer_samples;
    let seed = derive_seed(spec.seed, tag);
    let parts = exec.map(outer.div_ceil(per_batch), |b| {
        let mut rng = batch_rng(seed, b);
        let mut x = vec![0.0; n];
        let mut y = vec![0.0; n];
        let mut dir = vec![0.0; n];
        let mut total = Stats::default();
        let mut tails = Stats::default();
        let count = per_batch.min(outer - b * per_batch);
        for _ in 0..count {
            region.sample(&mut rng, &mut x);
            if k.support.dist_unchecked(&x) <= 0.0 || !k.inside_omega(&x) {
                total.push(0.0);
                tails.push(0.0);
                continue;
            }
            let ux = k.u.eval(&x);
            let mut acc = 0.0;
            let mut tail = 0.0;
            for _ in 0..inner {
                random_direction(&mut rng, &mut dir);
                let rho = near * open01(&mut rng).powf(1.0 / a);
                along(&x, &dir, rho, &mut y);
                acc += k.h(ux, &y) / rho.powf(p) * near_weight;
                let rho = (near_sp - open01(&mut rng) * (near_sp - far_sp)).powf(-1.0 / sp);
                along(&x, &dir, rho, &mut y);
                acc += k.h(ux, &y) * far_norm;
                if ux != 0.0 {
                    tail += match k.omega {
                        None => 2.0 * ux.abs().powf(p) * far_sp / sp,
                        Some(o) => {
                            let exit = o.ray_exit(&x, &dir);
                            if exit > far {
                                let outer = if exit.is_finite() { exit.powf(-sp) } else { 0.0 };
                                2.0 * ux.abs().powf(p) * (far_sp - outer) / sp
                            } else {
                                0.0
                            }
                        }
                    };
                }
            }
            let scale = volume * sphere / inner as f64;
            total.push(scale * (acc + tail));
            tails.push(scale * tail);
        }
        (total, tails)
    });
    let total = Stats::combine(parts.iter().map(|t| &t.0));
    let tails = Stats::combine(parts.iter().map(|t| &t.1));
    Ok(IntegralEstimate {
        value: total.mean,
        std_error: total.std_error(),
        samples_used: total.count * inner as u64,
        tail_contribution: tails.mean,
    })
}

/// Deterministic evaluation for `N ≤ 2`. In one dimension every level is
/// adaptive; in two, Gauss–Legendre rules in the base point, the angle and the
/// substituted radius.
fn tensor(k: &Kernel, spec: &QuadratureSpec) -> Result<IntegralEstimate> {
    let n = k.support.dim();
    let tol = spec.target_rel_error;
    let region = Region::covering(&k.support)?;
    let mut y = vec![0.0; n];
    let mut evals = 0u64;
    match n {
        1 => {
            let (value, outer_evals) = super::region_cubature(&region, spec.grid_points_per_axis, tol, |x| {
                if k.support.dist_unchecked(x) <= 0.0 || !k.inside_omega(x) {
                    return 0.0;
                }
                let ux = k.u.eval(x);
                let mut sum = 0.0;
                for dir in [[1.0], [-1.0]] {
                    let (interior, tail) = k.ray(x, ux, &dir, &mut y, 0.1 * tol, None);
                    sum += interior + tail;
                }
                sum
            })?;
            evals += outer_evals;
            // the tail share, reported separately
            let (tail, _) = super::region_cubature(&region, spec.grid_points_per_axis, tol, |x| {
                if k.support.dist_unchecked(x) <= 0.0 || !k.inside_omega(x) {
                    return 0.0;
                }
                let ux = k.u.eval(x);
                [[1.0], [-1.0]].iter().map(|dir| tail_only(k, x, ux, dir)).sum()
            })?;
            Ok(IntegralEstimate::exact(value, evals, tail))
        }
        2 => {
            let points = spec.grid_points_per_axis;
            let radial = composite_rule(0.0, 1.0, 2, points);
            let m = 4 * points;
            let dt = 2.0 * core::f64::consts::PI / m as f64;
            let dirs: alloc::vec::Vec<[f64; 2]> = (0..m)
                .map(|j| {
                    let t = (j as f64 + 0.5) * dt;
                    [t.cos(), t.sin()]
                })
                .collect();
            let (value, outer_evals) = super::region_cubature(&region, points, tol, |x| {
                if k.support.dist_unchecked(x) <= 0.0 || !k.inside_omega(x) {
                    return 0.0;
                }
                let ux = k.u.eval(x);
                let mut sum = 0.0;
                for dir in &dirs {
                    let (interior, tail) = k.ray(x, ux, dir, &mut y, tol, Some(&radial));
                    sum += interior + tail;
                }
                sum * dt
            })?;
            evals += outer_evals * (m * radial.len()) as u64;
            let (tail, _) = super::region_cubature(&region, points, tol, |x| {
                if k.support.dist_unchecked(x) <= 0.0 || !k.inside_omega(x) {
                    return 0.0;
                }
                let ux = k.u.eval(x);
                dirs.iter().map(|dir| tail_only(k, x, ux, dir)).sum::<f64>() * dt
            })?;
            Ok(IntegralEstimate::exact(value, evals, tail))
        }
        _ => Err(Error::Unsupported(alloc::format!(
            "tensor-grid seminorm is available for N ≤ 2, got N = {n}"
        ))),
    }
}

fn tail_only(k: &Kernel, x: &[f64], ux: f64, dir: &[f64]) -> f64 {
    if ux == 0.0 {
        return 0.0;
    }
    let exit_s = k.support.ray_exit(x, dir);
    let exit_o = k.omega.map_or(f64::INFINITY, |o| o.ray_exit(x, dir));
    if exit_o <= exit_s {
        return 0.0;
    }
    let outer = if exit_o.is_finite() { exit_o.powf(-k.sp) } else { 0.0 };
    2.0 * ux.abs().powf(k.p) * (exit_s.powf(-k.sp) - outer) / k.sp
}

/// `[u]ᵖ = ∬_{ℝᴺ×ℝᴺ} |u(x) - u(y)|ᵖ / |x - y|^{N+sp} dx dy`.
pub fn gagliardo_seminorm_p<E: Executor>(
    u: &TestFunction,
    params: &Params,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<IntegralEstimate> {
    let (kernel, near, far) = setup(u, None, params, spec)?;
    estimate(&kernel, near, far, spec, exec, tags::SEMINORM)
}

/// The seminorm with both variables restricted to `Ω`.
pub fn local_seminorm_p<E: Executor>(
    u: &TestFunction,
    omega: &ConvexBody,
    params: &Params,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<IntegralEstimate> {
    let (kernel, near, far) = setup(u, Some(omega), params, spec)?;
    estimate(&kernel, near, far, spec, exec, tags::LOCAL)
}
