//! Integral estimators: Gagliardo seminorms, Hardy-weighted and plain `Lᵖ`
//! norms, the truncated nonlocal operator and the restricted kernel integral
//! of the distance function.
//!
//! Two methods are available. Monte Carlo works in any dimension and reports a
//! standard error; the tensor-grid method (`N ≤ 2`) is deterministic and serves
//! as the reference path.

pub mod exec;
mod operator;
mod seminorm;
mod test_function;
mod weighted;

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::geometry::{ConvexBody, Shape};
use crate::math::{ball_volume, composite_rule, integrate, open01, random_direction};

pub use operator::{expedient_lhs, truncated_nonlocal_operator};
pub use seminorm::{gagliardo_seminorm_p, local_seminorm_p};
pub use test_function::TestFunction;
pub use weighted::{grad_lp_norm_p, hardy_weighted_norm, lp_norm_p};

/// Integration method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    #[default]
    MonteCarlo,
    TensorGrid,
}

/// Sampling and resolution settings shared by all estimators.
///
/// In Monte Carlo mode a double integral draws `outer_samples` base points and
/// `inner_samples` kernel samples per base point; single integrals use
/// `outer_samples · inner_samples` points.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct QuadratureSpec {
    pub method: Method,
    pub outer_samples: usize,
    pub inner_samples: usize,
    pub seed: u64,
    /// Split radius between the near-diagonal and far strata; defaults to a
    /// tenth of the support diameter.
    pub near_radius: Option<f64>,
    /// Radius beyond which tails are added analytically.
    pub far_radius: Option<f64>,
    pub grid_points_per_axis: usize,
    pub target_rel_error: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            method: Method::MonteCarlo,
            outer_samples: 1000,
            inner_samples: 1000,
            seed: 0,
            near_radius: None,
            far_radius: None,
            grid_points_per_axis: 32,
            target_rel_error: 1e-8,
        }
    }
}

pub const MIN_SAMPLES: usize = 1000;
pub const MIN_GRID: usize = 16;

impl QuadratureSpec {
    pub fn monte_carlo(outer_samples: usize, inner_samples: usize, seed: u64) -> Self {
        Self {
            outer_samples,
            inner_samples,
            seed,
            ..Self::default()
        }
    }

    pub fn tensor_grid(points_per_axis: usize) -> Self {
        Self {
            method: Method::TensorGrid,
            grid_points_per_axis: points_per_axis,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_far_radius(mut self, r: f64) -> Self {
        self.far_radius = Some(r);
        self
    }

    pub fn with_near_radius(mut self, r: f64) -> Self {
        self.near_radius = Some(r);
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            Method::MonteCarlo => {
                if self.outer_samples < MIN_SAMPLES {
                    return Err(invalid(
                        "outer_samples",
                        format!("need at least {MIN_SAMPLES}, got {}", self.outer_samples),
                    ));
                }
                if self.inner_samples < 1 {
                    return Err(invalid("inner_samples", "need at least 1"));
                }
            }
            Method::TensorGrid => {
                if self.grid_points_per_axis < MIN_GRID {
                    return Err(invalid(
                        "grid_points_per_axis",
                        format!("need at least {MIN_GRID}, got {}", self.grid_points_per_axis),
                    ));
                }
            }
        }
        for (name, r) in [("near_radius", self.near_radius), ("far_radius", self.far_radius)] {
            if let Some(r) = r {
                if !(r > 0.0) {
                    return Err(invalid(name, "radius must be positive"));
                }
            }
        }
        if let (Some(near), Some(far)) = (self.near_radius, self.far_radius) {
            if !(near < far) {
                return Err(invalid("near_radius", "need near_radius < far_radius"));
            }
        }
        if !(self.target_rel_error > 0.0 && self.target_rel_error < 1.0) {
            return Err(invalid("target_rel_error", "must lie in (0, 1)"));
        }
        Ok(())
    }

    pub(crate) fn total_samples(&self) -> usize {
        self.outer_samples * self.inner_samples
    }
}

/// Value of an integral with its Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntegralEstimate {
    pub value: f64,
    /// Zero for deterministic quadrature.
    pub std_error: f64,
    pub samples_used: u64,
    /// Part of `value` added analytically or by deterministic tail quadrature.
    pub tail_contribution: f64,
}

impl IntegralEstimate {
    pub(crate) fn exact(value: f64, samples_used: u64, tail: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
            samples_used,
            tail_contribution: tail,
        }
    }

    /// `k · self`.
    pub fn scale(&self, k: f64) -> Self {
        Self {
            value: k * self.value,
            std_error: k.abs() * self.std_error,
            samples_used: self.samples_used,
            tail_contribution: k * self.tail_contribution,
        }
    }
}

/// Seed tags separating the random streams of different integrals.
pub(crate) mod tags {
    pub const SEMINORM: u64 = 1;
    pub const HARDY: u64 = 2;
    pub const LP: u64 = 3;
    pub const GRAD_LP: u64 = 4;
    pub const OPERATOR: u64 = 5;
    pub const EXPEDIENT: u64 = 6;
    pub const LOCAL: u64 = 7;
}

/// Uniform sampler over a region containing the support of a test function.
pub(crate) enum Region {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl Region {
    pub(crate) fn covering(body: &ConvexBody) -> Result<Self> {
        match body.shape() {
            Shape::Ball { center, radius } => Ok(Region::Ball {
                center: center.clone(),
                radius: *radius,
            }),
            _ => {
                let (lower, upper) = body.bounding_box().ok_or(Error::UnboundedBody)?;
                Ok(Region::Box { lower, upper })
            }
        }
    }

    pub(crate) fn volume(&self) -> f64 {
        match self {
            Region::Ball { center, radius } => ball_volume(center.len()) * radius.powi(center.len() as i32),
            Region::Box { lower, upper } => lower.iter().zip(upper).map(|(l, u)| u - l).product(),
        }
    }

    pub(crate) fn sample<R: Rng>(&self, rng: &mut R, out: &mut [f64]) {
        match self {
            Region::Ball { center, radius } => {
                random_direction(rng, out);
                let r = radius * open01(rng).powf(1.0 / center.len() as f64);
                for (o, c) in out.iter_mut().zip(center) {
                    *o = c + r * *o;
                }
            }
            Region::Box { lower, upper } => {
                for ((o, l), u) in out.iter_mut().zip(lower).zip(upper) {
                    *o = l + (u - l) * rng.random::<f64>();
                }
            }
        }
    }
}

/// Deterministic cubature over a region, for `N ≤ 2`. One dimension uses
/// adaptive Gauss–Kronrod; two dimensions use Gauss–Legendre in polar
/// coordinates for balls and a tensor rule for boxes.
pub(crate) fn region_cubature<F: FnMut(&[f64]) -> f64>(
    region: &Region,
    points: usize,
    rel_tol: f64,
    mut f: F,
) -> Result<(f64, u64)> {
    let (lower, upper) = match region {
        Region::Ball { center, radius } => (
            center.iter().map(|c| c - radius).collect::<Vec<_>>(),
            center.iter().map(|c| c + radius).collect::<Vec<_>>(),
        ),
        Region::Box { lower, upper } => (lower.clone(), upper.clone()),
    };
    let mut evals = 0u64;
    match lower.len() {
        1 => {
            let mut x = [0.0];
            let q = integrate(
                |t| {
                    evals += 1;
                    x[0] = t;
                    f(&x)
                },
                lower[0],
                upper[0],
                rel_tol,
                0.0,
                4000,
            );
            Ok((q.value, evals))
        }
        2 => {
            let mut x = [0.0, 0.0];
            let mut total = 0.0;
            match region {
                Region::Ball { center, radius } => {
                    let radial = composite_rule(0.0, *radius, 2, points);
                    let m = 2 * points;
                    let dt = 2.0 * core::f64::consts::PI / m as f64;
                    for (r, wr) in radial {
                        for j in 0..m {
                            let t = (j as f64 + 0.5) * dt;
                            x[0] = center[0] + r * t.cos();
                            x[1] = center[1] + r * t.sin();
                            total += wr * r * dt * f(&x);
                            evals += 1;
                        }
                    }
                }
                Region::Box { .. } => {
                    let rx = composite_rule(lower[0], upper[0], 2, points);
                    let ry = composite_rule(lower[1], upper[1], 2, points);
                    for &(a, wa) in &rx {
                        for &(b, wb) in &ry {
                            x[0] = a;
                            x[1] = b;
                            total += wa * wb * f(&x);
                            evals += 1;
                        }
                    }
                }
            }
            Ok((total, evals))
        }
        n => Err(Error::Unsupported(format!(
            "tensor-grid quadrature is available for N ≤ 2, got N = {n}"
        ))),
    }
}
