//! Convex bodies with exact distance to the boundary.
//!
//! Distances follow the convention `d_K(x) = 0` for `x ∉ K`; membership is
//! strict (the bodies are open).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::math::{dist, dot, norm};
use crate::optimize::{nelder_mead, NelderMeadOptions};
#[allow(unused_imports)]
use num_traits::Float;

/// Exponent triple `(N, p, s)` with `N ≥ 1`, `1 < p < ∞`, `0 < s < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Params {
    pub dim: usize,
    pub p: f64,
    pub s: f64,
}

impl Params {
    pub fn new(dim: usize, p: f64, s: f64) -> Result<Self> {
        if dim < 1 {
            return Err(invalid("dim", "dimension must be at least 1"));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(invalid("p", format!("need 1 < p < ∞, got {p}")));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(invalid("s", format!("need 0 < s < 1, got {s}")));
        }
        Ok(Self { dim, p, s })
    }

    /// `s·p`, the order of the kernel singularity beyond `N`.
    pub fn sp(&self) -> f64 {
        self.s * self.p
    }
}

/// One half-space `{x : a·x < b}` of a polytope description.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct HalfSpace {
    pub a: Vec<f64>,
    pub b: f64,
}

/// Geometric description of a body. Normals need not be normalized here;
/// [`ConvexBody::new`] rescales them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)
)]
pub enum Shape {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// `{x : normal·x < offset}`.
    HalfSpace {
        normal: Vec<f64>,
        offset: f64,
    },
    /// `{x : l1 < normal·x < l2}`.
    Slab {
        normal: Vec<f64>,
        l1: f64,
        l2: f64,
    },
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    /// Intersection of `{a_i·x < b_i}` with a strictly interior witness point.
    Polytope {
        halfspaces: Vec<HalfSpace>,
        witness: Vec<f64>,
    },
}

/// A validated open convex body.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Shape", into = "Shape"))]
pub struct ConvexBody {
    shape: Shape,
    dim: usize,
    inradius: f64,
    center: Option<Vec<f64>>,
    bbox: Option<(Vec<f64>, Vec<f64>)>,
}

impl From<ConvexBody> for Shape {
    fn from(body: ConvexBody) -> Self {
        body.shape
    }
}

impl TryFrom<Shape> for ConvexBody {
    type Error = Error;

    fn try_from(shape: Shape) -> Result<Self> {
        ConvexBody::new(shape)
    }
}

fn unit(v: &[f64], name: &'static str) -> Result<(Vec<f64>, f64)> {
    let n = norm(v);
    if !(n > 0.0 && n.is_finite()) {
        return Err(invalid(name, "normal must be a nonzero finite vector"));
    }
    Ok((v.iter().map(|x| x / n).collect(), n))
}

fn finite(v: &[f64], name: &'static str) -> Result<()> {
    if v.is_empty() {
        return Err(invalid(name, "empty vector"));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(invalid(name, "non-finite coordinate"));
    }
    Ok(())
}

impl ConvexBody {
    pub fn new(shape: Shape) -> Result<Self> {
        let shape = match shape {
            Shape::Ball { center, radius } => {
                finite(&center, "center")?;
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(invalid("radius", "radius must be positive"));
                }
                Shape::Ball { center, radius }
            }
            Shape::HalfSpace { normal, offset } => {
                finite(&normal, "normal")?;
                let (normal, scale) = unit(&normal, "normal")?;
                Shape::HalfSpace {
                    normal,
                    offset: offset / scale,
                }
            }
            Shape::Slab { normal, l1, l2 } => {
                finite(&normal, "normal")?;
                if !(l1 < l2) {
                    return Err(invalid("l1", "slab needs l1 < l2"));
                }
                let (normal, scale) = unit(&normal, "normal")?;
                Shape::Slab {
                    normal,
                    l1: l1 / scale,
                    l2: l2 / scale,
                }
            }
            Shape::Box { lower, upper } => {
                finite(&lower, "lower")?;
                finite(&upper, "upper")?;
                if lower.len() != upper.len() {
                    return Err(Error::DimensionMismatch {
                        expected: lower.len(),
                        got: upper.len(),
                    });
                }
                if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
                    return Err(invalid("lower", "box needs lower < upper componentwise"));
                }
                Shape::Box { lower, upper }
            }
            Shape::Polytope { halfspaces, witness } => {
                finite(&witness, "witness")?;
                if halfspaces.is_empty() {
                    return Err(invalid("halfspaces", "polytope needs at least one half-space"));
                }
                let mut normalized = Vec::with_capacity(halfspaces.len());
                for h in halfspaces {
                    if h.a.len() != witness.len() {
                        return Err(Error::DimensionMismatch {
                            expected: witness.len(),
                            got: h.a.len(),
                        });
                    }
                    finite(&h.a, "halfspaces.a")?;
                    let (a, scale) = unit(&h.a, "halfspaces.a")?;
                    normalized.push(HalfSpace { a, b: h.b / scale });
                }
                if normalized.iter().any(|h| !(dot(&h.a, &witness) < h.b)) {
                    return Err(invalid("witness", "witness is not strictly interior"));
                }
                Shape::Polytope {
                    halfspaces: normalized,
                    witness,
                }
            }
        };
        let dim = match &shape {
            Shape::Ball { center, .. } => center.len(),
            Shape::HalfSpace { normal, .. } | Shape::Slab { normal, .. } => normal.len(),
            Shape::Box { lower, .. } => lower.len(),
            Shape::Polytope { witness, .. } => witness.len(),
        };
        let mut body = Self {
            shape,
            dim,
            inradius: f64::INFINITY,
            center: None,
            bbox: None,
        };
        let (r, c) = body.compute_inradius();
        body.inradius = r;
        body.center = c;
        body.bbox = body.compute_bounding_box();
        Ok(body)
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        Self::new(Shape::Ball { center, radius })
    }

    pub fn half_space(normal: Vec<f64>, offset: f64) -> Result<Self> {
        Self::new(Shape::HalfSpace { normal, offset })
    }

    /// The upper half-space `{x_N > 0}` in ℝᴺ.
    pub fn upper_half_space(dim: usize) -> Result<Self> {
        let mut normal = vec![0.0; dim];
        if let Some(last) = normal.last_mut() {
            *last = -1.0;
        }
        Self::half_space(normal, 0.0)
    }

    pub fn slab(normal: Vec<f64>, l1: f64, l2: f64) -> Result<Self> {
        Self::new(Shape::Slab { normal, l1, l2 })
    }

    pub fn cuboid(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::new(Shape::Box { lower, upper })
    }

    /// The open interval `(a, b)` as a one-dimensional box.
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::cuboid(vec![a], vec![b])
    }

    pub fn polytope(halfspaces: Vec<HalfSpace>, witness: Vec<f64>) -> Result<Self> {
        Self::new(Shape::Polytope { halfspaces, witness })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_bounded(&self) -> bool {
        self.bounding_box().is_some()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Signed face slack `min_i (b_i - a_i·x)` for face-described bodies; for
    /// balls `R - |x - c|`. Positive exactly on the interior.
    pub(crate) fn slack(&self, x: &[f64]) -> f64 {
        match &self.shape {
            Shape::Ball { center, radius } => radius - dist(x, center),
            Shape::HalfSpace { normal, offset } => offset - dot(normal, x),
            Shape::Slab { normal, l1, l2 } => {
                let t = dot(normal, x);
                (t - l1).min(l2 - t)
            }
            Shape::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(xi, (lo, hi))| (xi - lo).min(hi - xi))
                .fold(f64::INFINITY, f64::min),
            Shape::Polytope { halfspaces, .. } => halfspaces
                .iter()
                .map(|h| h.b - dot(&h.a, x))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// `d_K(x)` without the dimension check, for inner loops.
    #[inline]
    pub(crate) fn dist_unchecked(&self, x: &[f64]) -> f64 {
        self.slack(x).max(0.0)
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.slack(x) > 0.0)
    }

    /// Distance from `x` to `∂K` for `x ∈ K`, and `0` outside.
    pub fn distance_to_boundary(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.dist_unchecked(x))
    }

    /// `sup_K d_K`; `f64::INFINITY` for bodies containing arbitrarily large balls.
    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    /// Center of a largest inscribed ball, when the inradius is finite.
    pub fn inradius_center(&self) -> Option<&[f64]> {
        self.center.as_deref()
    }

    /// Some strictly interior point.
    pub fn interior_point(&self) -> Vec<f64> {
        if let Some(c) = &self.center {
            return c.clone();
        }
        match &self.shape {
            Shape::HalfSpace { normal, offset } => normal.iter().map(|v| v * (offset - 1.0)).collect(),
            Shape::Polytope { witness, .. } => witness.clone(),
            _ => unreachable!("bodies without a center are half-spaces or polytopes"),
        }
    }

    /// Closest point of `∂K` to an interior point `x`. Ties go to the lowest
    /// face index (box faces are ordered `lower_0, upper_0, lower_1, …`; slab
    /// faces `l1, l2`); the center of a ball projects along `e_1`.
    pub fn nearest_boundary_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let depth = self.slack(x);
        if !(depth > 0.0) {
            return Err(Error::OutsideBody);
        }
        let mut out = x.to_vec();
        match &self.shape {
            Shape::Ball { center, radius } => {
                let r = dist(x, center);
                if r == 0.0 {
                    out[0] += radius;
                } else {
                    for (o, c) in out.iter_mut().zip(center) {
                        *o = c + (*o - c) * radius / r;
                    }
                }
            }
            _ => {
                let (normal, slack) = self
                    .faces()
                    .into_iter()
                    .map(|(a, b)| {
                        let slack = b - dot(&a, x);
                        (a, slack)
                    })
                    .fold(
                        (Vec::new(), f64::INFINITY),
                        |best, cand| {
                            if cand.1 < best.1 {
                                cand
                            } else {
                                best
                            }
                        },
                    );
                for (o, a) in out.iter_mut().zip(&normal) {
                    *o += slack * a;
                }
            }
        }
        Ok(out)
    }

    /// Face list `(unit outward normal, offset)` for face-described bodies.
    fn faces(&self) -> Vec<(Vec<f64>, f64)> {
        match &self.shape {
            Shape::Ball { .. } => Vec::new(),
            Shape::HalfSpace { normal, offset } => vec![(normal.clone(), *offset)],
            Shape::Slab { normal, l1, l2 } => vec![(normal.iter().map(|v| -v).collect(), -l1), (normal.clone(), *l2)],
            Shape::Box { lower, upper } => {
                let n = lower.len();
                let mut faces = Vec::with_capacity(2 * n);
                for k in 0..n {
                    let mut e = vec![0.0; n];
                    e[k] = -1.0;
                    faces.push((e.clone(), -lower[k]));
                    e[k] = 1.0;
                    faces.push((e, upper[k]));
                }
                faces
            }
            Shape::Polytope { halfspaces, .. } => halfspaces.iter().map(|h| (h.a.clone(), h.b)).collect(),
        }
    }

    /// Distance travelled from `x` along the unit vector `dir` before leaving
    /// the body (`∞` if the ray never leaves). `x` is assumed interior.
    pub fn ray_exit(&self, x: &[f64], dir: &[f64]) -> f64 {
        match &self.shape {
            Shape::Ball { center, radius } => {
                let mut b = 0.0;
                let mut c = -radius * radius;
                for ((xi, ci), di) in x.iter().zip(center).zip(dir) {
                    let r = xi - ci;
                    b += r * di;
                    c += r * r;
                }
                let disc = b * b - c;
                if disc <= 0.0 {
                    0.0
                } else {
                    (-b + disc.sqrt()).max(0.0)
                }
            }
            Shape::HalfSpace { normal, offset } => exit_through(dot(normal, dir), offset - dot(normal, x)),
            Shape::Slab { normal, l1, l2 } => {
                let speed = dot(normal, dir);
                let t = dot(normal, x);
                exit_through(speed, l2 - t).min(exit_through(-speed, t - l1))
            }
            Shape::Box { lower, upper } => x
                .iter()
                .zip(dir)
                .zip(lower.iter().zip(upper))
                .map(|((xi, di), (lo, hi))| exit_through(*di, hi - xi).min(exit_through(-di, xi - lo)))
                .fold(f64::INFINITY, f64::min),
            Shape::Polytope { halfspaces, .. } => halfspaces
                .iter()
                .map(|h| exit_through(dot(&h.a, dir), h.b - dot(&h.a, x)))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Axis-aligned bounding box of a bounded body.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        self.bbox.clone()
    }

    fn compute_bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match &self.shape {
            Shape::Ball { center, radius } => Some((
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            )),
            Shape::Box { lower, upper } => Some((lower.clone(), upper.clone())),
            Shape::HalfSpace { .. } | Shape::Slab { .. } => None,
            Shape::Polytope { .. } => {
                // a finite inradius still allows thin unbounded pieces such
                // as half-strips, so look for a recession direction
                if !self.inradius.is_finite() || recedes(&self.faces(), self.dim) {
                    return None;
                }
                let vertices = self.vertices();
                if vertices.is_empty() {
                    return None;
                }
                let mut lo = vec![f64::INFINITY; self.dim];
                let mut hi = vec![f64::NEG_INFINITY; self.dim];
                for v in &vertices {
                    for k in 0..self.dim {
                        lo[k] = lo[k].min(v[k]);
                        hi[k] = hi[k].max(v[k]);
                    }
                }
                Some((lo, hi))
            }
        }
    }

    /// Vertices of a polytope by enumerating `N`-subsets of its faces.
    fn vertices(&self) -> Vec<Vec<f64>> {
        let faces = self.faces();
        let n = self.dim;
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..n).collect();
        if faces.len() < n {
            return out;
        }
        loop {
            let mut mat = Vec::with_capacity(n * n);
            let mut rhs = Vec::with_capacity(n);
            for &i in &idx {
                mat.extend_from_slice(&faces[i].0);
                rhs.push(faces[i].1);
            }
            if let Some(v) = solve_linear(n, &mut mat, &mut rhs) {
                let feasible = faces.iter().all(|(a, b)| dot(a, &v) <= b + 1e-9 * (1.0 + b.abs()));
                if feasible {
                    out.push(v);
                }
            }
            // next combination
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if idx[k] < faces.len() - n + k {
                    idx[k] += 1;
                    for j in k + 1..n {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn compute_inradius(&self) -> (f64, Option<Vec<f64>>) {
        match &self.shape {
            Shape::Ball { center, radius } => (*radius, Some(center.clone())),
            Shape::HalfSpace { .. } => (f64::INFINITY, None),
            Shape::Slab { normal, l1, l2 } => {
                let mid = 0.5 * (l1 + l2);
                (0.5 * (l2 - l1), Some(normal.iter().map(|v| v * mid).collect()))
            }
            Shape::Box { lower, upper } => {
                let half = lower
                    .iter()
                    .zip(upper)
                    .map(|(l, u)| 0.5 * (u - l))
                    .fold(f64::INFINITY, f64::min);
                let mid = lower.iter().zip(upper).map(|(l, u)| 0.5 * (l + u)).collect();
                (half, Some(mid))
            }
            Shape::Polytope { witness, .. } => self.polytope_inradius(witness),
        }
    }

    /// Maximizes the face slack from the witness by restarted simplex search.
    /// Slack growth beyond `1e9` times the starting scale is taken as an
    /// unbounded inradius.
    fn polytope_inradius(&self, witness: &[f64]) -> (f64, Option<Vec<f64>>) {
        let start = self.slack(witness);
        let scale = start.max(1e-3);
        let limit = 1e9 * (1.0 + scale + norm(witness));
        let mut best_x = witness.to_vec();
        let mut best = start;
        let mut step = scale;
        for round in 0..60 {
            let mut opts = NelderMeadOptions::new(vec![step; self.dim]);
            opts.max_evals = 400 * (self.dim + 1);
            opts.restarts = 0;
            opts.xtol = 1e-13 * (1.0 + scale);
            opts.ftol = -1.0;
            opts.seed = round;
            let m = nelder_mead(|x| -self.slack(x), &best_x, None, &opts);
            let value = -m.value;
            if value > limit {
                return (f64::INFINITY, None);
            }
            let gain = value - best;
            if value > best {
                best = value;
                best_x = m.x;
            }
            if gain <= 1e-12 * (1.0 + best.abs()) {
                if step < 1e-10 * scale {
                    break;
                }
                step *= 0.25;
            } else {
                step = step.max(gain);
            }
        }
        (best, Some(best_x))
    }

    /// The body shifted by `v`.
    pub fn translated(&self, v: &[f64]) -> Result<Self> {
        self.check_dim(v)?;
        let shift = |x: &[f64]| -> Vec<f64> { x.iter().zip(v).map(|(a, b)| a + b).collect() };
        let shape = match &self.shape {
            Shape::Ball { center, radius } => Shape::Ball {
                center: shift(center),
                radius: *radius,
            },
            Shape::HalfSpace { normal, offset } => Shape::HalfSpace {
                normal: normal.clone(),
                offset: offset + dot(normal, v),
            },
            Shape::Slab { normal, l1, l2 } => Shape::Slab {
                normal: normal.clone(),
                l1: l1 + dot(normal, v),
                l2: l2 + dot(normal, v),
            },
            Shape::Box { lower, upper } => Shape::Box {
                lower: shift(lower),
                upper: shift(upper),
            },
            Shape::Polytope { halfspaces, witness } => Shape::Polytope {
                halfspaces: halfspaces
                    .iter()
                    .map(|h| HalfSpace {
                        a: h.a.clone(),
                        b: h.b + dot(&h.a, v),
                    })
                    .collect(),
                witness: shift(witness),
            },
        };
        Self::new(shape)
    }

    /// The image of the body under `x ↦ λx`, `λ > 0`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid("lambda", "dilation factor must be positive"));
        }
        let scale = |x: &[f64]| -> Vec<f64> { x.iter().map(|a| a * lambda).collect() };
        let shape = match &self.shape {
            Shape::Ball { center, radius } => Shape::Ball {
                center: scale(center),
                radius: radius * lambda,
            },
            Shape::HalfSpace { normal, offset } => Shape::HalfSpace {
                normal: normal.clone(),
                offset: offset * lambda,
            },
            Shape::Slab { normal, l1, l2 } => Shape::Slab {
                normal: normal.clone(),
                l1: l1 * lambda,
                l2: l2 * lambda,
            },
            Shape::Box { lower, upper } => Shape::Box {
                lower: scale(lower),
                upper: scale(upper),
            },
            Shape::Polytope { halfspaces, witness } => Shape::Polytope {
                halfspaces: halfspaces
                    .iter()
                    .map(|h| HalfSpace {
                        a: h.a.clone(),
                        b: h.b * lambda,
                    })
                    .collect(),
                witness: scale(witness),
            },
        };
        Self::new(shape)
    }

    /// Euclidean diameter of the bounding box, `∞` when unbounded.
    pub fn box_diameter(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => 2.0 * radius,
            _ => match self.bounding_box() {
                Some((lo, hi)) => dist(&lo, &hi),
                None => f64::INFINITY,
            },
        }
    }

    /// Short human-readable description.
    pub fn descriptor(&self) -> String {
        match &self.shape {
            Shape::Ball { center, radius } => format!("ball(center={center:?},radius={radius})"),
            Shape::HalfSpace { normal, offset } => format!("halfspace(normal={normal:?},offset={offset})"),
            Shape::Slab { normal, l1, l2 } => format!("slab(normal={normal:?},l1={l1},l2={l2})"),
            Shape::Box { lower, upper } => format!("box(lower={lower:?},upper={upper:?})"),
            Shape::Polytope { halfspaces, .. } => format!("polytope(faces={})", halfspaces.len()),
        }
    }
}

fn exit_through(speed: f64, slack: f64) -> f64 {
    if speed > 0.0 {
        (slack / speed).max(0.0)
    } else {
        f64::INFINITY
    }
}

/// Gaussian elimination with partial pivoting; `None` for (near) singular systems.
/// Reduces `rows` (each of length `n`) to reduced row echelon form in place
/// and returns the pivot columns.
fn row_reduce(rows: &mut [Vec<f64>], n: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        let p = (r..rows.len())
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .unwrap_or(r);
        if rows[p][col].abs() < 1e-12 {
            continue;
        }
        rows.swap(p, r);
        for i in 0..rows.len() {
            if i != r {
                let f = rows[i][col] / rows[r][col];
                if f != 0.0 {
                    let pivot = rows[r].clone();
                    for (x, y) in rows[i][col..n].iter_mut().zip(&pivot[col..n]) {
                        *x -= f * y;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Whether some `d ≠ 0` has `a·d ≤ 0` on every face, i.e. the polyhedron
/// `{a·x < b}` is unbounded.
///
/// Either the normals miss a dimension (the set contains a line) or the
/// recession cone is pointed, and then a nonzero cone has an extreme ray on
/// which `n - 1` independent faces are active.
fn recedes(faces: &[(Vec<f64>, f64)], n: usize) -> bool {
    let mut all: Vec<Vec<f64>> = faces.iter().map(|f| f.0.clone()).collect();
    if row_reduce(&mut all, n).len() < n {
        return true;
    }
    let k = n - 1;
    let m = faces.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut rows: Vec<Vec<f64>> = idx.iter().map(|&i| faces[i].0.clone()).collect();
        let pivots = row_reduce(&mut rows, n);
        if pivots.len() == k {
            let free = (0..n).find(|c| !pivots.contains(c)).unwrap_or(0);
            let mut d = vec![0.0; n];
            d[free] = 1.0;
            for (row, &c) in rows.iter().zip(&pivots) {
                d[c] = -row[free] / row[c];
            }
            let len = norm(&d);
            for sign in [1.0, -1.0] {
                if faces.iter().all(|(a, _)| sign * dot(a, &d) / len <= 1e-12) {
                    return true;
                }
            }
        }
        // next k-subset of the faces
        let mut j = k;
        loop {
            if j == 0 {
                return false;
            }
            j -= 1;
            if idx[j] < m - k + j {
                idx[j] += 1;
                for l in j + 1..k {
                    idx[l] = idx[l - 1] + 1;
                }
                break;
            }
        }
    }
}

fn solve_linear(n: usize, mat: &mut [f64], rhs: &mut [f64]) -> Option<Vec<f64>> {
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| mat[a * n + col].abs().total_cmp(&mat[b * n + col].abs()))?;
        if mat[pivot * n + col].abs() < 1e-12 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                mat.swap(pivot * n + k, col * n + k);
            }
            rhs.swap(pivot, col);
        }
        for row in col + 1..n {
            let factor = mat[row * n + col] / mat[col * n + col];
            for k in col..n {
                mat[row * n + k] -= factor * mat[col * n + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= mat[row * n + k] * x[k];
        }
        x[row] = acc / mat[row * n + row];
    }
    Some(x)
}

#[cfg(test)]
fn is_unit(v: &[f64]) -> bool {
    (norm(v) - 1.0).abs() <= 1e-12
}
