//! Small numerical toolbox: Gauss rules, adaptive Gauss–Kronrod, golden
//! section search and sphere measures.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

/// Result of an adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Quad {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    Quad {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol * |value|)` or `max_intervals`
/// subintervals have been created.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Quad {
    if a == b {
        return Quad { value: 0.0, error: 0.0 };
    }
    let first = gk15(&mut f, a, b);
    let mut parts: Vec<(f64, f64, Quad)> = Vec::with_capacity(64);
    parts.push((a, b, first));
    let mut value = first.value;
    let mut error = first.error;
    while error > abs_tol.max(rel_tol * value.abs()) && parts.len() < max_intervals {
        let (worst, _) =
            parts.iter().enumerate().fold(
                (0, -1.0),
                |acc, (i, part)| {
                    if part.2.error > acc.1 {
                        (i, part.2.error)
                    } else {
                        acc
                    }
                },
            );
        let (lo, hi, q) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval exhausted floating point resolution
            parts.push((lo, hi, Quad { error: 0.0, ..q }));
            value = parts.iter().map(|p| p.2.value).sum();
            error = parts.iter().map(|p| p.2.error).sum();
            continue;
        }
        let left = gk15(&mut f, lo, mid);
        let right = gk15(&mut f, mid, hi);
        value += left.value + right.value - q.value;
        error += left.error + right.error - q.error;
        parts.push((lo, mid, left));
        parts.push((mid, hi, right));
    }
    Quad {
        value: parts.iter().map(|p| p.2.value).sum(),
        error: parts.iter().map(|p| p.2.error).sum(),
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule: `panels` equal panels of `order` nodes on `[a, b]`.
pub fn composite_rule(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (nodes, weights) = gauss_legendre(order);
    let width = (b - a) / panels as f64;
    let mut rule = Vec::with_capacity(panels * order);
    for k in 0..panels {
        let lo = a + width * k as f64;
        for (x, w) in nodes.iter().zip(&weights) {
            rule.push((lo + 0.5 * width * (x + 1.0), 0.5 * width * w));
        }
    }
    rule
}

/// Maximizes a unimodal `f` on `[lo, hi]` by golden-section search; returns
/// `(argmax, max)`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// Volume of the unit ball in ℝⁿ, by the recursion `ω_n = 2π/n · ω_{n-2}`.
pub fn ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * ball_volume(n - 2),
    }
}

/// `(N-1)`-dimensional measure of the unit sphere `S^{N-1} ⊂ ℝᴺ`, i.e. `N ω_N`.
/// For `N = 1` this is the counting measure of `{±1}`.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * ball_volume(n)
}

/// Uniform sample on `(0, 1]`.
pub(crate) fn open01<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

pub(crate) fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1 = open01(rng);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Writes a uniformly distributed unit vector into `out`.
pub(crate) fn random_direction<R: Rng>(rng: &mut R, out: &mut [f64]) {
    match out.len() {
        1 => out[0] = if rng.random::<bool>() { 1.0 } else { -1.0 },
        2 => {
            let theta = 2.0 * PI * rng.random::<f64>();
            out[0] = theta.cos();
            out[1] = theta.sin();
        }
        _ => loop {
            for v in out.iter_mut() {
                *v = standard_normal(rng);
            }
            let norm = norm(out);
            if norm > 1e-12 {
                out.iter_mut().for_each(|v| *v /= norm);
                break;
            }
        },
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `out = x + t * dir`.
pub(crate) fn along(x: &[f64], dir: &[f64], t: f64, out: &mut [f64]) {
    for ((o, xi), di) in out.iter_mut().zip(x).zip(dir) {
        *o = xi + t * di;
    }
}
