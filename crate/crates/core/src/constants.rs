//! Explicit constants: cap measures, `C₁`, `(C₂, C₃)`, `A`, `B`, the
//! combined Hardy constant `𝒞`, the asymptotic constants `α`, `β`, and the
//! sharp local constant `((p-1)/p)^p`.

use alloc::format;

use crate::error::{invalid, Result};
use crate::math::{ball_volume, golden_section_max, integrate, sphere_area};
#[allow(unused_imports)]
use num_traits::Float;

/// Default `C₃` for `1 < p ≤ 2`.
pub const DEFAULT_C3: f64 = 2.0;

const QUAD_REL: f64 = 1e-12;
const QUAD_INTERVALS: usize = 4000;

fn check_dim(n: usize) -> Result<()> {
    if n < 1 {
        return Err(invalid("dim", "dimension must be at least 1"));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(invalid("p", format!("need 1 < p < ∞, got {p}")));
    }
    Ok(())
}

/// `ω_N = π^{N/2} / Γ(N/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    check_dim(n)?;
    Ok(ball_volume(n))
}

/// `f(σ) = H^{N-1}({ω ∈ S^{N-1} : ω₁ > σ})`; for `N = 1` the counting
/// measure of `{+1}`.
pub fn spherical_cap_measure(n: usize, sigma: f64) -> Result<f64> {
    check_dim(n)?;
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(invalid("sigma", format!("need 0 < σ < 1, got {sigma}")));
    }
    Ok(cap(n, sigma))
}

fn cap(n: usize, sigma: f64) -> f64 {
    match n {
        1 => 1.0,
        2 => 2.0 * sigma.acos(),
        3 => 2.0 * core::f64::consts::PI * (1.0 - sigma),
        _ => {
            let k = (n - 2) as i32;
            let q = integrate(|t| t.sin().powi(k), 0.0, sigma.acos(), QUAD_REL, 0.0, QUAD_INTERVALS);
            sphere_area(n - 1) * q.value
        }
    }
}

/// `C₁ = (1/p) sup_{0<σ<1} σᵖ f(σ)` with the maximizing `σ*`.
///
/// For `N = 1` the supremum is approached as `σ → 1` and `σ* = 1` is returned.
pub fn constant_c1(n: usize, p: f64) -> Result<(f64, f64)> {
    check_dim(n)?;
    check_p(p)?;
    if n == 1 {
        return Ok((1.0 / p, 1.0));
    }
    let (sigma, value) = golden_section_max(|s| s.powf(p) * cap(n, s), 0.0, 1.0, 1e-10);
    Ok((value / p, sigma))
}

/// `(C₂, C₃)` of the fundamental pointwise inequality.
///
/// For `1 < p ≤ 2`, `C₃ = c3_choice` and `C₂ = 2^{-(p+1)} min{p(p-1)²/4, C₃-1}`.
/// For `p > 2` the choice is fixed: `C₃ = 1 + (p-1) 2^{1/(p-1)} / 2ᵖ + 2^{-p}` and
/// `C₂ = min{(p-1)/2, (C₃-1)/2^{p+1}, 2^{-(p+2)}}`.
pub fn constants_c2_c3(p: f64, c3_choice: f64) -> Result<(f64, f64)> {
    check_p(p)?;
    if p <= 2.0 {
        if !(c3_choice > 1.0 && c3_choice.is_finite()) {
            return Err(invalid("c3", format!("need C₃ > 1, got {c3_choice}")));
        }
        let c2 = 2f64.powf(-(p + 1.0)) * (p * (p - 1.0).powi(2) / 4.0).min(c3_choice - 1.0);
        Ok((c2, c3_choice))
    } else {
        let c3 = 1.0 + (p - 1.0) * 2f64.powf(1.0 / (p - 1.0)) / 2f64.powf(p) + 2f64.powf(-p);
        let c2 = ((p - 1.0) / 2.0)
            .min((c3 - 1.0) / 2f64.powf(p + 1.0))
            .min(2f64.powf(-(p + 2.0)));
        Ok((c2, c3))
    }
}

/// `A = C₁/2^{p-1} · C₂/C₃`.
pub fn constant_a(n: usize, p: f64, c3_choice: f64) -> Result<f64> {
    let (c1, _) = constant_c1(n, p)?;
    let (c2, c3) = constants_c2_c3(p, c3_choice)?;
    Ok(c1 / 2f64.powf(p - 1.0) * (c2 / c3))
}

/// `B = (1/p) (N ω_N / 2) 3^{-N-p}`.
pub fn constant_b(n: usize, p: f64) -> Result<f64> {
    check_dim(n)?;
    check_p(p)?;
    Ok(sphere_area(n) / 2.0 * 3f64.powf(-(n as f64) - p) / p)
}

/// `Φ(s) = A s^{p+1} + (1 - s) B`.
pub fn phi(a: f64, b: f64, p: f64, s: f64) -> f64 {
    a * s.powf(p + 1.0) + (1.0 - s) * b
}

/// Minimum of `Φ/2` over `(0, 1]` in closed form, with the minimizer.
pub fn curly_c_from(a: f64, b: f64, p: f64) -> (f64, f64) {
    if b < (p + 1.0) * a {
        let s = (b / ((p + 1.0) * a)).powf(1.0 / p);
        (b / 2.0 * (1.0 - p / (p + 1.0) * s), s)
    } else {
        (a / 2.0, 1.0)
    }
}

/// The Hardy constant `𝒞 = min_{0<s≤1} Φ(s)/2` and its minimizer `s*`.
pub fn constant_curly_c(n: usize, p: f64, c3_choice: f64) -> Result<(f64, f64)> {
    let a = constant_a(n, p, c3_choice)?;
    let b = constant_b(n, p)?;
    Ok(curly_c_from(a, b, p))
}

/// Grid minimum of `Φ/2` on `points` equispaced nodes of `[0, 1]`, polished by
/// golden section inside the bracket of the best node. Cross-check for
/// [`curly_c_from`].
pub fn curly_c_grid(a: f64, b: f64, p: f64, points: usize) -> (f64, f64) {
    let points = points.max(3);
    let h = 1.0 / (points - 1) as f64;
    let mut best = (0.0, f64::INFINITY);
    for i in 0..points {
        let s = i as f64 * h;
        let v = phi(a, b, p, s) / 2.0;
        if v < best.1 {
            best = (s, v);
        }
    }
    let lo = (best.0 - h).max(0.0);
    let hi = (best.0 + h).min(1.0);
    let (s, neg) = golden_section_max(|s| -phi(a, b, p, s) / 2.0, lo, hi, 1e-14);
    if -neg < best.1 {
        (-neg, s)
    } else {
        (best.1, best.0)
    }
}

/// `α_{N,p} = (1/p) ∫_{S^{N-1}} |ω₁|ᵖ dH^{N-1}`.
pub fn alpha_const(n: usize, p: f64) -> Result<f64> {
    check_dim(n)?;
    check_p(p)?;
    if n == 1 {
        return Ok(2.0 / p);
    }
    let k = (n - 2) as i32;
    let half = core::f64::consts::FRAC_PI_2;
    let q = integrate(
        |t| t.cos().abs().powf(p) * t.sin().powi(k),
        0.0,
        half,
        QUAD_REL,
        0.0,
        QUAD_INTERVALS,
    );
    Ok(sphere_area(n - 1) * 2.0 * q.value / p)
}

/// `β_{N,p} = 2 N ω_N / p`.
pub fn beta_const(n: usize, p: f64) -> Result<f64> {
    check_dim(n)?;
    check_p(p)?;
    Ok(2.0 * sphere_area(n) / p)
}

/// `((p-1)/p)^p`.
pub fn local_sharp_constant(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(((p - 1.0) / p).powf(p))
}

/// Every constant for one `(N, p, C₃)` choice.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstantBundle {
    pub dim: usize,
    pub p: f64,
    pub c3_choice: f64,
    pub omega: f64,
    pub c1: f64,
    pub sigma_star: f64,
    pub c2: f64,
    pub c3: f64,
    pub a_const: f64,
    pub b_const: f64,
    pub curly_c: f64,
    pub s_star: f64,
    pub alpha: f64,
    pub beta: f64,
    pub local_sharp: f64,
}

/// Formula identifiers attached to emitted constants.
pub mod formula {
    pub const C1: &str = "C1 = (1/p) sup_s s^p f(s)";
    pub const C2_LOW: &str = "C2 = 2^-(p+1) min(p(p-1)^2/4, C3-1), C3 chosen";
    pub const C2_HIGH: &str = "C2 = min((p-1)/2, (C3-1)/2^(p+1), 2^-(p+2)), C3 = 1 + (p-1)2^(1/(p-1))/2^p + 2^-p";
    pub const A: &str = "A = C1/2^(p-1) * C2/C3";
    pub const B: &str = "B = (1/p)(N omega_N/2) 3^(-N-p)";
    pub const CURLY_C: &str = "C = min_s (A s^(p+1) + (1-s)B)/2";
    pub const ALPHA: &str = "alpha = (1/p) int_S |w_1|^p";
    pub const BETA: &str = "beta = 2 N omega_N / p";
    pub const LOCAL: &str = "((p-1)/p)^p";
}

impl ConstantBundle {
    pub fn compute(n: usize, p: f64, c3_choice: f64) -> Result<Self> {
        let (c1, sigma_star) = constant_c1(n, p)?;
        let (c2, c3) = constants_c2_c3(p, c3_choice)?;
        let a_const = c1 / 2f64.powf(p - 1.0) * (c2 / c3);
        let b_const = constant_b(n, p)?;
        let (curly_c, s_star) = curly_c_from(a_const, b_const, p);
        Ok(Self {
            dim: n,
            p,
            c3_choice: if p <= 2.0 { c3_choice } else { c3 },
            omega: ball_volume(n),
            c1,
            sigma_star,
            c2,
            c3,
            a_const,
            b_const,
            curly_c,
            s_star,
            alpha: alpha_const(n, p)?,
            beta: beta_const(n, p)?,
            local_sharp: local_sharp_constant(p)?,
        })
    }

    pub fn c2_formula(&self) -> &'static str {
        if self.p <= 2.0 {
            formula::C2_LOW
        } else {
            formula::C2_HIGH
        }
    }

    /// Lower bound `𝒞 / (s(1-s))` on the Hardy quotient.
    pub fn hardy_bound(&self, s: f64) -> f64 {
        self.curly_c / (s * (1.0 - s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn ball_volumes() {
        assert_eq!(unit_ball_volume(1).unwrap(), 2.0);
        assert!(rel(unit_ball_volume(2).unwrap(), PI) < 1e-15);
        assert!(rel(unit_ball_volume(3).unwrap(), 4.0 * PI / 3.0) < 1e-15);
        assert!(unit_ball_volume(0).is_err());
    }

    #[test]
    fn cap_closed_forms() {
        assert_eq!(spherical_cap_measure(1, 0.3).unwrap(), 1.0);
        assert!(rel(spherical_cap_measure(2, 0.5).unwrap(), 2.0 * PI / 3.0) < 1e-14);
        assert!(rel(spherical_cap_measure(3, 0.25).unwrap(), 1.5 * PI) < 1e-14);
        assert!(spherical_cap_measure(2, 1.0).is_err());
        assert!(spherical_cap_measure(2, 0.0).is_err());
    }

    #[test]
    fn cap_quadrature_branch_agrees_with_closed_forms() {
        // the generic branch at N = 4: |S²| ∫ sin²θ on [0, arccos σ]
        let sigma: f64 = 0.4;
        let t = sigma.acos();
        let exact = 4.0 * PI * (t / 2.0 - (2.0 * t).sin() / 4.0);
        assert!(rel(cap(4, sigma), exact) < 1e-12);
    }

    #[test]
    fn c1_examples() {
        for p in [1.5, 2.0, 3.0] {
            assert_eq!(constant_c1(1, p).unwrap().0, 1.0 / p);
        }
        let (c1, sigma) = constant_c1(3, 2.0).unwrap();
        assert!(rel(c1, 4.0 * PI / 27.0) < 1e-8);
        assert!((sigma - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn c2_c3_examples() {
        assert_eq!(constants_c2_c3(2.0, 2.0).unwrap(), (0.0625, 2.0));
        let (c2, c3) = constants_c2_c3(3.0, 2.0).unwrap();
        assert!((c3 - (1.125 + 2f64.sqrt() / 4.0)).abs() < 1e-15);
        assert!((c2 - (c3 - 1.0) / 16.0).abs() < 1e-15);
        assert!((c2 - 0.029910).abs() < 1e-6);
        assert!(constants_c2_c3(1.5, 1.0).is_err());
        assert!(constants_c2_c3(1.0, 2.0).is_err());
        assert!(constants_c2_c3(1.0 + 1e-6, 2.0).unwrap().0 < 1e-12);
    }

    #[test]
    fn a_b_examples() {
        assert!(rel(constant_a(1, 2.0, 2.0).unwrap(), 0.0078125) < 1e-15);
        // (4π/27)/2 · (1/16)/2
        assert!(rel(constant_a(3, 2.0, 2.0).unwrap(), PI / 432.0) < 1e-8);
        assert!(rel(constant_b(1, 2.0).unwrap(), 1.0 / 54.0) < 1e-15);
        assert!(rel(constant_b(2, 2.0).unwrap(), PI / 162.0) < 1e-15);
    }

    #[test]
    fn curly_c_example() {
        let (c, s) = constant_curly_c(1, 2.0, 2.0).unwrap();
        assert!(rel(s, 8.0 / 9.0) < 1e-12);
        assert!((c - 0.0037723).abs() < 1e-7);
        // the A/2 branch
        assert_eq!(curly_c_from(0.1, 0.5, 2.0), (0.05, 1.0));
    }

    #[test]
    fn alpha_beta_local() {
        assert_eq!(alpha_const(1, 2.0).unwrap(), 1.0);
        assert!(rel(alpha_const(2, 2.0).unwrap(), PI / 2.0) < 1e-12);
        assert!(rel(alpha_const(3, 2.0).unwrap(), 2.0 * PI / 3.0) < 1e-12);
        assert_eq!(beta_const(1, 2.0).unwrap(), 2.0);
        assert!(rel(beta_const(2, 2.0).unwrap(), 2.0 * PI) < 1e-15);
        assert!(rel(beta_const(2, 4.0).unwrap(), PI) < 1e-15);
        assert_eq!(local_sharp_constant(2.0).unwrap(), 0.25);
        assert!(rel(local_sharp_constant(3.0).unwrap(), 8.0 / 27.0) < 1e-15);
        assert!((local_sharp_constant(1e7).unwrap() - (-1.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn bundle_invariants() {
        for n in 1..=3 {
            for p in [1.5, 2.0, 3.0, 4.0] {
                let b = ConstantBundle::compute(n, p, DEFAULT_C3).unwrap();
                assert!(b.c3 > 1.0 && b.c2 > 0.0);
                assert!(b.a_const < b.c1);
                assert!(b.curly_c <= b.local_sharp * b.alpha);
                assert!(rel(b.a_const, b.c1 / 2f64.powf(p - 1.0) * b.c2 / b.c3) < 1e-15);
            }
        }
    }
}
