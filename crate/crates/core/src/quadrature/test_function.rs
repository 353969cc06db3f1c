//! Compactly supported test functions with analytic gradients.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::geometry::{ConvexBody, Shape};
use crate::math::dist;
#[allow(unused_imports)]
use num_traits::Float;

#[cfg(feature = "serde")]
fn one() -> f64 {
    1.0
}

/// A nonnegative, continuous, compactly supported function on ℝᴺ.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum TestFunction {
    /// `k · max{0, 1 - |x - x₀|²/r²}^q`.
    RadialBump {
        center: Vec<f64>,
        radius: f64,
        q: f64,
        #[cfg_attr(feature = "serde", serde(default = "one"))]
        amplitude: f64,
    },
    /// `k · min{d_K(x), τ R_K}^β` on a bounded body, `β ≥ 1`.
    DistanceProfile {
        body: ConvexBody,
        beta: f64,
        tau: f64,
        #[cfg_attr(feature = "serde", serde(default = "one"))]
        amplitude: f64,
    },
    /// `k · Π_i max{0, 1 - ((x_i - c_i)/h_i)²}^q`.
    TensorBump {
        center: Vec<f64>,
        half_widths: Vec<f64>,
        q: f64,
        #[cfg_attr(feature = "serde", serde(default = "one"))]
        amplitude: f64,
    },
}

/// `max_{0≤t≤1} 2q t (1 - t²)^{q-1}`, the slope bound of `(1 - t²)^q`.
fn bump_slope(q: f64) -> f64 {
    if q == 1.0 {
        return 2.0;
    }
    let t2 = 1.0 / (2.0 * q - 1.0);
    2.0 * q * t2.sqrt() * (1.0 - t2).powf(q - 1.0)
}

fn bump_1d(t: f64, q: f64) -> f64 {
    let w = 1.0 - t * t;
    if w <= 0.0 {
        0.0
    } else {
        w.powf(q)
    }
}

impl TestFunction {
    pub fn radial_bump(center: Vec<f64>, radius: f64, q: f64) -> Result<Self> {
        let u = TestFunction::RadialBump {
            center,
            radius,
            q,
            amplitude: 1.0,
        };
        u.validate()?;
        Ok(u)
    }

    pub fn distance_profile(body: ConvexBody, beta: f64, tau: f64) -> Result<Self> {
        let u = TestFunction::DistanceProfile {
            body,
            beta,
            tau,
            amplitude: 1.0,
        };
        u.validate()?;
        Ok(u)
    }

    pub fn tensor_bump(center: Vec<f64>, half_widths: Vec<f64>, q: f64) -> Result<Self> {
        let u = TestFunction::TensorBump {
            center,
            half_widths,
            q,
            amplitude: 1.0,
        };
        u.validate()?;
        Ok(u)
    }

    /// Checks the parameter domain of the variant.
    pub fn validate(&self) -> Result<()> {
        let amplitude = self.amplitude();
        if !amplitude.is_finite() {
            return Err(invalid("amplitude", "must be finite"));
        }
        match self {
            TestFunction::RadialBump { center, radius, q, .. } => {
                if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
                    return Err(invalid("center", "must be a finite, nonempty point"));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(invalid("radius", "must be positive"));
                }
                if !(*q >= 1.0 && q.is_finite()) {
                    return Err(invalid("q", "bump exponent must be ≥ 1"));
                }
            }
            TestFunction::DistanceProfile { body, beta, tau, .. } => {
                if !body.is_bounded() {
                    return Err(Error::UnboundedBody);
                }
                if !(*beta >= 1.0 && beta.is_finite()) {
                    return Err(invalid(
                        "beta",
                        "profile exponent must be ≥ 1 for a finite Lipschitz constant",
                    ));
                }
                if !(*tau > 0.0 && *tau <= 1.0) {
                    return Err(invalid("tau", "cap must lie in (0, 1]"));
                }
            }
            TestFunction::TensorBump {
                center, half_widths, q, ..
            } => {
                if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
                    return Err(invalid("center", "must be a finite, nonempty point"));
                }
                if half_widths.len() != center.len() {
                    return Err(Error::DimensionMismatch {
                        expected: center.len(),
                        got: half_widths.len(),
                    });
                }
                if half_widths.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
                    return Err(invalid("half_widths", "must be positive"));
                }
                if !(*q >= 1.0 && q.is_finite()) {
                    return Err(invalid("q", "bump exponent must be ≥ 1"));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            TestFunction::RadialBump { center, .. } | TestFunction::TensorBump { center, .. } => center.len(),
            TestFunction::DistanceProfile { body, .. } => body.dim(),
        }
    }

    pub fn amplitude(&self) -> f64 {
        match self {
            TestFunction::RadialBump { amplitude, .. }
            | TestFunction::DistanceProfile { amplitude, .. }
            | TestFunction::TensorBump { amplitude, .. } => *amplitude,
        }
    }

    /// The same function multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            TestFunction::RadialBump { amplitude, .. }
            | TestFunction::DistanceProfile { amplitude, .. }
            | TestFunction::TensorBump { amplitude, .. } => *amplitude *= k,
        }
        out
    }

    /// `x ↦ u(x - v)`.
    pub fn translated(&self, v: &[f64]) -> Result<Self> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        let shift = |c: &[f64]| -> Vec<f64> { c.iter().zip(v).map(|(a, b)| a + b).collect() };
        let mut out = self.clone();
        match &mut out {
            TestFunction::RadialBump { center, .. } | TestFunction::TensorBump { center, .. } => {
                *center = shift(center)
            }
            TestFunction::DistanceProfile { body, .. } => *body = body.translated(v)?,
        }
        Ok(out)
    }

    /// `x ↦ u(x/λ)`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid("lambda", "dilation factor must be positive"));
        }
        let mut out = self.clone();
        match &mut out {
            TestFunction::RadialBump { center, radius, .. } => {
                center.iter_mut().for_each(|c| *c *= lambda);
                *radius *= lambda;
            }
            TestFunction::TensorBump {
                center, half_widths, ..
            } => {
                center.iter_mut().for_each(|c| *c *= lambda);
                half_widths.iter_mut().for_each(|h| *h *= lambda);
            }
            TestFunction::DistanceProfile {
                body, beta, amplitude, ..
            } => {
                // min{d_K(x/λ), τR}^β = λ^{-β} min{d_{λK}(x), τλR}^β
                *body = body.dilated(lambda)?;
                *amplitude *= lambda.powf(-*beta);
            }
        }
        Ok(out)
    }

    /// `u(x)`; exactly 0 outside the support.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::RadialBump {
                center,
                radius,
                q,
                amplitude,
            } => {
                let mut r2 = 0.0;
                for (xi, ci) in x.iter().zip(center) {
                    r2 += (xi - ci) * (xi - ci);
                }
                let w = 1.0 - r2 / (radius * radius);
                if w <= 0.0 {
                    0.0
                } else {
                    amplitude * w.powf(*q)
                }
            }
            TestFunction::DistanceProfile {
                body,
                beta,
                tau,
                amplitude,
            } => {
                let d = body.dist_unchecked(x);
                if d <= 0.0 {
                    0.0
                } else {
                    amplitude * d.min(tau * body.inradius()).powf(*beta)
                }
            }
            TestFunction::TensorBump {
                center,
                half_widths,
                q,
                amplitude,
            } => {
                let mut v = *amplitude;
                for ((xi, ci), hi) in x.iter().zip(center).zip(half_widths) {
                    v *= bump_1d((xi - ci) / hi, *q);
                    if v == 0.0 {
                        return 0.0;
                    }
                }
                v
            }
        }
    }

    /// `∇u(x)`, defined almost everywhere.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        match self {
            TestFunction::RadialBump {
                center,
                radius,
                q,
                amplitude,
            } => {
                let r2 = dist(x, center).powi(2) / (radius * radius);
                if r2 >= 1.0 {
                    return vec![0.0; n];
                }
                let factor = -2.0 * amplitude * q * (1.0 - r2).powf(q - 1.0) / (radius * radius);
                x.iter().zip(center).map(|(xi, ci)| factor * (xi - ci)).collect()
            }
            TestFunction::DistanceProfile {
                body,
                beta,
                tau,
                amplitude,
            } => {
                let d = body.dist_unchecked(x);
                if d <= 0.0 || d >= tau * body.inradius() {
                    return vec![0.0; n];
                }
                let grad_d = distance_gradient(body, x);
                let factor = amplitude * beta * d.powf(beta - 1.0);
                grad_d.into_iter().map(|g| factor * g).collect()
            }
            TestFunction::TensorBump {
                center,
                half_widths,
                q,
                amplitude,
            } => {
                let t: Vec<f64> = x
                    .iter()
                    .zip(center)
                    .zip(half_widths)
                    .map(|((xi, ci), hi)| (xi - ci) / hi)
                    .collect();
                let values: Vec<f64> = t.iter().map(|&ti| bump_1d(ti, *q)).collect();
                (0..n)
                    .map(|k| {
                        if t[k].abs() >= 1.0 {
                            return 0.0;
                        }
                        let slope = -2.0 * q * t[k] * (1.0 - t[k] * t[k]).powf(q - 1.0) / half_widths[k];
                        let rest: f64 = (0..n).filter(|&j| j != k).map(|j| values[j]).product();
                        amplitude * slope * rest
                    })
                    .collect()
            }
        }
    }

    /// Global Lipschitz constant of `u`.
    pub fn lipschitz(&self) -> f64 {
        match self {
            TestFunction::RadialBump {
                radius, q, amplitude, ..
            } => amplitude.abs() * bump_slope(*q) / radius,
            TestFunction::DistanceProfile {
                body,
                beta,
                tau,
                amplitude,
            } => amplitude.abs() * beta * (tau * body.inradius()).powf(beta - 1.0),
            TestFunction::TensorBump {
                half_widths,
                q,
                amplitude,
                ..
            } => {
                let s = bump_slope(*q);
                amplitude.abs() * half_widths.iter().map(|h| (s / h).powi(2)).sum::<f64>().sqrt()
            }
        }
    }

    /// Closed convex set containing the support, as a body whose closure it is.
    pub fn support_body(&self) -> ConvexBody {
        match self {
            TestFunction::RadialBump { center, radius, .. } => ConvexBody::new(Shape::Ball {
                center: center.clone(),
                radius: *radius,
            })
            .expect("validated bump"),
            TestFunction::DistanceProfile { body, .. } => body.clone(),
            TestFunction::TensorBump {
                center, half_widths, ..
            } => ConvexBody::new(Shape::Box {
                lower: center.iter().zip(half_widths).map(|(c, h)| c - h).collect(),
                upper: center.iter().zip(half_widths).map(|(c, h)| c + h).collect(),
            })
            .expect("validated bump"),
        }
    }

    /// Axis-aligned box containing the support.
    pub fn support_box(&self) -> (Vec<f64>, Vec<f64>) {
        self.support_body().bounding_box().expect("supports are bounded")
    }

    /// Diameter of the support.
    pub fn support_diameter(&self) -> f64 {
        self.support_body().box_diameter()
    }

    /// Whether the closed support lies in the open body `k`.
    pub fn support_inside(&self, k: &ConvexBody) -> bool {
        match self {
            TestFunction::RadialBump { center, radius, .. } => {
                k.contains(center).unwrap_or(false) && k.dist_unchecked(center) > *radius
            }
            TestFunction::TensorBump { .. } => {
                let (lo, hi) = self.support_box();
                let n = lo.len();
                (0..1usize << n).all(|mask| {
                    let corner: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] }).collect();
                    k.contains(&corner).unwrap_or(false)
                })
            }
            TestFunction::DistanceProfile { .. } => false,
        }
    }
}

/// Almost-everywhere gradient of `d_K` at an interior point.
pub(crate) fn distance_gradient(body: &ConvexBody, x: &[f64]) -> Vec<f64> {
    match body.nearest_boundary_point(x) {
        Ok(y) => {
            let d = dist(x, &y);
            if d == 0.0 {
                vec![0.0; x.len()]
            } else {
                x.iter().zip(&y).map(|(a, b)| (a - b) / d).collect()
            }
        }
        Err(_) => vec![0.0; x.len()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zoo() -> Vec<TestFunction> {
        let k = ConvexBody::ball(vec![0.0, 0.0], 1.5).unwrap();
        vec![
            TestFunction::radial_bump(vec![0.2, -0.1], 0.8, 2.0).unwrap(),
            TestFunction::radial_bump(vec![0.0, 0.0], 1.0, 1.0).unwrap(),
            TestFunction::distance_profile(k, 1.5, 0.5).unwrap(),
            TestFunction::tensor_bump(vec![0.0, 0.3], vec![0.5, 1.0], 2.5).unwrap(),
        ]
    }

    #[test]
    fn bump_values() {
        let u = TestFunction::radial_bump(vec![0.0], 1.0, 2.0).unwrap();
        assert_eq!(u.eval(&[0.0]), 1.0);
        assert_eq!(u.eval(&[0.5]), 0.5625);
        assert_eq!(u.eval(&[1.0]), 0.0);
        assert_eq!(u.eval(&[3.0]), 0.0);
        assert_eq!(u.scaled(0.0).eval(&[0.2]), 0.0);
    }

    #[test]
    fn zero_outside_support_box() {
        for u in zoo() {
            let (lo, hi) = u.support_box();
            let outside: Vec<f64> = hi.iter().map(|h| h + 1e-9).collect();
            assert_eq!(u.eval(&outside), 0.0);
            let below: Vec<f64> = lo.iter().map(|l| l - 1e-9).collect();
            assert_eq!(u.eval(&below), 0.0);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(TestFunction::radial_bump(vec![0.0], 1.0, 0.5).is_err());
        assert!(TestFunction::radial_bump(vec![0.0], -1.0, 2.0).is_err());
        let slab = ConvexBody::slab(vec![1.0], 0.0, 1.0).unwrap();
        assert_eq!(
            TestFunction::distance_profile(slab, 1.0, 0.5),
            Err(Error::UnboundedBody)
        );
        let ball = ConvexBody::ball(vec![0.0], 1.0).unwrap();
        assert!(TestFunction::distance_profile(ball, 0.5, 0.5).is_err());
    }

    #[test]
    fn support_containment() {
        let k = ConvexBody::interval(-2.0, 2.0).unwrap();
        assert!(TestFunction::radial_bump(vec![0.0], 1.0, 2.0)
            .unwrap()
            .support_inside(&k));
        assert!(!TestFunction::radial_bump(vec![1.0], 1.0, 2.0)
            .unwrap()
            .support_inside(&k));
    }

    #[test]
    fn dilation_matches_definition() {
        for u in zoo() {
            let v = u.dilated(2.0).unwrap();
            for x in [[0.1, 0.2], [-0.7, 0.4], [1.1, -0.3]] {
                let half = [x[0] / 2.0, x[1] / 2.0];
                assert!((v.eval(&x) - u.eval(&half)).abs() < 1e-13);
            }
        }
    }

    proptest! {
        #[test]
        fn gradient_matches_finite_differences(x0 in -1.2f64..1.2, x1 in -1.2f64..1.2) {
            let x = [x0, x1];
            for u in zoo() {
                let g = u.gradient(&x);
                let h = 1e-6;
                for k in 0..2 {
                    let mut xp = x;
                    let mut xm = x;
                    xp[k] += h;
                    xm[k] -= h;
                    let fd = (u.eval(&xp) - u.eval(&xm)) / (2.0 * h);
                    // skip points where a kink sits inside the stencil
                    let gp = u.gradient(&xp)[k];
                    let gm = u.gradient(&xm)[k];
                    if (gp - gm).abs() < 1e-3 {
                        prop_assert!((fd - g[k]).abs() <= 1e-6 * (1.0 + g[k].abs()), "{fd} vs {}", g[k]);
                    }
                }
            }
        }

        #[test]
        fn lipschitz_bound_holds(a in proptest::collection::vec(-1.5f64..1.5, 2), b in proptest::collection::vec(-1.5f64..1.5, 2)) {
            for u in zoo() {
                prop_assert!((u.eval(&a) - u.eval(&b)).abs() <= u.lipschitz() * dist(&a, &b) + 1e-12);
            }
        }
    }
}
