use alloc::format;
use alloc::string::String;

#[allow(unused_imports)]
use num_traits::Float;

use super::family::{search, BumpFamily, SearchBudget};
use super::{Sense, VerificationReport};
use crate::constants::ConstantBundle;
use crate::error::{invalid, Error, Result};
use crate::geometry::{ConvexBody, Params, Shape};
use crate::quadrature::exec::Executor;
use crate::quadrature::{gagliardo_seminorm_p, lp_norm_p, QuadratureSpec, TestFunction};

/// `𝒞 / (s(1-s) R_K^{sp}) ≤ λ^s_{1,p}(K)`.
///
/// For a slab `R_K = (ℓ₂-ℓ₁)/2`, which gives `𝒞 (2/(ℓ₂-ℓ₁))^{sp} / (s(1-s))`.
/// Other bodies of infinite inradius are rejected.
pub fn eigenvalue_lower_bound(k: &ConvexBody, params: &Params, c3_choice: f64) -> Result<f64> {
    let radius = match k.shape() {
        Shape::Slab { l1, l2, .. } => 0.5 * (l2 - l1),
        _ => k.inradius(),
    };
    if !radius.is_finite() {
        return Err(Error::UnboundedBody);
    }
    let constants = ConstantBundle::compute(params.dim, params.p, c3_choice)?;
    Ok(constants.hardy_bound(params.s) / radius.powf(params.sp()))
}

/// A Rayleigh-quotient upper bound on `λ^s_{1,p}(K)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RayleighBound {
    pub value: f64,
    pub std_error: f64,
    pub argmin_description: String,
    pub evaluations: usize,
}

fn rayleigh<E: Executor>(u: &TestFunction, params: &Params, spec: &QuadratureSpec, exec: &E) -> Result<(f64, f64)> {
    let num = gagliardo_seminorm_p(u, params, spec, exec)?;
    let den = lp_norm_p(u, params.p, spec, exec)?;
    if !(den.value > 0.0) {
        return Err(Error::Degenerate(String::from("the Lᵖ norm of u vanishes")));
    }
    let q = num.value / den.value;
    let rel = (num.std_error / num.value.abs().max(f64::MIN_POSITIVE)).hypot(den.std_error / den.value);
    Ok((q, q.abs() * rel))
}

/// `min [u]ᵖ / ∫|u|ᵖ` over `members`, each compactly supported in `K`.
pub fn eigenvalue_upper_bound<E: Executor>(
    k: &ConvexBody,
    params: &Params,
    members: &[TestFunction],
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<RayleighBound> {
    let mut best: Option<(f64, f64, usize)> = None;
    for (i, u) in members.iter().enumerate() {
        if !u.support_inside(k) {
            return Err(Error::SupportTouchesBoundary);
        }
        let (q, sigma) = rayleigh(u, params, spec, exec)?;
        if best.is_none_or(|b| q < b.0) {
            best = Some((q, sigma, i));
        }
    }
    let (value, std_error, i) = best.ok_or_else(|| invalid("members", "need at least one test function"))?;
    Ok(RayleighBound {
        value,
        std_error,
        argmin_description: format!("{:?}", members[i]),
        evaluations: members.len(),
    })
}

/// Nelder–Mead search of the Rayleigh quotient over a bump family, with
/// common random numbers across evaluations.
pub fn eigenvalue_upper_search<E: Executor>(
    k: &ConvexBody,
    params: &Params,
    family: &BumpFamily,
    budget: &SearchBudget,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<RayleighBound> {
    let (best, _) = search(family, k, None, budget, spec.seed, |u| {
        rayleigh(u, params, spec, exec).map(|r| r.0)
    })?;
    let (value, std_error) = rayleigh(&family.member(&best.x)?, params, spec, exec)?;
    Ok(RayleighBound {
        value,
        std_error,
        argmin_description: family.describe(&best.x),
        evaluations: best.evals,
    })
}

/// Checks `lower ≤ upper` within `3σ` of the upper bound.
#[allow(clippy::too_many_arguments)]
pub fn verify_eigen_sandwich<E: Executor>(
    k: &ConvexBody,
    params: &Params,
    family: &BumpFamily,
    budget: &SearchBudget,
    spec: &QuadratureSpec,
    exec: &E,
    c3_choice: f64,
) -> Result<VerificationReport> {
    let constants = ConstantBundle::compute(params.dim, params.p, c3_choice)?;
    let lower = eigenvalue_lower_bound(k, params, c3_choice)?;
    let upper = eigenvalue_upper_search(k, params, family, budget, spec, exec)?;
    let mut r = VerificationReport::new("eigen_sandwich", *params, k.descriptor(), spec, constants.c3_choice);
    r.hardy_constants(&constants)
        .constant("lower_bound", lower, "C / (s(1-s) R^sp)");
    r.decide(
        Sense::AtLeast,
        upper.value,
        lower,
        upper.std_error,
        &format!("{family:?}|{budget:?}|{}", upper.argmin_description),
    );
    Ok(r)
}
