use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::family::{search, BumpFamily, SearchBudget};
use super::{Sense, VerificationReport};
use crate::constants::ConstantBundle;
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Params};
use crate::quadrature::exec::{derive_seed, tag_of, Executor};
use crate::quadrature::{gagliardo_seminorm_p, hardy_weighted_norm, QuadratureSpec, TestFunction};

const CAMPAIGN: u64 = 0x48_4152_4459;

/// `[u]ᵖ / ∫_K |u|ᵖ/d_K^{sp}` with its delta-method error, and the report
/// comparing `s(1-s)·quotient` with `𝒞`.
pub fn hardy_quotient<E: Executor>(
    u: &TestFunction,
    k: &ConvexBody,
    params: &Params,
    spec: &QuadratureSpec,
    exec: &E,
    c3_choice: f64,
) -> Result<(f64, VerificationReport)> {
    let constants = ConstantBundle::compute(params.dim, params.p, c3_choice)?;
    let seminorm = gagliardo_seminorm_p(u, params, spec, exec)?;
    let weighted = hardy_weighted_norm(u, k, params, spec, exec)?;
    if !(weighted.value > 0.0) {
        return Err(Error::Degenerate(String::from("the Hardy-weighted norm of u vanishes")));
    }
    let q = seminorm.value / weighted.value;
    let rel =
        (seminorm.std_error / seminorm.value.abs().max(f64::MIN_POSITIVE)).hypot(weighted.std_error / weighted.value);
    let sigma = q.abs() * rel;
    let w = params.s * (1.0 - params.s);
    let mut report = VerificationReport::new("hardy_quotient", *params, k.descriptor(), spec, constants.c3_choice);
    report
        .estimate("seminorm_p", seminorm)
        .estimate("hardy_weighted_norm", weighted)
        .hardy_constants(&constants)
        .constant("quotient", q, "[u]^p / int |u|^p d^-sp")
        .decide(Sense::AtLeast, w * q, constants.curly_c, w * sigma, &format!("{u:?}"));
    Ok((q, report))
}

/// One report per `(u, s, p)`, in input order with `u` outermost. Each cell
/// draws from its own seed derived from `spec.seed` and the cell index.
pub fn verify_hardy_campaign<E: Executor>(
    k: &ConvexBody,
    family: &[TestFunction],
    s_grid: &[f64],
    p_grid: &[f64],
    spec: &QuadratureSpec,
    exec: &E,
    c3_choice: f64,
) -> Result<Vec<VerificationReport>> {
    for u in family {
        if u.dim() != k.dim() {
            return Err(Error::DimensionMismatch {
                expected: k.dim(),
                got: u.dim(),
            });
        }
    }
    let cells: Vec<(usize, f64, f64)> = (0..family.len())
        .flat_map(|i| s_grid.iter().flat_map(move |&s| p_grid.iter().map(move |&p| (i, s, p))))
        .collect();
    exec.map(cells.len(), |c| {
        let (i, s, p) = cells[c];
        let params = Params::new(k.dim(), p, s)?;
        let cell_spec = spec
            .clone()
            .with_seed(derive_seed(spec.seed, tag_of(&[CAMPAIGN, c as u64])));
        hardy_quotient(&family[i], k, &params, &cell_spec, exec, c3_choice).map(|r| r.1)
    })
    .into_iter()
    .collect()
}

/// Outcome of [`estimate_sharp_constant`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SharpEstimate {
    /// Smallest `s(1-s)·quotient` seen.
    pub best: f64,
    pub best_std_error: f64,
    /// Value at the starting member.
    pub initial: f64,
    pub argmin: Vec<f64>,
    pub argmin_description: String,
    pub evaluations: usize,
    /// `false` when the budget ran out before the simplex converged.
    pub converged: bool,
    pub report: VerificationReport,
}

/// Empirical infimum of `s(1-s)·[u]ᵖ/∫|u|ᵖ d_K^{-sp}` over a bump family.
///
/// All evaluations share `spec.seed`, so in Monte Carlo mode the objective is
/// a fixed function of the parameters (common random numbers).
#[allow(clippy::too_many_arguments)]
pub fn estimate_sharp_constant<E: Executor>(
    k: &ConvexBody,
    params: &Params,
    family: &BumpFamily,
    x0: Option<&[f64]>,
    budget: &SearchBudget,
    spec: &QuadratureSpec,
    exec: &E,
    c3_choice: f64,
) -> Result<SharpEstimate> {
    let w = params.s * (1.0 - params.s);
    let (best, initial) = search(family, k, x0, budget, spec.seed, |u| {
        hardy_quotient(u, k, params, spec, exec, c3_choice).map(|(q, _)| w * q)
    })?;
    let member = family.member(&best.x)?;
    let (_, mut report) = hardy_quotient(&member, k, params, spec, exec, c3_choice)?;
    report.check_name = String::from("sharp_constant");
    report.condition("not_above_start", best.value <= initial);
    let (value, bound, sigma) = (report.value, report.bound, report.std_error);
    report.decide(Sense::AtLeast, value, bound, sigma, &format!("{family:?}|{budget:?}"));
    Ok(SharpEstimate {
        best: best.value,
        best_std_error: sigma,
        initial,
        argmin_description: family.describe(&best.x),
        argmin: best.x,
        evaluations: best.evals,
        converged: best.converged,
        report,
    })
}
