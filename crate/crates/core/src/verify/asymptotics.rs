use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{decreasing, Sense, SeriesPoint, VerificationReport};
use crate::constants::{alpha_const, beta_const, formula};
use crate::error::{invalid, Result};
use crate::geometry::Params;
use crate::quadrature::exec::Executor;
use crate::quadrature::{
    gagliardo_seminorm_p, grad_lp_norm_p, lp_norm_p, IntegralEstimate, QuadratureSpec, TestFunction,
};

/// Largest relative deviation accepted at the last point of the sequence.
pub const FINAL_TOL: f64 = 0.10;

enum Limit {
    One,
    Zero,
}

/// `(1-s)[u]ᵖ → α_{N,p} ∫|∇u|ᵖ` as `s → 1`: the relative deviation must
/// decrease along `s_sequence` and end at most 10% (within `3σ`).
pub fn verify_asymptotics_s_to_1<E: Executor>(
    u: &TestFunction,
    p: f64,
    s_sequence: &[f64],
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<VerificationReport> {
    run(Limit::One, u, p, s_sequence, spec, exec)
}

/// `s[u]ᵖ → β_{N,p} ∫|u|ᵖ` as `s → 0`, judged like
/// [`verify_asymptotics_s_to_1`].
pub fn verify_asymptotics_s_to_0<E: Executor>(
    u: &TestFunction,
    p: f64,
    s_sequence: &[f64],
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<VerificationReport> {
    run(Limit::Zero, u, p, s_sequence, spec, exec)
}

fn run<E: Executor>(
    limit: Limit,
    u: &TestFunction,
    p: f64,
    s_sequence: &[f64],
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<VerificationReport> {
    if s_sequence.is_empty() {
        return Err(invalid("s_sequence", "need at least one s"));
    }
    let n = u.dim();
    let (name, constant, target, const_name, const_formula) = match limit {
        Limit::One => (
            "asymptotics_s_to_1",
            alpha_const(n, p)?,
            grad_lp_norm_p(u, p, spec, exec)?,
            "alpha",
            formula::ALPHA,
        ),
        Limit::Zero => (
            "asymptotics_s_to_0",
            beta_const(n, p)?,
            lp_norm_p(u, p, spec, exec)?,
            "beta",
            formula::BETA,
        ),
    };
    let limit_value = constant * target.value;
    if !(limit_value > 0.0) {
        return Err(crate::Error::Degenerate(format!("the limit {name} vanishes")));
    }
    let mut points = Vec::with_capacity(s_sequence.len());
    let mut last = IntegralEstimate::default();
    for &s in s_sequence {
        let params = Params::new(n, p, s)?;
        let seminorm = gagliardo_seminorm_p(u, &params, spec, exec)?;
        let factor = match limit {
            Limit::One => 1.0 - s,
            Limit::Zero => s,
        };
        let scaled = factor * seminorm.value;
        let dev = (scaled - limit_value).abs() / limit_value;
        let sigma = (factor * seminorm.std_error).hypot(scaled * target.std_error / target.value) / limit_value;
        points.push(SeriesPoint {
            x: s,
            value: dev,
            std_error: sigma,
        });
        last = seminorm;
    }
    let final_point = points[points.len() - 1];
    let s_last = final_point.x;
    let mut r = VerificationReport::new(name, Params::new(n, p, s_last)?, format!("{u:?}"), spec, 0.0);
    r.estimate("seminorm_p_last", last)
        .estimate("limit_integral", target)
        .constant(const_name, constant, const_formula)
        .condition(
            "decreasing",
            decreasing(&points.iter().map(|q| (q.value, q.std_error)).collect::<Vec<_>>()),
        );
    r.series = points;
    r.decide(
        Sense::AtMost,
        final_point.value,
        FINAL_TOL,
        final_point.std_error,
        &format!("{s_sequence:?}"),
    );
    Ok(r)
}
