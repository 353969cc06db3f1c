//! Single integrals over the support: `∫|u|ᵖ d_K^{-sp}`, `∫|u|ᵖ`, `∫|∇u|ᵖ`.

use alloc::vec;
use alloc::vec::Vec;

use super::exec::{batch_len, batch_rng, batches, derive_seed, Executor, Stats};
use super::{region_cubature, tags, IntegralEstimate, Method, QuadratureSpec, Region, TestFunction};
use crate::error::{invalid, Error, Result};
use crate::geometry::{ConvexBody, Params};
#[allow(unused_imports)]
use num_traits::Float;

fn check_dim(u: &TestFunction, n: usize) -> Result<()> {
    if u.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: u.dim(),
        });
    }
    Ok(())
}

/// `∫ f` over the support of `u`, where `f` vanishes off the support.
fn support_integral<E, F>(u: &TestFunction, spec: &QuadratureSpec, exec: &E, tag: u64, f: F) -> Result<IntegralEstimate>
where
    E: Executor,
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    spec.validate()?;
    let support = u.support_body();
    let region = Region::covering(&support)?;
    let n = u.dim();
    match spec.method {
        Method::TensorGrid => {
            let (value, evals) = region_cubature(&region, spec.grid_points_per_axis, spec.target_rel_error, |x| {
                if support.dist_unchecked(x) > 0.0 {
                    f(x)
                } else {
                    0.0
                }
            })?;
            Ok(IntegralEstimate::exact(value, evals, 0.0))
        }
        Method::MonteCarlo => {
            let total = spec.total_samples();
            let volume = region.volume();
            let seed = derive_seed(spec.seed, tag);
            let parts = exec.map(batches(total), |b| {
                let mut rng = batch_rng(seed, b);
                let mut x = vec![0.0; n];
                let mut stats = Stats::default();
                for _ in 0..batch_len(total, b) {
                    region.sample(&mut rng, &mut x);
                    let v = if support.dist_unchecked(&x) > 0.0 { f(&x) } else { 0.0 };
                    stats.push(volume * v);
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
    }
}

/// `∫_K |u|ᵖ d_K^{-sp} dx`.
///
/// The closed support of `u` must lie inside `K`, except for a distance
/// profile built on `K` itself, where the integrand `~ d^{p(β-s)}` stays bounded.
pub fn hardy_weighted_norm<E: Executor>(
    u: &TestFunction,
    k: &ConvexBody,
    params: &Params,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<IntegralEstimate> {
    check_dim(u, params.dim)?;
    if k.dim() != params.dim {
        return Err(Error::DimensionMismatch {
            expected: params.dim,
            got: k.dim(),
        });
    }
    let own_body = matches!(u, TestFunction::DistanceProfile { body, .. } if body == k);
    if !own_body && !u.support_inside(k) {
        return Err(Error::SupportTouchesBoundary);
    }
    let (p, sp) = (params.p, params.sp());
    support_integral(u, spec, exec, tags::HARDY, |x| {
        let d = k.dist_unchecked(x);
        if d <= 0.0 {
            return 0.0;
        }
        u.eval(x).abs().powf(p) * d.powf(-sp)
    })
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(invalid("p", "need 1 ≤ p < ∞"));
    }
    Ok(())
}

/// `∫ |u|ᵖ dx`.
pub fn lp_norm_p<E: Executor>(u: &TestFunction, p: f64, spec: &QuadratureSpec, exec: &E) -> Result<IntegralEstimate> {
    check_p(p)?;
    support_integral(u, spec, exec, tags::LP, |x| u.eval(x).abs().powf(p))
}

/// `∫ |∇u|ᵖ dx`.
pub fn grad_lp_norm_p<E: Executor>(
    u: &TestFunction,
    p: f64,
    spec: &QuadratureSpec,
    exec: &E,
) -> Result<IntegralEstimate> {
    check_p(p)?;
    support_integral(u, spec, exec, tags::GRAD_LP, |x| {
        let g: Vec<f64> = u.gradient(x);
        g.iter().map(|v| v * v).sum::<f64>().sqrt().powf(p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::exec::Sequential;

    fn bump1() -> TestFunction {
        TestFunction::radial_bump(vec![0.0], 1.0, 1.0).unwrap()
    }

    #[test]
    fn one_dimensional_closed_forms() {
        let spec = QuadratureSpec::tensor_grid(32);
        let lp = lp_norm_p(&bump1(), 2.0, &spec, &Sequential).unwrap();
        assert!((lp.value - 16.0 / 15.0).abs() < 1e-10);
        let grad = grad_lp_norm_p(&bump1(), 2.0, &spec, &Sequential).unwrap();
        assert!((grad.value - 8.0 / 3.0).abs() < 1e-10);
        let zero = lp_norm_p(&bump1().scaled(0.0), 2.0, &spec, &Sequential).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn monte_carlo_agrees_with_grid() {
        let u = TestFunction::radial_bump(vec![0.1, 0.0], 0.7, 2.0).unwrap();
        let grid = lp_norm_p(&u, 2.0, &QuadratureSpec::tensor_grid(32), &Sequential).unwrap();
        let mc = lp_norm_p(&u, 2.0, &QuadratureSpec::monte_carlo(1000, 100, 3), &Sequential).unwrap();
        assert!((mc.value - grid.value).abs() < 4.0 * mc.std_error);
        // ∫(1-r²/R²)^4 over a disc = πR²/5
        assert!((grid.value - core::f64::consts::PI * 0.49 / 5.0).abs() < 1e-10);
    }

    #[test]
    fn hardy_rejects_touching_support() {
        let k = ConvexBody::interval(-1.0, 1.0).unwrap();
        let params = Params::new(1, 2.0, 0.5).unwrap();
        let err = hardy_weighted_norm(&bump1(), &k, &params, &QuadratureSpec::tensor_grid(32), &Sequential);
        assert_eq!(err, Err(Error::SupportTouchesBoundary));
    }

    #[test]
    fn hardy_grows_when_body_shrinks() {
        let params = Params::new(1, 2.0, 0.5).unwrap();
        let spec = QuadratureSpec::tensor_grid(32);
        let wide = ConvexBody::interval(-3.0, 3.0).unwrap();
        let narrow = ConvexBody::interval(-2.0, 2.0).unwrap();
        let a = hardy_weighted_norm(&bump1(), &wide, &params, &spec, &Sequential).unwrap();
        let b = hardy_weighted_norm(&bump1(), &narrow, &params, &spec, &Sequential).unwrap();
        assert!(b.value > a.value);
    }
}
