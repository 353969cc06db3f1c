//! Parametrized test-function families for quotient minimization.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::geometry::ConvexBody;
use crate::optimize::{nelder_mead, Minimum, NelderMeadOptions};
use crate::quadrature::TestFunction;

/// Radial bumps `(1 - |x-c|²/r²)_+^q` with `(c, r, q)` in a box.
///
/// The parameter vector is `[c_1, …, c_N, r, q]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct BumpFamily {
    pub center_lower: Vec<f64>,
    pub center_upper: Vec<f64>,
    pub radius: (f64, f64),
    pub q: (f64, f64),
}

impl BumpFamily {
    /// A family whose centers range over the middle of the inscribed ball
    /// and whose radii reach up to `0.9·R_K`; unbounded directions of `K` are
    /// cut at distance `R_K` from the center.
    pub fn inside(k: &ConvexBody) -> Result<Self> {
        let r = k.inradius();
        if !r.is_finite() {
            return Err(crate::Error::UnboundedBody);
        }
        let c = k
            .inradius_center()
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| k.interior_point());
        Ok(Self {
            center_lower: c.iter().map(|x| x - 0.5 * r).collect(),
            center_upper: c.iter().map(|x| x + 0.5 * r).collect(),
            radius: (0.05 * r, 0.9 * r),
            q: (1.0, 4.0),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.center_lower.is_empty() || self.center_lower.len() != self.center_upper.len() {
            return Err(invalid(
                "center_lower",
                "center bounds must be non-empty and of equal length",
            ));
        }
        let ordered = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo <= hi;
        for (lo, hi) in self.center_lower.iter().zip(&self.center_upper) {
            if !ordered((*lo, *hi)) {
                return Err(invalid("center_upper", format!("bad center range [{lo}, {hi}]")));
            }
        }
        if !(ordered(self.radius) && self.radius.0 > 0.0) {
            return Err(invalid("radius", format!("need 0 < lo ≤ hi, got {:?}", self.radius)));
        }
        if !(ordered(self.q) && self.q.0 >= 1.0) {
            return Err(invalid("q", format!("need 1 ≤ lo ≤ hi, got {:?}", self.q)));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.center_lower.len()
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        let mut b: Vec<(f64, f64)> = self
            .center_lower
            .iter()
            .copied()
            .zip(self.center_upper.iter().copied())
            .collect();
        b.push(self.radius);
        b.push(self.q);
        b
    }

    /// Midpoint of the parameter box.
    pub fn midpoint(&self) -> Vec<f64> {
        self.bounds().iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect()
    }

    pub fn member(&self, x: &[f64]) -> Result<TestFunction> {
        let n = self.dim();
        TestFunction::radial_bump(x[..n].to_vec(), x[n], x[n + 1])
    }

    /// Human-readable description of the member at `x`.
    pub fn describe(&self, x: &[f64]) -> alloc::string::String {
        let n = self.dim();
        format!("radial_bump(center={:?}, radius={}, q={})", &x[..n], x[n], x[n + 1])
    }
}

/// Evaluation budget of a quotient search.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SearchBudget {
    pub max_evals: usize,
    pub restarts: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_evals: 200,
            restarts: 3,
        }
    }
}

/// Minimizes `objective` over the members of `family` compactly inside `k`,
/// starting from `x0` (default: box midpoint). Inadmissible points score `+∞`.
pub(crate) fn search<F: FnMut(&TestFunction) -> Result<f64>>(
    family: &BumpFamily,
    k: &ConvexBody,
    x0: Option<&[f64]>,
    budget: &SearchBudget,
    seed: u64,
    mut objective: F,
) -> Result<(Minimum, f64)> {
    family.validate()?;
    if family.dim() != k.dim() {
        return Err(crate::Error::DimensionMismatch {
            expected: k.dim(),
            got: family.dim(),
        });
    }
    let bounds = family.bounds();
    let start = x0.map(<[f64]>::to_vec).unwrap_or_else(|| family.midpoint());
    let mut failure = None;
    let mut eval = |x: &[f64]| -> f64 {
        let Ok(u) = family.member(x) else {
            return f64::INFINITY;
        };
        if !u.support_inside(k) {
            return f64::INFINITY;
        }
        match objective(&u) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        }
    };
    let initial = eval(&start);
    if !initial.is_finite() {
        return Err(invalid(
            "family",
            "the starting member is not compactly supported in the body",
        ));
    }
    let mut opts = NelderMeadOptions::new(bounds.iter().map(|(lo, hi)| 0.25 * (hi - lo)).collect());
    opts.max_evals = budget.max_evals.max(1);
    opts.restarts = budget.restarts;
    opts.seed = seed;
    opts.ftol = -1.0;
    opts.xtol = 1e-6;
    let best = nelder_mead(&mut eval, &start, Some(&bounds), &opts);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((best, initial))
}
