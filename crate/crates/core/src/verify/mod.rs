//! End-to-end checks of the Hardy inequality and its building blocks.
//!
//! Every check produces a [`VerificationReport`]. One-sided comparisons pass
//! when the margin is at least `-3σ`; deterministic (tensor-grid) estimates
//! carry `σ = 0` and get a relative allowance of [`DETERMINISTIC_REL`]
//! instead.

mod asymptotics;
mod eigen;
mod family;
mod hardy;
mod operator;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::constants::{formula, ConstantBundle};
use crate::geometry::Params;
use crate::quadrature::{IntegralEstimate, Method, QuadratureSpec};

pub use asymptotics::{verify_asymptotics_s_to_0, verify_asymptotics_s_to_1};
pub use eigen::{
    eigenvalue_lower_bound, eigenvalue_upper_bound, eigenvalue_upper_search, verify_eigen_sandwich, RayleighBound,
};
pub use family::{BumpFamily, SearchBudget};
pub use hardy::{estimate_sharp_constant, hardy_quotient, verify_hardy_campaign, SharpEstimate};
pub use operator::{
    depth_quantile_points, verify_expedient, verify_half_space_harmonicity, verify_superharmonicity, Epsilons,
    HALF_SPACE_TOL,
};

/// Number of standard errors a one-sided check may miss by.
pub const SIGMA_ALLOWANCE: f64 = 3.0;

/// Relative allowance for deterministic estimates.
pub const DETERMINISTIC_REL: f64 = 1e-6;

/// Which side of the bound the value must lie on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Sense {
    AtLeast,
    AtMost,
}

/// A constant together with the formula it came from.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConstantValue {
    pub value: f64,
    pub formula: String,
}

/// One point of a trace, e.g. the operator value at one `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeriesPoint {
    pub x: f64,
    pub value: f64,
    pub std_error: f64,
}

/// Structured outcome of one check.
///
/// `margin` is measured in the units of `bound` and is positive when the
/// inequality holds: `value - bound` for lower bounds, `bound - value` for
/// upper bounds. `sigma_margin` is `margin / std_error`, absent for
/// deterministic estimates.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub check_name: String,
    pub params: Params,
    pub body: String,
    pub inputs_digest: String,
    pub method: Method,
    pub estimates: BTreeMap<String, IntegralEstimate>,
    pub constants: BTreeMap<String, ConstantValue>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Vec::is_empty"))]
    pub series: Vec<SeriesPoint>,
    pub sense: Sense,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub std_error: f64,
    pub sigma_margin: Option<f64>,
    pub allowance: f64,
    /// Extra conditions beyond the margin (monotone traces); all must hold.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "BTreeMap::is_empty"))]
    pub conditions: BTreeMap<String, bool>,
    pub passed: bool,
    pub seed: u64,
    pub c3_choice: f64,
    /// Filled in by callers that time their runs.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub wall_time: Option<f64>,
}

impl VerificationReport {
    pub(crate) fn new(check_name: &str, params: Params, body: String, spec: &QuadratureSpec, c3_choice: f64) -> Self {
        Self {
            check_name: check_name.to_string(),
            params,
            body,
            inputs_digest: String::new(),
            method: spec.method,
            estimates: BTreeMap::new(),
            constants: BTreeMap::new(),
            series: Vec::new(),
            sense: Sense::AtLeast,
            value: 0.0,
            bound: 0.0,
            margin: 0.0,
            std_error: 0.0,
            sigma_margin: None,
            allowance: 0.0,
            conditions: BTreeMap::new(),
            passed: false,
            seed: spec.seed,
            c3_choice,
            wall_time: None,
        }
    }

    pub(crate) fn estimate(&mut self, name: &str, e: IntegralEstimate) -> &mut Self {
        self.estimates.insert(name.to_string(), e);
        self
    }

    pub(crate) fn constant(&mut self, name: &str, value: f64, formula: &str) -> &mut Self {
        self.constants.insert(
            name.to_string(),
            ConstantValue {
                value,
                formula: formula.to_string(),
            },
        );
        self
    }

    pub(crate) fn hardy_constants(&mut self, k: &ConstantBundle) -> &mut Self {
        self.constant("C1", k.c1, formula::C1)
            .constant("C2", k.c2, k.c2_formula())
            .constant("C3", k.c3, k.c2_formula())
            .constant("A", k.a_const, formula::A)
            .constant("B", k.b_const, formula::B)
            .constant("curly_C", k.curly_c, formula::CURLY_C)
    }

    pub(crate) fn condition(&mut self, name: &str, holds: bool) -> &mut Self {
        self.conditions.insert(name.to_string(), holds);
        self
    }

    /// Fixes the comparison and derives margin, allowance and the verdict.
    pub(crate) fn decide(&mut self, sense: Sense, value: f64, bound: f64, std_error: f64, inputs: &str) -> &mut Self {
        self.sense = sense;
        self.value = value;
        self.bound = bound;
        self.std_error = std_error;
        self.margin = match sense {
            Sense::AtLeast => value - bound,
            Sense::AtMost => bound - value,
        };
        self.allowance = if std_error > 0.0 {
            SIGMA_ALLOWANCE * std_error
        } else {
            DETERMINISTIC_REL * value.abs().max(bound.abs())
        };
        self.sigma_margin = (std_error > 0.0).then(|| self.margin / std_error);
        self.passed = self.margin.is_finite() && self.margin >= -self.allowance && self.conditions.values().all(|&c| c);
        self.inputs_digest = digest(&alloc::format!(
            "{}|{:?}|{}|{:?}|{}|{}",
            self.check_name,
            self.params,
            self.body,
            self.method,
            self.seed,
            inputs
        ));
        self
    }
}

/// FNV-1a over the canonical input description, as 16 hex digits.
fn digest(text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    alloc::format!("{h:016x}")
}

/// `x_{i+1} < x_i` up to `3σ` of the pair, strictly when both are exact.
pub(crate) fn decreasing(points: &[(f64, f64)]) -> bool {
    points.windows(2).all(|w| {
        let slack = SIGMA_ALLOWANCE * w[0].1.hypot(w[1].1);
        w[1].0 < w[0].0 + slack
    })
}
