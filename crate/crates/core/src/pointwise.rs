//! `J_p` and residual checkers for the pointwise inequalities behind the
//! Hardy constant, plus a seeded sampling suite over all of them.
//!
//! Every checker returns the two sides as written and a residual oriented so
//! that `residual ≥ 0` means the inequality holds.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::constants::constants_c2_c3;
use crate::error::{invalid, Result};
use crate::quadrature::exec::{batch_len, batch_rng, batches, derive_seed, tag_of, Executor};

/// Evaluated sides of one inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Residual {
    pub lhs: f64,
    pub rhs: f64,
    /// Larger side minus smaller side as the inequality is stated.
    pub residual: f64,
    pub equality_expected: bool,
}

impl Residual {
    fn le(lhs: f64, rhs: f64, equality_expected: bool) -> Self {
        Self {
            lhs,
            rhs,
            residual: rhs - lhs,
            equality_expected,
        }
    }

    fn ge(lhs: f64, rhs: f64, equality_expected: bool) -> Self {
        Self {
            lhs,
            rhs,
            residual: lhs - rhs,
            equality_expected,
        }
    }

    /// `residual / max(1, |lhs|, |rhs|)`.
    pub fn relative(&self) -> f64 {
        self.residual / 1f64.max(self.lhs.abs()).max(self.rhs.abs())
    }
}

/// `J_p(t) = |t|^{p-2} t`, with `J_p(0) = 0`.
pub fn j_p(t: f64, p: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t.abs().powf(p - 1.0).copysign(t)
    }
}

fn positive(v: f64, name: &'static str) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(invalid(name, format!("must be positive and finite, got {v}")));
    }
    Ok(())
}

fn nonneg(v: f64, name: &'static str) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(invalid(name, format!("must be nonnegative and finite, got {v}")));
    }
    Ok(())
}

fn exponent(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(invalid("p", format!("need 1 < p < ∞, got {p}")));
    }
    Ok(())
}

/// `J_p(a-b)(b^{1-p} - a^{1-p})`, evaluated through `expm1` so that nearby
/// `a`, `b` do not cancel.
fn log_lhs(a: f64, b: f64, p: f64) -> f64 {
    let l = b.ln() - a.ln();
    let diff = a.powf(1.0 - p) * ((1.0 - p) * l).exp_m1();
    j_p(a - b, p) * diff
}

/// `J_p(a-b)(b^{1-p} - a^{1-p}) ≥ (p-1)|log b - log a|^p`, equality iff `a = b`.
pub fn check_log_inequality(a: f64, b: f64, p: f64) -> Result<Residual> {
    positive(a, "a")?;
    positive(b, "b")?;
    exponent(p)?;
    let rhs = (p - 1.0) * (b.ln() - a.ln()).abs().powf(p);
    Ok(Residual::ge(log_lhs(a, b, p), rhs, a == b))
}

/// `|a-b|/(a+b) ≤ |log a - log b|`, equality iff `a = b`.
pub fn check_fraction_vs_log(a: f64, b: f64) -> Result<Residual> {
    positive(a, "a")?;
    positive(b, "b")?;
    let lhs = (a - b).abs() / (a + b);
    let rhs = (a.ln() - b.ln()).abs();
    Ok(Residual::le(lhs, rhs, a == b))
}

/// `J_p(a-b)(b^{1-p} - a^{1-p}) ≥ (p-1)|(a-b)/(a+b)|^p`.
pub fn check_lucio(a: f64, b: f64, p: f64) -> Result<Residual> {
    positive(a, "a")?;
    positive(b, "b")?;
    exponent(p)?;
    let rhs = (p - 1.0) * ((a - b) / (a + b)).abs().powf(p);
    Ok(Residual::ge(log_lhs(a, b, p), rhs, a == b))
}

/// `|a^s - b^s|/(a^s + b^s) ≥ (s/2)|a-b|/max{a,b}`.
pub fn check_gufetti(a: f64, b: f64, s: f64) -> Result<Residual> {
    positive(a, "a")?;
    positive(b, "b")?;
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid("s", format!("need 0 < s < 1, got {s}")));
    }
    let (as_, bs) = (a.powf(s), b.powf(s));
    let lhs = (as_ - bs).abs() / (as_ + bs);
    let rhs = s / 2.0 * (a - b).abs() / a.max(b);
    Ok(Residual::ge(lhs, rhs, a == b))
}

fn picone_lhs(a: f64, b: f64, c: f64, d: f64, p: f64) -> f64 {
    j_p(a - b, p) * (c.powf(p) / a.powf(p - 1.0) - d.powf(p) / b.powf(p - 1.0))
}

/// `J_p(a-b)(c^p/a^{p-1} - d^p/b^{p-1}) ≤ |c-d|^p`.
pub fn check_picone_discrete(a: f64, b: f64, c: f64, d: f64, p: f64) -> Result<Residual> {
    positive(a, "a")?;
    positive(b, "b")?;
    nonneg(c, "c")?;
    nonneg(d, "d")?;
    exponent(p)?;
    let lhs = picone_lhs(a, b, c, d, p);
    let rhs = (c - d).abs().powf(p);
    Ok(Residual::le(lhs, rhs, a * d == b * c))
}

/// `J_p(a-b)(c^p/a^{p-1} - d^p/b^{p-1}) + C₂|(a-b)/(a+b)|^p (c^p + d^p) ≤ C₃|c-d|^p`.
#[allow(clippy::too_many_arguments)]
pub fn check_fundamental(a: f64, b: f64, c: f64, d: f64, p: f64, c2: f64, c3: f64) -> Result<Residual> {
    positive(a, "a")?;
    positive(b, "b")?;
    nonneg(c, "c")?;
    nonneg(d, "d")?;
    exponent(p)?;
    positive(c2, "c2")?;
    if !(c3 > 1.0 && c3.is_finite()) {
        return Err(invalid("c3", format!("need C₃ > 1, got {c3}")));
    }
    let lhs = picone_lhs(a, b, c, d, p) + c2 * ((a - b) / (a + b)).abs().powf(p) * (c.powf(p) + d.powf(p));
    let rhs = c3 * (c - d).abs().powf(p);
    Ok(Residual::le(lhs, rhs, a == b && c == d))
}

/// `(p-2)(s^p - A^p)/(1-s) - p A^p/s ≤ -p(p-1)A^p` for `0 < s < 1`,
/// `0 ≤ A ≤ 1`, `1 < p ≤ 2`.
pub fn check_rutto(s: f64, a: f64, p: f64) -> Result<Residual> {
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid("s", format!("need 0 < s < 1, got {s}")));
    }
    if !(0.0..=1.0).contains(&a) {
        return Err(invalid("A", format!("need 0 ≤ A ≤ 1, got {a}")));
    }
    if !(p > 1.0 && p <= 2.0) {
        return Err(invalid("p", format!("need 1 < p ≤ 2, got {p}")));
    }
    let ap = a.powf(p);
    let lhs = (p - 2.0) * (s.powf(p) - ap) / (1.0 - s) - p * ap / s;
    let rhs = -p * (p - 1.0) * ap;
    Ok(Residual::le(lhs, rhs, false))
}

/// The inequalities covered by [`inequality_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Lemma {
    LogInequality,
    FractionVsLog,
    Lucio,
    Gufetti,
    Picone,
    Fundamental,
    Rutto,
}

impl Lemma {
    pub const ALL: [Lemma; 7] = [
        Lemma::LogInequality,
        Lemma::FractionVsLog,
        Lemma::Lucio,
        Lemma::Gufetti,
        Lemma::Picone,
        Lemma::Fundamental,
        Lemma::Rutto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::LogInequality => "log_inequality",
            Lemma::FractionVsLog => "fraction_vs_log",
            Lemma::Lucio => "lucio",
            Lemma::Gufetti => "gufetti",
            Lemma::Picone => "picone",
            Lemma::Fundamental => "fundamental",
            Lemma::Rutto => "rutto",
        }
    }

    /// Whether the inequality is asserted for this exponent.
    pub fn applies(self, p: f64) -> bool {
        self != Lemma::Rutto || p <= 2.0
    }
}

/// Relative residual below which a sample counts as a violation.
pub const VIOLATION_TOL: f64 = -1e-9;

/// Outcome of sampling one inequality.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LemmaSummary {
    pub lemma: Lemma,
    pub p: f64,
    pub samples: u64,
    pub violations: u64,
    pub worst_relative: f64,
    /// Arguments `(a, b, c, d)` of the worst sample; unused slots are 0.
    pub worst_input: [f64; 4],
}

impl LemmaSummary {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Draws one tuple for `lemma`: `a, b` log-uniform on `[1e-6, 1e6]`, `c, d`
/// uniform on `[0, 1e3]`; the `s`-type arguments of the power-ratio and
/// concavity checks uniform on `(0, 1)`, and `A` uniform on `[0, 1]`.
fn draw<R: Rng>(rng: &mut R, lemma: Lemma) -> [f64; 4] {
    let log_uniform = |rng: &mut R| 10f64.powf(-6.0 + 12.0 * rng.random::<f64>());
    let open = |rng: &mut R| loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    };
    match lemma {
        Lemma::Gufetti => [log_uniform(rng), log_uniform(rng), open(rng), 0.0],
        Lemma::Rutto => [open(rng), rng.random::<f64>(), 0.0, 0.0],
        Lemma::Picone | Lemma::Fundamental => [
            log_uniform(rng),
            log_uniform(rng),
            1e3 * rng.random::<f64>(),
            1e3 * rng.random::<f64>(),
        ],
        _ => [log_uniform(rng), log_uniform(rng), 0.0, 0.0],
    }
}

fn evaluate(lemma: Lemma, x: [f64; 4], p: f64, c2: f64, c3: f64) -> Result<Residual> {
    match lemma {
        Lemma::LogInequality => check_log_inequality(x[0], x[1], p),
        Lemma::FractionVsLog => check_fraction_vs_log(x[0], x[1]),
        Lemma::Lucio => check_lucio(x[0], x[1], p),
        Lemma::Gufetti => check_gufetti(x[0], x[1], x[2]),
        Lemma::Picone => check_picone_discrete(x[0], x[1], x[2], x[3], p),
        Lemma::Fundamental => check_fundamental(x[0], x[1], x[2], x[3], p, c2, c3),
        Lemma::Rutto => check_rutto(x[0], x[1], p),
    }
}

/// Samples every applicable inequality `samples` times at exponent `p`, using
/// `(C₂, C₃)` from [`constants_c2_c3`] for the fundamental inequality.
pub fn inequality_suite<E: Executor>(
    exec: &E,
    p: f64,
    samples: usize,
    seed: u64,
    c3_choice: f64,
) -> Result<Vec<LemmaSummary>> {
    let (c2, c3) = constants_c2_c3(p, c3_choice)?;
    let mut out = Vec::new();
    for (index, lemma) in Lemma::ALL.into_iter().enumerate() {
        if !lemma.applies(p) {
            continue;
        }
        out.push(sample_lemma(exec, lemma, p, samples, seed, index as u64, c2, c3)?);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn sample_lemma<E: Executor>(
    exec: &E,
    lemma: Lemma,
    p: f64,
    samples: usize,
    seed: u64,
    index: u64,
    c2: f64,
    c3: f64,
) -> Result<LemmaSummary> {
    let stream = derive_seed(seed, tag_of(&[index, p.to_bits()]));
    let parts = exec.map(batches(samples), |b| -> Result<(u64, f64, [f64; 4])> {
        let mut rng = batch_rng(stream, b);
        let mut violations = 0;
        let mut worst = (f64::INFINITY, [0.0; 4]);
        for _ in 0..batch_len(samples, b) {
            let x = draw(&mut rng, lemma);
            let r = evaluate(lemma, x, p, c2, c3)?.relative();
            if !(r >= VIOLATION_TOL) {
                violations += 1;
            }
            if !(r >= worst.0) {
                worst = (r, x);
            }
        }
        Ok((violations, worst.0, worst.1))
    });
    let mut summary = LemmaSummary {
        lemma,
        p,
        samples: samples as u64,
        violations: 0,
        worst_relative: f64::INFINITY,
        worst_input: [0.0; 4],
    };
    for part in parts {
        let (violations, worst, input) = part?;
        summary.violations += violations;
        if !(worst >= summary.worst_relative) {
            summary.worst_relative = worst;
            summary.worst_input = input;
        }
    }
    Ok(summary)
}
