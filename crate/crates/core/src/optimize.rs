//! Bounded Nelder–Mead simplex minimization with seeded restarts.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Options for [`nelder_mead`].
#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    /// Total budget of objective evaluations across all restarts.
    pub max_evals: usize,
    /// Stop a run when the spread of simplex values falls below this; a
    /// negative value disables the test, which helps on plateaus.
    pub ftol: f64,
    /// Stop a run when the simplex diameter falls below this.
    pub xtol: f64,
    /// Edge length of the initial simplex, per coordinate.
    pub initial_step: Vec<f64>,
    /// Number of additional runs started from random points of the box.
    pub restarts: usize,
    /// Seed for the restart points.
    pub seed: u64,
}

impl NelderMeadOptions {
    pub fn new(initial_step: Vec<f64>) -> Self {
        Self {
            max_evals: 2000,
            ftol: 1e-12,
            xtol: 1e-10,
            initial_step,
            restarts: 3,
            seed: 0,
        }
    }
}

/// Outcome of a minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    /// `true` when the last run met its tolerances before the budget ran out.
    pub converged: bool,
}

fn clamp_into(x: &mut [f64], bounds: Option<&[(f64, f64)]>) {
    if let Some(b) = bounds {
        for (v, (lo, hi)) in x.iter_mut().zip(b) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

struct Counter<'a, F> {
    f: &'a mut F,
    evals: usize,
    history_best: f64,
    best_x: Vec<f64>,
}

impl<F: FnMut(&[f64]) -> f64> Counter<'_, F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.f)(x);
        // non-finite values count as +∞ so they lose every comparison
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v < self.history_best {
            self.history_best = v;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
        }
        v
    }
}

fn run<F: FnMut(&[f64]) -> f64>(
    counter: &mut Counter<'_, F>,
    x0: &[f64],
    bounds: Option<&[(f64, f64)]>,
    opts: &NelderMeadOptions,
    budget: usize,
) -> bool {
    let n = x0.len();
    let start_evals = counter.evals;
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut first = x0.to_vec();
    clamp_into(&mut first, bounds);
    simplex.push(first.clone());
    for i in 0..n {
        let mut v = first.clone();
        let step = opts.initial_step.get(i).copied().unwrap_or(1.0);
        v[i] += step;
        if let Some(b) = bounds {
            if v[i] > b[i].1 {
                v[i] = first[i] - step;
            }
        }
        clamp_into(&mut v, bounds);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| counter.eval(v)).collect();
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    loop {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second = order[n - 1];
        let spread = (values[worst] - values[best]).abs();
        let diameter = simplex
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (spread <= opts.ftol * (1.0 + values[best].abs()) && values[best].is_finite()) || diameter <= opts.xtol {
            return true;
        }
        if counter.evals - start_evals >= budget {
            return false;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..n] {
            for (c, v) in centroid.iter_mut().zip(&simplex[i]) {
                *c += v / n as f64;
            }
        }
        let point = |coef: f64, out: &mut Vec<f64>, simplex: &Vec<Vec<f64>>| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(&simplex[worst]) {
                *o = c + coef * (c - w);
            }
            clamp_into(out, bounds);
        };

        point(1.0, &mut trial, &simplex);
        let fr = counter.eval(&trial);
        if fr < values[best] {
            point(2.0, &mut trial2, &simplex);
            let fe = counter.eval(&trial2);
            if fe < fr {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = fe;
            } else {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst].copy_from_slice(&trial);
            values[worst] = fr;
            continue;
        }
        let (coef, reference) = if fr < values[worst] {
            (0.5, fr)
        } else {
            (-0.5, values[worst])
        };
        point(coef, &mut trial2, &simplex);
        let fc = counter.eval(&trial2);
        if fc < reference {
            simplex[worst].copy_from_slice(&trial2);
            values[worst] = fc;
            continue;
        }
        // shrink towards the best vertex
        let anchor = simplex[best].clone();
        for &i in &order[1..] {
            for (v, a) in simplex[i].iter_mut().zip(&anchor) {
                *v = a + 0.5 * (*v - a);
            }
            values[i] = counter.eval(&simplex[i]);
        }
    }
}

/// Minimizes `f` starting from `x0`, optionally inside the box `bounds`.
///
/// After the first run, `opts.restarts` further runs start from seeded random
/// points of the box (or from the incumbent when unbounded); a final run
/// polishes the incumbent. The returned point is the best ever evaluated.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    bounds: Option<&[(f64, f64)]>,
    opts: &NelderMeadOptions,
) -> Minimum {
    let mut counter = Counter {
        f: &mut f,
        evals: 0,
        history_best: f64::INFINITY,
        best_x: x0.to_vec(),
    };
    let runs = opts.restarts + 2;
    let share = (opts.max_evals / runs).max(x0.len() + 2);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut converged = run(&mut counter, x0, bounds, opts, share);
    for _ in 0..opts.restarts {
        if counter.evals >= opts.max_evals {
            break;
        }
        let start: Vec<f64> = match bounds {
            Some(b) => b.iter().map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>()).collect(),
            None => counter
                .best_x
                .iter()
                .zip(&opts.initial_step)
                .map(|(x, s)| x + s * (2.0 * rng.random::<f64>() - 1.0))
                .collect(),
        };
        let left = opts.max_evals.saturating_sub(counter.evals);
        run(&mut counter, &start, bounds, opts, share.min(left));
    }
    let left = opts.max_evals.saturating_sub(counter.evals);
    if left > x0.len() + 1 {
        let incumbent = counter.best_x.clone();
        converged = run(&mut counter, &incumbent, bounds, opts, left);
    }
    Minimum {
        x: counter.best_x,
        value: counter.history_best,
        evals: counter.evals,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let mut opts = NelderMeadOptions::new(vec![0.5, 0.5]);
        opts.max_evals = 5000;
        let m = nelder_mead(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            None,
            &opts,
        );
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4, "{m:?}");
    }

    #[test]
    fn respects_bounds() {
        let opts = NelderMeadOptions::new(vec![0.1]);
        let bounds = [(0.5, 2.0)];
        let m = nelder_mead(|x| x[0] * x[0], &[1.5], Some(&bounds), &opts);
        assert!((m.x[0] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn never_worse_than_start() {
        let opts = NelderMeadOptions::new(vec![0.3, 0.3]);
        let f = |x: &[f64]| (x[0] * 3.0).sin() + (x[1] * 2.0).cos() + 0.1 * x[0] * x[0];
        let start = [0.2, -0.4];
        let m = nelder_mead(f, &start, None, &opts);
        assert!(m.value <= f(&start));
    }
}
