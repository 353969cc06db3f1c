use hardy_core::Executor;
use rayon::prelude::*;

/// Runs jobs on a dedicated rayon pool. Results come back in index order, so
/// estimates are identical for every thread count.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    /// `None` uses one thread per logical core.
    pub fn new(threads: Option<usize>) -> Result<Self, rayon::ThreadPoolBuildError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n.max(1));
        }
        Ok(Self { pool: builder.build()? })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn map<T, F>(&self, n: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(job).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hardy_core::quadrature::gagliardo_seminorm_p;
    use hardy_core::{Params, QuadratureSpec, Sequential, TestFunction};

    #[test]
    fn matches_sequential_bit_for_bit() {
        let u = TestFunction::radial_bump(vec![0.0, 0.0], 1.0, 2.0).unwrap();
        let params = Params::new(2, 2.0, 0.5).unwrap();
        let spec = QuadratureSpec::monte_carlo(1000, 32, 5);
        let seq = gagliardo_seminorm_p(&u, &params, &spec, &Sequential).unwrap();
        for threads in [1, 4] {
            let par = gagliardo_seminorm_p(&u, &params, &spec, &RayonExecutor::new(Some(threads)).unwrap()).unwrap();
            assert_eq!(seq.value.to_bits(), par.value.to_bits());
            assert_eq!(seq.std_error.to_bits(), par.std_error.to_bits());
        }
    }
}
