//! Deterministic batched execution.
//!
//! Work is split into numbered batches. Each batch draws from its own ChaCha
//! stream keyed by `(seed, batch index)` and results are combined in batch
//! order, so estimates do not depend on how batches are scheduled.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Runs independent jobs `0..n` and returns their results in index order.
pub trait Executor: Sync {
    fn map<T, F>(&self, n: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every job on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, n: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(job).collect()
    }
}

/// Samples per batch.
pub const BATCH: usize = 1024;

/// SplitMix64 finalizer, used to derive independent seeds from one root seed.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the sub-computation labelled `tag`.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ tag.rotate_left(17))
}

/// Hashes a sequence of floats and integers into a tag.
pub fn tag_of(parts: &[u64]) -> u64 {
    parts.iter().fold(0x243F_6A88_85A3_08D3, |acc, &v| splitmix64(acc ^ v))
}

/// Generator for batch `batch` of the computation seeded by `seed`.
pub fn batch_rng(seed: u64, batch: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch as u64);
    rng
}

/// Batch sizes covering `total` samples.
pub fn batches(total: usize) -> usize {
    total.div_ceil(BATCH)
}

/// Number of samples in batch `b` out of `total`.
pub fn batch_len(total: usize, b: usize) -> usize {
    BATCH.min(total - b * BATCH)
}

/// Running mean and variance (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Stats {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Stats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise merge.
    pub fn merge(&mut self, other: &Stats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            num_traits::Float::sqrt(self.variance() / self.count as f64)
        }
    }

    pub fn combine<'a>(parts: impl IntoIterator<Item = &'a Stats>) -> Stats {
        let mut out = Stats::default();
        for part in parts {
            out.merge(part);
        }
        out
    }
}
