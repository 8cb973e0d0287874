use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::matrix::{Columns, Matrix};
use super::vector::sparse_dot_sparse;

/// Default number of feature pairs sampled by
/// [`mean_abs_pairwise_correlation`].
pub const DEFAULT_CORRELATION_PAIRS: usize = 100_000;

/// Fraction of exactly-zero entries.
pub fn sparsity(m: &Matrix) -> Result<f64> {
    let total = m.rows() * m.cols();
    if total == 0 {
        return Err(Error::invalid("sparsity of an empty matrix is undefined"));
    }
    Ok(m.count_zeros() as f64 / total as f64)
}

/// Population mean and standard deviation of every column.
#[derive(Debug, Clone)]
pub struct ColumnMoments {
    pub n: usize,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl ColumnMoments {
    pub fn new(cols: &Columns) -> Self {
        let n = cols.rows();
        let nf = n as f64;
        let mut mean = Vec::with_capacity(cols.cols());
        let mut std = Vec::with_capacity(cols.cols());
        for j in 0..cols.cols() {
            let (_, vals) = cols.col(j);
            let mu = vals.iter().sum::<f64>() / nf;
            let zeros = (n - vals.len()) as f64;
            let ss = vals.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() + zeros * mu * mu;
            let mean_sq = vals.iter().map(|v| v * v).sum::<f64>() / nf;
            let var = ss / nf;
            // Constant columns can leave roundoff-level variance behind.
            let var = if var <= 1e-24 * mean_sq { 0.0 } else { var };
            mean.push(mu);
            std.push(var.sqrt());
        }
        Self { n, mean, std }
    }

    /// Pearson correlation of columns `a` and `b`; 0 when either column
    /// has zero variance.
    pub fn correlation(&self, cols: &Columns, a: usize, b: usize) -> f64 {
        if self.std[a] == 0.0 || self.std[b] == 0.0 {
            return 0.0;
        }
        let (ai, av) = cols.col(a);
        let (bi, bv) = cols.col(b);
        let n = self.n as f64;
        let cov = sparse_dot_sparse(ai, av, bi, bv) / n - self.mean[a] * self.mean[b];
        (cov / (self.std[a] * self.std[b])).clamp(-1.0, 1.0)
    }
}

/// Maps a linear index over the `d(d-1)/2` unordered pairs `(i, j)`,
/// `i < j`, enumerated row by row, back to the pair.
fn pair_from_index(p: usize, d: usize) -> (usize, usize) {
    // Row i starts at i*(2d - i - 1)/2.
    let start = |i: usize| i * (2 * d - i - 1) / 2;
    let df = d as f64;
    let disc = (2.0 * df - 1.0).powi(2) - 8.0 * p as f64;
    let mut i = ((2.0 * df - 1.0 - disc.max(0.0).sqrt()) / 2.0).floor() as usize;
    i = i.min(d.saturating_sub(2));
    while i > 0 && start(i) > p {
        i -= 1;
    }
    while i + 1 < d - 1 && start(i + 1) <= p {
        i += 1;
    }
    (i, i + 1 + (p - start(i)))
}

/// Mean absolute Pearson correlation over feature pairs. When the number
/// of pairs exceeds `sample_pairs`, that many pairs are drawn uniformly
/// without replacement using `seed`.
pub fn mean_abs_pairwise_correlation(m: &Matrix, sample_pairs: usize, seed: u64) -> Result<f64> {
    if m.cols() < 2 || m.rows() < 2 {
        return Err(Error::invalid(
            "pairwise correlation needs at least 2 features and 2 examples",
        ));
    }
    if sample_pairs == 0 {
        return Err(Error::invalid("sample_pairs must be positive"));
    }
    let cols = m.columns();
    let moments = ColumnMoments::new(&cols);
    let d = m.cols();
    let total = d * (d - 1) / 2;
    let mut acc = 0.0;
    let count;
    if total <= sample_pairs {
        for a in 0..d {
            for b in (a + 1)..d {
                acc += moments.correlation(&cols, a, b).abs();
            }
        }
        count = total;
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picked = rand::seq::index::sample(&mut rng, total, sample_pairs);
        for p in picked.iter() {
            let (a, b) = pair_from_index(p, d);
            acc += moments.correlation(&cols, a, b).abs();
        }
        count = sample_pairs;
    }
    Ok(acc / count as f64)
}
