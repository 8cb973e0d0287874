//! Small dense kernels the solvers need: a Cholesky factorization for the
//! symmetric positive definite systems of the reweighted least-squares
//! scheme and of ordinary least squares.

use crate::error::{Error, Result};

/// Dot product with four independent accumulators, which lets the
/// compiler vectorize the reduction.
pub(crate) fn dot4(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for t in 0..4 {
            acc[t] += x[t] * y[t];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix
/// stored row-major.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Factors `a` (row-major, `n x n`). Only the lower triangle is read.
    pub fn factor(a: &[f64], n: usize) -> Result<Self> {
        if a.len() != n * n {
            return Err(Error::Dimension(format!(
                "{} entries for a {n}x{n} matrix",
                a.len()
            )));
        }
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let row_j = j * n;
            let diag = a[row_j + j] - dot4(&l[row_j..row_j + j], &l[row_j..row_j + j]);
            if diag <= 0.0 || !diag.is_finite() {
                return Err(Error::Numerical(format!(
                    "matrix not positive definite (pivot {j} = {diag:e})"
                )));
            }
            let d = diag.sqrt();
            l[row_j + j] = d;
            for i in (j + 1)..n {
                let row_i = i * n;
                let s = a[row_i + j] - dot4(&l[row_i..row_i + j], &l[row_j..row_j + j]);
                l[row_i + j] = s / d;
            }
        }
        Ok(Self { n, l })
    }

    /// Solves `A x = b` in place for a single right-hand side.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        for i in 0..n {
            let s = b[i] - dot4(&self.l[i * n..i * n + i], &b[..i]);
            b[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
