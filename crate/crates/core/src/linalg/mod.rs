//! Vector and matrix primitives shared by the solvers: dense and sparse
//! storage, norms, the soft-thresholding operator and column statistics.

pub mod dense;
mod matrix;
mod stats;
mod vector;

pub use matrix::{Columns, Matrix, Row, RowIter};
pub use stats::{
    mean_abs_pairwise_correlation, sparsity, ColumnMoments, DEFAULT_CORRELATION_PAIRS,
};
pub use vector::{
    axpy, dot, norm_l1, norm_l2, soft_threshold, sparse_dot_dense, sparse_dot_sparse,
    SparseVector, Vector,
};

/// Sum over rows of each row's Euclidean norm.
pub fn norm_l21(m: &Matrix) -> f64 {
    m.row_norms().iter().sum()
}
