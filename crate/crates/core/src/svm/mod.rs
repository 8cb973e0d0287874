//! L2-regularized hinge-loss support vector machines.
//!
//! [`train_linear_svm`] solves the linear problem by dual coordinate
//! descent with the bias folded in as a constant feature;
//! [`train_kernel_svm`] solves the kernelized dual with an explicit bias by
//! sequential minimal optimization over a precomputed kernel matrix.

mod kernel;
mod linear;

pub use kernel::{kernel_matrix, train_kernel_svm, train_kernel_svm_with_gram, KernelModel};
pub use linear::{linear_primal_objective, train_linear_svm, LinearModel};

use crate::dataset::{Label, LabeledDataset};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Row};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Linear,
    /// `exp(-gamma * ||x - z||^2)`
    Rbf { gamma: f64 },
    /// `exp(-gamma * ||x - z||)`, the unsquared variant.
    RbfUnsquared { gamma: f64 },
}

impl KernelSpec {
    pub fn gamma(&self) -> Option<f64> {
        match *self {
            KernelSpec::Linear => None,
            KernelSpec::Rbf { gamma } | KernelSpec::RbfUnsquared { gamma } => Some(gamma),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::Rbf { .. } => "rbf",
            KernelSpec::RbfUnsquared { .. } => "rbf-unsquared",
        }
    }

    #[inline]
    pub fn eval(&self, a: &Row<'_>, b: &Row<'_>) -> f64 {
        match *self {
            KernelSpec::Linear => match *b {
                Row::Dense(bd) => a.dot(bd),
                Row::Sparse { .. } => match *a {
                    Row::Dense(ad) => b.dot(ad),
                    Row::Sparse {
                        indices: ai,
                        values: av,
                    } => {
                        let Row::Sparse {
                            indices: bi,
                            values: bv,
                        } = *b
                        else {
                            unreachable!()
                        };
                        crate::linalg::sparse_dot_sparse(ai, av, bi, bv)
                    }
                },
            },
            KernelSpec::Rbf { gamma } => (-gamma * a.sq_dist(b)).exp(),
            KernelSpec::RbfUnsquared { gamma } => (-gamma * a.sq_dist(b).sqrt()).exp(),
        }
    }

    /// Kernel value from a squared Euclidean distance; `None` for the
    /// linear kernel, which is not distance-based.
    #[inline]
    pub fn from_sq_dist(&self, sq: f64) -> Option<f64> {
        match *self {
            KernelSpec::Linear => None,
            KernelSpec::Rbf { gamma } => Some((-gamma * sq).exp()),
            KernelSpec::RbfUnsquared { gamma } => Some((-gamma * sq.sqrt()).exp()),
        }
    }

    fn validate(&self) -> Result<()> {
        match self.gamma() {
            Some(g) if !(g > 0.0 && g.is_finite()) => {
                Err(Error::invalid(format!("gamma must be positive, got {g}")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmConfig {
    pub c: f64,
    pub kernel: KernelSpec,
    /// Linear solver: relative duality gap. Kernel solver: maximal KKT
    /// violation.
    pub tol: f64,
    /// Sweeps over the training set.
    pub max_iter: usize,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            kernel: KernelSpec::Linear,
            tol: 1e-3,
            max_iter: 1000,
        }
    }
}

impl SvmConfig {
    pub fn linear(c: f64) -> Self {
        Self {
            c,
            ..Self::default()
        }
    }

    pub fn rbf(c: f64, gamma: f64) -> Self {
        Self {
            c,
            kernel: KernelSpec::Rbf { gamma },
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::invalid(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::invalid("tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be positive"));
        }
        self.kernel.validate()
    }
}

/// Solver diagnostics attached to every trained model.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainInfo {
    pub iterations: usize,
    pub converged: bool,
    /// Dual objective (to be maximized) after each sweep.
    pub dual_trace: Vec<f64>,
}

/// `max(1 - y (w·x + b), 0)`
pub fn hinge_loss(model: &LinearModel, x: &Row<'_>, y: Label) -> f64 {
    (1.0 - y.sign() * (x.dot(&model.w) + model.b)).max(0.0)
}

/// A trained classifier of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Linear(LinearModel),
    Kernel(KernelModel),
}

impl Model {
    pub fn decision_values(&self, x: &Matrix) -> Vec<f64> {
        match self {
            Model::Linear(m) => m.decision_values(x),
            Model::Kernel(m) => m.decision_values(x),
        }
    }

    /// Sign of the decision value, with 0 mapped to `+1`.
    pub fn predict(&self, x: &Matrix) -> Vec<Label> {
        predict_from_values(&self.decision_values(x))
    }

    pub fn info(&self) -> &TrainInfo {
        match self {
            Model::Linear(m) => &m.info,
            Model::Kernel(m) => &m.info,
        }
    }
}

pub(crate) fn predict_from_values(values: &[f64]) -> Vec<Label> {
    values.iter().map(|&v| Label::from_decision(v)).collect()
}

/// Trains with the linear solver for a linear kernel and the kernel solver
/// otherwise.
pub fn train(data: &LabeledDataset, cfg: &SvmConfig) -> Result<Model> {
    match cfg.kernel {
        KernelSpec::Linear => train_linear_svm(data, cfg).map(Model::Linear),
        _ => train_kernel_svm(data, cfg).map(Model::Kernel),
    }
}
