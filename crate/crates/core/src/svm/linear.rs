use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};

use super::{KernelSpec, SvmConfig, TrainInfo};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub w: Vec<f64>,
    pub b: f64,
    pub info: TrainInfo,
}

impl LinearModel {
    pub fn new(w: Vec<f64>, b: f64) -> Self {
        Self {
            w,
            b,
            info: TrainInfo {
                iterations: 0,
                converged: true,
                dual_trace: Vec::new(),
            },
        }
    }

    pub fn decision_values(&self, x: &Matrix) -> Vec<f64> {
        (0..x.rows()).map(|i| x.row(i).dot(&self.w) + self.b).collect()
    }
}

/// `½(‖w‖² + b²) + C Σ max(0, 1 − yᵢ(w·xᵢ + b))`, the objective minimized
/// by [`train_linear_svm`] (the bias is regularized as an extra constant
/// feature).
pub fn linear_primal_objective(data: &LabeledDataset, c: f64, w: &[f64], b: f64) -> f64 {
    let x = data.data();
    let loss: f64 = data
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (1.0 - l.sign() * (x.row(i).dot(w) + b)).max(0.0))
        .sum();
    0.5 * (dot(w, w) + b * b) + c * loss
}

/// Dual coordinate descent for the L1-loss (hinge) linear SVM.
///
/// Examples are visited in cyclic order. Stops when the duality gap falls
/// below `tol` relative to the primal objective; otherwise returns the
/// iterate with the lowest primal objective seen, with
/// `info.converged == false`.
pub fn train_linear_svm(data: &LabeledDataset, cfg: &SvmConfig) -> Result<LinearModel> {
    cfg.validate()?;
    if cfg.kernel != KernelSpec::Linear {
        return Err(Error::invalid("train_linear_svm requires a linear kernel"));
    }
    data.require_both_classes()?;
    let x = data.data();
    let y = data.label_signs();
    let n = x.rows();
    let c = cfg.c;

    let qd: Vec<f64> = (0..n).map(|i| x.row(i).norm_sq() + 1.0).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; x.cols()];
    let mut b = 0.0;
    let mut alpha_sum = 0.0;

    let mut best = (f64::INFINITY, w.clone(), b);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut sweeps = 0;

    while sweeps < cfg.max_iter {
        sweeps += 1;
        for i in 0..n {
            let row = x.row(i);
            let g = y[i] * (row.dot(&w) + b) - 1.0;
            let old = alpha[i];
            let pg = if old == 0.0 {
                g.min(0.0)
            } else if old == c {
                g.max(0.0)
            } else {
                g
            };
            if pg.abs() > 1e-12 {
                let new = (old - g / qd[i]).clamp(0.0, c);
                let delta = (new - old) * y[i];
                if delta != 0.0 {
                    row.axpy_into(delta, &mut w);
                    b += delta;
                    alpha_sum += new - old;
                    alpha[i] = new;
                }
            }
        }
        let norm_sq = dot(&w, &w) + b * b;
        let dual = alpha_sum - 0.5 * norm_sq;
        trace.push(dual);
        let primal = linear_primal_objective(data, c, &w, b);
        if primal < best.0 {
            best = (primal, w.clone(), b);
        }
        if primal - dual <= cfg.tol * primal.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }

    let (w, b) = if converged { (w, b) } else { (best.1, best.2) };
    Ok(LinearModel {
        w,
        b,
        info: TrainInfo {
            iterations: sweeps,
            converged,
            dual_trace: trace,
        },
    })
}
