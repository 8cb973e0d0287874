use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::{KernelSpec, SvmConfig, TrainInfo};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelModel {
    pub kernel: KernelSpec,
    pub support_vectors: Matrix,
    /// `alpha_i * y_i` for each support vector.
    pub coef: Vec<f64>,
    pub b: f64,
    /// Full dual solution over the training set.
    pub alpha: Vec<f64>,
    pub info: TrainInfo,
}

impl KernelModel {
    pub fn decision_values(&self, x: &Matrix) -> Vec<f64> {
        (0..x.rows())
            .map(|i| {
                let xi = x.row(i);
                self.coef
                    .iter()
                    .enumerate()
                    .map(|(s, &c)| c * self.kernel.eval(&self.support_vectors.row(s), &xi))
                    .sum::<f64>()
                    + self.b
            })
            .collect()
    }
}

/// Dense symmetric kernel matrix of the rows of `x`, row-major.
pub fn kernel_matrix(x: &Matrix, kernel: &KernelSpec) -> Vec<f64> {
    let n = x.rows();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        let xi = x.row(i);
        for j in 0..=i {
            let v = kernel.eval(&xi, &x.row(j));
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    k
}

/// SMO with second-order working-set selection on the dual
/// `min ½αᵀQα − Σα, 0 ≤ α ≤ C, yᵀα = 0`, `Q_ij = yᵢyⱼK(xᵢ, xⱼ)`.
///
/// Stops once the maximal KKT violation `m(α) − M(α)` is at most `tol`.
/// The pair-update budget is `max_iter` sweeps of `n` updates.
pub fn train_kernel_svm(data: &LabeledDataset, cfg: &SvmConfig) -> Result<KernelModel> {
    cfg.validate()?;
    let k = kernel_matrix(data.data(), &cfg.kernel);
    train_kernel_svm_with_gram(data, &k, cfg)
}

/// As [`train_kernel_svm`], with the row-major kernel matrix of the
/// training rows supplied by the caller.
pub fn train_kernel_svm_with_gram(data: &LabeledDataset, k: &[f64], cfg: &SvmConfig) -> Result<KernelModel> {
    cfg.validate()?;
    data.require_both_classes()?;
    let x = data.data();
    let y = data.label_signs();
    let n = x.rows();
    if k.len() != n * n {
        return Err(Error::Dimension(format!("{} kernel entries for {n} examples", k.len())));
    }
    let c = cfg.c;
    let q = |i: usize, j: usize| y[i] * y[j] * k[i * n + j];

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let budget = cfg.max_iter.saturating_mul(n.max(1));
    let mut iter = 0;
    let mut converged = false;
    let mut trace = Vec::new();
    let dual_value = |alpha: &[f64], grad: &[f64]| -> f64 {
        // −(½αᵀQα − Σα) with Qα = G + 1.
        -alpha
            .iter()
            .zip(grad)
            .map(|(a, g)| 0.5 * a * (g - 1.0))
            .sum::<f64>()
    };

    while iter < budget {
        // Maximal violating i from I_up.
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..n {
            let in_up = (y[t] > 0.0 && alpha[t] < c) || (y[t] < 0.0 && alpha[t] > 0.0);
            if in_up && -y[t] * grad[t] >= gmax {
                gmax = -y[t] * grad[t];
                i_sel = Some(t);
            }
        }
        let Some(i) = i_sel else {
            converged = true;
            break;
        };
        // Second-order choice of j from I_low.
        let mut gmax2 = f64::NEG_INFINITY;
        let mut obj_min = f64::INFINITY;
        let mut j_sel = None;
        for t in 0..n {
            let in_low = (y[t] < 0.0 && alpha[t] < c) || (y[t] > 0.0 && alpha[t] > 0.0);
            if !in_low {
                continue;
            }
            let v = y[t] * grad[t];
            gmax2 = gmax2.max(v);
            let b = gmax + v;
            if b > 0.0 {
                let a = k[i * n + i] + k[t * n + t] - 2.0 * k[i * n + t];
                let a = if a > 0.0 { a } else { TAU };
                let obj = -(b * b) / a;
                if obj <= obj_min {
                    obj_min = obj;
                    j_sel = Some(t);
                }
            }
        }
        if gmax + gmax2 <= cfg.tol || j_sel.is_none() {
            converged = true;
            break;
        }
        let j = j_sel.unwrap();
        iter += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let quad = (k[i * n + i] + k[j * n + j] + 2.0 * q(i, j)).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (k[i * n + i] + k[j * n + j] - 2.0 * q(i, j)).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for t in 0..n {
            grad[t] += q(i, t) * di + q(j, t) * dj;
        }
        if iter % n.max(1) == 0 {
            trace.push(dual_value(&alpha, &grad));
        }
    }
    trace.push(dual_value(&alpha, &grad));

    // Bias from free vectors, or the midpoint of the feasible interval.
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 {
        sum_free / n_free as f64
    } else {
        0.5 * (ub + lb)
    };

    let support: Vec<usize> = (0..n).filter(|&t| alpha[t] > 0.0).collect();
    let coef = support.iter().map(|&t| alpha[t] * y[t]).collect();
    Ok(KernelModel {
        kernel: cfg.kernel,
        support_vectors: x.select_rows(&support)?,
        coef,
        b: -rho,
        alpha,
        info: TrainInfo {
            iterations: iter,
            converged,
            dual_trace: trace,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Label, Split};
    use crate::svm::{train_linear_svm, Model};

    fn xor() -> LabeledDataset {
        let x = Matrix::from_dense_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
        ])
        .unwrap();
        LabeledDataset::new(
            x,
            vec![Label::Positive, Label::Positive, Label::Negative, Label::Negative],
            Split::Train,
        )
        .unwrap()
    }

    #[test]
    fn xor_is_fit_by_rbf() {
        let d = xor();
        let m = Model::Kernel(train_kernel_svm(&d, &SvmConfig::rbf(100.0, 1.0)).unwrap());
        assert_eq!(m.predict(d.data()), d.labels());
    }

    #[test]
    fn dual_feasibility() {
        let d = xor();
        let cfg = SvmConfig::rbf(2.0, 0.5);
        let m = train_kernel_svm(&d, &cfg).unwrap();
        assert!(m.info.converged);
        let ys = d.label_signs();
        let eq: f64 = m.alpha.iter().zip(&ys).map(|(a, y)| a * y).sum();
        assert!(eq.abs() < 1e-12);
        assert!(m.alpha.iter().all(|&a| (0.0..=2.0).contains(&a)));
    }

    #[test]
    fn linear_kernel_agrees_with_linear_solver() {
        let x = Matrix::from_dense_rows(&[
            vec![2.0, 1.0],
            vec![3.0, -0.5],
            vec![2.5, 2.0],
            vec![-2.0, 0.3],
            vec![-3.0, -1.0],
            vec![-2.2, 1.5],
        ])
        .unwrap();
        let labels = [1, 1, 1, -1, -1, -1]
            .iter()
            .map(|&s| if s > 0 { Label::Positive } else { Label::Negative })
            .collect();
        let d = LabeledDataset::new(x, labels, Split::Train).unwrap();
        let cfg = SvmConfig {
            kernel: KernelSpec::Linear,
            tol: 1e-6,
            ..SvmConfig::linear(1.0)
        };
        let km = Model::Kernel(train_kernel_svm(&d, &cfg).unwrap());
        let lm = Model::Linear(train_linear_svm(&d, &cfg).unwrap());
        assert_eq!(km.predict(d.data()), lm.predict(d.data()));
        assert_eq!(km.predict(d.data()), d.labels());
    }
}
