//! Joint L2,1 regression on one-hot targets.
//!
//! Minimizes `Σᵢ‖Wᵀxᵢ + b − tᵢ‖₂ + λ‖W‖₂,₁` (the residual is not squared)
//! by iterative reweighting. Each step solves
//! `min Σᵢ dᵢ‖rᵢ‖² + λ Σⱼ Dⱼⱼ‖wʲ‖²` with
//! `dᵢ = 1/(2√(‖rᵢ‖² + ε²))` and `Dⱼⱼ = 1/(2√(‖wʲ‖² + ε²))`, which
//! majorizes the ε-smoothed objective
//! `Σᵢ√(‖rᵢ‖² + ε²) + λΣⱼ√(‖wʲ‖² + ε²)`, so that objective never increases.

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::linalg::dense::Cholesky;
use crate::ranking::FeatureRanking;

/// Which normal equations to solve: `(d+1)×(d+1)` in feature space or
/// `n×n` in example space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum L21Form {
    #[default]
    Auto,
    Primal,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L21Config {
    pub lambda: f64,
    pub epsilon: f64,
    /// Relative decrease of the smoothed objective below which iteration
    /// stops.
    pub tol: f64,
    pub max_iter: usize,
    pub form: L21Form,
}

impl Default for L21Config {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            epsilon: 1e-8,
            tol: 1e-4,
            max_iter: 50,
            form: L21Form::Auto,
        }
    }
}

impl L21Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid("l21 lambda must be finite and non-negative"));
        }
        if !(self.epsilon > 0.0) || !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::invalid("l21 needs epsilon, tol and max_iter > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct L21Fit {
    /// `d × 2` weights, row-major: row `j` is `wʲ`.
    pub w: Vec<[f64; 2]>,
    pub b: [f64; 2],
    /// Smoothed objective at the ridge start and after each reweighting step.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl L21Fit {
    pub fn row_norms(&self) -> Vec<f64> {
        self.w.iter().map(|r| r[0].hypot(r[1])).collect()
    }
}

/// One-hot targets: `(1, 0)` for the positive class, `(0, 1)` for the
/// negative one.
pub fn one_hot_targets(data: &LabeledDataset) -> Vec<[f64; 2]> {
    data.label_signs()
        .iter()
        .map(|&s| if s > 0.0 { [1.0, 0.0] } else { [0.0, 1.0] })
        .collect()
}

fn residuals(data: &LabeledDataset, w: &[[f64; 2]], b: [f64; 2]) -> Vec<[f64; 2]> {
    let x = data.data();
    let t = one_hot_targets(data);
    (0..x.rows())
        .map(|i| {
            let mut r = [b[0] - t[i][0], b[1] - t[i][1]];
            for (j, v) in x.row(i).iter() {
                r[0] += v * w[j][0];
                r[1] += v * w[j][1];
            }
            r
        })
        .collect()
}

/// `Σᵢ‖rᵢ‖₂ + λ Σⱼ‖wʲ‖₂`
pub fn l21_objective(data: &LabeledDataset, lambda: f64, w: &[[f64; 2]], b: [f64; 2]) -> f64 {
    let loss: f64 = residuals(data, w, b).iter().map(|r| r[0].hypot(r[1])).sum();
    loss + lambda * w.iter().map(|r| r[0].hypot(r[1])).sum::<f64>()
}

fn smoothed(r: &[[f64; 2]], w: &[[f64; 2]], lambda: f64, eps: f64) -> f64 {
    let s = |v: &[f64; 2]| (v[0] * v[0] + v[1] * v[1] + eps * eps).sqrt();
    r.iter().map(s).sum::<f64>() + lambda * w.iter().map(s).sum::<f64>()
}

pub fn l21_fit(data: &LabeledDataset, cfg: &L21Config) -> Result<L21Fit> {
    cfg.validate()?;
    let n = data.n_examples();
    let d = data.n_features();
    if n == 0 {
        return Err(Error::invalid("l21 needs at least one example"));
    }
    let primal = match cfg.form {
        L21Form::Primal => true,
        L21Form::Dual => false,
        L21Form::Auto => d < n,
    };
    if !primal && cfg.lambda == 0.0 {
        return Err(Error::invalid("the example-space l21 solve needs lambda > 0"));
    }
    let eps = cfg.epsilon;
    let targets = one_hot_targets(data);

    let solve = |sample_wt: &[f64], feature_wt: &[f64]| {
        if primal {
            solve_primal(data, &targets, sample_wt, feature_wt, cfg.lambda)
        } else {
            solve_dual(data, &targets, sample_wt, feature_wt, cfg.lambda)
        }
    };

    // Start from the ridge solution; w = 0 would pin every row at zero.
    let (mut w, mut b) = solve(&vec![0.5; n], &vec![0.5; d])?;
    let mut r = residuals(data, &w, b);
    let mut trace = vec![smoothed(&r, &w, cfg.lambda, eps)];
    let mut sample_wt = vec![0.0; n];
    let mut feature_wt = vec![0.0; d];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        iterations += 1;
        for (wt, ri) in sample_wt.iter_mut().zip(&r) {
            *wt = 0.5 / (ri[0] * ri[0] + ri[1] * ri[1] + eps * eps).sqrt();
        }
        for (wt, wj) in feature_wt.iter_mut().zip(&w) {
            *wt = 0.5 / (wj[0] * wj[0] + wj[1] * wj[1] + eps * eps).sqrt();
        }
        let (nw, nb) = solve(&sample_wt, &feature_wt)?;
        let nr = residuals(data, &nw, nb);
        let value = smoothed(&nr, &nw, cfg.lambda, eps);
        let prev = *trace.last().unwrap();
        trace.push(value);
        if value > prev {
            // Only roundoff can do this; keep the previous point.
            converged = true;
            break;
        }
        w = nw;
        b = nb;
        r = nr;
        if prev - value <= cfg.tol * prev.abs() {
            converged = true;
            break;
        }
    }
    Ok(L21Fit {
        w,
        b,
        objective_trace: trace,
        iterations,
        converged,
    })
}

type Solution = (Vec<[f64; 2]>, [f64; 2]);

/// `(X̃ᵀRX̃ + λ diag(D, 0)) [W; bᵀ] = X̃ᵀRT` with `X̃ = [X, 1]`.
fn solve_primal(
    data: &LabeledDataset,
    targets: &[[f64; 2]],
    sample_wt: &[f64],
    feature_wt: &[f64],
    lambda: f64,
) -> Result<Solution> {
    let x = data.data();
    let d = x.cols();
    let m = d + 1;
    let mut a = vec![0.0; m * m];
    let mut rhs = [vec![0.0; m], vec![0.0; m]];
    let mut dense = vec![0.0; m];
    for i in 0..x.rows() {
        let di = sample_wt[i];
        let row = x.row(i);
        dense[..d].copy_from_slice(&row.to_dense(d));
        dense[d] = 1.0;
        for p in 0..m {
            let s = di * dense[p];
            if s == 0.0 {
                continue;
            }
            let out = &mut a[p * m..p * m + p + 1];
            for (o, v) in out.iter_mut().zip(&dense[..=p]) {
                *o += s * v;
            }
            rhs[0][p] += s * targets[i][0];
            rhs[1][p] += s * targets[i][1];
        }
    }
    for j in 0..d {
        a[j * m + j] += lambda * feature_wt[j];
    }
    let chol = Cholesky::factor(&a, m)?;
    let s0 = chol.solve(&rhs[0]);
    let s1 = chol.solve(&rhs[1]);
    let w = (0..d).map(|j| [s0[j], s1[j]]).collect();
    Ok((w, [s0[d], s1[d]]))
}

/// Example-space form: with `K = XD⁻¹Xᵀ + λR⁻¹`,
/// `b = (1ᵀK⁻¹T)/(1ᵀK⁻¹1)` and `W = D⁻¹XᵀK⁻¹(T − 1bᵀ)`.
fn solve_dual(
    data: &LabeledDataset,
    targets: &[[f64; 2]],
    sample_wt: &[f64],
    feature_wt: &[f64],
    lambda: f64,
) -> Result<Solution> {
    let x = data.data();
    let n = x.rows();
    let d = x.cols();
    let inv_d: Vec<f64> = feature_wt.iter().map(|v| 1.0 / v).collect();
    let mut scaled = vec![0.0; d];
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        scaled.iter_mut().for_each(|v| *v = 0.0);
        for (j, v) in x.row(i).iter() {
            scaled[j] = v * inv_d[j];
        }
        for t in 0..=i {
            let v = x.row(t).dot(&scaled);
            k[i * n + t] = v;
            k[t * n + i] = v;
        }
        k[i * n + i] += lambda / sample_wt[i];
    }
    let chol = Cholesky::factor(&k, n)?;
    let ones = chol.solve(&vec![1.0; n]);
    let denom: f64 = ones.iter().sum();
    let mut b = [0.0; 2];
    let mut alpha = [Vec::new(), Vec::new()];
    for c in 0..2 {
        let t: Vec<f64> = targets.iter().map(|v| v[c]).collect();
        let kt = chol.solve(&t);
        b[c] = kt.iter().sum::<f64>() / denom;
        alpha[c] = kt.iter().zip(&ones).map(|(a, o)| a - b[c] * o).collect();
    }
    let mut w = vec![[0.0; 2]; d];
    for i in 0..n {
        for (j, v) in x.row(i).iter() {
            w[j][0] += v * alpha[0][i];
            w[j][1] += v * alpha[1][i];
        }
    }
    for (wj, s) in w.iter_mut().zip(&inv_d) {
        wj[0] *= s;
        wj[1] *= s;
    }
    Ok((w, b))
}

/// Ranks by the row norm `‖wʲ‖₂`.
pub fn l21_rank(data: &LabeledDataset, cfg: &L21Config) -> Result<FeatureRanking> {
    let fit = l21_fit(data, cfg)?;
    Ok(FeatureRanking::from_scores(fit.row_norms()))
}
