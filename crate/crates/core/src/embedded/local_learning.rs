//! Local-learning feature weighting.
//!
//! Alternates an E-step, which turns the current weighted Manhattan metric
//! into soft nearest-hit and nearest-miss assignments, and an M-step, which
//! fits non-negative weights to
//! `Σₙ log(1 + exp(−w·z̄ₙ)) + λ‖w‖₁` where `z̄ₙ = E|xₙ − NM| − E|xₙ − NH|`.

use rayon::prelude::*;

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::ranking::FeatureRanking;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalLearningConfig {
    pub lambda: f64,
    /// `σ` in the assignment kernel `exp(−d/σ)`.
    pub kernel_width: f64,
    /// Outer iterations stop when `max|Δw| ≤ tol · max(1, max w)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Projected-gradient iterations per M-step.
    pub m_step_iter: usize,
}

impl Default for LocalLearningConfig {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            kernel_width: 2.0,
            tol: 1e-3,
            max_iter: 10,
            m_step_iter: 100,
        }
    }
}

impl LocalLearningConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) {
            return Err(Error::invalid("ll lambda must be non-negative"));
        }
        if !(self.kernel_width > 0.0) {
            return Err(Error::invalid("ll kernel width must be positive"));
        }
        if !(self.tol > 0.0) || self.max_iter == 0 || self.m_step_iter == 0 {
            return Err(Error::invalid("ll needs tol, max_iter and m_step_iter > 0"));
        }
        Ok(())
    }
}

/// `|x − miss| − |x − hit|`, elementwise.
pub fn ll_margin_vector(x: &Vector, hit: &Vector, miss: &Vector) -> Result<Vector> {
    if x.len() != hit.len() || x.len() != miss.len() {
        return Err(Error::Dimension(format!(
            "margin vector of lengths {}, {}, {}",
            x.len(),
            hit.len(),
            miss.len()
        )));
    }
    let (x, h, m) = (x.to_dense(), hit.to_dense(), miss.to_dense());
    Ok(Vector::Dense(
        (0..x.len()).map(|j| (x[j] - m[j]).abs() - (x[j] - h[j]).abs()).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalLearningFit {
    pub w: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// M-step objective at the end of each outer iteration.
    pub objective_trace: Vec<f64>,
}

/// Softmax weights `exp(−dᵢ/σ)` normalized over the candidates, with the
/// maximum subtracted for stability. Probabilities below `1e-12` of the
/// largest are dropped.
fn soft_assign(dist: &[(usize, f64)], sigma: f64) -> Vec<(usize, f64)> {
    let best = dist.iter().map(|&(_, d)| -d / sigma).fold(f64::NEG_INFINITY, f64::max);
    let mut p: Vec<(usize, f64)> = dist
        .iter()
        .map(|&(i, d)| {
            let e = -d / sigma - best;
            (i, if e.is_nan() { 0.0 } else { e.exp() })
        })
        .filter(|&(_, v)| v >= 1e-12)
        .collect();
    let total: f64 = p.iter().map(|&(_, v)| v).sum();
    p.iter_mut().for_each(|(_, v)| *v /= total);
    p
}

/// Expected margin vectors `z̄ₙ` for every example under weights `w`.
/// An infinite `kernel_width` gives uniform averages over each class.
pub fn ll_expected_margins(data: &LabeledDataset, w: &[f64], kernel_width: f64) -> Result<Vec<Vec<f64>>> {
    let z = expected_margins_flat(data, w, kernel_width)?;
    let d = w.len().max(1);
    Ok(z.chunks(d).map(|c| c.to_vec()).collect())
}

/// Row-major `n × d` margins.
fn expected_margins_flat(data: &LabeledDataset, w: &[f64], kernel_width: f64) -> Result<Vec<f64>> {
    let (pos, neg) = data.class_counts();
    if neg < 2 || pos < 2 {
        return Err(Error::invalid("local learning needs at least 2 examples per class"));
    }
    let x = data.data().to_dense();
    let n = x.rows();
    let d = x.cols();
    if w.len() != d {
        return Err(Error::Dimension(format!("{} weights for {d} features", w.len())));
    }
    let y = data.label_signs();
    let rows: Vec<&[f64]> = (0..n).map(|i| dense_row(&x, i)).collect();
    // With w ≥ 0, Σ wⱼ|aⱼ − bⱼ| is the L1 distance of the rows scaled by w,
    // restricted to the features with nonzero weight.
    let active: Vec<usize> = (0..d).filter(|&j| w[j] != 0.0).collect();
    let a = active.len();
    let scaled: Vec<f64> = rows
        .iter()
        .flat_map(|r| active.iter().map(move |&j| w[j] * r[j]))
        .collect();
    let per_row: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|p| {
            let sp = &scaled[p * a..(p + 1) * a];
            let mut hits = Vec::new();
            let mut misses = Vec::new();
            for i in 0..n {
                if i == p {
                    continue;
                }
                let si = &scaled[i * a..(i + 1) * a];
                let dist: f64 = sp.iter().zip(si).map(|(u, v)| (u - v).abs()).sum();
                if y[i] == y[p] {
                    hits.push((i, dist));
                } else {
                    misses.push((i, dist));
                }
            }
            let xp = rows[p];
            let mut z = vec![0.0; d];
            for (i, prob) in soft_assign(&misses, kernel_width) {
                for (zj, (u, v)) in z.iter_mut().zip(xp.iter().zip(rows[i])) {
                    *zj += prob * (u - v).abs();
                }
            }
            for (i, prob) in soft_assign(&hits, kernel_width) {
                for (zj, (u, v)) in z.iter_mut().zip(xp.iter().zip(rows[i])) {
                    *zj -= prob * (u - v).abs();
                }
            }
            z
        })
        .collect();
    Ok(per_row.concat())
}

fn dense_row(x: &Matrix, i: usize) -> &[f64] {
    match x.row(i) {
        crate::linalg::Row::Dense(r) => r,
        crate::linalg::Row::Sparse { .. } => unreachable!("converted to dense"),
    }
}

/// `log(1 + exp(−m))` without overflow.
fn softplus_neg(m: f64) -> f64 {
    (-m).max(0.0) + (-m.abs()).exp().ln_1p()
}

fn margins<'a>(z: &'a [f64], w: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
    let d = w.len();
    z.chunks(d.max(1))
        .map(move |zn| zn.iter().zip(w).map(|(a, b)| a * b).sum())
}

fn logistic_loss(z: &[f64], w: &[f64]) -> f64 {
    margins(z, w).map(softplus_neg).sum()
}

/// Projected proximal gradient with backtracking on
/// `Σ log(1 + exp(−w·zₙ)) + λΣw`, `w ≥ 0`, from `w`.
fn m_step(z: &[f64], w: &mut [f64], lambda: f64, iters: usize, tol: f64) -> f64 {
    let d = w.len();
    let mut step = 1.0;
    let mut f = logistic_loss(z, w);
    let mut grad = vec![0.0; d];
    let mut candidate = vec![0.0; d];
    for _ in 0..iters {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let m: Vec<f64> = margins(z, w).collect();
        for (zn, &mn) in z.chunks(d.max(1)).zip(&m) {
            // d/dm log(1 + e^{−m}) = −1/(1 + e^{m})
            let s = -1.0 / (1.0 + mn.exp());
            for (g, a) in grad.iter_mut().zip(zn) {
                *g += s * a;
            }
        }
        let mut f_new;
        loop {
            for j in 0..d {
                candidate[j] = (w[j] - step * (grad[j] + lambda)).max(0.0);
            }
            f_new = logistic_loss(z, &candidate);
            let mut bound = f;
            let mut sq = 0.0;
            for j in 0..d {
                let delta = candidate[j] - w[j];
                bound += grad[j] * delta;
                sq += delta * delta;
            }
            bound += sq / (2.0 * step);
            if f_new <= bound + 1e-12 * f.abs() || step < 1e-20 {
                break;
            }
            step *= 0.5;
        }
        let change = candidate
            .iter()
            .zip(w.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        w.copy_from_slice(&candidate);
        f = f_new;
        if change <= tol * w.iter().fold(1.0f64, |m, v| m.max(*v)) {
            break;
        }
        step *= 2.0;
    }
    f + lambda * w.iter().sum::<f64>()
}

pub fn local_learning_fit(data: &LabeledDataset, cfg: &LocalLearningConfig) -> Result<LocalLearningFit> {
    cfg.validate()?;
    let d = data.n_features();
    let mut w = vec![1.0; d];
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        iterations += 1;
        let z = expected_margins_flat(data, &w, cfg.kernel_width)?;
        let old = w.clone();
        trace.push(m_step(&z, &mut w, cfg.lambda, cfg.m_step_iter, cfg.tol * 1e-2));
        let change = w.iter().zip(&old).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if change <= cfg.tol * old.iter().fold(1.0f64, |m, v| m.max(*v)) {
            converged = true;
            break;
        }
    }
    Ok(LocalLearningFit {
        w,
        iterations,
        converged,
        objective_trace: trace,
    })
}

/// Ranks by the learned weight `w_j ≥ 0`.
pub fn ll_rank(data: &LabeledDataset, cfg: &LocalLearningConfig) -> Result<FeatureRanking> {
    Ok(FeatureRanking::from_scores(local_learning_fit(data, cfg)?.w))
}
