use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dataset::{Label, LabeledDataset};
use crate::error::{Error, Result};
use crate::svm::{
    predict_from_values, train_kernel_svm_with_gram, train_linear_svm, KernelSpec, SvmConfig,
};

use super::metrics::bsr;

/// The SVM model-selection grid: every `C` with the linear kernel and with
/// an RBF kernel for every `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub c_values: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub folds: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            c_values: vec![0.1, 1.0, 10.0, 100.0],
            gamma_values: vec![0.005, 0.02, 0.5, 2.0],
            folds: 5,
            seed: 0,
        }
    }
}

impl GridSpec {
    /// Candidates in tie-break order: linear before RBF, then ascending `C`,
    /// then ascending `γ`.
    pub fn candidates(&self) -> Vec<SvmConfig> {
        let mut cs = self.c_values.clone();
        cs.sort_by(f64::total_cmp);
        let mut gs = self.gamma_values.clone();
        gs.sort_by(f64::total_cmp);
        let mut out: Vec<SvmConfig> = cs.iter().map(|&c| SvmConfig::linear(c)).collect();
        for &c in &cs {
            for &g in &gs {
                out.push(SvmConfig::rbf(c, g));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.c_values.is_empty() {
            return Err(Error::invalid("the model-selection grid needs at least one C"));
        }
        if self.folds < 2 {
            return Err(Error::invalid("cross-validation needs at least 2 folds"));
        }
        for cfg in self.candidates() {
            cfg.validate()?;
        }
        Ok(())
    }
}

/// Fold id per example. Each class is shuffled with `seed` and dealt
/// round-robin, so the assignment depends only on the seed, the labels and
/// their count.
pub fn stratified_folds(labels: &[Label], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::invalid("cross-validation needs at least 2 folds"));
    }
    let mut assignment = vec![0; labels.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for class in [Label::Positive, Label::Negative] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if idx.len() < folds {
            return Err(Error::invalid(format!(
                "class {class} has {} examples, fewer than the {folds} folds; every fold needs both classes",
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        for (t, i) in idx.into_iter().enumerate() {
            assignment[i] = t % folds;
        }
    }
    Ok(assignment)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSelection {
    pub config: SvmConfig,
    pub cv_bsr: f64,
    /// Mean CV BSR of every candidate, in grid order.
    pub scores: Vec<(SvmConfig, f64)>,
}

/// Picks the grid point with the highest mean cross-validated BSR; ties go
/// to the earliest candidate in [`GridSpec::candidates`] order.
pub fn model_select_svm(data: &LabeledDataset, grid: &GridSpec) -> Result<ModelSelection> {
    grid.validate()?;
    data.require_both_classes()?;
    let candidates = grid.candidates();
    let folds = stratified_folds(data.labels(), grid.folds, grid.seed)?;
    let splits: Vec<(Vec<usize>, Vec<usize>)> = (0..grid.folds)
        .map(|f| {
            let train = (0..folds.len()).filter(|&i| folds[i] != f).collect();
            let valid = (0..folds.len()).filter(|&i| folds[i] == f).collect();
            (train, valid)
        })
        .collect();
    let needs_dist = candidates.iter().any(|c| c.kernel != KernelSpec::Linear);
    let sq = if needs_dist { sq_distances(data) } else { Vec::new() };
    let n = data.n_examples();

    let scores: Vec<Result<f64>> = candidates
        .par_iter()
        .map(|cfg| {
            let mut total = 0.0;
            for (train, valid) in &splits {
                let fold_train = data.select_examples(train)?;
                let values = match cfg.kernel {
                    KernelSpec::Linear => {
                        let model = train_linear_svm(&fold_train, cfg)?;
                        valid.iter().map(|&v| data.data().row(v).dot(&model.w) + model.b).collect::<Vec<_>>()
                    }
                    kernel => {
                        let k = |a: usize, b: usize| kernel.from_sq_dist(sq[a * n + b]).unwrap_or(0.0);
                        let gram: Vec<f64> = train.iter().flat_map(|&a| train.iter().map(move |&b| k(a, b))).collect();
                        let model = train_kernel_svm_with_gram(&fold_train, &gram, cfg)?;
                        let ys = fold_train.label_signs();
                        valid
                            .iter()
                            .map(|&v| {
                                train
                                    .iter()
                                    .enumerate()
                                    .filter(|&(t, _)| model.alpha[t] > 0.0)
                                    .map(|(t, &a)| model.alpha[t] * ys[t] * k(a, v))
                                    .sum::<f64>()
                                    + model.b
                            })
                            .collect()
                    }
                };
                let actual: Vec<Label> = valid.iter().map(|&v| data.labels()[v]).collect();
                total += bsr(&predict_from_values(&values), &actual)?;
            }
            Ok(total / splits.len() as f64)
        })
        .collect();

    let mut best: Option<(usize, f64)> = None;
    let mut table = Vec::with_capacity(candidates.len());
    for (i, (cfg, s)) in candidates.iter().zip(scores).enumerate() {
        let s = s?;
        table.push((*cfg, s));
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    let (i, cv_bsr) = best.expect("grid is nonempty");
    Ok(ModelSelection {
        config: candidates[i],
        cv_bsr,
        scores: table,
    })
}

/// Row-major squared Euclidean distances between all examples.
fn sq_distances(data: &LabeledDataset) -> Vec<f64> {
    let x = data.data();
    let n = x.rows();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = x.row(i);
            (0..n).map(|j| if j < i { 0.0 } else { xi.sq_dist(&x.row(j)) }).collect()
        })
        .collect();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            out[i * n + j] = rows[i][j];
            out[j * n + i] = rows[i][j];
        }
    }
    out
}
