//! Recursive feature elimination with a linear SVM.

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::ranking::FeatureRanking;
use crate::svm::{train_linear_svm, SvmConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfeConfig {
    pub c: f64,
    /// Fraction of surviving features dropped per round (at least one).
    pub drop_fraction: f64,
    pub svm_tol: f64,
    pub svm_max_iter: usize,
}

impl Default for RfeConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            drop_fraction: 0.1,
            svm_tol: 1e-3,
            svm_max_iter: 1000,
        }
    }
}

impl RfeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.drop_fraction > 0.0 && self.drop_fraction < 1.0) {
            return Err(Error::invalid("rfe drop fraction must lie in (0, 1)"));
        }
        self.svm_config().validate()
    }

    fn svm_config(&self) -> SvmConfig {
        SvmConfig {
            tol: self.svm_tol,
            max_iter: self.svm_max_iter,
            ..SvmConfig::linear(self.c)
        }
    }
}

/// One elimination round: the features removed and their weights in the
/// model that removed them.
#[derive(Debug, Clone, PartialEq)]
pub struct RfeRound {
    pub eliminated: Vec<usize>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RfeTrace {
    pub rounds: Vec<RfeRound>,
    /// The last surviving feature, if any, and its final weight.
    pub survivor: Option<(usize, f64)>,
}

/// Runs elimination to a single survivor. Among equal `w²`, the higher
/// feature index is eliminated first so that ties end up ranked by
/// ascending index.
pub fn rfe_eliminate(data: &LabeledDataset, cfg: &RfeConfig) -> Result<RfeTrace> {
    cfg.validate()?;
    data.require_both_classes()?;
    let svm = cfg.svm_config();
    let mut surviving: Vec<usize> = (0..data.n_features()).collect();
    let mut rounds = Vec::new();
    let mut last_w = Vec::new();
    while surviving.len() > 1 {
        let sub = data.select_features(&surviving)?;
        let model = train_linear_svm(&sub, &svm)?;
        let m = ((cfg.drop_fraction * surviving.len() as f64).ceil() as usize).clamp(1, surviving.len() - 1);
        let mut pos: Vec<usize> = (0..surviving.len()).collect();
        pos.sort_by(|&a, &b| {
            let (wa, wb) = (model.w[a] * model.w[a], model.w[b] * model.w[b]);
            wa.total_cmp(&wb).then(surviving[b].cmp(&surviving[a]))
        });
        let mut drop: Vec<usize> = pos[..m].to_vec();
        rounds.push(RfeRound {
            eliminated: drop.iter().map(|&p| surviving[p]).collect(),
            weights: drop.iter().map(|&p| model.w[p]).collect(),
        });
        drop.sort_unstable();
        let mut keep_w = Vec::with_capacity(surviving.len() - m);
        let mut next = Vec::with_capacity(surviving.len() - m);
        for (p, &j) in surviving.iter().enumerate() {
            if drop.binary_search(&p).is_err() {
                next.push(j);
                keep_w.push(model.w[p]);
            }
        }
        surviving = next;
        last_w = keep_w;
    }
    let survivor = match surviving.first() {
        None => None,
        Some(&j) if rounds.is_empty() => {
            let model = train_linear_svm(data, &svm)?;
            Some((j, model.w[0]))
        }
        Some(&j) => Some((j, last_w[0])),
    };
    Ok(RfeTrace { rounds, survivor })
}

/// Score = elimination round plus `w²/(1 + w²)` from the eliminating model,
/// so later rounds rank higher and, within a round, larger weights do.
pub fn rfe_rank(data: &LabeledDataset, cfg: &RfeConfig) -> Result<FeatureRanking> {
    let trace = rfe_eliminate(data, cfg)?;
    let mut scores = vec![0.0; data.n_features()];
    let frac = |w: f64| w * w / (1.0 + w * w);
    for (r, round) in trace.rounds.iter().enumerate() {
        for (&j, &w) in round.eliminated.iter().zip(&round.weights) {
            scores[j] = (r + 1) as f64 + frac(w);
        }
    }
    if let Some((j, w)) = trace.survivor {
        scores[j] = (trace.rounds.len() + 1) as f64 + frac(w);
    }
    Ok(FeatureRanking::from_scores(scores))
}
