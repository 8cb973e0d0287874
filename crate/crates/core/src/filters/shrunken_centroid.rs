use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::linalg::{soft_threshold, ColumnMoments};
use crate::ranking::FeatureRanking;

use super::ClassStats;

const EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrunkenCentroidConfig {
    /// Shrinkage applied to the standardized centroid differences.
    pub delta: f64,
    /// Features correlated above this with a better kept feature are zeroed.
    pub corr_threshold: f64,
}

impl Default for ShrunkenCentroidConfig {
    fn default() -> Self {
        Self {
            delta: 0.0,
            corr_threshold: 0.8,
        }
    }
}

impl ShrunkenCentroidConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta >= 0.0) {
            return Err(Error::invalid("shrunken centroid delta must be non-negative"));
        }
        if !(self.corr_threshold > 0.0 && self.corr_threshold <= 1.0) {
            return Err(Error::invalid("correlation threshold must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// `max_k |soft_threshold(d_jk, delta)|` with
/// `d_jk = (x̄_jk − x̄_j) / (m_k (s_j + s₀))`, `m_k = sqrt(1/n_k − 1/n)` and
/// `s₀` the median pooled standard deviation.
pub fn shrunken_centroid_raw_scores(data: &LabeledDataset, delta: f64) -> Result<Vec<f64>> {
    let s = ClassStats::new(data)?;
    let n = (s.n_pos + s.n_neg) as f64;
    let m = [
        (1.0 / s.n_pos as f64 - 1.0 / n).sqrt(),
        (1.0 / s.n_neg as f64 - 1.0 / n).sqrt(),
    ];
    let s0 = median(&s.pooled_std);
    Ok((0..data.n_features())
        .map(|j| {
            let denom = s.pooled_std[j] + s0 + EPS;
            let dp = (s.mean_pos[j] - s.mean[j]) / (m[0] * denom);
            let dn = (s.mean_neg[j] - s.mean[j]) / (m[1] * denom);
            soft_threshold(dp, delta).abs().max(soft_threshold(dn, delta).abs())
        })
        .collect())
}

fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let h = s.len() / 2;
    if s.len() % 2 == 1 {
        s[h]
    } else {
        0.5 * (s[h - 1] + s[h])
    }
}

/// Shrunken-centroid scores followed by a greedy decorrelation pass: in
/// descending score order, a feature whose absolute correlation with an
/// already kept feature exceeds the threshold gets score 0.
pub fn shrunken_centroid_rank(data: &LabeledDataset, cfg: &ShrunkenCentroidConfig) -> Result<FeatureRanking> {
    cfg.validate()?;
    let mut scores = shrunken_centroid_raw_scores(data, cfg.delta)?;
    if cfg.corr_threshold < 1.0 {
        let cols = data.data().columns();
        let moments = ColumnMoments::new(&cols);
        let order = FeatureRanking::from_scores(scores.clone());
        let mut kept: Vec<usize> = Vec::new();
        for &j in order.order() {
            if scores[j] <= 0.0 {
                break;
            }
            let redundant = kept
                .iter()
                .any(|&k| moments.correlation(&cols, j, k).abs() > cfg.corr_threshold);
            if redundant {
                scores[j] = 0.0;
            } else {
                kept.push(j);
            }
        }
    }
    Ok(FeatureRanking::from_scores(scores))
}
