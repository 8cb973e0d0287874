//! Filter selectors that score features from per-class statistics alone.

mod golub;
mod shrunken_centroid;

pub use golub::golub_rank;
pub use shrunken_centroid::{
    shrunken_centroid_rank, shrunken_centroid_raw_scores, ShrunkenCentroidConfig,
};

use crate::dataset::LabeledDataset;
use crate::error::Result;

/// Per-feature class means and population standard deviations, plus the
/// overall mean and the pooled within-class standard deviation
/// `sqrt(Σₖ Σᵢ∈ₖ (xᵢⱼ − x̄ⱼₖ)² / (n − 2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub n_pos: usize,
    pub n_neg: usize,
    pub mean_pos: Vec<f64>,
    pub mean_neg: Vec<f64>,
    pub std_pos: Vec<f64>,
    pub std_neg: Vec<f64>,
    pub mean: Vec<f64>,
    pub pooled_std: Vec<f64>,
}

impl ClassStats {
    pub fn new(data: &LabeledDataset) -> Result<Self> {
        data.require_both_classes()?;
        let x = data.data();
        let d = x.cols();
        let labels = data.labels();
        let (n_pos, n_neg) = data.class_counts();
        let mut sum = [vec![0.0; d], vec![0.0; d]];
        for (i, l) in labels.iter().enumerate() {
            let c = class(l.sign());
            for (j, v) in x.row(i).iter() {
                sum[c][j] += v;
            }
        }
        let counts = [n_pos as f64, n_neg as f64];
        let mean: [Vec<f64>; 2] = [0, 1].map(|c| sum[c].iter().map(|s| s / counts[c]).collect());
        // Squared deviations over stored entries; unstored zeros are added
        // back as (0 − μ)² per missing entry.
        let mut ss = [vec![0.0; d], vec![0.0; d]];
        let mut stored = [vec![0usize; d], vec![0usize; d]];
        for (i, l) in labels.iter().enumerate() {
            let c = class(l.sign());
            for (j, v) in x.row(i).iter() {
                let dv = v - mean[c][j];
                ss[c][j] += dv * dv;
                stored[c][j] += 1;
            }
        }
        for c in 0..2 {
            for j in 0..d {
                let missing = counts[c] - stored[c][j] as f64;
                ss[c][j] += missing * mean[c][j] * mean[c][j];
            }
        }
        let n = (n_pos + n_neg) as f64;
        let std = |c: usize| -> Vec<f64> { ss[c].iter().map(|s| (s / counts[c]).sqrt()).collect() };
        let pooled_df = (n - 2.0).max(1.0);
        let pooled_std = (0..d).map(|j| ((ss[0][j] + ss[1][j]) / pooled_df).sqrt()).collect();
        let overall = (0..d).map(|j| (sum[0][j] + sum[1][j]) / n).collect();
        let [mean_pos, mean_neg] = mean;
        Ok(Self {
            n_pos,
            n_neg,
            std_pos: std(0),
            std_neg: std(1),
            mean_pos,
            mean_neg,
            mean: overall,
            pooled_std,
        })
    }
}

fn class(sign: f64) -> usize {
    if sign > 0.0 {
        0
    } else {
        1
    }
}
