use crate::dataset::LabeledDataset;
use crate::error::Result;
use crate::ranking::FeatureRanking;

use super::ClassStats;

const EPS: f64 = 1e-12;

/// Signal-to-noise score `|μ⁺ − μ⁻| / (σ⁺ + σ⁻ + 1e-12)` with population
/// standard deviations.
pub fn golub_rank(data: &LabeledDataset) -> Result<FeatureRanking> {
    let s = ClassStats::new(data)?;
    let scores = (0..data.n_features())
        .map(|j| (s.mean_pos[j] - s.mean_neg[j]).abs() / (s.std_pos[j] + s.std_neg[j] + EPS))
        .collect();
    Ok(FeatureRanking::from_scores(scores))
}
