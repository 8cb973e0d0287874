use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Per-feature relevance scores and the induced order: descending score,
/// ties broken by ascending feature index.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    scores: Vec<f64>,
    order: Vec<usize>,
}

impl FeatureRanking {
    /// NaN scores are treated as the lowest possible score.
    pub fn from_scores(scores: Vec<f64>) -> Self {
        let key = |s: f64| if s.is_nan() { f64::NEG_INFINITY } else { s };
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| key(scores[b]).total_cmp(&key(scores[a])).then(a.cmp(&b)));
        Self { scores, order }
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// The `k` best features in rank order.
    pub fn top_k(&self, k: usize) -> Result<&[usize]> {
        if k > self.order.len() {
            return Err(Error::invalid(format!(
                "k = {k} exceeds the {} ranked features",
                self.order.len()
            )));
        }
        Ok(&self.order[..k])
    }

    /// Ranking CSV: `rank,feature_index,score` with 0-based indices.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out: String = header.iter().map(|h| format!("# {h}\n")).collect();
        out.push_str("rank,feature_index,score\n");
        for (rank, &j) in self.order.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", rank + 1, j, self.scores[j]);
        }
        out
    }

    pub fn write_csv(&self, path: &Path, header: &[String]) -> Result<()> {
        std::fs::write(path, self.to_csv(header)).map_err(|e| Error::io(path, e))
    }
}
