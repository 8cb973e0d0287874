use crate::dataset::Label;
use crate::error::{Error, Result};
use crate::ranking::FeatureRanking;

/// Balanced success rate `½(TP/(TP+FN) + TN/(TN+FP))`.
pub fn bsr(predicted: &[Label], actual: &[Label]) -> Result<f64> {
    if predicted.len() != actual.len() {
        return Err(Error::Dimension(format!(
            "{} predictions for {} labels",
            predicted.len(),
            actual.len()
        )));
    }
    let (mut tp, mut fneg, mut tn, mut fpos) = (0usize, 0usize, 0usize, 0usize);
    for (&p, &a) in predicted.iter().zip(actual) {
        match (a, p) {
            (Label::Positive, Label::Positive) => tp += 1,
            (Label::Positive, Label::Negative) => fneg += 1,
            (Label::Negative, Label::Negative) => tn += 1,
            (Label::Negative, Label::Positive) => fpos += 1,
        }
    }
    if tp + fneg == 0 || tn + fpos == 0 {
        return Err(Error::SingleClass);
    }
    let sensitivity = tp as f64 / (tp + fneg) as f64;
    let specificity = tn as f64 / (tn + fpos) as f64;
    Ok(0.5 * (sensitivity + specificity))
}

/// Percentage of probes among the top `k` ranked features.
pub fn probe_retention(ranking: &FeatureRanking, probe_flags: Option<&[bool]>, k: usize) -> Result<f64> {
    let flags = probe_flags.ok_or_else(|| Error::invalid("probe flags are not available"))?;
    if flags.len() != ranking.len() {
        return Err(Error::Dimension(format!(
            "{} probe flags for {} ranked features",
            flags.len(),
            ranking.len()
        )));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let probes = ranking.top_k(k)?.iter().filter(|&&j| flags[j]).count();
    Ok(100.0 * probes as f64 / k as f64)
}
