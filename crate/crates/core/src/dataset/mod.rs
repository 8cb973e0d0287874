//! Labeled datasets, the challenge-style file formats, dataset statistics
//! and a synthetic generator with known informative features and probes.

mod io;
mod synth;

pub use io::{
    load_bundle, load_dataset, read_labels, read_probe_indices, write_dataset, write_labels,
    write_probe_indices, DataFormat, Manifest,
};
pub use synth::{generate_synthetic, ProbeKind, SynthSpec, SyntheticBundle};

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Binary class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    /// `+1.0` or `-1.0`.
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    /// Sign of a decision value; zero maps to [`Label::Positive`].
    #[inline]
    pub fn from_decision(value: f64) -> Self {
        if value >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "1",
            Label::Negative => "-1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        })
    }
}

/// Per-feature metadata. `index` is the feature's position in the
/// originally loaded data, which survives column selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureMeta {
    pub index: usize,
    pub is_probe: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    data: Matrix,
    labels: Vec<Label>,
    features: Vec<FeatureMeta>,
    split: Split,
}

impl LabeledDataset {
    pub fn new(data: Matrix, labels: Vec<Label>, split: Split) -> Result<Self> {
        if labels.len() != data.rows() {
            return Err(Error::Dimension(format!(
                "{} labels for {} examples",
                labels.len(),
                data.rows()
            )));
        }
        let features = (0..data.cols())
            .map(|index| FeatureMeta {
                index,
                is_probe: None,
            })
            .collect();
        Ok(Self {
            data,
            labels,
            features,
            split,
        })
    }

    /// Attaches ground-truth probe flags, one per feature.
    pub fn with_probe_flags(mut self, flags: &[bool]) -> Result<Self> {
        if flags.len() != self.features.len() {
            return Err(Error::Dimension(format!(
                "{} probe flags for {} features",
                flags.len(),
                self.features.len()
            )));
        }
        for (meta, &f) in self.features.iter_mut().zip(flags) {
            meta.is_probe = Some(f);
        }
        Ok(self)
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn features(&self) -> &[FeatureMeta] {
        &self.features
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn n_examples(&self) -> usize {
        self.data.rows()
    }

    pub fn n_features(&self) -> usize {
        self.data.cols()
    }

    /// Labels as `±1.0`.
    pub fn label_signs(&self) -> Vec<f64> {
        self.labels.iter().map(|l| l.sign()).collect()
    }

    /// `(positives, negatives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self
            .labels
            .iter()
            .filter(|&&l| l == Label::Positive)
            .count();
        (pos, self.labels.len() - pos)
    }

    pub fn require_both_classes(&self) -> Result<()> {
        let (pos, neg) = self.class_counts();
        if pos == 0 || neg == 0 {
            Err(Error::SingleClass)
        } else {
            Ok(())
        }
    }

    /// Probe flags when every feature carries one.
    pub fn probe_flags(&self) -> Option<Vec<bool>> {
        self.features.iter().map(|m| m.is_probe).collect()
    }

    pub fn select_features(&self, columns: &[usize]) -> Result<Self> {
        let data = self.data.select_columns(columns)?;
        let features = columns.iter().map(|&j| self.features[j]).collect();
        Ok(Self {
            data,
            labels: self.labels.clone(),
            features,
            split: self.split,
        })
    }

    pub fn select_examples(&self, rows: &[usize]) -> Result<Self> {
        let data = self.data.select_rows(rows)?;
        let labels = rows.iter().map(|&i| self.labels[i]).collect();
        Ok(Self {
            data,
            labels,
            features: self.features.clone(),
            split: self.split,
        })
    }

    /// Rows of `self` followed by rows of `other`, tagged with `split`.
    pub fn concat(&self, other: &LabeledDataset, split: Split) -> Result<Self> {
        let data = self.data.vstack(&other.data)?;
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let features = self
            .features
            .iter()
            .zip(&other.features)
            .map(|(a, b)| FeatureMeta {
                index: a.index,
                is_probe: a.is_probe.or(b.is_probe),
            })
            .collect();
        Ok(Self {
            data,
            labels,
            features,
            split,
        })
    }
}

/// Train, validation and test splits over the same features.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub train: LabeledDataset,
    pub validation: LabeledDataset,
    pub test: LabeledDataset,
}

impl DatasetBundle {
    pub fn new(train: LabeledDataset, validation: LabeledDataset, test: LabeledDataset) -> Result<Self> {
        let d = train.n_features();
        if validation.n_features() != d || test.n_features() != d {
            return Err(Error::Dimension(format!(
                "splits disagree on feature count: train {d}, validation {}, test {}",
                validation.n_features(),
                test.n_features()
            )));
        }
        if train.split() != Split::Train
            || validation.split() != Split::Validation
            || test.split() != Split::Test
        {
            return Err(Error::invalid("bundle splits must be train, validation, test"));
        }
        Ok(Self {
            train,
            validation,
            test,
        })
    }

    pub fn n_features(&self) -> usize {
        self.train.n_features()
    }

    /// Train and validation examples combined into one training set.
    pub fn train_plus_validation(&self) -> Result<LabeledDataset> {
        self.train.concat(&self.validation, Split::Train)
    }

    pub fn splits(&self) -> [&LabeledDataset; 3] {
        [&self.train, &self.validation, &self.test]
    }
}

/// Summary statistics in the style of a dataset-description table.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetStats {
    pub rows: usize,
    pub cols: usize,
    pub sparsity: f64,
    pub mean_abs_corr: f64,
    /// Fraction of positive labels.
    pub class_balance: f64,
}

pub fn dataset_stats(d: &LabeledDataset, sample_pairs: usize, seed: u64) -> Result<DatasetStats> {
    if d.n_examples() == 0 || d.n_features() == 0 {
        return Err(Error::invalid("statistics of an empty dataset are undefined"));
    }
    let mean_abs_corr = if d.n_features() >= 2 && d.n_examples() >= 2 {
        linalg::mean_abs_pairwise_correlation(d.data(), sample_pairs, seed)?
    } else {
        0.0
    };
    let (pos, _) = d.class_counts();
    Ok(DatasetStats {
        rows: d.n_examples(),
        cols: d.n_features(),
        sparsity: linalg::sparsity(d.data())?,
        mean_abs_corr,
        class_balance: pos as f64 / d.n_examples() as f64,
    })
}
