//! A uniform front over every feature selector, with the default parameter
//! grids used for tuning.

use std::fmt;
use std::str::FromStr;

use crate::dataset::LabeledDataset;
use crate::embedded::{
    elastic_net_rank, l1_svm_rank, l21_rank, ll_rank, rfe_rank, ElasticNetConfig, L1SvmConfig,
    L21Config, LocalLearningConfig, RfeConfig,
};
use crate::error::{Error, Result};
use crate::filters::{golub_rank, shrunken_centroid_rank, ShrunkenCentroidConfig};
use crate::ranking::FeatureRanking;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    L1Svm,
    Rfe,
    ElasticNet,
    L21,
    LocalLearning,
    ShrunkenCentroid,
    Golub,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::L1Svm,
        Method::LocalLearning,
        Method::ElasticNet,
        Method::L21,
        Method::Rfe,
        Method::ShrunkenCentroid,
        Method::Golub,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::L1Svm => "l1",
            Method::Rfe => "rfe",
            Method::ElasticNet => "en",
            Method::L21 => "l21",
            Method::LocalLearning => "ll",
            Method::ShrunkenCentroid => "sc",
            Method::Golub => "golub",
        }
    }

    pub fn is_embedded(self) -> bool {
        !matches!(self, Method::ShrunkenCentroid | Method::Golub)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "l1" | "l1svm" | "l1-svm" => Method::L1Svm,
            "rfe" => Method::Rfe,
            "en" | "elastic-net" | "elasticnet" => Method::ElasticNet,
            "l21" => Method::L21,
            "ll" | "local-learning" => Method::LocalLearning,
            "sc" | "shrunken-centroid" => Method::ShrunkenCentroid,
            "golub" => Method::Golub,
            other => return Err(Error::invalid(format!("unknown method '{other}'"))),
        })
    }
}

/// A method together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectorConfig {
    L1Svm(L1SvmConfig),
    Rfe(RfeConfig),
    ElasticNet(ElasticNetConfig),
    L21(L21Config),
    LocalLearning(LocalLearningConfig),
    ShrunkenCentroid(ShrunkenCentroidConfig),
    Golub,
}

/// `{1e-3, 1e-2, …, 1e2}`
pub fn log_grid() -> Vec<f64> {
    vec![1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2]
}

impl SelectorConfig {
    pub fn default_for(method: Method) -> Self {
        match method {
            Method::L1Svm => SelectorConfig::L1Svm(L1SvmConfig::default()),
            Method::Rfe => SelectorConfig::Rfe(RfeConfig::default()),
            Method::ElasticNet => SelectorConfig::ElasticNet(ElasticNetConfig::default()),
            Method::L21 => SelectorConfig::L21(L21Config::default()),
            Method::LocalLearning => SelectorConfig::LocalLearning(LocalLearningConfig::default()),
            Method::ShrunkenCentroid => SelectorConfig::ShrunkenCentroid(ShrunkenCentroidConfig::default()),
            Method::Golub => SelectorConfig::Golub,
        }
    }

    pub fn method(&self) -> Method {
        match self {
            SelectorConfig::L1Svm(_) => Method::L1Svm,
            SelectorConfig::Rfe(_) => Method::Rfe,
            SelectorConfig::ElasticNet(_) => Method::ElasticNet,
            SelectorConfig::L21(_) => Method::L21,
            SelectorConfig::LocalLearning(_) => Method::LocalLearning,
            SelectorConfig::ShrunkenCentroid(_) => Method::ShrunkenCentroid,
            SelectorConfig::Golub => Method::Golub,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SelectorConfig::L1Svm(c) => c.validate(),
            SelectorConfig::Rfe(c) => c.validate(),
            SelectorConfig::ElasticNet(c) => c.validate(),
            SelectorConfig::L21(c) => c.validate(),
            SelectorConfig::LocalLearning(c) => c.validate(),
            SelectorConfig::ShrunkenCentroid(c) => c.validate(),
            SelectorConfig::Golub => Ok(()),
        }
    }

    pub fn rank(&self, data: &LabeledDataset) -> Result<FeatureRanking> {
        match self {
            SelectorConfig::L1Svm(c) => l1_svm_rank(data, c),
            SelectorConfig::Rfe(c) => rfe_rank(data, c),
            SelectorConfig::ElasticNet(c) => elastic_net_rank(data, c),
            SelectorConfig::L21(c) => l21_rank(data, c),
            SelectorConfig::LocalLearning(c) => ll_rank(data, c),
            SelectorConfig::ShrunkenCentroid(c) => shrunken_centroid_rank(data, c),
            SelectorConfig::Golub => golub_rank(data),
        }
    }

    /// Regularization strength compared lexicographically; larger is
    /// stronger. For RFE a smaller `C` counts as stronger.
    pub fn strength(&self) -> Vec<f64> {
        match self {
            SelectorConfig::L1Svm(c) => vec![c.lambda, -c.c],
            SelectorConfig::Rfe(c) => vec![-c.c],
            SelectorConfig::ElasticNet(c) => vec![c.lambda1, c.lambda2],
            SelectorConfig::L21(c) => vec![c.lambda],
            SelectorConfig::LocalLearning(c) => vec![c.lambda],
            SelectorConfig::ShrunkenCentroid(c) => vec![c.delta],
            SelectorConfig::Golub => Vec::new(),
        }
    }

    /// Candidates derived from `self` by varying the tuned parameters over
    /// the default grids. Fixed parameters are kept.
    pub fn grid(&self) -> Vec<SelectorConfig> {
        let g = log_grid();
        match *self {
            SelectorConfig::L1Svm(c) => g
                .iter()
                .map(|&lambda| SelectorConfig::L1Svm(L1SvmConfig { lambda, ..c }))
                .collect(),
            SelectorConfig::Rfe(c) => [0.1, 1.0, 10.0, 100.0]
                .iter()
                .map(|&cc| SelectorConfig::Rfe(RfeConfig { c: cc, ..c }))
                .collect(),
            SelectorConfig::ElasticNet(c) => g
                .iter()
                .flat_map(|&lambda1| {
                    g.iter().map(move |&lambda2| {
                        SelectorConfig::ElasticNet(ElasticNetConfig { lambda1, lambda2, ..c })
                    })
                })
                .collect(),
            SelectorConfig::L21(c) => g
                .iter()
                .map(|&lambda| SelectorConfig::L21(L21Config { lambda, ..c }))
                .collect(),
            SelectorConfig::LocalLearning(c) => g
                .iter()
                .map(|&lambda| SelectorConfig::LocalLearning(LocalLearningConfig { lambda, ..c }))
                .collect(),
            SelectorConfig::ShrunkenCentroid(c) => [0.0, 0.5, 1.0, 2.0, 4.0]
                .iter()
                .map(|&delta| SelectorConfig::ShrunkenCentroid(ShrunkenCentroidConfig { delta, ..c }))
                .collect(),
            SelectorConfig::Golub => vec![SelectorConfig::Golub],
        }
    }

    /// `key=value` pairs of the tuned parameters.
    pub fn describe(&self) -> String {
        match self {
            SelectorConfig::L1Svm(c) => format!("C={} lambda={}", c.c, c.lambda),
            SelectorConfig::Rfe(c) => format!("C={} drop_fraction={}", c.c, c.drop_fraction),
            SelectorConfig::ElasticNet(c) => format!("lambda1={} lambda2={}", c.lambda1, c.lambda2),
            SelectorConfig::L21(c) => format!("lambda={}", c.lambda),
            SelectorConfig::LocalLearning(c) => format!("lambda={} kernel_width={}", c.lambda, c.kernel_width),
            SelectorConfig::ShrunkenCentroid(c) => format!("delta={} corr_threshold={}", c.delta, c.corr_threshold),
            SelectorConfig::Golub => String::new(),
        }
    }
}
