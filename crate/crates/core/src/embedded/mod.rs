//! Embedded and wrapper feature selectors. Each fits a model on a training
//! set and scores features by the magnitude of what the model learned.

mod elastic_net;
mod l1_svm;
mod l21;
mod local_learning;
mod rfe;

pub use elastic_net::{
    elastic_net_fit, elastic_net_lambda_max, elastic_net_objective, elastic_net_rank,
    ElasticNetConfig, ElasticNetFit,
};
pub use l1_svm::{l1_svm_fit, l1_svm_lambda_max, l1_svm_objective, l1_svm_rank, L1SvmConfig, L1SvmFit};
pub use l21::{l21_fit, l21_objective, l21_rank, one_hot_targets, L21Config, L21Fit, L21Form};
pub use local_learning::{
    ll_expected_margins, ll_margin_vector, ll_rank, local_learning_fit, LocalLearningConfig,
    LocalLearningFit,
};
pub use rfe::{rfe_eliminate, rfe_rank, RfeConfig, RfeRound, RfeTrace};
