//! The benchmarking pipeline: selector tuning on the validation split,
//! ranking on train plus validation, top-k SVM model selection by
//! stratified cross-validation, test evaluation and report formatting.
//!
//! Parallel work is collected in input order, so results do not depend on
//! the number of threads.

mod cv;
mod metrics;
mod pipeline;
mod report;

pub use cv::{model_select_svm, stratified_folds, GridSpec, ModelSelection};
pub use metrics::{bsr, probe_retention};
pub use pipeline::{
    default_k_values, evaluate, evaluate_baseline, rank_on_train_plus_validation, run_default,
    run_method, tune_selector, with_jobs, BsrCurve, EvalOptions, Evaluation, EvaluationReport,
    MethodRun, TuneResult, DEFAULT_TUNE_K,
};
pub use report::{bench_table, curve_csv, format_bsr_probes, report_csv, write_text, REPORT_HEADER};
