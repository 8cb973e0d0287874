//! Embedded and filter feature-selection methods for high-dimensional
//! binary classification, together with the pipeline that benchmarks them:
//! selector tuning on a validation split, ranking, top-k SVM model
//! selection by cross-validation, and balanced-success-rate reporting.

pub mod dataset;
pub mod embedded;
pub mod error;
pub mod filters;
pub mod harness;
pub mod linalg;
pub mod ranking;
pub mod selector;
pub mod svm;

pub use error::{Error, Result};
