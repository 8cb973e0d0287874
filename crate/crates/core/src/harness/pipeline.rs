use std::time::Instant;

use rayon::prelude::*;

use crate::dataset::{DatasetBundle, LabeledDataset};
use crate::error::{Error, Result};
use crate::ranking::FeatureRanking;
use crate::selector::{Method, SelectorConfig};
use crate::svm::{self, train_linear_svm, SvmConfig};

use super::cv::{model_select_svm, GridSpec};
use super::metrics::{bsr, probe_retention};

/// Number of top features used while tuning selector parameters.
pub const DEFAULT_TUNE_K: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub config: SelectorConfig,
    pub validation_bsr: f64,
    /// Validation BSR per candidate in grid order; `None` where ranking or
    /// training failed.
    pub scores: Vec<(SelectorConfig, Option<f64>)>,
}

/// Feature indices of the top `k`, in ascending index order.
fn top_k_sorted(ranking: &FeatureRanking, k: usize) -> Result<Vec<usize>> {
    let mut cols = ranking.top_k(k)?.to_vec();
    cols.sort_unstable();
    Ok(cols)
}

fn validation_score(bundle: &DatasetBundle, cfg: &SelectorConfig, k: usize) -> Result<f64> {
    let ranking = cfg.rank(&bundle.train)?;
    let cols = top_k_sorted(&ranking, k)?;
    let model = train_linear_svm(&bundle.train.select_features(&cols)?, &SvmConfig::linear(1.0))?;
    let valid = bundle.validation.data().select_columns(&cols)?;
    let predicted = crate::svm::Model::Linear(model).predict(&valid);
    bsr(&predicted, bundle.validation.labels())
}

/// Re-ranks the training split for every candidate and keeps the one whose
/// top `k` features give the best validation BSR with a linear SVM
/// (`C = 1`). Ties go to the stronger regularization, then to the earlier
/// candidate. Candidates that fail are skipped; if all fail, the first
/// error is returned.
pub fn tune_selector(bundle: &DatasetBundle, grid: &[SelectorConfig], k: usize) -> Result<TuneResult> {
    if grid.is_empty() {
        return Err(Error::invalid("the selector grid is empty"));
    }
    if k == 0 {
        return Err(Error::invalid("tuning k must be at least 1"));
    }
    bundle.validation.require_both_classes()?;
    let k = k.min(bundle.n_features());
    let results: Vec<Result<f64>> = grid.par_iter().map(|cfg| validation_score(bundle, cfg, k)).collect();
    let mut best: Option<(usize, f64)> = None;
    let mut first_error = None;
    let mut scores = Vec::with_capacity(grid.len());
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(s) => {
                scores.push((grid[i], Some(s)));
                let better = match best {
                    None => true,
                    Some((b, bs)) => {
                        s > bs || (s == bs && stronger(&grid[i].strength(), &grid[b].strength()))
                    }
                };
                if better {
                    best = Some((i, s));
                }
            }
            Err(e) => {
                scores.push((grid[i], None));
                first_error.get_or_insert(e);
            }
        }
    }
    match best {
        Some((i, s)) => Ok(TuneResult {
            config: grid[i],
            validation_bsr: s,
            scores,
        }),
        None => Err(first_error.expect("nonempty grid")),
    }
}

fn stronger(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Greater => return true,
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Runs the selector on training and validation examples combined.
pub fn rank_on_train_plus_validation(bundle: &DatasetBundle, cfg: &SelectorConfig) -> Result<FeatureRanking> {
    cfg.rank(&bundle.train_plus_validation()?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub method: String,
    pub k: usize,
    pub bsr_test: f64,
    pub probes_retained_pct: Option<f64>,
    pub chosen: SvmConfig,
    pub cv_bsr: f64,
    /// Time to rank on train plus validation.
    pub selector_seconds: f64,
    /// Model selection, final training and test prediction.
    pub classify_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BsrCurve {
    pub method: String,
    pub points: Vec<(usize, f64)>,
}

impl BsrCurve {
    pub fn new(method: String, points: Vec<(usize, f64)>) -> Result<Self> {
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::invalid("curve k values must be strictly increasing"));
        }
        Ok(Self { method, points })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub ranking: FeatureRanking,
    pub reports: Vec<EvaluationReport>,
    pub curve: BsrCurve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub grid: GridSpec,
    pub tune_k: usize,
    /// Ranking repetitions; the reported selector time is their median.
    pub timing_runs: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            tune_k: DEFAULT_TUNE_K,
            timing_runs: 1,
        }
    }
}

/// `50, 100, …, 1000`, capped at `n_features`.
pub fn default_k_values(n_features: usize) -> Vec<usize> {
    (1..=20).map(|i| i * 50).filter(|&k| k <= n_features).collect()
}

fn validate_k_values(k_values: &[usize], n_features: usize) -> Result<Vec<usize>> {
    if k_values.is_empty() {
        return Err(Error::invalid("no k values given"));
    }
    let mut ks = k_values.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ks[0] == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if let Some(&k) = ks.iter().find(|&&k| k > n_features) {
        return Err(Error::invalid(format!("k = {k} exceeds the {n_features} features")));
    }
    Ok(ks)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let h = v.len() / 2;
    if v.len() % 2 == 1 {
        v[h]
    } else {
        0.5 * (v[h - 1] + v[h])
    }
}

/// Ranks with `cfg` on train plus validation, then for each `k` selects an
/// SVM on the top `k` features by cross-validation, trains it on train plus
/// validation and reports its test BSR. One ranking serves every `k`, so
/// the feature sets are nested.
pub fn evaluate(bundle: &DatasetBundle, cfg: &SelectorConfig, k_values: &[usize], opts: &EvalOptions) -> Result<Evaluation> {
    let ks = validate_k_values(k_values, bundle.n_features())?;
    let train = bundle.train_plus_validation()?;
    let mut ranking = None;
    let mut times = Vec::new();
    for _ in 0..opts.timing_runs.max(1) {
        let start = Instant::now();
        let r = cfg.rank(&train)?;
        times.push(start.elapsed().as_secs_f64());
        ranking = Some(r);
    }
    let ranking = ranking.expect("at least one run");
    let selector_seconds = median(times);
    let reports = classify_over_k(bundle, &train, &ranking, &ks, cfg.method().name(), selector_seconds, opts)?;
    let curve = BsrCurve::new(cfg.method().name().to_string(), reports.iter().map(|r| (r.k, r.bsr_test)).collect())?;
    Ok(Evaluation {
        ranking,
        reports,
        curve,
    })
}

fn classify_over_k(
    bundle: &DatasetBundle,
    train: &LabeledDataset,
    ranking: &FeatureRanking,
    ks: &[usize],
    method: &str,
    selector_seconds: f64,
    opts: &EvalOptions,
) -> Result<Vec<EvaluationReport>> {
    let flags = train.probe_flags();
    ks.iter()
        .map(|&k| {
            let start = Instant::now();
            let cols = top_k_sorted(ranking, k)?;
            let sub = train.select_features(&cols)?;
            let selection = model_select_svm(&sub, &opts.grid)?;
            let model = svm::train(&sub, &selection.config)?;
            let test = bundle.test.data().select_columns(&cols)?;
            let bsr_test = bsr(&model.predict(&test), bundle.test.labels())?;
            let classify_seconds = start.elapsed().as_secs_f64();
            let probes_retained_pct = match &flags {
                Some(f) => Some(probe_retention(ranking, Some(f), k)?),
                None => None,
            };
            Ok(EvaluationReport {
                method: method.to_string(),
                k,
                bsr_test,
                probes_retained_pct,
                chosen: selection.config,
                cv_bsr: selection.cv_bsr,
                selector_seconds,
                classify_seconds,
            })
        })
        .collect()
}

/// All features, no selection. Reported under the method name `baseline`
/// with `k` equal to the feature count and zero selector time.
pub fn evaluate_baseline(bundle: &DatasetBundle, opts: &EvalOptions) -> Result<EvaluationReport> {
    let train = bundle.train_plus_validation()?;
    let d = bundle.n_features();
    let ranking = FeatureRanking::from_scores(vec![0.0; d]);
    let mut reports = classify_over_k(bundle, &train, &ranking, &[d], "baseline", 0.0, opts)?;
    Ok(reports.remove(0))
}

/// A tuned and evaluated method.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodRun {
    pub tuned: TuneResult,
    pub tune_seconds: f64,
    pub evaluation: Evaluation,
}

/// Tunes `base` over its default grid, then evaluates the winner.
pub fn run_method(bundle: &DatasetBundle, base: &SelectorConfig, k_values: &[usize], opts: &EvalOptions) -> Result<MethodRun> {
    validate_k_values(k_values, bundle.n_features())?;
    let start = Instant::now();
    let tuned = tune_selector(bundle, &base.grid(), opts.tune_k)?;
    let tune_seconds = start.elapsed().as_secs_f64();
    let evaluation = evaluate(bundle, &tuned.config, k_values, opts)?;
    Ok(MethodRun {
        tuned,
        tune_seconds,
        evaluation,
    })
}

/// Convenience for [`run_method`] with a method's default configuration.
pub fn run_default(bundle: &DatasetBundle, method: Method, k_values: &[usize], opts: &EvalOptions) -> Result<MethodRun> {
    run_method(bundle, &SelectorConfig::default_for(method), k_values, opts)
}

/// Runs `f` on a pool of `jobs` threads; `0` uses the global pool.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Numerical(format!("cannot start worker threads: {e}")))?;
    Ok(pool.install(f))
}
