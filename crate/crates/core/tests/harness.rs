use fsbench::dataset::{generate_synthetic, DatasetBundle, Label, LabeledDataset, Split, SynthSpec};
use fsbench::embedded::{ElasticNetConfig, L1SvmConfig};
use fsbench::harness::{
    bsr, evaluate, evaluate_baseline, model_select_svm, probe_retention, rank_on_train_plus_validation, run_default, tune_selector,
    with_jobs, EvalOptions, EvaluationReport, GridSpec,
};
use fsbench::linalg::Matrix;
use fsbench::ranking::FeatureRanking;
use fsbench::selector::{Method, SelectorConfig};
use fsbench::svm::KernelSpec;
use proptest::prelude::*;

fn separable_bundle(seed: u64) -> DatasetBundle {
    let spec = SynthSpec {
        n_train: 150,
        n_valid: 75,
        n_test: 150,
        d_real: 40,
        d_probes: 40,
        k_informative: 3,
        noise_sd: 0.0,
        seed,
        ..SynthSpec::default()
    };
    generate_synthetic(&spec).unwrap().bundle
}

fn quick_opts() -> EvalOptions {
    EvalOptions { tune_k: 10, ..EvalOptions::default() }
}

fn without_timings(r: &EvaluationReport) -> EvaluationReport {
    EvaluationReport { selector_seconds: 0.0, classify_seconds: 0.0, ..r.clone() }
}

fn flip(l: Label) -> Label {
    l.flipped()
}

proptest! {
    #[test]
    fn bsr_is_symmetric_under_relabelling(
        pairs in prop::collection::vec((any::<bool>(), any::<bool>()), 2..40),
    ) {
        let to = |b: bool| if b { Label::Positive } else { Label::Negative };
        let mut actual: Vec<Label> = pairs.iter().map(|p| to(p.0)).collect();
        actual[0] = Label::Positive;
        actual[1] = Label::Negative;
        let predicted: Vec<Label> = pairs.iter().map(|p| to(p.1)).collect();
        let a = bsr(&predicted, &actual).unwrap();
        let fa: Vec<Label> = actual.iter().copied().map(flip).collect();
        let fp: Vec<Label> = predicted.iter().copied().map(flip).collect();
        prop_assert_eq!(a, bsr(&fp, &fa).unwrap());
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert_eq!(bsr(&actual, &actual).unwrap(), 1.0);
        prop_assert_eq!(bsr(&fa, &actual).unwrap(), 0.0);
    }

    #[test]
    fn probe_retention_counts_probes_in_the_prefix(
        scores in prop::collection::vec(-5.0..5.0f64, 1..30),
        flags_seed in any::<u64>(),
        k_frac in 0.0..1.0f64,
    ) {
        let d = scores.len();
        let flags: Vec<bool> = (0..d).map(|j| (flags_seed >> (j % 64)) & 1 == 1).collect();
        let r = FeatureRanking::from_scores(scores);
        let k = 1 + ((d - 1) as f64 * k_frac) as usize;
        let want = 100.0 * r.order()[..k].iter().filter(|&&j| flags[j]).count() as f64 / k as f64;
        prop_assert_eq!(probe_retention(&r, Some(&flags), k).unwrap(), want);
    }
}

#[test]
fn one_point_grid_returns_that_point() {
    let b = separable_bundle(1);
    let cfg = SelectorConfig::ElasticNet(ElasticNetConfig { lambda1: 0.5, lambda2: 0.1, ..Default::default() });
    let t = tune_selector(&b, &[cfg], 10).unwrap();
    assert_eq!(t.config, cfg);
    assert_eq!(t.scores.len(), 1);
}

#[test]
fn tuning_rejects_a_penalty_that_zeroes_everything() {
    let b = separable_bundle(2);
    let huge = SelectorConfig::L1Svm(L1SvmConfig { lambda: 1e6, ..Default::default() });
    let sane = SelectorConfig::L1Svm(L1SvmConfig { lambda: 0.01, ..Default::default() });
    let t = tune_selector(&b, &[huge, sane], 3).unwrap();
    assert_eq!(t.config, sane);
    let s: Vec<f64> = t.scores.iter().map(|(_, s)| s.unwrap()).collect();
    assert!(s[1] > s[0], "{s:?}");
}

#[test]
fn tuning_is_deterministic_across_thread_counts() {
    let b = separable_bundle(3);
    let grid = SelectorConfig::default_for(Method::ElasticNet).grid();
    let one = with_jobs(1, || tune_selector(&b, &grid, 10).unwrap()).unwrap();
    let three = with_jobs(3, || tune_selector(&b, &grid, 10).unwrap()).unwrap();
    assert_eq!(one, three);
}

#[test]
fn ranking_on_train_plus_validation_covers_every_feature() {
    let b = separable_bundle(4);
    for method in Method::ALL {
        let r = rank_on_train_plus_validation(&b, &SelectorConfig::default_for(method)).unwrap();
        assert_eq!(r.len(), b.n_features(), "{method}");
    }
}

#[test]
fn separable_data_ties_go_to_the_first_candidate() {
    let x: Vec<Vec<f64>> = (0..30).map(|i| vec![if i % 2 == 0 { 2.0 } else { -2.0 } + 0.01 * i as f64]).collect();
    let labels = (0..30).map(|i| if i % 2 == 0 { Label::Positive } else { Label::Negative }).collect();
    let data = LabeledDataset::new(Matrix::from_dense_rows(&x).unwrap(), labels, Split::Train).unwrap();
    let sel = model_select_svm(&data, &GridSpec::default()).unwrap();
    assert_eq!(sel.scores.len(), 20);
    assert_eq!(sel.cv_bsr, 1.0);
    assert_eq!(sel.config.kernel, KernelSpec::Linear);
    assert_eq!(sel.config.c, 0.1);
}

#[test]
fn all_features_evaluation_equals_the_baseline() {
    let b = separable_bundle(5);
    let opts = quick_opts();
    let d = b.n_features();
    let full = evaluate(&b, &SelectorConfig::Golub, &[d], &opts).unwrap();
    let base = evaluate_baseline(&b, &opts).unwrap();
    let r = &full.reports[0];
    assert_eq!((r.k, r.bsr_test, r.chosen, r.cv_bsr), (base.k, base.bsr_test, base.chosen, base.cv_bsr));
    assert_eq!(base.method, "baseline");
    assert_eq!(base.selector_seconds, 0.0);
}

#[test]
fn embedded_methods_solve_separable_data() {
    let spec = SynthSpec {
        n_train: 400,
        n_valid: 200,
        n_test: 400,
        d_real: 40,
        d_probes: 40,
        k_informative: 3,
        noise_sd: 0.0,
        seed: 6,
        ..SynthSpec::default()
    };
    let b = generate_synthetic(&spec).unwrap().bundle;
    for method in Method::ALL.into_iter().filter(|m| m.is_embedded()) {
        let run = run_default(&b, method, &[3, 10], &quick_opts()).unwrap();
        for r in &run.evaluation.reports {
            assert!(r.bsr_test >= 0.95, "{method} k={}: {}", r.k, r.bsr_test);
        }
    }
}

#[test]
fn evaluation_is_nested_reproducible_and_timed() {
    let b = separable_bundle(7);
    let opts = quick_opts();
    let cfg = SelectorConfig::default_for(Method::Rfe);
    let ks = [5, 20, 40];
    let a = with_jobs(1, || evaluate(&b, &cfg, &ks, &opts).unwrap()).unwrap();
    let c = with_jobs(3, || evaluate(&b, &cfg, &ks, &opts).unwrap()).unwrap();
    assert_eq!(a.ranking, c.ranking);
    for (x, y) in a.reports.iter().zip(&c.reports) {
        assert_eq!(without_timings(x), without_timings(y));
        assert!(x.selector_seconds > 0.0 && x.classify_seconds > 0.0);
    }
    let tops: Vec<&[usize]> = ks.iter().map(|&k| a.ranking.top_k(k).unwrap()).collect();
    assert!(tops.windows(2).all(|w| w[1].starts_with(w[0])));
    assert_eq!(a.curve.points.iter().map(|p| p.0).collect::<Vec<_>>(), ks);
    for r in &a.reports {
        assert!(r.probes_retained_pct.is_some());
    }
}

#[test]
fn too_large_k_is_rejected() {
    let b = separable_bundle(8);
    let err = evaluate(&b, &SelectorConfig::Golub, &[b.n_features() + 1], &quick_opts());
    assert!(err.is_err());
    assert!(evaluate(&b, &SelectorConfig::Golub, &[0], &quick_opts()).is_err());
}
