//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::fmt::Write as _;
use std::time::Instant;

use common::{
    en_objective, en_oracle, l1_svm_objective, l1_svm_oracle, l21_objective, l21_oracle, random_instance,
    svm_objective, svm_oracle, Instance,
};
use fsbench::dataset::{generate_synthetic, Label, SynthSpec, SyntheticBundle};
use fsbench::embedded::{
    elastic_net_fit, elastic_net_lambda_max, l1_svm_fit, l1_svm_lambda_max, l21_fit, ElasticNetConfig, L1SvmConfig,
    L21Config,
};
use fsbench::harness::{
    bsr, evaluate_baseline, probe_retention, run_default, with_jobs, EvalOptions, EvaluationReport, GridSpec, MethodRun,
};
use fsbench::linalg::{norm_l1, norm_l2, norm_l21, soft_threshold, Matrix};
use fsbench::ranking::FeatureRanking;
use fsbench::selector::Method;
use fsbench::svm::{train_linear_svm, SvmConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// `|ours − best| ≤ max(1e-3, 1e-4·|best|)`
fn within(ours: f64, best: f64) -> bool {
    (ours - best).abs() <= 1e-3f64.max(1e-4 * best.abs())
}

fn lambda_for(seed: u64) -> f64 {
    [0.01, 0.1, 0.5, 1.0, 3.0][seed as usize % 5]
}

fn c_for(seed: u64) -> f64 {
    [0.1, 1.0, 10.0][seed as usize % 3]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut misses = Vec::new();
    for seed in 0..20 {
        let p = random_instance(seed);
        let data = p.dataset();
        let (c, lambda) = (c_for(seed), lambda_for(seed));

        let svm = train_linear_svm(&data, &SvmConfig { tol: 1e-8, max_iter: 100_000, ..SvmConfig::linear(c) }).unwrap();
        let (w, b) = svm_oracle(&p, c);
        if !within(svm_objective(&p, c, &svm.w, svm.b), svm_objective(&p, c, &w, b)) {
            misses.push(format!("svm/{seed}"));
        }

        let l1 = l1_svm_fit(&data, &L1SvmConfig { c, lambda, ..Default::default() }).unwrap();
        let (w, b) = l1_svm_oracle(&p, c, lambda);
        if !within(l1_svm_objective(&p, c, lambda, &l1.w, l1.b), l1_svm_objective(&p, c, lambda, &w, b)) {
            misses.push(format!("l1/{seed}"));
        }

        let l2 = lambda_for(seed + 2);
        let en = elastic_net_fit(&data, &ElasticNetConfig { lambda1: lambda, lambda2: l2, ..Default::default() }).unwrap();
        let (w, b) = en_oracle(&p, lambda, l2);
        if !within(en_objective(&p, lambda, l2, &en.w, en.b), en_objective(&p, lambda, l2, &w, b)) {
            misses.push(format!("en/{seed}"));
        }

        let l21 = l21_fit(&data, &L21Config { lambda, tol: 1e-12, max_iter: 5000, ..Default::default() }).unwrap();
        let (w, b) = l21_oracle(&p, lambda);
        if !within(l21_objective(&p, lambda, &l21.w, l21.b), l21_objective(&p, lambda, &w, b)) {
            misses.push(format!("l21/{seed}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        misses.is_empty() && secs < 60.0,
        format!("80 solves, {} outside the bound {misses:?}, {secs:.1}s", misses.len()),
    )
}

fn non_increasing(trace: &[f64]) -> bool {
    trace.windows(2).all(|w| w[1] <= w[0] + 1e-10)
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    for seed in 0..50 {
        let p = random_instance(1000 + seed);
        let data = p.dataset();
        let en = elastic_net_fit(&data, &ElasticNetConfig { lambda1: lambda_for(seed), lambda2: lambda_for(seed + 1), ..Default::default() }).unwrap();
        if !non_increasing(&en.objective_trace) {
            bad.push(format!("en/{seed}"));
        }
        let l21 = l21_fit(&data, &L21Config { lambda: lambda_for(seed), ..Default::default() }).unwrap();
        if !non_increasing(&l21.objective_trace) {
            bad.push(format!("l21/{seed}"));
        }
        let svm = train_linear_svm(&data, &SvmConfig { tol: 1e-8, ..SvmConfig::linear(c_for(seed)) }).unwrap();
        let dual: Vec<f64> = svm.info.dual_trace.iter().map(|v| -v).collect();
        if !non_increasing(&dual) {
            bad.push(format!("svm/{seed}"));
        }
    }
    Outcome::new(bad.is_empty(), format!("50 instances x 3 traces, violations {bad:?}"))
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    for seed in 0..20 {
        let p = random_instance(2000 + seed);
        let data = p.dataset();
        let c = c_for(seed);
        let (l1_max, _) = l1_svm_lambda_max(&data, c).unwrap();
        let en_max = elastic_net_lambda_max(&data);
        for scale in [1.0, 2.0] {
            let l1 = l1_svm_fit(&data, &L1SvmConfig { c, lambda: l1_max * scale, ..Default::default() }).unwrap();
            if l1.w.iter().any(|&w| w != 0.0) {
                bad.push(format!("l1/{seed}/{scale}"));
            }
            let en = elastic_net_fit(&data, &ElasticNetConfig { lambda1: en_max * scale, lambda2: 0.5, ..Default::default() }).unwrap();
            if en.w.iter().any(|&w| w != 0.0) {
                bad.push(format!("en/{seed}/{scale}"));
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("20 instances at 1x and 2x lambda_max, nonzero in {bad:?}"))
}

fn criterion_4() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let p = random_instance(3000 + seed);
        let d = p.d();
        let q = Instance { x: p.x.iter().map(|r| [r.as_slice(), &r[..1]].concat()).collect(), y: p.y.clone() };
        for lambda2 in [0.1, 1.0] {
            let cfg = ElasticNetConfig { lambda1: 0.05, lambda2, tol: 1e-10, max_iter: 1_000_000 };
            let fit = elastic_net_fit(&q.dataset(), &cfg).unwrap();
            worst = worst.max((fit.w[0] - fit.w[d]).abs());
        }
    }
    Outcome::new(worst <= 1e-8, format!("max |w_a - w_b| = {worst:.3e} over 10 seeds x 2 lambda2"))
}

/// Everything criteria 5 to 8 produce, for one parallelism degree.
struct DeskRuns {
    default_bundle: SyntheticBundle,
    runs: Vec<(Method, MethodRun)>,
    baseline: EvaluationReport,
    correlated: Vec<(f64, f64)>,
    desk_seconds: f64,
}

fn default_bundle() -> SyntheticBundle {
    generate_synthetic(&SynthSpec { seed: 7, ..SynthSpec::default() }).unwrap()
}

fn desk_runs(jobs: usize) -> DeskRuns {
    with_jobs(jobs, || {
        let sb = default_bundle();
        let opts = EvalOptions { timing_runs: 3, ..EvalOptions::default() };
        let start = Instant::now();
        let runs: Vec<(Method, MethodRun)> = Method::ALL
            .iter()
            .map(|&m| (m, run_default(&sb.bundle, m, &[50], &opts).unwrap()))
            .collect();
        let desk_seconds = start.elapsed().as_secs_f64();
        let baseline = evaluate_baseline(&sb.bundle, &opts).unwrap();
        let correlated = (0..10)
            .map(|seed| {
                let b = generate_synthetic(&SynthSpec { seed, correlation_strength: 0.9, ..SynthSpec::default() }).unwrap();
                let plain = EvalOptions::default();
                let en = run_default(&b.bundle, Method::ElasticNet, &[50], &plain).unwrap();
                let l1 = run_default(&b.bundle, Method::L1Svm, &[50], &plain).unwrap();
                (en.evaluation.reports[0].bsr_test, l1.evaluation.reports[0].bsr_test)
            })
            .collect();
        DeskRuns { default_bundle: sb, runs, baseline, correlated, desk_seconds }
    })
    .unwrap()
}

fn hits_in_top(ranking: &FeatureRanking, informative: &[usize], k: usize) -> usize {
    let top = ranking.top_k(k).unwrap();
    informative.iter().filter(|j| top.contains(j)).count()
}

fn criterion_5(d: &DeskRuns) -> Outcome {
    let mut pass = d.desk_seconds < 300.0;
    let mut detail = String::new();
    for (m, run) in &d.runs {
        let hits = hits_in_top(&run.evaluation.ranking, &d.default_bundle.informative, 20);
        let need = if m.is_embedded() { 8 } else { 7 };
        if !matches!(m, Method::L21) {
            pass &= hits >= need;
        }
        let _ = write!(detail, "{m} {hits}/10 ");
    }
    let _ = write!(detail, "in top 20, {:.0}s", d.desk_seconds);
    Outcome::new(pass, detail)
}

fn criterion_6(d: &DeskRuns) -> Outcome {
    let mut pass = d.baseline.bsr_test.is_finite() && d.baseline.k == d.default_bundle.bundle.n_features();
    let mut detail = String::new();
    for (m, run) in d.runs.iter().filter(|(m, _)| m.is_embedded()) {
        let b = run.evaluation.reports[0].bsr_test;
        pass &= b >= 0.90;
        let _ = write!(detail, "{m} {b:.4} ");
    }
    let _ = write!(detail, "at k=50, baseline {:.4} at k={}", d.baseline.bsr_test, d.baseline.k);
    Outcome::new(pass, detail)
}

fn criterion_7(d: &DeskRuns) -> Outcome {
    let wins = d.correlated.iter().filter(|(en, l1)| en > l1).count();
    Outcome::new(wins >= 7, format!("EN above L1 on {wins}/10 seeds at k=50 (correlation 0.9)"))
}

fn criterion_8(d: &DeskRuns) -> Outcome {
    let secs = |m: Method| d.runs.iter().find(|(x, _)| *x == m).unwrap().1.evaluation.reports[0].selector_seconds;
    let en = secs(Method::ElasticNet);
    let others = [Method::L21, Method::LocalLearning, Method::Rfe].map(|m| (m, secs(m)));
    let pass = others.iter().all(|&(_, s)| en < s);
    let mut detail = format!("median selector seconds: en {en:.4}");
    for (m, s) in others {
        let _ = write!(detail, ", {m} {s:.4}");
    }
    Outcome::new(pass, detail)
}

fn criterion_9() -> Outcome {
    use Label::{Negative as N, Positive as P};
    let mut failed = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failed.push(what.to_string());
        }
    };
    check(bsr(&[P, N, P, N], &[P, N, P, N]).unwrap() == 1.0, "bsr perfect");
    check(bsr(&[P, P, P, P], &[P, N, P, N]).unwrap() == 0.5, "bsr constant");
    check(bsr(&[P, P, P, N], &[P, P, N, N]).unwrap() == 0.75, "bsr 0.75");

    let ranking = FeatureRanking::from_scores((0..100).map(|j| -(j as f64)).collect());
    let half: Vec<bool> = (0..100).map(|j| j < 50 && j % 2 == 0).collect();
    check(probe_retention(&ranking, Some(&half), 50).unwrap() == 50.0, "retention 50");
    check(probe_retention(&ranking, Some(&[false; 100]), 50).unwrap() == 0.0, "retention 0");

    check(norm_l1(&[0.0, 0.0, 0.0]) == 0.0, "l1 zero");
    check(norm_l1(&[3.0, -4.0]) == 7.0, "l1 (3,-4)");
    check(norm_l1(&[0.0, 1.0, 0.0, 0.0, 0.0]) == 1.0, "l1 e2");
    check(norm_l2(&[3.0, 4.0]) == 5.0, "l2 (3,4)");
    check(norm_l2(&[0.0; 4]) == 0.0, "l2 zero");
    check(norm_l2(&[1.0, 0.0, 0.0]) == 1.0, "l2 e1");
    let eye = Matrix::from_dense_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
    check(norm_l21(&eye) == 3.0, "l21 identity");
    check(norm_l21(&Matrix::from_dense_rows(&[vec![3.0, 4.0], vec![0.0, 0.0]]).unwrap()) == 5.0, "l21 [[3,4],[0,0]]");
    check(norm_l21(&Matrix::from_dense_rows(&vec![vec![0.0; 3]; 2]).unwrap()) == 0.0, "l21 zero");

    check(soft_threshold(3.0, 1.0) == 2.0, "soft (3,1)");
    check(soft_threshold(-0.5, 1.0) == 0.0, "soft (-0.5,1)");
    check(soft_threshold(-1.25, 0.0) == -1.25, "soft (z,0)");

    let grid = GridSpec::default().candidates().len();
    check(grid == 20, "grid size");
    Outcome::new(failed.is_empty(), format!("19 exact examples, grid size {grid}, failed {failed:?}"))
}

/// Everything in the criterion 5 to 8 outputs except wall-clock timings.
fn fingerprint(d: &DeskRuns) -> String {
    let mut out = String::new();
    let report = |out: &mut String, r: &EvaluationReport| {
        let _ = writeln!(out, "{} {} {:?} {:?} {:?} {:?}", r.method, r.k, r.bsr_test, r.probes_retained_pct, r.chosen, r.cv_bsr);
    };
    for (m, run) in &d.runs {
        let _ = writeln!(out, "{m} {} {:?}", run.tuned.config.describe(), run.tuned.validation_bsr);
        let _ = writeln!(out, "{:?}", run.tuned.scores);
        let _ = writeln!(out, "{:?}", run.evaluation.ranking.scores());
        for r in &run.evaluation.reports {
            report(&mut out, r);
        }
    }
    report(&mut out, &d.baseline);
    let _ = writeln!(out, "{:?}", d.correlated);
    out
}

fn criterion_10(first: &DeskRuns) -> Outcome {
    let again = desk_runs(4);
    let same = fingerprint(first) == fingerprint(&again);
    Outcome::new(same, format!("criteria 5-8 outputs with 1 and 4 worker threads identical: {same}"))
}

fn main() {
    let mut results: Vec<(u32, Outcome)> = Vec::new();
    let mut report = |n: u32, o: Outcome| {
        println!("criterion {n:>2}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, o));
    };
    report(1, criterion_1());
    report(2, criterion_2());
    report(3, criterion_3());
    report(4, criterion_4());
    let desk = desk_runs(1);
    report(5, criterion_5(&desk));
    report(6, criterion_6(&desk));
    report(7, criterion_7(&desk));
    report(8, criterion_8(&desk));
    report(9, criterion_9());
    report(10, criterion_10(&desk));
    let failed: Vec<u32> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| *n).collect();
    if failed.is_empty() {
        println!("acceptance: all 10 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
