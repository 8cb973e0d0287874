//! `fsbench`: generate benchmark data, rank features and evaluate
//! feature selectors with an SVM.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fsbench::dataset::{
    dataset_stats, generate_synthetic, load_bundle, write_dataset, write_probe_indices, DataFormat,
    DatasetBundle, Manifest, ProbeKind, SynthSpec,
};
use fsbench::harness::{
    bench_table, curve_csv, evaluate, evaluate_baseline, rank_on_train_plus_validation, report_csv,
    run_method, tune_selector, with_jobs, write_text, EvalOptions, EvaluationReport, GridSpec,
};
use fsbench::linalg::DEFAULT_CORRELATION_PAIRS;
use fsbench::selector::{Method, SelectorConfig};
use fsbench::Error;

#[derive(Parser)]
#[command(name = "fsbench", version, about = "Feature-selection benchmark for SVM classification")]
struct Cli {
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, env = "FSBENCH_JOBS", default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic bundle with known informative features and probes.
    Synth(SynthArgs),
    /// Print sparsity, correlation and class balance per split.
    Stats(StatsArgs),
    /// Rank features on training plus validation data.
    Rank(RankArgs),
    /// Evaluate one selector over a list of feature counts.
    Eval(EvalArgs),
    /// Compare several selectors at k = 50 and 200.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// Sparse when the sparsity target is at least one half.
    Auto,
    Dense,
    Sparse,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeArg {
    Permutation,
    Zipf,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 500)]
    n_train: usize,
    #[arg(long, default_value_t = 250)]
    n_valid: usize,
    #[arg(long, default_value_t = 500)]
    n_test: usize,
    #[arg(long, default_value_t = 200)]
    d_real: usize,
    #[arg(long, default_value_t = 200)]
    probes: usize,
    #[arg(long, default_value_t = 10)]
    informative: usize,
    #[arg(long, default_value_t = 0.0)]
    sparsity: f64,
    #[arg(long, default_value_t = 5)]
    block_size: usize,
    /// Within-block correlation, in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    strength: f64,
    #[arg(long, value_enum, default_value_t = ProbeArg::Permutation)]
    probe_kind: ProbeArg,
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    manifest: PathBuf,
    /// Seed for the sampled feature pairs of the correlation estimate.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Selector parameters. Any flag given fixes the configuration; with none,
/// `eval` and `bench` tune the method on the validation split.
#[derive(Args, Default)]
struct MethodParams {
    /// L1-SVM, L21 and local-learning regularization.
    #[arg(long)]
    lambda: Option<f64>,
    /// Elastic-net L1 penalty.
    #[arg(long)]
    lambda1: Option<f64>,
    /// Elastic-net L2 penalty.
    #[arg(long)]
    lambda2: Option<f64>,
    /// SVM cost for L1-SVM and RFE.
    #[arg(long = "c")]
    c: Option<f64>,
    /// Shrunken-centroid shrinkage.
    #[arg(long)]
    delta: Option<f64>,
    /// Fraction of features RFE drops per round.
    #[arg(long)]
    drop_fraction: Option<f64>,
    /// Local-learning kernel width.
    #[arg(long)]
    kernel_width: Option<f64>,
    /// Shrunken-centroid decorrelation threshold.
    #[arg(long)]
    corr_threshold: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

impl MethodParams {
    fn any(&self) -> bool {
        self.lambda.is_some()
            || self.lambda1.is_some()
            || self.lambda2.is_some()
            || self.c.is_some()
            || self.delta.is_some()
            || self.drop_fraction.is_some()
            || self.kernel_width.is_some()
            || self.corr_threshold.is_some()
            || self.max_iter.is_some()
    }

    fn config(&self, method: Method) -> Result<SelectorConfig, Error> {
        let mut used = Vec::new();
        let mut cfg = SelectorConfig::default_for(method);
        macro_rules! set {
            ($field:ident, $target:expr) => {
                if let Some(v) = self.$field {
                    $target = v;
                    used.push(stringify!($field));
                }
            };
        }
        match &mut cfg {
            SelectorConfig::L1Svm(c) => {
                set!(lambda, c.lambda);
                set!(c, c.c);
                set!(max_iter, c.max_iter);
            }
            SelectorConfig::Rfe(c) => {
                set!(c, c.c);
                set!(drop_fraction, c.drop_fraction);
                set!(max_iter, c.svm_max_iter);
            }
            SelectorConfig::ElasticNet(c) => {
                set!(lambda1, c.lambda1);
                set!(lambda2, c.lambda2);
                set!(max_iter, c.max_iter);
            }
            SelectorConfig::L21(c) => {
                set!(lambda, c.lambda);
                set!(max_iter, c.max_iter);
            }
            SelectorConfig::LocalLearning(c) => {
                set!(lambda, c.lambda);
                set!(kernel_width, c.kernel_width);
                set!(max_iter, c.max_iter);
            }
            SelectorConfig::ShrunkenCentroid(c) => {
                set!(delta, c.delta);
                set!(corr_threshold, c.corr_threshold);
            }
            SelectorConfig::Golub => {}
        }
        let given = [
            ("lambda", self.lambda.is_some()),
            ("lambda1", self.lambda1.is_some()),
            ("lambda2", self.lambda2.is_some()),
            ("c", self.c.is_some()),
            ("delta", self.delta.is_some()),
            ("drop_fraction", self.drop_fraction.is_some()),
            ("kernel_width", self.kernel_width.is_some()),
            ("corr_threshold", self.corr_threshold.is_some()),
            ("max_iter", self.max_iter.is_some()),
        ];
        if let Some((name, _)) = given.iter().find(|(n, g)| *g && !used.contains(n)) {
            return Err(Error::InvalidInput(format!(
                "--{} does not apply to method {}",
                name.replace('_', "-"),
                method.name()
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct RankArgs {
    manifest: PathBuf,
    #[arg(long)]
    method: Method,
    #[command(flatten)]
    params: MethodParams,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ranking CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ModelSelectArgs {
    /// Cross-validation folds for SVM model selection.
    #[arg(long, default_value_t = 5)]
    folds: usize,
    /// Features used while tuning selector parameters.
    #[arg(long, default_value_t = fsbench::harness::DEFAULT_TUNE_K)]
    tune_k: usize,
    /// Ranking repetitions; selector time is their median.
    #[arg(long, default_value_t = 1)]
    timing_runs: usize,
    /// Seed for the cross-validation folds.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ModelSelectArgs {
    fn options(&self) -> EvalOptions {
        EvalOptions {
            grid: GridSpec {
                folds: self.folds,
                seed: self.seed,
                ..GridSpec::default()
            },
            tune_k: self.tune_k,
            timing_runs: self.timing_runs,
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    manifest: PathBuf,
    #[arg(long)]
    method: Method,
    /// Comma-separated feature counts; default 50, 100, ... up to 1000.
    #[arg(long, value_delimiter = ',')]
    k_list: Option<Vec<usize>>,
    #[command(flatten)]
    params: MethodParams,
    #[command(flatten)]
    select: ModelSelectArgs,
    /// Directory for `<method>_report.csv` and `<method>_curve.csv`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    manifest: PathBuf,
    /// `all` or a comma-separated list of methods.
    #[arg(long, default_value = "all")]
    methods: String,
    /// Comma-separated feature counts.
    #[arg(long, value_delimiter = ',', default_values_t = [50, 200])]
    k_list: Vec<usize>,
    /// Also report the SVM on all features.
    #[arg(long)]
    baseline: bool,
    #[command(flatten)]
    select: ModelSelectArgs,
    /// Report CSV with every row of the table.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Comment lines written at the top of every output file.
fn header(seed: u64) -> Vec<String> {
    let command: Vec<String> = std::env::args().collect();
    vec![
        format!("fsbench {}", env!("CARGO_PKG_VERSION")),
        format!("command: {}", command.join(" ")),
        format!("seed: {seed}"),
    ]
}

fn config_line(cfg: &SelectorConfig) -> String {
    format!("config: {} {}", cfg.method().name(), cfg.describe()).trim_end().to_string()
}

/// One row per split and a bundle row whose sparsity is `mean±sd` over the
/// splits.
fn stats_table(bundle: &DatasetBundle, seed: u64) -> Result<String, Error> {
    let mut out = format!(
        "{:<10} {:>7} {:>7} {:>12} {:>12} {:>9}\n",
        "split", "rows", "cols", "sparsity", "mean|corr|", "positive"
    );
    let mut sparsities = Vec::new();
    for d in bundle.splits() {
        let s = dataset_stats(d, DEFAULT_CORRELATION_PAIRS, seed)?;
        sparsities.push(s.sparsity);
        let _ = writeln!(
            out,
            "{:<10} {:>7} {:>7} {:>12.4} {:>12.4} {:>9.4}",
            d.split().to_string(),
            s.rows,
            s.cols,
            s.sparsity,
            s.mean_abs_corr,
            s.class_balance
        );
    }
    let all = bundle.train_plus_validation()?.concat(&bundle.test, fsbench::dataset::Split::Train)?;
    let s = dataset_stats(&all, DEFAULT_CORRELATION_PAIRS, seed)?;
    let mean = sparsities.iter().sum::<f64>() / sparsities.len() as f64;
    let sd = (sparsities.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / sparsities.len() as f64).sqrt();
    let _ = writeln!(
        out,
        "{:<10} {:>7} {:>7} {:>12} {:>12.4} {:>9.4}",
        "bundle",
        s.rows,
        s.cols,
        format!("{mean:.2}±{sd:.2}"),
        s.mean_abs_corr,
        s.class_balance
    );
    Ok(out)
}

fn cmd_synth(a: &SynthArgs) -> Result<(), Error> {
    let spec = SynthSpec {
        n_train: a.n_train,
        n_valid: a.n_valid,
        n_test: a.n_test,
        d_real: a.d_real,
        d_probes: a.probes,
        k_informative: a.informative,
        sparsity_target: a.sparsity,
        correlation_block_size: a.block_size,
        correlation_strength: a.strength,
        probe_kind: match a.probe_kind {
            ProbeArg::Permutation => ProbeKind::Permutation,
            ProbeArg::Zipf => ProbeKind::Zipf,
        },
        noise_sd: a.noise,
        seed: a.seed,
    };
    spec.validate()?;
    let format = match a.format {
        FormatArg::Dense => DataFormat::Dense,
        FormatArg::Sparse => DataFormat::Sparse,
        FormatArg::Auto if a.sparsity >= 0.5 => DataFormat::Sparse,
        FormatArg::Auto => DataFormat::Dense,
    };
    let generated = generate_synthetic(&spec)?;
    std::fs::create_dir_all(&a.out).map_err(|e| Error::Io {
        path: a.out.clone(),
        source: e,
    })?;
    let header = header(a.seed);
    let names = [
        ("train.data", "train.labels"),
        ("valid.data", "valid.labels"),
        ("test.data", "test.labels"),
    ];
    for (d, (data, labels)) in generated.bundle.splits().into_iter().zip(names) {
        write_dataset(d, &a.out.join(data), &a.out.join(labels), format, &header)?;
    }
    write_probe_indices(&a.out.join("probes.idx"), &generated.probe_flags(), &header)?;
    let manifest = Manifest {
        format,
        cols: Some(spec.n_features()),
        train_data: "train.data".into(),
        train_labels: "train.labels".into(),
        valid_data: "valid.data".into(),
        valid_labels: "valid.labels".into(),
        test_data: "test.data".into(),
        test_labels: "test.labels".into(),
        probes: Some("probes.idx".into()),
    };
    manifest.write(&a.out.join("manifest"), &header)?;
    print!("{}", stats_table(&generated.bundle, a.seed)?);
    Ok(())
}

fn cmd_stats(a: &StatsArgs) -> Result<(), Error> {
    let bundle = load_bundle(&a.manifest)?;
    print!("{}", stats_table(&bundle, a.seed)?);
    Ok(())
}

fn cmd_rank(a: &RankArgs) -> Result<(), Error> {
    let bundle = load_bundle(&a.manifest)?;
    let cfg = a.params.config(a.method)?;
    let ranking = rank_on_train_plus_validation(&bundle, &cfg)?;
    let mut header = header(a.seed);
    header.push(config_line(&cfg));
    match &a.out {
        Some(path) => ranking.write_csv(path, &header),
        None => {
            print!("{}", ranking.to_csv(&header));
            Ok(())
        }
    }
}

/// The configuration to evaluate: fixed by flags, or tuned on validation.
fn choose_config(bundle: &DatasetBundle, method: Method, params: &MethodParams, opts: &EvalOptions) -> Result<SelectorConfig, Error> {
    let cfg = params.config(method)?;
    if params.any() {
        return Ok(cfg);
    }
    Ok(tune_selector(bundle, &cfg.grid(), opts.tune_k)?.config)
}

fn cmd_eval(a: &EvalArgs) -> Result<(), Error> {
    let bundle = load_bundle(&a.manifest)?;
    let opts = a.select.options();
    opts.grid.validate()?;
    let ks = a
        .k_list
        .clone()
        .unwrap_or_else(|| fsbench::harness::default_k_values(bundle.n_features()));
    if ks.is_empty() || ks.contains(&0) {
        return Err(Error::InvalidInput("k values must be at least 1".into()));
    }
    let cfg = choose_config(&bundle, a.method, &a.params, &opts)?;
    let evaluation = evaluate(&bundle, &cfg, &ks, &opts)?;
    let mut header = header(a.select.seed);
    header.push(config_line(&cfg));
    std::fs::create_dir_all(&a.out).map_err(|e| Error::Io {
        path: a.out.clone(),
        source: e,
    })?;
    let name = a.method.name();
    write_text(&a.out.join(format!("{name}_report.csv")), &report_csv(&evaluation.reports, &header))?;
    write_text(&a.out.join(format!("{name}_curve.csv")), &curve_csv(&evaluation.curve, &header))?;
    print!("{}", bench_table(&evaluation.reports));
    Ok(())
}

fn parse_methods(s: &str) -> Result<Vec<Method>, Error> {
    if s.trim() == "all" {
        return Ok(Method::ALL.to_vec());
    }
    let mut out: Vec<Method> = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let m: Method = part.parse()?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("no methods given".into()));
    }
    Ok(out)
}

fn cmd_bench(a: &BenchArgs) -> Result<(), Error> {
    let methods = parse_methods(&a.methods)?;
    let bundle = load_bundle(&a.manifest)?;
    let opts = a.select.options();
    opts.grid.validate()?;
    if a.k_list.is_empty() || a.k_list.contains(&0) {
        return Err(Error::InvalidInput("k values must be at least 1".into()));
    }
    let mut reports: Vec<EvaluationReport> = Vec::new();
    let mut header = header(a.select.seed);
    for m in methods {
        let run = run_method(&bundle, &SelectorConfig::default_for(m), &a.k_list, &opts)?;
        header.push(config_line(&run.tuned.config));
        reports.extend(run.evaluation.reports);
    }
    if a.baseline {
        reports.push(evaluate_baseline(&bundle, &opts)?);
    }
    if let Some(path) = &a.out {
        write_text(path, &report_csv(&reports, &header))?;
    }
    print!("{}", bench_table(&reports));
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Synth(a) => cmd_synth(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = with_jobs(cli.jobs, || run(&cli)).and_then(|r| r);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fsbench: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 3 })
        }
    }
}
