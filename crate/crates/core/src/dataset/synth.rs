//! Synthetic benchmark bundles with known informative features and probes.
//!
//! Real features are Gaussian, grouped into blocks that share a latent
//! factor. Labels come from a sparse linear model on a few real features.
//! Probes are either column permutations of the least informative real
//! features or Zipf-distributed sparse columns. Column order is shuffled so
//! position carries no information.

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::{DatasetBundle, Label, LabeledDataset, Split};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    Permutation,
    Zipf,
}

impl std::str::FromStr for ProbeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "permutation" => Ok(ProbeKind::Permutation),
            "zipf" => Ok(ProbeKind::Zipf),
            other => Err(Error::invalid(format!(
                "unknown probe kind {other:?} (expected permutation or zipf)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n_train: usize,
    pub n_valid: usize,
    pub n_test: usize,
    /// Real (informative plus redundant) features.
    pub d_real: usize,
    pub d_probes: usize,
    pub k_informative: usize,
    /// Probability that an entry is zeroed.
    pub sparsity_target: f64,
    /// Consecutive real features sharing one latent factor.
    pub correlation_block_size: usize,
    /// Pairwise correlation of features inside a block, in `[0, 1)`.
    pub correlation_strength: f64,
    pub probe_kind: ProbeKind,
    pub noise_sd: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            n_train: 500,
            n_valid: 250,
            n_test: 500,
            d_real: 200,
            d_probes: 200,
            k_informative: 10,
            sparsity_target: 0.0,
            correlation_block_size: 5,
            correlation_strength: 0.0,
            probe_kind: ProbeKind::Permutation,
            noise_sd: 0.1,
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k_informative > self.d_real {
            return Err(Error::invalid("k_informative exceeds d_real"));
        }
        if self.k_informative == 0 {
            return Err(Error::invalid("k_informative must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.sparsity_target) {
            return Err(Error::invalid("sparsity_target must lie in [0, 1)"));
        }
        if !(0.0..1.0).contains(&self.correlation_strength) {
            return Err(Error::invalid("correlation_strength must lie in [0, 1)"));
        }
        if !(self.noise_sd >= 0.0 && self.noise_sd.is_finite()) {
            return Err(Error::invalid("noise_sd must be finite and non-negative"));
        }
        if self.n_train + self.n_valid + self.n_test == 0 {
            return Err(Error::invalid("at least one example is required"));
        }
        Ok(())
    }

    pub fn n_total(&self) -> usize {
        self.n_train + self.n_valid + self.n_test
    }

    pub fn n_features(&self) -> usize {
        self.d_real + self.d_probes
    }
}

/// A generated bundle plus the ground truth behind it.
#[derive(Debug, Clone)]
pub struct SyntheticBundle {
    pub bundle: DatasetBundle,
    /// Columns (in the shuffled layout) carrying nonzero generating weight,
    /// in ascending order.
    pub informative: Vec<usize>,
    /// Generating weights per column; zero off the informative set.
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Label noise draw per example, concatenated over train, validation,
    /// test.
    pub noise: Vec<f64>,
    /// For permutation probes: the column each probe was permuted from.
    pub probe_sources: Vec<(usize, usize)>,
}

impl SyntheticBundle {
    pub fn probe_flags(&self) -> Vec<bool> {
        self.bundle
            .train
            .probe_flags()
            .expect("generated datasets always carry probe flags")
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn abs_correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        0.0
    } else {
        (sab / (saa * sbb).sqrt()).abs()
    }
}

/// Nonzero probabilities `min(1, c / rank)` whose mean equals `density`.
fn zipf_densities(d: usize, density: f64) -> Vec<f64> {
    let probs = |c: f64| (1..=d).map(move |r| (c / r as f64).min(1.0));
    let mean = |c: f64| probs(c).sum::<f64>() / d as f64;
    if density >= 1.0 {
        return vec![1.0; d];
    }
    let (mut lo, mut hi) = (0.0, d as f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean(mid) < density {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    probs(0.5 * (lo + hi)).collect()
}

/// Generates a train/validation/test bundle. Deterministic in `spec.seed`.
pub fn generate_synthetic(spec: &SynthSpec) -> Result<SyntheticBundle> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n_total();
    let d_real = spec.d_real;
    let block = spec.correlation_block_size.max(1);
    let rho = spec.correlation_strength;
    let (shared, own) = (rho.sqrt(), (1.0 - rho).sqrt());

    // Real features, column-major.
    let n_blocks = d_real.div_ceil(block);
    let latent: Vec<f64> = (0..n * n_blocks).map(|_| rng.sample(StandardNormal)).collect();
    let mut real: Vec<Vec<f64>> = (0..d_real)
        .map(|j| {
            let b = j / block;
            (0..n)
                .map(|i| {
                    let e: f64 = rng.sample(StandardNormal);
                    let x = if block > 1 {
                        shared * latent[b * n + i] + own * e
                    } else {
                        e
                    };
                    if spec.sparsity_target > 0.0 && rng.random_bool(spec.sparsity_target) {
                        0.0
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();

    // Informative features spread evenly so that each sits in its own
    // correlation block when block size allows.
    let informative_real: Vec<usize> = (0..spec.k_informative)
        .map(|t| t * d_real / spec.k_informative)
        .collect();
    let real_weights: Vec<f64> = informative_real
        .iter()
        .map(|_| {
            let mag = 0.5 + rng.random::<f64>();
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let score: Vec<f64> = (0..n)
        .map(|i| {
            informative_real
                .iter()
                .zip(&real_weights)
                .map(|(&j, &w)| w * real[j][i])
                .sum()
        })
        .collect();
    let bias = -median(&score);
    let noise: Vec<f64> = (0..n)
        .map(|_| spec.noise_sd * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let labels: Vec<Label> = (0..n)
        .map(|i| Label::from_decision(score[i] + bias + noise[i]))
        .collect();

    // Probes.
    let mut probes: Vec<Vec<f64>> = Vec::with_capacity(spec.d_probes);
    let mut probe_source_real: Vec<Option<usize>> = Vec::with_capacity(spec.d_probes);
    match spec.probe_kind {
        ProbeKind::Permutation => {
            let mut by_relevance: Vec<(f64, usize)> = (0..d_real)
                .map(|j| (abs_correlation(&real[j], &score), j))
                .collect();
            by_relevance.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for q in 0..spec.d_probes {
                let src = by_relevance[q % d_real.max(1)].1;
                let mut col = real[src].clone();
                col.shuffle(&mut rng);
                probes.push(col);
                probe_source_real.push(Some(src));
            }
        }
        ProbeKind::Zipf => {
            let pool: Vec<f64> = real.iter().flatten().copied().filter(|&v| v != 0.0).collect();
            let mut densities = zipf_densities(spec.d_probes, 1.0 - spec.sparsity_target);
            densities.shuffle(&mut rng);
            for &p in &densities {
                let col = (0..n)
                    .map(|_| {
                        if rng.random_bool(p) {
                            if pool.is_empty() {
                                1.0
                            } else {
                                pool[rng.random_range(0..pool.len())]
                            }
                        } else {
                            0.0
                        }
                    })
                    .collect();
                probes.push(col);
                probe_source_real.push(None);
            }
        }
    }

    // Shuffle the column layout.
    let total = spec.n_features();
    let mut layout: Vec<usize> = (0..total).collect();
    layout.shuffle(&mut rng);
    // layout[position] = generator column (real j < d_real, probe d_real + q)
    let mut position_of = vec![0usize; total];
    for (pos, &g) in layout.iter().enumerate() {
        position_of[g] = pos;
    }
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(total);
    let mut flags = Vec::with_capacity(total);
    let mut real_iter = std::mem::take(&mut real);
    let mut probe_iter = probes;
    for &g in &layout {
        if g < d_real {
            columns.push(std::mem::take(&mut real_iter[g]));
            flags.push(false);
        } else {
            columns.push(std::mem::take(&mut probe_iter[g - d_real]));
            flags.push(true);
        }
    }
    let mut weights = vec![0.0; total];
    let mut informative: Vec<usize> = informative_real
        .iter()
        .zip(&real_weights)
        .map(|(&j, &w)| {
            weights[position_of[j]] = w;
            position_of[j]
        })
        .collect();
    informative.sort_unstable();
    let probe_sources = probe_source_real
        .iter()
        .enumerate()
        .filter_map(|(q, src)| src.map(|s| (position_of[d_real + q], position_of[s])))
        .collect();

    let sparse = spec.sparsity_target >= 0.5;
    let make_split = |range: std::ops::Range<usize>, split: Split| -> Result<LabeledDataset> {
        let matrix = if sparse {
            let rows: Vec<Vec<(usize, f64)>> = range
                .clone()
                .map(|i| {
                    columns
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| c[i] != 0.0)
                        .map(|(j, c)| (j, c[i]))
                        .collect()
                })
                .collect();
            Matrix::from_sparse_rows(total, &rows)?
        } else {
            let mut data = Vec::with_capacity(range.len() * total);
            for i in range.clone() {
                data.extend(columns.iter().map(|c| c[i]));
            }
            Matrix::from_dense(range.len(), total, data)?
        };
        LabeledDataset::new(matrix, labels[range].to_vec(), split)?.with_probe_flags(&flags)
    };
    let (a, b) = (spec.n_train, spec.n_train + spec.n_valid);
    let bundle = DatasetBundle::new(
        make_split(0..a, Split::Train)?,
        make_split(a..b, Split::Validation)?,
        make_split(b..n, Split::Test)?,
    )?;
    Ok(SyntheticBundle {
        bundle,
        informative,
        weights,
        bias,
        noise,
        probe_sources,
    })
}
