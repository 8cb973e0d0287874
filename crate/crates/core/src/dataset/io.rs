//! Challenge-style text formats.
//!
//! * dense data: one example per line, whitespace-separated numbers
//! * sparse data: one example per line, `index:value` tokens with 1-based,
//!   strictly increasing indices (an empty line is an all-zero example)
//! * labels: one of `+1`, `1`, `-1` per line
//! * probe sidecar: one 1-based feature index per line
//! * manifest: `key=value` lines naming the split files and the format
//!
//! Lines starting with `#` are comments in every format.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Row};

use super::{DatasetBundle, Label, LabeledDataset, Split};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Dense,
    Sparse,
}

impl FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(DataFormat::Dense),
            "sparse" => Ok(DataFormat::Sparse),
            other => Err(Error::invalid(format!(
                "unknown data format {other:?} (expected dense or sparse)"
            ))),
        }
    }
}

impl std::fmt::Display for DataFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DataFormat::Dense => "dense",
            DataFormat::Sparse => "sparse",
        })
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_value(path: &Path, line: usize, tok: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(path, line, format!("malformed number {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("non-finite value {tok:?}")));
    }
    Ok(v)
}

fn parse_dense(path: &Path, text: &str) -> Result<Matrix> {
    let mut rows = Vec::new();
    let mut cols = None;
    for (line, content) in content_lines(text) {
        if content.trim().is_empty() {
            return Err(parse_err(path, line, "empty line in dense data"));
        }
        let row = content
            .split_whitespace()
            .map(|t| parse_value(path, line, t))
            .collect::<Result<Vec<f64>>>()?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(parse_err(
                    path,
                    line,
                    format!("expected {c} values, found {}", row.len()),
                ))
            }
            _ => {}
        }
        rows.push(row);
    }
    Matrix::from_dense_rows(&rows)
}

fn parse_sparse(path: &Path, text: &str, declared_cols: Option<usize>) -> Result<Matrix> {
    let mut rows = Vec::new();
    let mut max_index = 0usize;
    for (line, content) in content_lines(text) {
        let mut row: Vec<(usize, f64)> = Vec::new();
        for tok in content.split_whitespace() {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| parse_err(path, line, format!("expected index:value, got {tok:?}")))?;
            let idx: usize = idx
                .parse()
                .map_err(|_| parse_err(path, line, format!("malformed index {idx:?}")))?;
            if idx == 0 {
                return Err(parse_err(path, line, "feature indices are 1-based"));
            }
            if let Some(c) = declared_cols {
                if idx > c {
                    return Err(parse_err(
                        path,
                        line,
                        format!("index {idx} exceeds declared {c} features"),
                    ));
                }
            }
            if row.last().is_some_and(|&(prev, _)| prev >= idx - 1) {
                return Err(parse_err(path, line, "indices must be strictly increasing"));
            }
            max_index = max_index.max(idx);
            row.push((idx - 1, parse_value(path, line, val)?));
        }
        rows.push(row);
    }
    Matrix::from_sparse_rows(declared_cols.unwrap_or(max_index), &rows)
}

/// Reads a labels file.
pub fn read_labels(path: &Path) -> Result<Vec<Label>> {
    let text = read_text(path)?;
    content_lines(&text)
        .map(|(line, content)| match content.trim() {
            "1" | "+1" => Ok(Label::Positive),
            "-1" => Ok(Label::Negative),
            _ => Err(parse_err(path, line, "label not in {+1,-1}")),
        })
        .collect()
}

/// Reads a probe sidecar and returns a flag per feature.
pub fn read_probe_indices(path: &Path, n_features: usize) -> Result<Vec<bool>> {
    let text = read_text(path)?;
    let mut flags = vec![false; n_features];
    for (line, content) in content_lines(&text) {
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let idx: usize = content
            .parse()
            .map_err(|_| parse_err(path, line, format!("malformed feature index {content:?}")))?;
        if idx == 0 || idx > n_features {
            return Err(parse_err(
                path,
                line,
                format!("probe index {idx} outside 1..={n_features}"),
            ));
        }
        flags[idx - 1] = true;
    }
    Ok(flags)
}

/// Loads a data file and its labels.
///
/// For sparse files `declared_cols` fixes the feature count; without it the
/// largest index seen is used. Dense files ignore it unless it disagrees
/// with the row width.
pub fn load_dataset(
    data_path: &Path,
    labels_path: &Path,
    format: DataFormat,
    declared_cols: Option<usize>,
    split: Split,
) -> Result<LabeledDataset> {
    let text = read_text(data_path)?;
    let data = match format {
        DataFormat::Dense => {
            let m = parse_dense(data_path, &text)?;
            if let Some(c) = declared_cols {
                if m.rows() > 0 && m.cols() != c {
                    return Err(Error::Dimension(format!(
                        "{}: {} columns, manifest declares {c}",
                        data_path.display(),
                        m.cols()
                    )));
                }
            }
            m
        }
        DataFormat::Sparse => parse_sparse(data_path, &text, declared_cols)?,
    };
    let labels = read_labels(labels_path)?;
    if labels.len() != data.rows() {
        return Err(Error::Dimension(format!(
            "{} has {} examples but {} has {} labels",
            data_path.display(),
            data.rows(),
            labels_path.display(),
            labels.len()
        )));
    }
    LabeledDataset::new(data, labels, split)
}

fn format_data(m: &Matrix, format: DataFormat) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row = m.row(i);
        match format {
            DataFormat::Dense => {
                let dense = row.to_dense(m.cols());
                let mut first = true;
                for v in dense {
                    if !first {
                        out.push(' ');
                    }
                    first = false;
                    let _ = write!(out, "{v}");
                }
            }
            DataFormat::Sparse => {
                let mut first = true;
                let nonzero: Box<dyn Iterator<Item = (usize, f64)>> = match row {
                    Row::Dense(_) => Box::new(row.iter().filter(|&(_, v)| v != 0.0)),
                    Row::Sparse { .. } => Box::new(row.iter()),
                };
                for (j, v) in nonzero {
                    if !first {
                        out.push(' ');
                    }
                    first = false;
                    let _ = write!(out, "{}:{v}", j + 1);
                }
            }
        }
        out.push('\n');
    }
    out
}

fn header_lines(header: &[String]) -> String {
    header.iter().map(|h| format!("# {h}\n")).collect()
}

pub fn write_labels(path: &Path, labels: &[Label], header: &[String]) -> Result<()> {
    let mut text = header_lines(header);
    for l in labels {
        let _ = writeln!(text, "{l}");
    }
    write_text(path, &text)
}

/// Writes a dataset's matrix and labels. `header` lines are emitted as
/// `#` comments.
pub fn write_dataset(
    d: &LabeledDataset,
    data_path: &Path,
    labels_path: &Path,
    format: DataFormat,
    header: &[String],
) -> Result<()> {
    let mut text = header_lines(header);
    text.push_str(&format_data(d.data(), format));
    write_text(data_path, &text)?;
    write_labels(labels_path, d.labels(), header)
}

pub fn write_probe_indices(path: &Path, flags: &[bool], header: &[String]) -> Result<()> {
    let mut text = header_lines(header);
    for (j, _) in flags.iter().enumerate().filter(|(_, &f)| f) {
        let _ = writeln!(text, "{}", j + 1);
    }
    write_text(path, &text)
}

/// `key=value` description of a dataset on disk. Relative paths are
/// resolved against the manifest's directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub format: DataFormat,
    pub cols: Option<usize>,
    pub train_data: PathBuf,
    pub train_labels: PathBuf,
    pub valid_data: PathBuf,
    pub valid_labels: PathBuf,
    pub test_data: PathBuf,
    pub test_labels: PathBuf,
    pub probes: Option<PathBuf>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let mut entries = std::collections::HashMap::new();
        for (line, content) in content_lines(&text) {
            let content = content.trim();
            if content.is_empty() {
                continue;
            }
            let (k, v) = content
                .split_once('=')
                .ok_or_else(|| parse_err(path, line, "expected key=value"))?;
            entries.insert(k.trim().to_string(), (line, v.trim().to_string()));
        }
        let get = |key: &str| -> Result<String> {
            entries
                .get(key)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| parse_err(path, 0, format!("missing key {key:?}")))
        };
        let resolve = |key: &str| -> Result<PathBuf> { Ok(base.join(get(key)?)) };
        let format = get("format")?.parse()?;
        let cols = match entries.get("cols") {
            Some((line, v)) => Some(
                v.parse()
                    .map_err(|_| parse_err(path, *line, format!("malformed cols {v:?}")))?,
            ),
            None => None,
        };
        Ok(Self {
            format,
            cols,
            train_data: resolve("train_data")?,
            train_labels: resolve("train_labels")?,
            valid_data: resolve("valid_data")?,
            valid_labels: resolve("valid_labels")?,
            test_data: resolve("test_data")?,
            test_labels: resolve("test_labels")?,
            probes: entries.get("probes").map(|(_, v)| base.join(v)),
        })
    }

    /// Serializes with paths written as given (callers pass paths relative
    /// to the manifest's directory).
    pub fn to_text(&self, header: &[String]) -> String {
        let mut text = header_lines(header);
        let _ = writeln!(text, "format={}", self.format);
        if let Some(c) = self.cols {
            let _ = writeln!(text, "cols={c}");
        }
        for (k, p) in [
            ("train_data", &self.train_data),
            ("train_labels", &self.train_labels),
            ("valid_data", &self.valid_data),
            ("valid_labels", &self.valid_labels),
            ("test_data", &self.test_data),
            ("test_labels", &self.test_labels),
        ] {
            let _ = writeln!(text, "{k}={}", p.display());
        }
        if let Some(p) = &self.probes {
            let _ = writeln!(text, "probes={}", p.display());
        }
        text
    }

    pub fn write(&self, path: &Path, header: &[String]) -> Result<()> {
        write_text(path, &self.to_text(header))
    }
}

/// Loads all three splits named by a manifest, attaching probe flags when
/// a sidecar is listed.
pub fn load_bundle(manifest_path: &Path) -> Result<DatasetBundle> {
    let m = Manifest::read(manifest_path)?;
    let train = load_dataset(&m.train_data, &m.train_labels, m.format, m.cols, Split::Train)?;
    let cols = m.cols.unwrap_or(train.n_features());
    let valid = load_dataset(&m.valid_data, &m.valid_labels, m.format, Some(cols), Split::Validation)?;
    let test = load_dataset(&m.test_data, &m.test_labels, m.format, Some(cols), Split::Test)?;
    let (train, valid, test) = match &m.probes {
        Some(p) => {
            let flags = read_probe_indices(p, cols)?;
            (
                train.with_probe_flags(&flags)?,
                valid.with_probe_flags(&flags)?,
                test.with_probe_flags(&flags)?,
            )
        }
        None => (train, valid, test),
    };
    DatasetBundle::new(train, valid, test)
}
