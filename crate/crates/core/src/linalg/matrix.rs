use crate::error::{Error, Result};

use super::vector::{norm_l2, sparse_dot_dense, Vector};

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// Row-major, `rows * cols` entries.
    Dense(Vec<f64>),
    /// Compressed sparse rows. Column indices strictly increase within a row.
    Csr {
        indptr: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    },
}

/// Examples-by-features matrix in dense row-major or CSR storage.
/// Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

/// Borrowed view of a single matrix row.
#[derive(Debug, Clone, Copy)]
pub enum Row<'a> {
    Dense(&'a [f64]),
    Sparse {
        indices: &'a [usize],
        values: &'a [f64],
    },
}

impl<'a> Row<'a> {
    #[inline]
    pub fn dot(&self, w: &[f64]) -> f64 {
        match *self {
            Row::Dense(x) => super::vector::dot(x, w),
            Row::Sparse { indices, values } => sparse_dot_dense(indices, values, w),
        }
    }

    /// `out += alpha * row`
    #[inline]
    pub fn axpy_into(&self, alpha: f64, out: &mut [f64]) {
        match *self {
            Row::Dense(x) => super::vector::axpy(alpha, x, out),
            Row::Sparse { indices, values } => {
                for (&j, &v) in indices.iter().zip(values) {
                    out[j] += alpha * v;
                }
            }
        }
    }

    pub fn norm_sq(&self) -> f64 {
        match *self {
            Row::Dense(x) => x.iter().map(|v| v * v).sum(),
            Row::Sparse { values, .. } => values.iter().map(|v| v * v).sum(),
        }
    }

    /// Iterates over stored `(column, value)` pairs. Dense rows yield every
    /// column, including zeros.
    pub fn iter(&self) -> RowIter<'a> {
        match *self {
            Row::Dense(x) => RowIter::Dense(x.iter().enumerate()),
            Row::Sparse { indices, values } => RowIter::Sparse(indices.iter().zip(values.iter())),
        }
    }

    pub fn to_dense(&self, cols: usize) -> Vec<f64> {
        match *self {
            Row::Dense(x) => x.to_vec(),
            Row::Sparse { indices, values } => {
                let mut out = vec![0.0; cols];
                for (&j, &v) in indices.iter().zip(values) {
                    out[j] = v;
                }
                out
            }
        }
    }

    /// Squared Euclidean distance between two rows of the same width.
    pub fn sq_dist(&self, other: &Row<'_>) -> f64 {
        match (*self, *other) {
            (Row::Dense(a), Row::Dense(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| {
                    let d = x - y;
                    d * d
                })
                .sum(),
            (
                Row::Sparse {
                    indices: ai,
                    values: av,
                },
                Row::Sparse {
                    indices: bi,
                    values: bv,
                },
            ) => {
                let (mut p, mut q) = (0, 0);
                let mut acc = 0.0;
                while p < ai.len() || q < bi.len() {
                    let d = if q >= bi.len() || (p < ai.len() && ai[p] < bi[q]) {
                        p += 1;
                        av[p - 1]
                    } else if p >= ai.len() || bi[q] < ai[p] {
                        q += 1;
                        bv[q - 1]
                    } else {
                        p += 1;
                        q += 1;
                        av[p - 1] - bv[q - 1]
                    };
                    acc += d * d;
                }
                acc
            }
            (Row::Dense(d), s @ Row::Sparse { .. }) | (s @ Row::Sparse { .. }, Row::Dense(d)) => {
                let dense_s = s.to_dense(d.len());
                Row::Dense(d).sq_dist(&Row::Dense(&dense_s))
            }
        }
    }
}

pub enum RowIter<'a> {
    Dense(std::iter::Enumerate<std::slice::Iter<'a, f64>>),
    Sparse(std::iter::Zip<std::slice::Iter<'a, usize>, std::slice::Iter<'a, f64>>),
}

impl Iterator for RowIter<'_> {
    type Item = (usize, f64);

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            RowIter::Dense(it) => it.next().map(|(j, &v)| (j, v)),
            RowIter::Sparse(it) => it.next().map(|(&j, &v)| (j, v)),
        }
    }
}

impl Matrix {
    pub fn from_dense(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            storage: Storage::Dense(data),
        })
    }

    pub fn from_dense_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_dense(rows.len(), cols, data)
    }

    /// Builds a CSR matrix from per-row `(column, value)` lists.
    /// Columns must be strictly increasing within each row; duplicates are
    /// rejected rather than summed. Explicit zeros are dropped.
    pub fn from_sparse_rows(cols: usize, rows: &[Vec<(usize, f64)>]) -> Result<Self> {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for (i, r) in rows.iter().enumerate() {
            let mut prev: Option<usize> = None;
            for &(j, v) in r {
                if j >= cols {
                    return Err(Error::invalid(format!(
                        "row {i}: column {j} out of range for {cols} columns"
                    )));
                }
                if prev.is_some_and(|p| p >= j) {
                    return Err(Error::invalid(format!(
                        "row {i}: column indices must be strictly increasing"
                    )));
                }
                prev = Some(j);
                if v != 0.0 {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            storage: Storage::Csr {
                indptr,
                indices,
                values,
            },
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Csr { .. })
    }

    #[inline]
    pub fn row(&self, i: usize) -> Row<'_> {
        match &self.storage {
            Storage::Dense(data) => Row::Dense(&data[i * self.cols..(i + 1) * self.cols]),
            Storage::Csr {
                indptr,
                indices,
                values,
            } => {
                let (a, b) = (indptr[i], indptr[i + 1]);
                Row::Sparse {
                    indices: &indices[a..b],
                    values: &values[a..b],
                }
            }
        }
    }

    pub fn row_vector(&self, i: usize) -> Vector {
        match self.row(i) {
            Row::Dense(x) => Vector::Dense(x.to_vec()),
            Row::Sparse { indices, values } => Vector::Sparse(
                super::SparseVector::new(self.cols, indices.to_vec(), values.to_vec())
                    .expect("CSR rows are valid sparse vectors"),
            ),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.row(i) {
            Row::Dense(x) => x[j],
            Row::Sparse { indices, values } => match indices.binary_search(&j) {
                Ok(p) => values[p],
                Err(_) => 0.0,
            },
        }
    }

    /// Number of exactly-zero entries.
    pub fn count_zeros(&self) -> usize {
        match &self.storage {
            Storage::Dense(data) => data.iter().filter(|&&v| v == 0.0).count(),
            Storage::Csr { values, .. } => {
                self.rows * self.cols - values.iter().filter(|&&v| v != 0.0).count()
            }
        }
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_dense(self.cols)).collect()
    }

    pub fn to_dense(&self) -> Matrix {
        match &self.storage {
            Storage::Dense(_) => self.clone(),
            Storage::Csr { .. } => {
                let data = (0..self.rows)
                    .flat_map(|i| self.row(i).to_dense(self.cols))
                    .collect();
                Matrix::from_dense(self.rows, self.cols, data).expect("shape preserved")
            }
        }
    }

    pub fn to_sparse(&self) -> Matrix {
        if self.is_sparse() {
            return self.clone();
        }
        let rows: Vec<Vec<(usize, f64)>> = (0..self.rows)
            .map(|i| self.row(i).iter().filter(|&(_, v)| v != 0.0).collect())
            .collect();
        Matrix::from_sparse_rows(self.cols, &rows).expect("dense rows are valid")
    }

    /// Keeps the given columns in the given order; storage kind is preserved.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Matrix> {
        if let Some(&bad) = columns.iter().find(|&&j| j >= self.cols) {
            return Err(Error::invalid(format!(
                "column {bad} out of range for {} columns",
                self.cols
            )));
        }
        match &self.storage {
            Storage::Dense(data) => {
                let mut out = Vec::with_capacity(self.rows * columns.len());
                for i in 0..self.rows {
                    let row = &data[i * self.cols..(i + 1) * self.cols];
                    out.extend(columns.iter().map(|&j| row[j]));
                }
                Matrix::from_dense(self.rows, columns.len(), out)
            }
            Storage::Csr { .. } => {
                let mut remap = vec![usize::MAX; self.cols];
                for (new, &old) in columns.iter().enumerate() {
                    remap[old] = new;
                }
                let rows: Vec<Vec<(usize, f64)>> = (0..self.rows)
                    .map(|i| {
                        let mut r: Vec<(usize, f64)> = self
                            .row(i)
                            .iter()
                            .filter(|&(j, _)| remap[j] != usize::MAX)
                            .map(|(j, v)| (remap[j], v))
                            .collect();
                        r.sort_by_key(|&(j, _)| j);
                        r
                    })
                    .collect();
                Matrix::from_sparse_rows(columns.len(), &rows)
            }
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<Matrix> {
        if let Some(&bad) = rows.iter().find(|&&i| i >= self.rows) {
            return Err(Error::invalid(format!(
                "row {bad} out of range for {} rows",
                self.rows
            )));
        }
        match &self.storage {
            Storage::Dense(data) => {
                let mut out = Vec::with_capacity(rows.len() * self.cols);
                for &i in rows {
                    out.extend_from_slice(&data[i * self.cols..(i + 1) * self.cols]);
                }
                Matrix::from_dense(rows.len(), self.cols, out)
            }
            Storage::Csr { .. } => {
                let picked: Vec<Vec<(usize, f64)>> =
                    rows.iter().map(|&i| self.row(i).iter().collect()).collect();
                Matrix::from_sparse_rows(self.cols, &picked)
            }
        }
    }

    /// Stacks `other` below `self`. The result is sparse if either input is.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        match (&self.storage, &other.storage) {
            (Storage::Dense(a), Storage::Dense(b)) => {
                let mut data = a.clone();
                data.extend_from_slice(b);
                Matrix::from_dense(self.rows + other.rows, self.cols, data)
            }
            _ => {
                let rows: Vec<Vec<(usize, f64)>> = (0..self.rows)
                    .map(|i| self.row(i).iter().filter(|&(_, v)| v != 0.0).collect())
                    .chain((0..other.rows).map(|i| {
                        other.row(i).iter().filter(|&(_, v)| v != 0.0).collect()
                    }))
                    .collect();
                Matrix::from_sparse_rows(self.cols, &rows)
            }
        }
    }

    /// Column-major copy holding only nonzero entries.
    pub fn columns(&self) -> Columns {
        let mut counts = vec![0usize; self.cols];
        for i in 0..self.rows {
            for (j, v) in self.row(i).iter() {
                if v != 0.0 {
                    counts[j] += 1;
                }
            }
        }
        let mut colptr = Vec::with_capacity(self.cols + 1);
        colptr.push(0);
        for c in &counts {
            colptr.push(colptr.last().unwrap() + c);
        }
        let nnz = *colptr.last().unwrap();
        let mut row_idx = vec![0usize; nnz];
        let mut values = vec![0.0; nnz];
        let mut next = colptr[..self.cols].to_vec();
        for i in 0..self.rows {
            for (j, v) in self.row(i).iter() {
                if v != 0.0 {
                    row_idx[next[j]] = i;
                    values[next[j]] = v;
                    next[j] += 1;
                }
            }
        }
        Columns {
            rows: self.rows,
            colptr,
            row_idx,
            values,
        }
    }

    /// Row-wise Euclidean norms.
    pub fn row_norms(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|i| match self.row(i) {
                Row::Dense(x) => norm_l2(x),
                Row::Sparse { values, .. } => norm_l2(values),
            })
            .collect()
    }
}

/// Compressed sparse column view used by coordinate-wise solvers and
/// column statistics.
#[derive(Debug, Clone)]
pub struct Columns {
    rows: usize,
    colptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl Columns {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.colptr.len() - 1
    }

    #[inline]
    pub fn col(&self, j: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.colptr[j], self.colptr[j + 1]);
        (&self.row_idx[a..b], &self.values[a..b])
    }

    pub fn col_dense(&self, j: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        let (idx, vals) = self.col(j);
        for (&i, &v) in idx.iter().zip(vals) {
            out[i] = v;
        }
        out
    }

    pub fn col_sum(&self, j: usize) -> f64 {
        self.col(j).1.iter().sum()
    }

    pub fn col_sq_sum(&self, j: usize) -> f64 {
        self.col(j).1.iter().map(|v| v * v).sum()
    }
}
