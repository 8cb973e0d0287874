use crate::error::{Error, Result};

/// Sparse vector stored as index-sorted `(index, value)` pairs.
///
/// Indices are strictly increasing and every stored value is nonzero;
/// explicit zeros passed to the constructor are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    dim: usize,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn new(dim: usize, indices: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::Dimension(format!(
                "{} indices but {} values",
                indices.len(),
                values.len()
            )));
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::invalid(format!(
                    "sparse indices must be strictly increasing (found {} then {})",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= dim {
                return Err(Error::invalid(format!(
                    "sparse index {last} out of range for dimension {dim}"
                )));
            }
        }
        let (indices, values) = indices
            .into_iter()
            .zip(values)
            .filter(|&(_, v)| v != 0.0)
            .unzip();
        Ok(Self {
            dim,
            indices,
            values,
        })
    }

    pub fn from_dense(values: &[f64]) -> Self {
        let (indices, nonzero) = values
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v != 0.0)
            .map(|(i, &v)| (i, v))
            .unzip();
        Self {
            dim: values.len(),
            indices,
            values: nonzero,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }
}

/// A real vector in either dense or sparse form. Both forms of the same
/// vector behave identically under every operation.
#[derive(Debug, Clone)]
pub enum Vector {
    Dense(Vec<f64>),
    Sparse(SparseVector),
}

impl Vector {
    pub fn len(&self) -> usize {
        match self {
            Vector::Dense(v) => v.len(),
            Vector::Sparse(s) => s.dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> f64 {
        match self {
            Vector::Dense(v) => v[i],
            Vector::Sparse(s) => match s.indices.binary_search(&i) {
                Ok(pos) => s.values[pos],
                Err(_) => 0.0,
            },
        }
    }

    /// Iterator over `(index, value)` pairs that may be nonzero.
    pub fn iter_stored(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        match self {
            Vector::Dense(v) => Box::new(v.iter().copied().enumerate()),
            Vector::Sparse(s) => Box::new(s.indices.iter().copied().zip(s.values.iter().copied())),
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        match self {
            Vector::Dense(v) => v.clone(),
            Vector::Sparse(s) => {
                let mut out = vec![0.0; s.dim];
                for (&i, &v) in s.indices.iter().zip(&s.values) {
                    out[i] = v;
                }
                out
            }
        }
    }

    pub fn to_sparse(&self) -> SparseVector {
        match self {
            Vector::Dense(v) => SparseVector::from_dense(v),
            Vector::Sparse(s) => s.clone(),
        }
    }

    pub fn norm_l1(&self) -> f64 {
        self.iter_stored().map(|(_, v)| v.abs()).sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.iter_stored().map(|(_, v)| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &Vector) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "dot of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(match (self, other) {
            (Vector::Dense(a), Vector::Dense(b)) => dot(a, b),
            (Vector::Dense(d), Vector::Sparse(s)) | (Vector::Sparse(s), Vector::Dense(d)) => {
                sparse_dot_dense(&s.indices, &s.values, d)
            }
            (Vector::Sparse(a), Vector::Sparse(b)) => {
                sparse_dot_sparse(&a.indices, &a.values, &b.indices, &b.values)
            }
        })
    }
}

impl PartialEq for Vector {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.to_sparse() == other.to_sparse()
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector::Dense(v)
    }
}

impl From<SparseVector> for Vector {
    fn from(v: SparseVector) -> Self {
        Vector::Sparse(v)
    }
}

pub fn norm_l1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn norm_l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub fn sparse_dot_dense(indices: &[usize], values: &[f64], dense: &[f64]) -> f64 {
    indices.iter().zip(values).map(|(&i, &v)| v * dense[i]).sum()
}

/// Dot product of two index-sorted sparse vectors (merge walk).
pub fn sparse_dot_sparse(ai: &[usize], av: &[f64], bi: &[usize], bv: &[f64]) -> f64 {
    let (mut p, mut q) = (0, 0);
    let mut acc = 0.0;
    while p < ai.len() && q < bi.len() {
        match ai[p].cmp(&bi[q]) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                acc += av[p] * bv[q];
                p += 1;
                q += 1;
            }
        }
    }
    acc
}

/// Proximal operator of `t·|x|`: `sign(z)·max(|z| − t, 0)`.
///
/// Panics if `t` is negative.
#[inline]
pub fn soft_threshold(z: f64, t: f64) -> f64 {
    assert!(t >= 0.0, "soft_threshold requires t >= 0, got {t}");
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}
