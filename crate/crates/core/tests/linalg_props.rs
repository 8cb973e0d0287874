use fsbench::linalg::{
    mean_abs_pairwise_correlation, norm_l1, norm_l21, soft_threshold, sparsity, Matrix, SparseVector, Vector,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Vectors with roughly half their entries exactly zero.
fn sparse_ish(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), -5.0..5.0f64], len)
}

fn matrix_rows(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(sparse_ish(cols), rows)
}

fn to_sparse_rows(rows: &[Vec<f64>]) -> Vec<Vec<(usize, f64)>> {
    rows.iter()
        .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j, *v)).collect())
        .collect()
}

proptest! {
    #[test]
    fn l21_is_l1_of_row_norms(rows in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| matrix_rows(r, c))) {
        let m = Matrix::from_dense_rows(&rows).unwrap();
        let norms: Vec<f64> = rows.iter().map(|r| Vector::Dense(r.clone()).norm_l2()).collect();
        prop_assert!((norm_l21(&m) - norm_l1(&norms)).abs() <= 1e-12 * (1.0 + norm_l1(&norms)));
    }

    #[test]
    fn l21_is_rotation_invariant(
        rows in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| matrix_rows(r, c)),
        seed in any::<u64>(),
    ) {
        let (r, c) = (rows.len(), rows[0].len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(c, c, |_, _| StandardNormal.sample(&mut rng));
        let q = g.qr().q();
        let m = DMatrix::from_fn(r, c, |i, j| rows[i][j]);
        let rotated = m * q;
        let rotated_rows: Vec<Vec<f64>> = (0..r).map(|i| rotated.row(i).iter().copied().collect()).collect();
        let base = norm_l21(&Matrix::from_dense_rows(&rows).unwrap());
        let turned = norm_l21(&Matrix::from_dense_rows(&rotated_rows).unwrap());
        prop_assert!((base - turned).abs() <= 1e-9 * base.max(f64::MIN_POSITIVE), "{base} vs {turned}");
    }

    #[test]
    fn dense_and_sparse_vectors_agree(a in sparse_ish(12), b in sparse_ish(12)) {
        let (da, db) = (Vector::Dense(a.clone()), Vector::Dense(b.clone()));
        let (sa, sb) = (Vector::Sparse(SparseVector::from_dense(&a)), Vector::Sparse(SparseVector::from_dense(&b)));
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs());
        prop_assert!(close(da.norm_l1(), sa.norm_l1()));
        prop_assert!(close(da.norm_l2(), sa.norm_l2()));
        let dd = da.dot(&db).unwrap();
        for v in [da.dot(&sb).unwrap(), sa.dot(&db).unwrap(), sa.dot(&sb).unwrap()] {
            prop_assert!(close(dd, v));
        }
        prop_assert_eq!(sa.to_dense(), a);
    }

    #[test]
    fn dense_and_sparse_matrices_agree(rows in (2usize..7, 2usize..6).prop_flat_map(|(r, c)| matrix_rows(r, c))) {
        let cols = rows[0].len();
        let dense = Matrix::from_dense_rows(&rows).unwrap();
        let sparse = Matrix::from_sparse_rows(cols, &to_sparse_rows(&rows)).unwrap();
        prop_assert!((norm_l21(&dense) - norm_l21(&sparse)).abs() <= 1e-12);
        prop_assert_eq!(sparsity(&dense).unwrap(), sparsity(&sparse).unwrap());
        let cd = mean_abs_pairwise_correlation(&dense, 1000, 0).unwrap();
        let cs = mean_abs_pairwise_correlation(&sparse, 1000, 0).unwrap();
        prop_assert!((cd - cs).abs() <= 1e-12, "{cd} vs {cs}");
        let w: Vec<f64> = (0..cols).map(|j| j as f64 - 1.5).collect();
        for i in 0..rows.len() {
            prop_assert!((dense.row(i).dot(&w) - sparse.row(i).dot(&w)).abs() <= 1e-12);
        }
        prop_assert_eq!(dense.to_dense_rows(), sparse.to_dense_rows());
    }
}

/// Grid minimizer of `½(x − z)² + t|x|` over `[−10, 10]` with step `1e-4`.
fn grid_prox(z: f64, t: f64) -> f64 {
    let f = |x: f64| 0.5 * (x - z) * (x - z) + t * x.abs();
    (0..=200_000)
        .map(|k| -10.0 + k as f64 * 1e-4)
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap()
}

#[test]
fn soft_threshold_minimizes_prox_objective() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let z = rand::RngExt::random_range(&mut rng, -8.0..8.0);
        let t = rand::RngExt::random_range(&mut rng, 0.0..4.0);
        let s = soft_threshold(z, t);
        assert!((s - grid_prox(z, t)).abs() <= 1e-4 + 1e-12, "z={z} t={t}: {s}");
    }
}

#[test]
fn independent_normal_features_are_uncorrelated() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rows: Vec<Vec<f64>> = (0..10_000)
        .map(|_| vec![StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)])
        .collect();
    let m = Matrix::from_dense_rows(&rows).unwrap();
    assert!(mean_abs_pairwise_correlation(&m, 100_000, 0).unwrap() < 0.05);
}

#[test]
fn sparsity_examples() {
    let mut rows = vec![vec![0.0; 10]; 10];
    rows[3][7] = 1.5;
    assert_eq!(sparsity(&Matrix::from_dense_rows(&rows).unwrap()).unwrap(), 0.99);
    let full = Matrix::from_dense_rows(&[vec![1.0, 2.0], vec![3.0, -4.0]]).unwrap();
    assert_eq!(sparsity(&full).unwrap(), 0.0);
}
