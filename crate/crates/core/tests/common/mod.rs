//! Independent reference solutions for the integration tests. Objectives
//! are recomputed here from dense rows rather than through the library.

#![allow(dead_code)]

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
    SupportedConeT::{NonnegativeConeT, SecondOrderConeT, ZeroConeT},
};
use fsbench::dataset::{Label, LabeledDataset, Split};
use fsbench::linalg::Matrix;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A small dense problem: rows, ±1 labels.
#[derive(Debug, Clone)]
pub struct Instance {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn d(&self) -> usize {
        self.x[0].len()
    }

    pub fn dataset(&self) -> LabeledDataset {
        let labels = self.y.iter().map(|&v| if v > 0.0 { Label::Positive } else { Label::Negative }).collect();
        LabeledDataset::new(Matrix::from_dense_rows(&self.x).unwrap(), labels, Split::Train).unwrap()
    }

    pub fn margin(&self, i: usize, w: &[f64], b: f64) -> f64 {
        self.x[i].iter().zip(w).map(|(a, c)| a * c).sum::<f64>() + b
    }
}

/// `n ∈ [4, 10]`, `d ∈ [1, 5]`, Gaussian entries, both classes present.
pub fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(4..=10);
    let d = rng.random_range(1..=5);
    instance_with(&mut rng, n, d)
}

pub fn instance_with(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Instance {
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let mut y: Vec<f64> = (0..n).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
    y[0] = 1.0;
    y[1] = -1.0;
    Instance { x, y }
}

pub fn hinge_sum(p: &Instance, w: &[f64], b: f64) -> f64 {
    (0..p.n()).map(|i| (1.0 - p.y[i] * p.margin(i, w, b)).max(0.0)).sum()
}

pub fn svm_objective(p: &Instance, c: f64, w: &[f64], b: f64) -> f64 {
    0.5 * (w.iter().map(|v| v * v).sum::<f64>() + b * b) + c * hinge_sum(p, w, b)
}

pub fn l1_svm_objective(p: &Instance, c: f64, lambda: f64, w: &[f64], b: f64) -> f64 {
    c * hinge_sum(p, w, b) + lambda * w.iter().map(|v| v.abs()).sum::<f64>()
}

pub fn en_objective(p: &Instance, l1: f64, l2: f64, w: &[f64], b: f64) -> f64 {
    let loss: f64 = (0..p.n()).map(|i| (p.margin(i, w, b) - p.y[i]).powi(2)).sum();
    0.5 * loss + l1 * w.iter().map(|v| v.abs()).sum::<f64>() + 0.5 * l2 * w.iter().map(|v| v * v).sum::<f64>()
}

pub fn l21_objective(p: &Instance, lambda: f64, w: &[[f64; 2]], b: [f64; 2]) -> f64 {
    let mut total = 0.0;
    for i in 0..p.n() {
        let t = if p.y[i] > 0.0 { [1.0, 0.0] } else { [0.0, 1.0] };
        let mut r = [b[0] - t[0], b[1] - t[1]];
        for (j, v) in p.x[i].iter().enumerate() {
            r[0] += v * w[j][0];
            r[1] += v * w[j][1];
        }
        total += r[0].hypot(r[1]);
    }
    total + lambda * w.iter().map(|r| r[0].hypot(r[1])).sum::<f64>()
}

/// Conic program `min ½xᵀdiag(p)x + qᵀx` subject to `Ax + s = b`, `s ∈ K`,
/// with `A` given densely by rows.
struct Program {
    p: Vec<f64>,
    q: Vec<f64>,
    rows: Vec<Vec<f64>>,
    b: Vec<f64>,
    cones: Vec<SupportedConeT<f64>>,
}

impl Program {
    fn new(vars: usize) -> Self {
        Self {
            p: vec![0.0; vars],
            q: vec![0.0; vars],
            rows: Vec::new(),
            b: Vec::new(),
            cones: Vec::new(),
        }
    }

    fn vars(&self) -> usize {
        self.q.len()
    }

    /// Appends constraint rows forming one cone block.
    fn block(&mut self, cone: SupportedConeT<f64>, rows: Vec<(Vec<(usize, f64)>, f64)>) {
        for (terms, rhs) in rows {
            let mut row = vec![0.0; self.vars()];
            for (j, v) in terms {
                row[j] += v;
            }
            self.rows.push(row);
            self.b.push(rhs);
        }
        self.cones.push(cone);
    }

    fn solve(self) -> Vec<f64> {
        let n = self.vars();
        let pm: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { self.p[i] } else { 0.0 }).collect())
            .collect();
        let pm = CscMatrix::from(&pm);
        let a = CscMatrix::from(&self.rows);
        let settings = DefaultSettingsBuilder::default()
            .verbose(false)
            .tol_gap_abs(1e-10)
            .tol_gap_rel(1e-10)
            .tol_feas(1e-10)
            .build()
            .unwrap();
        let mut solver = DefaultSolver::new(&pm, &self.q, &a, &self.b, &self.cones, settings).unwrap();
        solver.solve();
        assert!(
            matches!(solver.solution.status, SolverStatus::Solved | SolverStatus::AlmostSolved),
            "oracle status {:?}",
            solver.solution.status
        );
        solver.solution.x.clone()
    }
}

/// Hinge rows `ξᵢ ≥ 1 − yᵢ(w·xᵢ + b)` and `ξᵢ ≥ 0` for variables laid out
/// as `w` at `w0`, `b` at `bi`, `ξ` at `xi0`.
fn hinge_constraints(prog: &mut Program, p: &Instance, w0: usize, bi: usize, xi0: usize) {
    let mut rows = Vec::new();
    for i in 0..p.n() {
        let mut terms: Vec<(usize, f64)> = (0..p.d()).map(|j| (w0 + j, -p.y[i] * p.x[i][j])).collect();
        terms.push((bi, -p.y[i]));
        terms.push((xi0 + i, -1.0));
        rows.push((terms, -1.0));
        rows.push((vec![(xi0 + i, -1.0)], 0.0));
    }
    prog.block(NonnegativeConeT(rows.len()), rows);
}

/// `t ≥ |w|` elementwise.
fn abs_constraints(prog: &mut Program, d: usize, w0: usize, t0: usize) {
    let mut rows = Vec::new();
    for j in 0..d {
        rows.push((vec![(w0 + j, 1.0), (t0 + j, -1.0)], 0.0));
        rows.push((vec![(w0 + j, -1.0), (t0 + j, -1.0)], 0.0));
    }
    prog.block(NonnegativeConeT(rows.len()), rows);
}

/// Minimizer of `½(‖w‖² + b²) + C Σ hinge`.
pub fn svm_oracle(p: &Instance, c: f64) -> (Vec<f64>, f64) {
    let (n, d) = (p.n(), p.d());
    let mut prog = Program::new(d + 1 + n);
    for j in 0..=d {
        prog.p[j] = 1.0;
    }
    for i in 0..n {
        prog.q[d + 1 + i] = c;
    }
    hinge_constraints(&mut prog, p, 0, d, d + 1);
    let x = prog.solve();
    (x[..d].to_vec(), x[d])
}

/// Minimizer of `C Σ hinge + λ‖w‖₁` as a linear program.
pub fn l1_svm_oracle(p: &Instance, c: f64, lambda: f64) -> (Vec<f64>, f64) {
    let (n, d) = (p.n(), p.d());
    // [w, t, b, ξ]
    let mut prog = Program::new(2 * d + 1 + n);
    for j in 0..d {
        prog.q[d + j] = lambda;
    }
    for i in 0..n {
        prog.q[2 * d + 1 + i] = c;
    }
    hinge_constraints(&mut prog, p, 0, 2 * d, 2 * d + 1);
    abs_constraints(&mut prog, d, 0, d);
    let x = prog.solve();
    (x[..d].to_vec(), x[2 * d])
}

/// Minimizer of `½‖Xw + b − y‖² + λ₁‖w‖₁ + ½λ₂‖w‖²`.
pub fn en_oracle(p: &Instance, l1: f64, l2: f64) -> (Vec<f64>, f64) {
    let (n, d) = (p.n(), p.d());
    // [w, t, b, r]
    let mut prog = Program::new(2 * d + 1 + n);
    for j in 0..d {
        prog.p[j] = l2;
        prog.q[d + j] = l1;
    }
    for i in 0..n {
        prog.p[2 * d + 1 + i] = 1.0;
    }
    let rows = (0..n)
        .map(|i| {
            let mut terms: Vec<(usize, f64)> = (0..d).map(|j| (j, p.x[i][j])).collect();
            terms.push((2 * d, 1.0));
            terms.push((2 * d + 1 + i, -1.0));
            (terms, p.y[i])
        })
        .collect();
    prog.block(ZeroConeT(n), rows);
    abs_constraints(&mut prog, d, 0, d);
    let x = prog.solve();
    (x[..d].to_vec(), x[2 * d])
}

/// Minimizer of `Σᵢ‖xᵢW + b − tᵢ‖₂ + λΣⱼ‖wʲ‖₂` as a second-order cone
/// program.
pub fn l21_oracle(p: &Instance, lambda: f64) -> (Vec<[f64; 2]>, [f64; 2]) {
    let (n, d) = (p.n(), p.d());
    // [W (2d), b (2), s (n), u (d), R (2n)]
    let (b0, s0, u0, r0) = (2 * d, 2 * d + 2, 2 * d + 2 + n, 2 * d + 2 + n + d);
    let mut prog = Program::new(r0 + 2 * n);
    for i in 0..n {
        prog.q[s0 + i] = 1.0;
    }
    for j in 0..d {
        prog.q[u0 + j] = lambda;
    }
    let mut rows = Vec::new();
    for i in 0..n {
        let t = if p.y[i] > 0.0 { [1.0, 0.0] } else { [0.0, 1.0] };
        for c in 0..2 {
            let mut terms: Vec<(usize, f64)> = (0..d).map(|j| (2 * j + c, p.x[i][j])).collect();
            terms.push((b0 + c, 1.0));
            terms.push((r0 + 2 * i + c, -1.0));
            rows.push((terms, t[c]));
        }
    }
    prog.block(ZeroConeT(2 * n), rows);
    for i in 0..n {
        let rows = vec![
            (vec![(s0 + i, -1.0)], 0.0),
            (vec![(r0 + 2 * i, -1.0)], 0.0),
            (vec![(r0 + 2 * i + 1, -1.0)], 0.0),
        ];
        prog.block(SecondOrderConeT(3), rows);
    }
    for j in 0..d {
        let rows = vec![
            (vec![(u0 + j, -1.0)], 0.0),
            (vec![(2 * j, -1.0)], 0.0),
            (vec![(2 * j + 1, -1.0)], 0.0),
        ];
        prog.block(SecondOrderConeT(3), rows);
    }
    let x = prog.solve();
    ((0..d).map(|j| [x[2 * j], x[2 * j + 1]]).collect(), [x[b0], x[b0 + 1]])
}

/// Least squares `min ‖Xw + b − y‖²` through the normal equations.
pub fn ols_oracle(p: &Instance) -> (Vec<f64>, f64) {
    let (n, d) = (p.n(), p.d());
    let xt = nalgebra::DMatrix::from_fn(n, d + 1, |i, j| if j < d { p.x[i][j] } else { 1.0 });
    let y = nalgebra::DVector::from_column_slice(&p.y);
    let sol = (xt.transpose() * &xt).lu().solve(&(xt.transpose() * y)).unwrap();
    (sol.as_slice()[..d].to_vec(), sol[d])
}

/// `|a − b| ≤ max(abs, rel·|b|)`
pub fn close(a: f64, b: f64, abs: f64, rel: f64) -> bool {
    (a - b).abs() <= abs.max(rel * b.abs())
}
