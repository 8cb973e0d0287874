//! L1-penalized hinge-loss SVM.
//!
//! Minimizes `C Σ max(0, 1 − yᵢ(w·xᵢ + b)) + λ‖w‖₁` with an unpenalized
//! bias. The problem is the linear program
//!
//! ```text
//! min  λ1ᵀ(u + v) + C1ᵀξ
//! s.t. Z(u − v) + y b + ξ − s = 1,   u, v, ξ, s ≥ 0,   b free
//! ```
//!
//! with `Z = diag(y) X`, solved by a primal-dual interior-point method
//! (Mehrotra predictor-corrector). Each iteration factors the `n × n`
//! normal matrix `Z diag(θᵤ + θᵥ) Zᵀ + diag(θ_ξ + θ_s)`; the free bias is
//! eliminated through its Schur complement.

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::linalg::dense::{dot4, Cholesky};
use crate::linalg::norm_l1;
use crate::ranking::FeatureRanking;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1SvmConfig {
    pub c: f64,
    pub lambda: f64,
    /// Bound on the relative primal and dual infeasibility and duality gap.
    pub tol: f64,
    /// Interior-point iterations.
    pub max_iter: usize,
}

impl Default for L1SvmConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            lambda: 1.0,
            tol: 1e-8,
            max_iter: 100,
        }
    }
}

impl L1SvmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::invalid(format!("C must be positive, got {}", self.c)));
        }
        if !(self.lambda >= 0.0) {
            return Err(Error::invalid("l1-svm lambda must be non-negative"));
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::invalid("l1-svm needs tol and max_iter > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct L1SvmFit {
    pub w: Vec<f64>,
    pub b: f64,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn l1_svm_objective(data: &LabeledDataset, c: f64, lambda: f64, w: &[f64], b: f64) -> f64 {
    let x = data.data();
    let loss: f64 = data
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (1.0 - l.sign() * (x.row(i).dot(w) + b)).max(0.0))
        .sum();
    c * loss + lambda * norm_l1(w)
}

/// The optimal bias at `w = 0` and a penalty `λ_max` at and above which
/// `(0, b₀)` is optimal.
///
/// With balanced classes `b₀ = 0` and every hinge is active. Otherwise
/// `b₀ = ±1` puts the majority class exactly on the kink, and the hinge
/// subgradient weight `θ = n_minority / n_majority` on those points zeroes
/// the bias subgradient. `λ_max` is the sup-norm of the resulting
/// subgradient with respect to `w`.
pub fn l1_svm_lambda_max(data: &LabeledDataset, c: f64) -> Result<(f64, f64)> {
    data.require_both_classes()?;
    let (pos, neg) = data.class_counts();
    let (b0, theta_pos, theta_neg) = if pos == neg {
        (0.0, 1.0, 1.0)
    } else if pos > neg {
        (1.0, neg as f64 / pos as f64, 1.0)
    } else {
        (-1.0, 1.0, pos as f64 / neg as f64)
    };
    let x = data.data();
    let mut g = vec![0.0; x.cols()];
    for (i, l) in data.labels().iter().enumerate() {
        let coef = match l.sign() > 0.0 {
            true => theta_pos,
            false => -theta_neg,
        };
        x.row(i).axpy_into(c * coef, &mut g);
    }
    Ok((g.iter().fold(0.0, |m, v| m.max(v.abs())), b0))
}

/// Certified zeros at `λ ≥ λ_max`, otherwise the interior-point solve.
/// Coefficients the final iterate identifies as nonbasic (`u_j` and `v_j`
/// both below their reduced costs) are returned as exact zeros.
pub fn l1_svm_fit(data: &LabeledDataset, cfg: &L1SvmConfig) -> Result<L1SvmFit> {
    cfg.validate()?;
    let (lambda_max, b0) = l1_svm_lambda_max(data, cfg.c)?;
    let d = data.n_features();
    if cfg.lambda >= lambda_max {
        let w = vec![0.0; d];
        let objective = l1_svm_objective(data, cfg.c, cfg.lambda, &w, b0);
        return Ok(L1SvmFit {
            w,
            b: b0,
            objective,
            iterations: 0,
            converged: true,
        });
    }
    let lp = HingeLp::new(data, cfg.c, cfg.lambda);
    let sol = lp.solve(cfg.tol, cfg.max_iter)?;
    let (x, sl) = (&sol.x, &sol.slack);
    let w: Vec<f64> = (0..d)
        .map(|j| {
            let (u, v) = (x[j], x[d + j]);
            if u < sl[j] && v < sl[d + j] {
                0.0
            } else {
                u - v
            }
        })
        .collect();
    let objective = l1_svm_objective(data, cfg.c, cfg.lambda, &w, sol.b);
    Ok(L1SvmFit {
        w,
        b: sol.b,
        objective,
        iterations: sol.iterations,
        converged: sol.converged,
    })
}

/// The hinge LP in standard form. Primal variables are laid out as
/// `[u (d), v (d), ξ (n), s (n)]` plus the free bias.
struct HingeLp {
    n: usize,
    d: usize,
    /// `Z = diag(y) X`, row-major.
    z: Vec<f64>,
    y: Vec<f64>,
    cost: Vec<f64>,
}

struct LpSolution {
    x: Vec<f64>,
    b: f64,
    slack: Vec<f64>,
    iterations: usize,
    converged: bool,
}

/// A factored normal matrix with `M⁻¹y` for the bias elimination.
struct Normal {
    chol: Cholesky,
    my: Vec<f64>,
    ymy: f64,
}

struct Direction {
    x: Vec<f64>,
    b: f64,
    lam: Vec<f64>,
    slack: Vec<f64>,
}

/// Largest `α` keeping `v + α dv ≥ 0`.
fn max_step(v: &[f64], dv: &[f64]) -> f64 {
    v.iter()
        .zip(dv)
        .filter(|(_, &g)| g < 0.0)
        .map(|(&a, &g)| -a / g)
        .fold(f64::INFINITY, f64::min)
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

impl HingeLp {
    fn new(data: &LabeledDataset, c: f64, lambda: f64) -> Self {
        let (n, d) = (data.n_examples(), data.n_features());
        let y = data.label_signs();
        let x = data.data();
        let mut z = vec![0.0; n * d];
        for i in 0..n {
            for (j, v) in x.row(i).iter() {
                z[i * d + j] = y[i] * v;
            }
        }
        let mut cost = vec![lambda; 2 * d];
        cost.extend(std::iter::repeat_n(c, n));
        cost.extend(std::iter::repeat_n(0.0, n));
        Self { n, d, z, y, cost }
    }

    fn len(&self) -> usize {
        2 * self.d + 2 * self.n
    }

    /// `A v` without the bias column.
    fn a_mul(&self, v: &[f64]) -> Vec<f64> {
        let (n, d) = (self.n, self.d);
        let diff: Vec<f64> = (0..d).map(|j| v[j] - v[d + j]).collect();
        (0..n)
            .map(|i| dot4(&self.z[i * d..(i + 1) * d], &diff) + v[2 * d + i] - v[2 * d + n + i])
            .collect()
    }

    fn at_mul(&self, lam: &[f64]) -> Vec<f64> {
        let d = self.d;
        let mut g = vec![0.0; d];
        for (i, &l) in lam.iter().enumerate() {
            if l != 0.0 {
                for (gj, zij) in g.iter_mut().zip(&self.z[i * d..(i + 1) * d]) {
                    *gj += l * zij;
                }
            }
        }
        let mut out = g.clone();
        out.extend(g.iter().map(|v| -v));
        out.extend_from_slice(lam);
        out.extend(lam.iter().map(|v| -v));
        out
    }

    /// Factors `A diag(θ) Aᵀ`, adding a small diagonal shift when roundoff
    /// breaks positive definiteness.
    fn normal(&self, theta: &[f64]) -> Result<Normal> {
        let (n, d) = (self.n, self.d);
        let scale: Vec<f64> = (0..d).map(|j| (theta[j] + theta[d + j]).sqrt()).collect();
        let mut wz = self.z.clone();
        for row in wz.chunks_exact_mut(d.max(1)) {
            for (v, s) in row.iter_mut().zip(&scale) {
                *v *= s;
            }
        }
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            let ri = &wz[i * d..(i + 1) * d];
            for k in 0..=i {
                m[i * n + k] = dot4(ri, &wz[k * d..(k + 1) * d]);
            }
            m[i * n + i] += theta[2 * d + i] + theta[2 * d + n + i];
        }
        let max_diag = (0..n).map(|i| m[i * n + i]).fold(0.0, f64::max);
        let mut shift = 1e-14 * (1.0 + max_diag);
        for _ in 0..4 {
            let mut shifted = m.clone();
            for i in 0..n {
                shifted[i * n + i] += shift;
            }
            if let Ok(chol) = Cholesky::factor(&shifted, n) {
                let my = chol.solve(&self.y);
                let ymy = self.y.iter().zip(&my).map(|(a, b)| a * b).sum();
                return Ok(Normal { chol, my, ymy });
            }
            shift *= 1e3;
        }
        Err(Error::Numerical("l1-svm normal equations are singular".into()))
    }

    /// Newton direction for complementarity target `rc` given the
    /// residuals `rp = 1 − Ax − yb`, `rd = c − Aᵀλ − z`, `rf = −yᵀλ`.
    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        nm: &Normal,
        x: &[f64],
        slack: &[f64],
        rp: &[f64],
        rd: &[f64],
        rf: f64,
        rc: &[f64],
    ) -> Direction {
        let t: Vec<f64> = (0..self.len()).map(|k| (rc[k] - x[k] * rd[k]) / slack[k]).collect();
        let at = self.a_mul(&t);
        let h: Vec<f64> = rp.iter().zip(&at).map(|(a, b)| a - b).collect();
        let p = nm.chol.solve(&h);
        let yp: f64 = self.y.iter().zip(&p).map(|(a, b)| a * b).sum();
        let db = (yp - rf) / nm.ymy;
        let dlam: Vec<f64> = p.iter().zip(&nm.my).map(|(a, m)| a - m * db).collect();
        let atl = self.at_mul(&dlam);
        let dslack: Vec<f64> = rd.iter().zip(&atl).map(|(a, b)| a - b).collect();
        let dx = (0..self.len()).map(|k| (rc[k] - x[k] * dslack[k]) / slack[k]).collect();
        Direction {
            x: dx,
            b: db,
            lam: dlam,
            slack: dslack,
        }
    }

    fn solve(&self, tol: f64, max_iter: usize) -> Result<LpSolution> {
        let (n, len) = (self.n, self.len());
        let (mut x, mut lam, mut slack) = self.start()?;
        let mut b = 0.0;
        let cnorm = norm2(&self.cost);
        let mut iterations = 0;
        let mut converged = false;
        loop {
            let ax = self.a_mul(&x);
            let rp: Vec<f64> = (0..n).map(|i| 1.0 - ax[i] - self.y[i] * b).collect();
            let atl = self.at_mul(&lam);
            let rd: Vec<f64> = (0..len).map(|k| self.cost[k] - atl[k] - slack[k]).collect();
            let rf = -self.y.iter().zip(&lam).map(|(a, l)| a * l).sum::<f64>();
            let pobj: f64 = self.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
            let dobj: f64 = lam.iter().sum();
            let pinf = norm2(&rp) / (1.0 + (n as f64).sqrt());
            let dinf = (norm2(&rd) + rf.abs()) / (1.0 + cnorm);
            let gap = (pobj - dobj).abs() / (1.0 + pobj.abs());
            if pinf <= tol && dinf <= tol && gap <= tol {
                converged = true;
                break;
            }
            if iterations == max_iter {
                break;
            }
            let theta: Vec<f64> = x.iter().zip(&slack).map(|(a, s)| a / s).collect();
            // Late breakdowns keep the last iterate, which is already close.
            let nm = match self.normal(&theta) {
                Ok(nm) => nm,
                Err(_) if iterations > 0 => break,
                Err(e) => return Err(e),
            };
            let mu = x.iter().zip(&slack).map(|(a, s)| a * s).sum::<f64>() / len as f64;

            let rc: Vec<f64> = x.iter().zip(&slack).map(|(a, s)| -a * s).collect();
            let aff = self.direction(&nm, &x, &slack, &rp, &rd, rf, &rc);
            let ap = max_step(&x, &aff.x).min(1.0);
            let ad = max_step(&slack, &aff.slack).min(1.0);
            let mu_aff = (0..len)
                .map(|k| (x[k] + ap * aff.x[k]) * (slack[k] + ad * aff.slack[k]))
                .sum::<f64>()
                / len as f64;
            let sigma = (mu_aff / mu).powi(3);

            let rc: Vec<f64> = (0..len)
                .map(|k| sigma * mu - x[k] * slack[k] - aff.x[k] * aff.slack[k])
                .collect();
            let dir = self.direction(&nm, &x, &slack, &rp, &rd, rf, &rc);
            let ap = (0.99 * max_step(&x, &dir.x)).min(1.0);
            let ad = (0.99 * max_step(&slack, &dir.slack)).min(1.0);
            let finite = dir.b.is_finite() && dir.x.iter().chain(&dir.lam).all(|v| v.is_finite());
            if !finite || (ap < 1e-12 && ad < 1e-12) {
                break;
            }
            iterations += 1;
            for k in 0..len {
                x[k] += ap * dir.x[k];
                slack[k] += ad * dir.slack[k];
            }
            b += ap * dir.b;
            for (l, dl) in lam.iter_mut().zip(&dir.lam) {
                *l += ad * dl;
            }
        }
        Ok(LpSolution {
            x,
            b,
            slack,
            iterations,
            converged,
        })
    }

    /// Mehrotra's starting point: least-squares primal and dual estimates
    /// shifted into the positive orthant.
    fn start(&self) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let len = self.len();
        let nm = self.normal(&vec![1.0; len])?;
        let mut x = self.at_mul(&nm.chol.solve(&vec![1.0; self.n]));
        let lam = nm.chol.solve(&self.a_mul(&self.cost));
        let atl = self.at_mul(&lam);
        let mut slack: Vec<f64> = self.cost.iter().zip(&atl).map(|(c, a)| c - a).collect();
        let dx = (-1.5 * x.iter().copied().fold(f64::INFINITY, f64::min)).max(0.0);
        let ds = (-1.5 * slack.iter().copied().fold(f64::INFINITY, f64::min)).max(0.0);
        x.iter_mut().for_each(|v| *v += dx);
        slack.iter_mut().for_each(|v| *v += ds);
        let xs: f64 = x.iter().zip(&slack).map(|(a, s)| a * s).sum();
        let sum_x: f64 = x.iter().sum();
        let sum_s: f64 = slack.iter().sum();
        let (px, ps) = (0.5 * xs / sum_s, 0.5 * xs / sum_x);
        x.iter_mut().for_each(|v| *v += px.max(1e-8));
        slack.iter_mut().for_each(|v| *v += ps.max(1e-8));
        Ok((x, lam, slack))
    }
}

/// Ranks by `|w_j|`.
pub fn l1_svm_rank(data: &LabeledDataset, cfg: &L1SvmConfig) -> Result<FeatureRanking> {
    let fit = l1_svm_fit(data, cfg)?;
    Ok(FeatureRanking::from_scores(fit.w.iter().map(|v| v.abs()).collect()))
}
