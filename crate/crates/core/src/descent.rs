//! Floating-point norm minimization over a group orbit (Kempf–Ness descent).
//!
//! This is the only module that uses floating point. Its results are evidence,
//! never certificates.

use crate::algebra::{coords_of, is_reductive_in, LieAlgebra, Subalgebra};
use crate::error::{Error, Result};
use crate::orbit::HomVector;
use crate::rational::to_f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentStatus {
    ConvergedToZero,
    ConvergedToPositiveMin,
    IterationLimit,
}

impl DescentStatus {
    pub fn name(self) -> &'static str {
        match self {
            DescentStatus::ConvergedToZero => "ConvergedToZero",
            DescentStatus::ConvergedToPositiveMin => "ConvergedToPositiveMin",
            DescentStatus::IterationLimit => "IterationLimit",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentResult {
    /// Smallest squared norm reached.
    pub infimum: f64,
    pub status: DescentStatus,
    pub iterations: usize,
    pub gradient_norm: f64,
}

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 10_000;

type Dense = Vec<Vec<f64>>;

fn dense(m: &crate::linalg::Matrix) -> Dense {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(to_f64).collect())
        .collect()
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i][k];
            if x == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += x * b[k][j];
            }
        }
    }
    out
}

fn apply(a: &Dense, w: &[Vec<f64>]) -> Vec<Vec<f64>> {
    w.iter()
        .map(|col| a.iter().map(|row| row.iter().zip(col).map(|(x, y)| x * y).sum()).collect())
        .collect()
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub(crate) fn expm(a: &Dense) -> Dense {
    let n = a.len();
    let norm = a
        .iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let b: Dense = a.iter().map(|r| r.iter().map(|x| x * scale).collect()).collect();
    let mut result: Dense = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut term = result.clone();
    for k in 1..=18 {
        term = matmul(&term, &b);
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x /= k as f64;
            }
        }
        for i in 0..n {
            for j in 0..n {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

fn sq_norm(w: &[Vec<f64>]) -> f64 {
    w.iter().flatten().map(|x| x * x).sum()
}

fn inner(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| x * y).sum()
}

/// Minimizes `‖exp(ad X)·v‖²` over `X` in `acting` by gradient descent on the
/// group with Armijo backtracking (factor 1/2).
pub fn kempf_ness_descent(
    g: &LieAlgebra,
    v: &HomVector,
    acting: &Subalgebra,
    tol: f64,
    max_iter: usize,
) -> Result<DescentResult> {
    if !is_reductive_in(g, acting.basis()) {
        return Err(Error::NonReductiveActingAlgebra);
    }
    let gens: Vec<Dense> = acting.basis().iter().map(|x| dense(&g.ad(x))).collect();
    let mut w: Vec<Vec<f64>> = coords_of(v.images())
        .iter()
        .map(|c| c.iter().map(to_f64).collect())
        .collect();
    descend(&gens, &mut w, tol, max_iter)
}

pub(crate) fn descend(
    gens: &[Dense],
    w: &mut Vec<Vec<f64>>,
    tol: f64,
    max_iter: usize,
) -> Result<DescentResult> {
    let mut f = sq_norm(w);
    if f < tol {
        return Ok(DescentResult {
            infimum: f,
            status: DescentStatus::ConvergedToZero,
            iterations: 0,
            gradient_norm: 0.0,
        });
    }
    let n = gens.first().map_or(0, Vec::len);
    let mut eta = 1.0;
    let mut grad_norm = 0.0;
    for it in 0..max_iter {
        // Gradient of log f along each generator.
        let grad: Vec<f64> = gens
            .iter()
            .map(|a| 2.0 * inner(&apply(a, w), w) / f)
            .collect();
        grad_norm = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
        if grad_norm < tol {
            return Ok(DescentResult {
                infimum: f,
                status: DescentStatus::ConvergedToPositiveMin,
                iterations: it,
                gradient_norm: grad_norm,
            });
        }
        let mut dir = vec![vec![0.0; n]; n];
        for (gj, a) in grad.iter().zip(gens) {
            for i in 0..n {
                for k in 0..n {
                    dir[i][k] -= gj * a[i][k];
                }
            }
        }
        let logf = f.ln();
        let mut accepted = false;
        for _ in 0..60 {
            let step: Dense = dir.iter().map(|r| r.iter().map(|x| x * eta).collect()).collect();
            let cand = apply(&expm(&step), w);
            let fc = sq_norm(&cand);
            if fc > 0.0 && fc.is_finite() && fc.ln() <= logf - 1e-4 * eta * grad_norm * grad_norm {
                *w = cand;
                f = fc;
                eta *= 2.0;
                accepted = true;
                break;
            }
            if fc == 0.0 {
                *w = cand;
                f = fc;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if f < tol {
            return Ok(DescentResult {
                infimum: f,
                status: DescentStatus::ConvergedToZero,
                iterations: it + 1,
                gradient_norm: grad_norm,
            });
        }
        if !accepted {
            // No decrease along the gradient at machine precision: a stationary point.
            return Ok(DescentResult {
                infimum: f,
                status: DescentStatus::ConvergedToPositiveMin,
                iterations: it + 1,
                gradient_norm: grad_norm,
            });
        }
    }
    Ok(DescentResult {
        infimum: f,
        status: DescentStatus::IterationLimit,
        iterations: max_iter,
        gradient_norm: grad_norm,
    })
}
