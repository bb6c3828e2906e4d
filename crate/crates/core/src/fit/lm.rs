//! Damped least squares (Levenberg-Marquardt) with a central-difference
//! Jacobian.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmOptions {
    pub max_iterations: usize,
    pub initial_damping: f64,
    /// Stop when an accepted step changes SSE by less than this fraction.
    pub sse_rel_tol: f64,
    /// Stop when `max_j |∂SSE/∂p_j| / 2` drops below this.
    pub grad_tol: f64,
    /// Jacobian step is `fd_rel_step · max(|p_j|, 1)`.
    pub fd_rel_step: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            initial_damping: 1e-3,
            sse_rel_tol: 1e-10,
            grad_tol: 1e-8,
            fd_rel_step: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ZeroResidual,
    Gradient,
    SseChange,
    /// No downhill step exists at machine precision.
    Stalled,
    MaxIterations,
}

impl Termination {
    pub fn converged(self) -> bool {
        !matches!(self, Termination::MaxIterations)
    }
}

#[derive(Debug, Clone)]
pub struct LmReport {
    pub params: Vec<f64>,
    pub sse: f64,
    pub iterations: usize,
    pub termination: Termination,
    pub gradient_norm: f64,
    /// SSE at the start and after every accepted step.
    pub sse_history: Vec<f64>,
    /// Parameter covariance `σ² (JᵀJ)⁻¹` with `σ² = SSE / (m - p)`, or
    /// `None` when `JᵀJ` is singular or there are no residual degrees of
    /// freedom.
    pub covariance: Option<DMatrix<f64>>,
}

/// Minimises `Σ r_i(p)²`. `residuals(p, out)` fills `out` (length `m`).
pub fn minimize<F>(residuals: F, initial: &[f64], m: usize, opts: &LmOptions) -> LmReport
where
    F: Fn(&[f64], &mut [f64]),
{
    let np = initial.len();
    let mut p = initial.to_vec();
    let mut r = vec![0.0; m];
    residuals(&p, &mut r);
    let mut sse = sum_sq(&r);
    let mut history = vec![sse];
    let mut lambda = opts.initial_damping;
    let mut iterations = 0;
    let mut gradient_norm = f64::INFINITY;
    let mut termination = Termination::MaxIterations;

    let mut trial = vec![0.0; m];
    while iterations < opts.max_iterations {
        if sse == 0.0 {
            gradient_norm = 0.0;
            termination = Termination::ZeroResidual;
            break;
        }
        let jac = jacobian(&residuals, &p, m, opts.fd_rel_step);
        let rv = DVector::from_column_slice(&r);
        let g = jac.transpose() * &rv;
        gradient_norm = g.amax();
        if gradient_norm < opts.grad_tol {
            termination = Termination::Gradient;
            break;
        }
        iterations += 1;
        let jtj = jac.transpose() * &jac;
        let diag_floor = 1e-12 * jtj.diagonal().amax().max(f64::MIN_POSITIVE);

        let mut accepted = false;
        loop {
            let mut a = jtj.clone();
            for j in 0..np {
                a[(j, j)] += lambda * jtj[(j, j)].max(diag_floor);
            }
            let step = a.cholesky().map(|c| c.solve(&(-&g)));
            if let Some(step) = step {
                let cand: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                residuals(&cand, &mut trial);
                let sse_new = sum_sq(&trial);
                if sse_new.is_finite() && sse_new <= sse {
                    let rel = (sse - sse_new) / sse;
                    p = cand;
                    std::mem::swap(&mut r, &mut trial);
                    sse = sse_new;
                    history.push(sse);
                    lambda = (lambda / 10.0).max(1e-15);
                    accepted = true;
                    if rel < opts.sse_rel_tol {
                        termination = Termination::SseChange;
                    }
                    break;
                }
            }
            lambda *= 10.0;
            if lambda > 1e16 {
                break;
            }
        }
        if !accepted {
            termination = Termination::Stalled;
            break;
        }
        if termination == Termination::SseChange {
            break;
        }
    }

    let covariance = if m > np {
        let jac = jacobian(&residuals, &p, m, opts.fd_rel_step);
        let jtj = jac.transpose() * &jac;
        let sigma2 = sse / (m - np) as f64;
        invert_spd(jtj).map(|inv| inv * sigma2)
    } else {
        None
    };

    LmReport {
        params: p,
        sse,
        iterations,
        termination,
        gradient_norm,
        sse_history: history,
        covariance,
    }
}

fn jacobian<F>(residuals: &F, p: &[f64], m: usize, rel: f64) -> DMatrix<f64>
where
    F: Fn(&[f64], &mut [f64]),
{
    let np = p.len();
    let mut jac = DMatrix::zeros(m, np);
    let mut hi = vec![0.0; m];
    let mut lo = vec![0.0; m];
    let mut q = p.to_vec();
    for j in 0..np {
        let h = rel * p[j].abs().max(1.0);
        q[j] = p[j] + h;
        residuals(&q, &mut hi);
        q[j] = p[j] - h;
        residuals(&q, &mut lo);
        q[j] = p[j];
        for i in 0..m {
            jac[(i, j)] = (hi[i] - lo[i]) / (2.0 * h);
        }
    }
    jac
}

/// Inverse of a symmetric positive definite matrix, `None` when it is
/// numerically singular.
pub(crate) fn invert_spd(a: DMatrix<f64>) -> Option<DMatrix<f64>> {
    let scale = a.diagonal().amax();
    if !(scale.is_finite() && scale > 0.0) {
        return None;
    }
    // Reject matrices whose smallest pivot is lost in rounding.
    let chol = a.clone().cholesky()?;
    let l = chol.l();
    let min_pivot = l.diagonal().iter().fold(f64::INFINITY, |m, v| m.min(v * v));
    if min_pivot <= 1e-13 * scale {
        return None;
    }
    Some(chol.inverse())
}

fn sum_sq(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_exponential_decay() {
        let t: Vec<f64> = (0..30).map(|i| i as f64 * 0.2).collect();
        let y: Vec<f64> = t.iter().map(|&t| 3.0 * (-0.7 * t).exp() + 0.5).collect();
        let rep = minimize(
            |p, out| {
                for (i, &ti) in t.iter().enumerate() {
                    out[i] = p[0] * (-p[1] * ti).exp() + p[2] - y[i];
                }
            },
            &[1.0, 0.1, 0.0],
            t.len(),
            &LmOptions::default(),
        );
        assert!(rep.termination.converged());
        assert!((rep.params[0] - 3.0).abs() < 1e-6);
        assert!((rep.params[1] - 0.7).abs() < 1e-6);
        assert!((rep.params[2] - 0.5).abs() < 1e-6);
        for w in rep.sse_history.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn zero_residual_start_stops_immediately() {
        let rep = minimize(
            |p, out| out[0] = p[0] - 2.0,
            &[2.0],
            1,
            &LmOptions::default(),
        );
        assert_eq!(rep.iterations, 0);
        assert_eq!(rep.termination, Termination::ZeroResidual);
        assert!(rep.covariance.is_none());
    }

    #[test]
    fn singular_normal_matrix_has_no_covariance() {
        // second parameter does not influence the residuals
        let rep = minimize(
            |p, out| {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = p[0] - i as f64;
                }
            },
            &[0.0, 5.0],
            5,
            &LmOptions::default(),
        );
        assert!((rep.params[0] - 2.0).abs() < 1e-8);
        assert!(rep.covariance.is_none());
    }
}
