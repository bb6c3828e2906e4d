use rayon::prelude::*;

use super::grid::GridFunction;
use super::sech2;
use crate::error::{Error, Result};

/// Solitary-wave solution of `u_T - 6 u u_X + u_XXX = 0`:
/// `u = -(k²/2) cosh⁻²[(k/2)(X - k² T)]`.
pub fn kdv_soliton(k: f64, x: f64, t: f64) -> f64 {
    -0.5 * k * k * sech2(0.5 * k * (x - k * k * t))
}

/// Max interior residual of `u_T - 6 u u_X + u_XXX` using second-order
/// central stencils (3-point first derivatives, 5-point third derivative).
/// Boundary rows and columns are excluded.
pub fn kdv_residual(g: &GridFunction) -> Result<f64> {
    max_residual(g, |d| d.u_t - 6.0 * d.u * d.u_x + d.u_xxx)
}

/// Max interior residual of `4 R_T - 2 R R_X + R_XXX + c1`, with the same
/// stencils as [`kdv_residual`].
///
/// If `u` solves KdV then `R(X, T) = 3 u(X, T/4)` solves this equation with
/// `c1 = 0`.
pub fn redundancy_equation_residual(g: &GridFunction, c1: f64) -> Result<f64> {
    max_residual(g, |d| 4.0 * d.u_t - 2.0 * d.u * d.u_x + d.u_xxx + c1)
}

struct Derivatives {
    u: f64,
    u_t: f64,
    u_x: f64,
    u_xxx: f64,
}

fn max_residual<F>(g: &GridFunction, residual: F) -> Result<f64>
where
    F: Fn(&Derivatives) -> f64 + Sync,
{
    let (nx, nt) = (g.nx(), g.nt());
    if nx < 5 || nt < 5 {
        return Err(Error::GridTooSmall(format!(
            "need at least 5 points per axis, got {nx}x{nt}"
        )));
    }
    let dx = g.dx();
    let dt = g.dt();
    let row_max: Vec<f64> = (1..nt - 1)
        .into_par_iter()
        .map(|j| {
            let prev = g.row(j - 1);
            let cur = g.row(j);
            let next = g.row(j + 1);
            let mut m = 0.0f64;
            for i in 2..nx - 2 {
                let d = Derivatives {
                    u: cur[i],
                    u_t: (next[i] - prev[i]) / (2.0 * dt),
                    u_x: (cur[i + 1] - cur[i - 1]) / (2.0 * dx),
                    u_xxx: (cur[i + 2] - 2.0 * cur[i + 1] + 2.0 * cur[i - 1] - cur[i - 2])
                        / (2.0 * dx * dx * dx),
                };
                m = m.max(residual(&d).abs());
            }
            m
        })
        .collect();
    Ok(row_max.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn soliton_grid(dx: f64, dt: f64) -> GridFunction {
        let nx = (40.0 / dx).round() as usize + 1;
        let nt = (1.0 / dt).round() as usize + 1;
        GridFunction::from_fn(
            GridFunction::axis(-20.0, dx, nx),
            GridFunction::axis(0.0, dt, nt),
            |x, t| kdv_soliton(1.0, x, t),
        )
        .unwrap()
    }

    #[test]
    fn soliton_closed_form() {
        assert_eq!(kdv_soliton(1.0, 0.0, 0.0), -0.5);
        for t in [0.0, 0.3, 2.5] {
            assert!((kdv_soliton(2.0, 4.0 * t, t) + 2.0).abs() < 1e-15);
        }
        for k in [0.5, 1.0, 3.0] {
            assert!(kdv_soliton(k, 40.0 / k + k * k, 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_fields() {
        let zero = GridFunction::from_fn(
            GridFunction::axis(0.0, 0.1, 10),
            GridFunction::axis(0.0, 0.1, 10),
            |_, _| 0.0,
        )
        .unwrap();
        assert_eq!(kdv_residual(&zero).unwrap(), 0.0);
        assert_eq!(redundancy_equation_residual(&zero, 5.0).unwrap(), 5.0);

        let constant = GridFunction::from_fn(
            GridFunction::axis(0.0, 0.1, 10),
            GridFunction::axis(0.0, 0.1, 10),
            |_, _| 2.75,
        )
        .unwrap();
        assert_eq!(redundancy_equation_residual(&constant, 0.0).unwrap(), 0.0);

        // u = X: u_T = 0, u_X = 1, u_XXX = 0, so the residual is |6X|.
        let linear = GridFunction::from_fn(
            GridFunction::axis(-2.0, 0.5, 9),
            GridFunction::axis(0.0, 0.1, 6),
            |x, _| x,
        )
        .unwrap();
        let interior_max = 6.0 * 1.0; // interior columns span X ∈ [-1, 1]
        assert!((kdv_residual(&linear).unwrap() - interior_max).abs() < 1e-12);
    }

    #[test]
    fn grid_too_small() {
        let g = GridFunction::from_fn(
            GridFunction::axis(0.0, 0.1, 4),
            GridFunction::axis(0.0, 0.1, 10),
            |_, _| 0.0,
        )
        .unwrap();
        assert!(matches!(kdv_residual(&g), Err(Error::GridTooSmall(_))));
    }

    #[test]
    fn soliton_residual_converges_quadratically() {
        let coarse = kdv_residual(&soliton_grid(0.04, 0.004)).unwrap();
        let fine = kdv_residual(&soliton_grid(0.02, 0.002)).unwrap();
        let ratio = coarse / fine;
        assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
    }
}
