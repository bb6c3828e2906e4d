use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Simple regression `y = B x + C`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionResult {
    #[serde(rename = "B")]
    pub slope: f64,
    #[serde(rename = "C")]
    pub intercept: f64,
    /// `[se(B), se(C)]`.
    pub standard_errors: [f64; 2],
    /// `[t(B), t(C)]`.
    pub t_values: [f64; 2],
    pub r2: f64,
    pub adj_r2: f64,
    pub n: usize,
    #[serde(skip)]
    pub residuals: Vec<f64>,
}

impl RegressionResult {
    /// Two-sided confidence interval for the slope at `level` (e.g. 0.95).
    pub fn slope_interval(&self, level: f64) -> (f64, f64) {
        let half = t_quantile(0.5 + 0.5 * level, self.n - 2) * self.standard_errors[0];
        (self.slope - half, self.slope + half)
    }
}

fn t_quantile(p: f64, dof: usize) -> f64 {
    StudentsT::new(0.0, 1.0, dof as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(p)
}

/// Ordinary least squares of `y` on `x` with an intercept.
pub fn ols(x: &[f64], y: &[f64]) -> Result<RegressionResult> {
    if x.len() != y.len() {
        return Err(Error::InvalidSeries(format!(
            "x has {} values, y has {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::SeriesTooShort(format!("{n} observations, need 3")));
    }
    if !x.iter().chain(y).all(|v| v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * x.iter().map(|v| v * v).sum::<f64>() {
        return Err(Error::ZeroVariance);
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - intercept - slope * a).collect();
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let sst: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let r2 = if sst > 0.0 { (1.0 - sse / sst).clamp(0.0, 1.0) } else { 1.0 };
    let adj_r2 = 1.0 - (1.0 - r2) * (nf - 1.0) / (nf - 2.0);
    let s2 = sse / (nf - 2.0);
    let se_b = (s2 / sxx).sqrt();
    let se_c = (s2 * (1.0 / nf + mx * mx / sxx)).sqrt();
    Ok(RegressionResult {
        slope,
        intercept,
        standard_errors: [se_b, se_c],
        t_values: [slope / se_b, intercept / se_c],
        r2,
        adj_r2,
        n,
        residuals,
    })
}

/// Multiple regression `y = X b + e` solved by QR.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub residuals: Vec<f64>,
    pub sse: f64,
}

impl LinearFit {
    pub fn t_value(&self, j: usize) -> f64 {
        self.coefficients[j] / self.standard_errors[j]
    }
}

/// Fits `y` on the columns of `design` (`rows × cols`, row-major).
pub fn linear_fit(design: &[f64], rows: usize, y: &[f64]) -> Result<LinearFit> {
    if rows == 0 || !design.len().is_multiple_of(rows) || y.len() != rows {
        return Err(Error::InvalidSeries("design matrix shape mismatch".into()));
    }
    let cols = design.len() / rows;
    if rows <= cols {
        return Err(Error::SeriesTooShort(format!(
            "{rows} observations for {cols} regressors"
        )));
    }
    let x = DMatrix::from_row_slice(rows, cols, design);
    let yv = DVector::from_column_slice(y);
    let qr = x.clone().qr();
    let r = qr.r();
    let scale = r.diagonal().amax();
    if r.diagonal().iter().any(|d| d.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::Singular("regressors are collinear".into()));
    }
    let qty = qr.q().transpose() * &yv;
    let b = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
    let resid = &yv - &x * &b;
    let sse = resid.norm_squared();
    let s2 = sse / (rows - cols) as f64;
    let rinv = r
        .solve_upper_triangular(&DMatrix::identity(cols, cols))
        .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
    // (XᵀX)⁻¹ = R⁻¹ R⁻ᵀ, whose diagonal is the squared row norms of R⁻¹
    let standard_errors = (0..cols)
        .map(|j| (s2 * rinv.row(j).norm_squared()).sqrt())
        .collect();
    Ok(LinearFit {
        coefficients: b.iter().copied().collect(),
        standard_errors,
        residuals: resid.iter().copied().collect(),
        sse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn exact_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let r = ols(&x, &y).unwrap();
        assert!((r.slope - 2.0).abs() < 1e-12);
        assert!((r.intercept - 1.0).abs() < 1e-12);
        assert_eq!(r.r2, 1.0);
        assert!(r.residuals.iter().all(|e| e.abs() < 1e-12));
    }

    #[test]
    fn noise_slope_inside_own_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let x: Vec<f64> = (0..200).map(|i| (i as f64 * 0.37).sin() * 10.0).collect();
        let y: Vec<f64> = (0..200).map(|_| normal.sample(&mut rng)).collect();
        let r = ols(&x, &y).unwrap();
        let (lo, hi) = r.slope_interval(0.95);
        assert!(lo < 0.0 && 0.0 < hi, "[{lo}, {hi}]");
    }

    #[test]
    fn residuals_orthogonal_and_centred() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let normal = Normal::new(0.0, 3.0).unwrap();
        let x: Vec<f64> = (0..50).map(|i| i as f64 * 1.5 + 100.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 0.5 * v + normal.sample(&mut rng)).collect();
        let r = ols(&x, &y).unwrap();
        let sum: f64 = r.residuals.iter().sum();
        let dot: f64 = r.residuals.iter().zip(&x).map(|(e, v)| e * v).sum();
        assert!(sum.abs() < 1e-9);
        assert!(dot.abs() < 1e-9 * x.iter().map(|v| v.abs()).sum::<f64>());
        assert!((0.0..=1.0).contains(&r.r2));
    }

    #[test]
    fn standard_errors_match_closed_form_statistics() {
        // textbook: se(B)² = s²/Sxx with s² = SSE/(n-2)
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [2.0, 4.1, 5.9, 8.2, 9.8];
        let r = ols(&x, &y).unwrap();
        let sse: f64 = r.residuals.iter().map(|e| e * e).sum();
        let expected = (sse / 3.0 / 10.0).sqrt();
        assert!((r.standard_errors[0] - expected).abs() < 1e-12);
        let lf = linear_fit(
            &x.iter().flat_map(|&v| [v, 1.0]).collect::<Vec<_>>(),
            5,
            &y,
        )
        .unwrap();
        assert!((lf.coefficients[0] - r.slope).abs() < 1e-12);
        assert!((lf.coefficients[1] - r.intercept).abs() < 1e-12);
        assert!((lf.standard_errors[0] - r.standard_errors[0]).abs() < 1e-12);
        assert!((lf.standard_errors[1] - r.standard_errors[1]).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!(ols(&[1.0; 5], &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap_err(), Error::ZeroVariance);
        assert!(matches!(ols(&[1.0, 2.0], &[1.0, 2.0]), Err(Error::SeriesTooShort(_))));
        assert!(matches!(
            linear_fit(&[1.0, 1.0, 2.0, 2.0, 3.0, 3.0], 3, &[1.0, 2.0, 3.0]),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn json_layout() {
        let r = ols(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 5.0]).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["B", "C", "t_values", "r2", "adj_r2", "n"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v.get("residuals").is_none());
    }
}
