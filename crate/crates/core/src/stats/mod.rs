//! Unit-root and cointegration tests: augmented Dickey-Fuller and the
//! two-step Engle-Granger procedure.

mod critical;

pub use critical::{
    adf_critical_values, engle_granger_critical_values, CriticalValues, RegressionKind, Significance,
    TABLE_SIZES,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{linear_fit, ols, RegressionResult, TimeSeries};

/// `d`-th discrete difference; the first `d` time stamps are dropped.
pub fn difference(series: &TimeSeries, d: usize) -> Result<TimeSeries> {
    if series.len() <= d {
        return Err(Error::Stats(format!(
            "cannot difference {} samples {d} times",
            series.len()
        )));
    }
    let mut v = series.values().to_vec();
    for _ in 0..d {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    TimeSeries::new(series.times()[d..].to_vec(), v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LagSpec {
    /// `floor(12 (n/100)^{1/4})`.
    #[default]
    Auto,
    Fixed(usize),
}

/// Schwert's rule of thumb for the augmentation order.
pub fn schwert_lags(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdfResult {
    pub statistic: f64,
    pub lags: usize,
    pub kind: RegressionKind,
    pub critical_values: CriticalValues,
    pub reject_at: Option<Significance>,
    /// Observations in the test regression.
    pub nobs: usize,
}

/// Augmented Dickey-Fuller test of a unit root in `series`.
///
/// Regresses `Δy_t` on `y_{t-1}`, `Δy_{t-1} .. Δy_{t-p}` and the
/// deterministic terms of `kind`; the statistic is the t-ratio of the
/// `y_{t-1}` coefficient.
pub fn adf_test(series: &TimeSeries, lags: LagSpec, kind: RegressionKind) -> Result<AdfResult> {
    let cv = |nobs| adf_critical_values(kind, nobs);
    adf_with(series, lags, kind, cv)
}

fn adf_with(
    series: &TimeSeries,
    lags: LagSpec,
    kind: RegressionKind,
    critical: impl Fn(usize) -> CriticalValues,
) -> Result<AdfResult> {
    series.ensure_finite()?;
    let y = series.values();
    let n = y.len();
    let p = match lags {
        LagSpec::Auto => schwert_lags(n),
        LagSpec::Fixed(p) => p,
    };
    if n < p + 10 {
        return Err(Error::Stats(format!("{n} samples is too short for {p} lags (need {})", p + 10)));
    }
    let mean = y.iter().sum::<f64>() / n as f64;
    if y.iter().all(|v| (v - mean).abs() <= f64::EPSILON * mean.abs().max(1.0)) {
        return Err(Error::Stats("series has zero variance".into()));
    }
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    // rows t = p+1 .. n-1 (index into y); dy[t-1] = y_t - y_{t-1}
    let rows = n - 1 - p;
    let cols = 1 + p + kind.deterministic_terms();
    if rows <= cols {
        return Err(Error::Stats(format!("{rows} observations for {cols} regressors")));
    }
    let mut design = Vec::with_capacity(rows * cols);
    let mut target = Vec::with_capacity(rows);
    for t in (p + 1)..n {
        target.push(dy[t - 1]);
        design.push(y[t - 1]);
        for j in 1..=p {
            design.push(dy[t - 1 - j]);
        }
        match kind {
            RegressionKind::None => {}
            RegressionKind::Constant => design.push(1.0),
            RegressionKind::ConstantTrend => {
                design.push(1.0);
                design.push(t as f64);
            }
        }
    }
    let fit = linear_fit(&design, rows, &target).map_err(|e| Error::Stats(format!("test regression: {e}")))?;
    let statistic = fit.t_value(0);
    let critical_values = critical(rows);
    Ok(AdfResult {
        statistic,
        lags: p,
        kind,
        critical_values,
        reject_at: critical_values.reject_at(statistic),
        nobs: rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CointegrationResult {
    #[serde(flatten)]
    pub step1: RegressionResult,
    /// `None` in the degenerate exact-relation case.
    pub residual_adf: Option<AdfResult>,
    pub cointegrated_at: Option<Significance>,
    /// Step-1 residuals vanish: `y` is an exact affine function of `x`.
    pub degenerate: bool,
}

/// Two-step Engle-Granger test with automatic lag selection.
pub fn engle_granger(y: &TimeSeries, x: &TimeSeries) -> Result<CointegrationResult> {
    engle_granger_with_lags(y, x, LagSpec::Auto)
}

/// Step 1 regresses `y` on `x` with an intercept; step 2 runs the ADF
/// regression without deterministic terms on the residuals and compares
/// against Engle-Granger critical values.
pub fn engle_granger_with_lags(y: &TimeSeries, x: &TimeSeries, lags: LagSpec) -> Result<CointegrationResult> {
    if y.len() != x.len() {
        return Err(Error::Stats(format!("series lengths differ: {} vs {}", y.len(), x.len())));
    }
    if y.len() < 30 {
        return Err(Error::Stats(format!("{} samples, need at least 30", y.len())));
    }
    let step1 = ols(x.values(), y.values()).map_err(|e| Error::Stats(format!("cointegrating regression: {e}")))?;
    let scale = y.values().iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let resid_norm = step1.residuals.iter().map(|e| e * e).sum::<f64>().sqrt();
    if resid_norm <= 1e-12 * scale {
        return Ok(CointegrationResult {
            step1,
            residual_adf: None,
            cointegrated_at: Some(Significance::OnePercent),
            degenerate: true,
        });
    }
    let resid = y.with_values(step1.residuals.clone())?;
    let adf = adf_with(&resid, lags, RegressionKind::None, engle_granger_critical_values)?;
    Ok(CointegrationResult {
        step1,
        cointegrated_at: adf.reject_at,
        residual_adf: Some(adf),
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, 1.0).unwrap();
        (0..n).map(|_| normal.sample(&mut rng)).collect()
    }

    fn walk(n: usize, seed: u64) -> Vec<f64> {
        noise(n, seed)
            .into_iter()
            .scan(0.0, |s, e| {
                *s += e;
                Some(*s)
            })
            .collect()
    }

    #[test]
    fn difference_examples() {
        let s = TimeSeries::from_values(vec![1.0, 3.0, 6.0, 10.0]);
        assert_eq!(difference(&s, 1).unwrap().values(), &[2.0, 3.0, 4.0]);
        assert_eq!(difference(&s, 1).unwrap().times(), &[1.0, 2.0, 3.0]);
        let c = TimeSeries::from_values(vec![4.0; 5]);
        assert!(difference(&c, 1).unwrap().values().iter().all(|&v| v == 0.0));
        let twice = difference(&difference(&s, 1).unwrap(), 1).unwrap();
        assert_eq!(difference(&s, 2).unwrap(), twice);
        assert!(difference(&s, 4).is_err());
    }

    #[test]
    fn random_walk_not_rejected() {
        let s = TimeSeries::from_values(walk(500, 42));
        let r = adf_test(&s, LagSpec::Auto, RegressionKind::Constant).unwrap();
        assert!(r.reject_at.is_none() || r.reject_at == Some(Significance::TenPercent), "{r:?}");
        assert_eq!(r.lags, 17);
    }

    #[test]
    fn white_noise_rejected_at_one_percent() {
        let s = TimeSeries::from_values(noise(500, 43));
        let r = adf_test(&s, LagSpec::Auto, RegressionKind::Constant).unwrap();
        assert_eq!(r.reject_at, Some(Significance::OnePercent), "{r:?}");
    }

    #[test]
    fn affine_invariance() {
        let v = walk(300, 44);
        let a = adf_test(&TimeSeries::from_values(v.clone()), LagSpec::Fixed(4), RegressionKind::Constant).unwrap();
        let b = adf_test(
            &TimeSeries::from_values(v.iter().map(|x| 3.0 * x + 7.0).collect()),
            LagSpec::Fixed(4),
            RegressionKind::Constant,
        )
        .unwrap();
        assert!((a.statistic - b.statistic).abs() < 1e-9);
    }

    #[test]
    fn matches_direct_dickey_fuller_without_lags() {
        // Δy_t = ρ y_{t-1} + e_t by hand
        let y = walk(120, 45);
        let r = adf_test(&TimeSeries::from_values(y.clone()), LagSpec::Fixed(0), RegressionKind::None).unwrap();
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for t in 1..y.len() {
            sxy += y[t - 1] * (y[t] - y[t - 1]);
            sxx += y[t - 1] * y[t - 1];
        }
        let rho = sxy / sxx;
        let sse: f64 = (1..y.len()).map(|t| (y[t] - y[t - 1] - rho * y[t - 1]).powi(2)).sum();
        let se = (sse / (y.len() - 2) as f64 / sxx).sqrt();
        assert!((r.statistic - rho / se).abs() < 1e-9);
        assert_eq!(r.nobs, 119);
    }

    #[test]
    fn precondition_errors() {
        let s = TimeSeries::from_values(walk(15, 1));
        assert!(adf_test(&s, LagSpec::Fixed(6), RegressionKind::Constant).is_err());
        let c = TimeSeries::from_values(vec![2.0; 50]);
        assert!(matches!(adf_test(&c, LagSpec::Fixed(1), RegressionKind::Constant), Err(Error::Stats(_))));
    }

    #[test]
    fn cointegrated_pair() {
        let x = walk(400, 46);
        let e = noise(400, 47);
        let y: Vec<f64> = x.iter().zip(&e).map(|(a, b)| 2.0 * a + b).collect();
        let r = engle_granger(&TimeSeries::from_values(y), &TimeSeries::from_values(x)).unwrap();
        assert_eq!(r.cointegrated_at, Some(Significance::OnePercent));
        assert!(r.step1.residuals.iter().sum::<f64>().abs() < 1e-9);
        assert_eq!(r.residual_adf.as_ref().unwrap().kind, RegressionKind::None);
    }

    #[test]
    fn independent_walks_not_cointegrated() {
        let x = TimeSeries::from_values(walk(400, 48));
        let y = TimeSeries::from_values(walk(400, 49));
        let r = engle_granger(&y, &x).unwrap();
        assert!(!matches!(
            r.cointegrated_at,
            Some(Significance::OnePercent | Significance::FivePercent)
        ));
    }

    #[test]
    fn exact_relation_is_degenerate() {
        let x = TimeSeries::from_values(walk(60, 50));
        let r = engle_granger(&x, &x).unwrap();
        assert!(r.degenerate);
        assert!(r.residual_adf.is_none());
        assert!(r.step1.residuals.iter().all(|e| e.abs() < 1e-9));
        let json = serde_json::to_value(&r).unwrap();
        for key in ["B", "C", "residual_adf", "cointegrated_at"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }
}
