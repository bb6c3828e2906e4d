use serde::Serialize;

use super::chain::{fit_soliton_chain, FitOptions};
use super::lm::{minimize, Termination};
use super::series::TimeSeries;
use crate::error::{Error, Result};
use crate::models::{logistic_eval, sigmoid, LogisticComponent};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogisticFit {
    pub baseline: f64,
    /// Ordered by `t0`.
    pub components: Vec<LogisticComponent>,
    pub sse: f64,
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
}

impl LogisticFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.baseline + self.components.iter().map(|c| logistic_eval(c, t)).sum::<f64>()
    }
}

/// Fits `baseline + Σ x_sat,i / (1 + e^{-s_i (t - t0,i)})` to a cumulative
/// series.
///
/// Starting values come from a soliton-chain fit of the differenced
/// series, mapped through `(A, k, c) -> (2A/k, 2k, c)`; the sum is then
/// refined directly on the cumulative data. Components with a negative
/// saturation level are reported as decreasing curves (`s < 0`) with the
/// offset folded into the baseline.
pub fn fit_logistic_sum(cumulative: &TimeSeries, n: usize, opts: &FitOptions) -> Result<LogisticFit> {
    if n == 0 {
        return Err(Error::InvalidSeries("component count must be >= 1".into()));
    }
    cumulative.ensure_finite()?;
    if cumulative.len() <= 3 * n + 1 {
        return Err(Error::SeriesTooShort(format!(
            "{} samples for {} parameters",
            cumulative.len(),
            3 * n + 1
        )));
    }
    let t = cumulative.times();
    let y = cumulative.values();
    let h = cumulative.step();
    // net decrease: fit the mirrored rate so that pulses point upwards
    let sign = if y[y.len() - 1] < y[0] { -1.0 } else { 1.0 };
    let rate: Vec<f64> = y.windows(2).map(|w| sign * (w[1] - w[0]) / h).collect();
    let rate = TimeSeries::uniform(t[0] + 0.5 * h, h, rate)?;
    let pulses = fit_soliton_chain(&rate, n, None, opts)?;

    let mut p0 = vec![0.0];
    for c in &pulses.model.components {
        let k = c.k.max(1e-12);
        p0.extend([sign * 2.0 * c.amplitude / k, (2.0 * k).ln(), c.center]);
    }
    let start_level: f64 = p0[1..]
        .chunks_exact(3)
        .map(|c| c[0] * sigmoid(c[1].exp() * (t[0] - c[2])))
        .sum();
    p0[0] = y[0] - start_level;

    let residuals = |p: &[f64], out: &mut [f64]| {
        for (o, &yi) in out.iter_mut().zip(y) {
            *o = p[0] - yi;
        }
        for c in p[1..].chunks_exact(3) {
            let (x_sat, s, t0) = (c[0], c[1].exp(), c[2]);
            for (o, &ti) in out.iter_mut().zip(t) {
                *o += x_sat * sigmoid(s * (ti - t0));
            }
        }
    };
    let rep = minimize(residuals, &p0, cumulative.len(), &opts.lm);

    let mut baseline = rep.params[0];
    let mut components: Vec<LogisticComponent> = rep.params[1..]
        .chunks_exact(3)
        .map(|c| {
            let (x_sat, s, t0) = (c[0], c[1].exp(), c[2]);
            if x_sat < 0.0 {
                // x/(1+e^{-su}) = x + |x|/(1+e^{su}) for x < 0
                baseline += x_sat;
                LogisticComponent { x_sat: -x_sat, s: -s, t0 }
            } else {
                LogisticComponent { x_sat, s, t0 }
            }
        })
        .collect();
    components.sort_by(|a, b| a.t0.total_cmp(&b.t0));
    Ok(LogisticFit {
        baseline,
        components,
        sse: rep.sse,
        iterations: rep.iterations,
        converged: rep.termination.converged(),
        termination: rep.termination,
    })
}
