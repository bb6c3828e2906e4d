use serde::Serialize;

use super::init::initialize_components;
use super::lm::{minimize, LmOptions, Termination};
use super::series::TimeSeries;
use crate::error::{Error, Result};
use crate::models::{sech2, SolitonChainModel, SolitonComponent};

#[derive(Debug, Clone, Copy, PartialEq)]
#[derive(Default)]
pub struct FitOptions {
    /// Keep `β` at its initial value instead of fitting it.
    pub fix_beta: bool,
    pub lm: LmOptions,
}


#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentErrors {
    #[serde(rename = "A")]
    pub amplitude: f64,
    pub k: f64,
    pub center: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardErrors {
    /// `None` when β was held fixed.
    pub beta: Option<f64>,
    pub components: Vec<ComponentErrors>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: SolitonChainModel,
    pub sse: f64,
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    pub gradient_norm: f64,
    /// Infinite where the normal matrix is singular.
    pub standard_errors: StandardErrors,
    /// Standard errors are unavailable or some amplitude is not
    /// distinguishable from zero.
    pub degenerate: bool,
    /// The initializer could not find enough peaks.
    pub initialization_fallback: bool,
    #[serde(skip)]
    pub sse_history: Vec<f64>,
}

impl FitResult {
    /// Model predictions at the given times.
    pub fn predict(&self, times: &[f64]) -> Vec<f64> {
        self.model.eval_many(times)
    }
}

/// Least-squares decomposition `β + Σ A_i cosh⁻²[k_i (t - c_i)]`.
///
/// Parameters are `(β, A_i, ln k_i, c_i)`, so widths stay positive while
/// amplitudes may take either sign. Without `init` the peak-based
/// initializer is used.
pub fn fit_soliton_chain(
    series: &TimeSeries,
    n: usize,
    init: Option<&SolitonChainModel>,
    opts: &FitOptions,
) -> Result<FitResult> {
    if n == 0 {
        return Err(Error::InvalidSeries("component count must be >= 1".into()));
    }
    series.ensure_finite()?;
    if series.len() <= 3 * n + 1 {
        return Err(Error::SeriesTooShort(format!(
            "{} samples for {} parameters",
            series.len(),
            3 * n + 1
        )));
    }
    let (start, fallback) = match init {
        Some(m) => {
            if m.components.len() != n {
                return Err(Error::InvalidSeries(format!(
                    "initial model has {} components, expected {n}",
                    m.components.len()
                )));
            }
            if m.components.iter().any(|c| !(c.k > 0.0 && c.k.is_finite())) {
                return Err(Error::InvalidSeries("initial widths must be positive".into()));
            }
            (m.clone(), false)
        }
        None => {
            let i = initialize_components(series, n)?;
            (i.model, i.fallback)
        }
    };

    let offset = usize::from(!opts.fix_beta);
    let mut p0 = Vec::with_capacity(offset + 3 * n);
    if !opts.fix_beta {
        p0.push(start.beta);
    }
    for c in &start.components {
        p0.extend([c.amplitude, c.k.ln(), c.center]);
    }
    let fixed_beta = start.beta;
    let t = series.times();
    let y = series.values();
    let residuals = |p: &[f64], out: &mut [f64]| {
        let beta = if offset == 1 { p[0] } else { fixed_beta };
        for (i, o) in out.iter_mut().enumerate() {
            *o = beta - y[i];
        }
        for c in p[offset..].chunks_exact(3) {
            let (a, k, center) = (c[0], c[1].exp(), c[2]);
            for (o, &ti) in out.iter_mut().zip(t) {
                *o += a * sech2(k * (ti - center));
            }
        }
    };
    let rep = minimize(residuals, &p0, series.len(), &opts.lm);

    let p = &rep.params;
    let se = |j: usize| -> f64 {
        rep.covariance
            .as_ref()
            .map(|c| c[(j, j)].max(0.0).sqrt())
            .unwrap_or(f64::INFINITY)
    };
    let beta = if offset == 1 { p[0] } else { fixed_beta };
    let mut pairs: Vec<(SolitonComponent, ComponentErrors)> = (0..n)
        .map(|i| {
            let j = offset + 3 * i;
            let k = p[j + 1].exp();
            (
                SolitonComponent {
                    amplitude: p[j],
                    k,
                    center: p[j + 2],
                },
                ComponentErrors {
                    amplitude: se(j),
                    // delta method through k = exp(ln k)
                    k: k * se(j + 1),
                    center: se(j + 2),
                },
            )
        })
        .collect();
    pairs.sort_by(|a, b| a.0.center.total_cmp(&b.0.center));
    let degenerate = rep.covariance.is_none()
        || pairs.iter().any(|(c, e)| {
            !(e.amplitude.is_finite() && e.k.is_finite() && e.center.is_finite())
                || c.amplitude.abs() <= e.amplitude
        });
    let (components, errors): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(FitResult {
        model: SolitonChainModel {
            beta,
            components,
        },
        sse: rep.sse,
        iterations: rep.iterations,
        converged: rep.termination.converged(),
        termination: rep.termination,
        gradient_norm: rep.gradient_norm,
        standard_errors: StandardErrors {
            beta: (offset == 1).then(|| se(0)),
            components: errors,
        },
        degenerate,
        initialization_fallback: fallback,
        sse_history: rep.sse_history,
    })
}

/// Akaike information criterion `m ln(SSE/m) + 2p` for a fit on `m`
/// samples.
pub fn aic(fit: &FitResult, samples: usize) -> f64 {
    let params = 3 * fit.model.components.len() + usize::from(fit.standard_errors.beta.is_some());
    let m = samples as f64;
    m * (fit.sse / m).ln() + 2.0 * params as f64
}

/// Fits 1..=`max_n` components and returns the count with the lowest AIC
/// together with that fit. Counts the series cannot support are skipped.
pub fn select_component_count(
    series: &TimeSeries,
    max_n: usize,
    opts: &FitOptions,
) -> Result<(usize, FitResult)> {
    let mut best: Option<(usize, f64, FitResult)> = None;
    for n in 1..=max_n {
        let fit = match fit_soliton_chain(series, n, None, opts) {
            Ok(f) => f,
            Err(Error::SeriesTooShort(_)) if best.is_some() => break,
            Err(e) => return Err(e),
        };
        let score = aic(&fit, series.len());
        if best.as_ref().is_none_or(|(_, s, _)| score < *s) {
            best = Some((n, score, fit));
        }
    }
    best.map(|(n, _, f)| (n, f))
        .ok_or_else(|| Error::SeriesTooShort("no component count fits".into()))
}
