use std::io::Write;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use super::wavelet::{MotherWavelet, TRUNCATION};
use crate::error::{Error, Result};
use crate::fit::TimeSeries;

pub const DEFAULT_SCALE_COUNT: usize = 64;

/// Wavelet coefficients `W(a, b)`; row `i` holds scale `scales[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scalogram {
    pub translations: Vec<f64>,
    pub scales: Vec<f64>,
    pub coefficients: Vec<Vec<f64>>,
    pub wavelet: MotherWavelet,
}

/// Location of the largest `|W|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalogramPeak {
    pub scale_index: usize,
    pub translation_index: usize,
    pub scale: f64,
    pub translation: f64,
    pub magnitude: f64,
}

impl Scalogram {
    /// Global maximum of `|W|`. Ties go to the earlier translation, then
    /// the smaller scale.
    pub fn peak(&self) -> ScalogramPeak {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for j in 0..self.translations.len() {
            for (i, row) in self.coefficients.iter().enumerate() {
                let m = row[j].abs();
                if m > best.2 {
                    best = (i, j, m);
                }
            }
        }
        ScalogramPeak {
            scale_index: best.0,
            translation_index: best.1,
            scale: self.scales[best.0],
            translation: self.translations[best.1],
            magnitude: best.2,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().flatten().all(|&w| w == 0.0)
    }

    /// CSV matrix: header `scale,b_0,b_1,..`, then one row per scale.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["scale".to_string()];
        header.extend(self.translations.iter().map(|b| b.to_string()));
        w.write_record(&header)?;
        for (a, row) in self.scales.iter().zip(&self.coefficients) {
            let mut rec = vec![a.to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `count` logarithmically spaced values from `min` to `max` inclusive.
pub fn log_scales(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max > min && min.is_finite() && max.is_finite()) || count < 2 {
        return Err(Error::InvalidScales(format!(
            "need 0 < min < max and at least 2 scales, got [{min}, {max}] x {count}"
        )));
    }
    let (lo, hi) = (min.ln(), max.ln());
    Ok((0..count)
        .map(|i| (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp())
        .collect())
}

/// Scales whose nominal support spans 4 samples up to half the series
/// length, in time units.
pub fn default_scales(series: &TimeSeries, wavelet: MotherWavelet, count: usize) -> Result<Vec<f64>> {
    let width = wavelet.support_width();
    let step = series.step();
    let max = 0.5 * series.len() as f64 * step / width;
    log_scales(4.0 * step / width, max, count)
}

/// One period of the odd extension of `z`, which must vanish at both
/// ends: `z(-d) = -z(d)` and `z(n-1+d) = -z(n-1-d)`.
fn odd_period(z: &[f64]) -> Vec<f64> {
    let n = z.len();
    if n == 1 {
        return vec![0.0];
    }
    let period = 2 * (n - 1);
    (0..period).map(|p| if p < n { z[p] } else { -z[period - p] }).collect()
}

/// `W(a, b) = a^{-1/2} Σ x(t) ψ((t - b)/a) Δt` at every sample time `b`.
///
/// The series is extended by point reflection through both end samples,
/// which continues a trend instead of folding it back. Each sampled
/// kernel is shifted to zero sum, so constants map to an all-zero
/// scalogram.
/// Rows are computed in parallel; the result does not depend on the
/// schedule.
pub fn cwt(series: &TimeSeries, scales: &[f64], wavelet: MotherWavelet) -> Result<Scalogram> {
    if series.is_empty() {
        return Err(Error::InvalidSeries("empty series".into()));
    }
    series.ensure_finite()?;
    if scales.is_empty() {
        return Err(Error::InvalidScales("no scales".into()));
    }
    if scales.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::InvalidScales("scales must be positive".into()));
    }
    if scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidScales("scales must be strictly increasing".into()));
    }
    let x = series.values();
    let n = x.len();
    let dt = series.step();
    // split off the chord through the end points; the remainder vanishes
    // at both ends and its odd extension is periodic
    let chord = if n == 1 { 0.0 } else { (x[n - 1] - x[0]) / (n - 1) as f64 };
    let z: Vec<f64> = x.iter().enumerate().map(|(i, v)| v - x[0] - chord * i as f64).collect();
    let ext = odd_period(&z);
    let period = ext.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(period);
    let inverse = planner.plan_fft_inverse(period);
    let mut spectrum: Vec<Complex<f64>> = ext.iter().map(|&v| Complex::new(v, 0.0)).collect();
    forward.process(&mut spectrum);
    let coefficients = scales
        .par_iter()
        .map(|&a| {
            let half = (TRUNCATION * a / dt).ceil() as isize;
            let mut kernel: Vec<f64> = (-half..=half).map(|m| wavelet.eval(m as f64 * dt / a)).collect();
            let mean = kernel.iter().sum::<f64>() / kernel.len() as f64;
            kernel.iter_mut().for_each(|v| *v -= mean);
            // fold onto one period of the mirrored extension, then
            // correlate circularly: W_j = Σ_r f_r x_{j+r}
            let mut folded = vec![Complex::new(0.0, 0.0); period];
            for (idx, v) in kernel.iter().enumerate() {
                let m = idx as isize - half;
                folded[m.rem_euclid(period as isize) as usize].re += v;
            }
            forward.process(&mut folded);
            for (f, s) in folded.iter_mut().zip(&spectrum) {
                *f = f.conj() * s;
            }
            inverse.process(&mut folded);
            // the kernel sums to zero, so the chord contributes Σ m·k_m
            let first_moment: f64 = kernel
                .iter()
                .enumerate()
                .map(|(idx, v)| (idx as isize - half) as f64 * v)
                .sum();
            let line = chord * first_moment;
            let norm = dt / a.sqrt();
            folded[..n]
                .iter()
                .map(|c| (c.re / period as f64 + line) * norm)
                .collect()
        })
        .collect();
    Ok(Scalogram {
        translations: series.times().to_vec(),
        scales: scales.to_vec(),
        coefficients,
        wavelet,
    })
}
