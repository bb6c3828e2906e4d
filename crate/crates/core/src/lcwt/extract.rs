use serde::Serialize;

use super::transform::{cwt, default_scales, Scalogram, ScalogramPeak, DEFAULT_SCALE_COUNT};
use super::wavelet::MotherWavelet;
use crate::error::{Error, Result};
use crate::fit::{fit_soliton_chain, ols, FitOptions, TimeSeries};
use crate::models::{sech2, SolitonChainModel, SolitonComponent};

/// One extracted solitary wave `A cosh⁻²[k(t - c)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveEstimate {
    #[serde(rename = "A")]
    pub amplitude: f64,
    pub k: f64,
    pub center: f64,
    /// Peak of the scalogram pass that produced this wave.
    pub scalogram_peak: ScalogramPeak,
}

impl WaveEstimate {
    pub fn eval(&self, t: f64) -> f64 {
        self.amplitude * sech2(self.k * (t - self.center))
    }

    pub fn component(&self) -> SolitonComponent {
        SolitonComponent {
            amplitude: self.amplitude,
            k: self.k,
            center: self.center,
        }
    }
}

/// Local samples `|t - c| ≤ WINDOW_WIDTHS / k` enter the amplitude solve
/// and the single-wave refinement.
const WINDOW_WIDTHS: f64 = 3.0;
const MIN_WINDOW: usize = 8;

/// Strongest wave in the scalogram of `series`.
///
/// The scale of the global `|W|` maximum, refined by a parabola in
/// `ln a`, gives `k = κ/a*`; the translation gives the centre. `β` and `A`
/// are then solved by least squares on the samples near the centre, and
/// the triple is refined by a one-component chain fit on the same samples.
pub fn dominant_wave(s: &Scalogram, series: &TimeSeries) -> Result<WaveEstimate> {
    if s.coefficients.is_empty() || s.translations.is_empty() {
        return Err(Error::InvalidScales("empty scalogram".into()));
    }
    if s.is_zero() {
        return Err(Error::ZeroScalogram);
    }
    let peak = s.peak();
    let a_star = interpolated_scale(s, &peak);
    let wavelet = s.wavelet;
    let k = wavelet.kappa() / a_star;
    let centers = if wavelet.peak_shift() == 0.0 {
        vec![peak.translation]
    } else {
        let d = wavelet.peak_shift() / k;
        vec![peak.translation - d, peak.translation + d]
    };

    let mut best: Option<(f64, SolitonChainModel, (usize, usize))> = None;
    for c in centers {
        let Some((lo, hi)) = window(series, c, k) else { continue };
        let t = &series.times()[lo..hi];
        let y = &series.values()[lo..hi];
        let basis: Vec<f64> = t.iter().map(|&ti| sech2(k * (ti - c))).collect();
        let (amplitude, beta, sse) = match ols(&basis, y) {
            Ok(r) => (r.slope, r.intercept, r.residuals.iter().map(|e| e * e).sum()),
            Err(Error::ZeroVariance) => continue,
            Err(e) => return Err(e),
        };
        if best.as_ref().is_none_or(|(b, _, _)| sse < *b) {
            let comp = SolitonComponent { amplitude, k, center: c };
            best = Some((sse, SolitonChainModel::new(beta, vec![comp]), (lo, hi)));
        }
    }
    let Some((_, start, (lo, hi))) = best else {
        return Err(Error::SeriesTooShort("no samples around the scalogram peak".into()));
    };
    let local = TimeSeries::new(series.times()[lo..hi].to_vec(), series.values()[lo..hi].to_vec())?;
    let mut comp = start.components[0];
    if let Ok(fit) = fit_soliton_chain(&local, 1, Some(&start), &FitOptions::default()) {
        let r = fit.model.components[0];
        let (t0, t1) = (local.times()[0], local.times()[local.len() - 1]);
        let width_ok = r.k > 0.25 * k && r.k < 4.0 * k;
        if width_ok && r.amplitude.is_finite() && (t0..=t1).contains(&r.center) {
            comp = r;
        }
    }
    Ok(WaveEstimate {
        amplitude: comp.amplitude,
        k: comp.k,
        center: comp.center,
        scalogram_peak: peak,
    })
}

fn interpolated_scale(s: &Scalogram, peak: &ScalogramPeak) -> f64 {
    let i = peak.scale_index;
    if i == 0 || i + 1 >= s.scales.len() {
        return peak.scale;
    }
    let j = peak.translation_index;
    let f = |r: usize| s.coefficients[r][j].abs();
    let (y0, y1, y2) = (f(i - 1), f(i), f(i + 1));
    let (x0, x1, x2) = (s.scales[i - 1].ln(), s.scales[i].ln(), s.scales[i + 1].ln());
    // vertex of the parabola through three points with uneven spacing
    let d0 = (y1 - y0) / (x1 - x0);
    let d1 = (y2 - y1) / (x2 - x1);
    let curv = (d1 - d0) / (x2 - x0);
    if curv >= 0.0 {
        return peak.scale;
    }
    let vertex = 0.5 * (x0 + x1) - d0 / (2.0 * curv);
    vertex.clamp(x0, x2).exp()
}

fn window(series: &TimeSeries, c: f64, k: f64) -> Option<(usize, usize)> {
    let t = series.times();
    let n = t.len();
    let step = series.step();
    let half = (WINDOW_WIDTHS / k).max(0.5 * MIN_WINDOW as f64 * step);
    let lo = t.iter().position(|&ti| ti >= c - half).unwrap_or(n);
    let hi = t.iter().rposition(|&ti| ti <= c + half).map_or(0, |i| i + 1);
    if hi <= lo || hi - lo < MIN_WINDOW {
        if n < MIN_WINDOW {
            return None;
        }
        // widen to the minimum around the nearest sample
        let mid = ((c - t[0]) / step).round().clamp(0.0, (n - 1) as f64) as usize;
        let lo = mid.saturating_sub(MIN_WINDOW / 2).min(n - MIN_WINDOW);
        return Some((lo, lo + MIN_WINDOW));
    }
    Some((lo, hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractOptions {
    pub max_waves: usize,
    /// Stop once `‖r - r̄‖ / ‖x - x̄‖` falls below this.
    pub energy_stop: f64,
    pub wavelet: MotherWavelet,
    /// Explicit scale grid; the default grid otherwise.
    pub scales: Option<Vec<f64>>,
    pub scale_count: usize,
    /// A candidate whose fitted `|A| / se(A)` is below this is rejected.
    pub min_t_value: f64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            max_waves: 10,
            energy_stop: 0.05,
            wavelet: MotherWavelet::default(),
            scales: None,
            scale_count: DEFAULT_SCALE_COUNT,
            min_t_value: 6.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    EnergyBelowThreshold,
    MaxWaves,
    /// The next candidate would not reduce the residual energy.
    NoImprovement,
    /// The next candidate's amplitude is not significant.
    Insignificant,
    /// The series has no variation.
    FlatSignal,
    /// Too few samples for another component.
    SeriesTooShort,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extraction {
    /// In extraction order.
    pub waves: Vec<WaveEstimate>,
    /// Constant level from the last joint fit.
    pub baseline: f64,
    /// Original minus the sum of waves; the baseline stays in here.
    #[serde(skip)]
    pub residual: TimeSeries,
    /// Residual energy ratio before any wave and after each accepted wave.
    pub energy_history: Vec<f64>,
    pub stop_reason: StopReason,
    /// No wave was found, or the loop ended on a rejected candidate.
    pub low_confidence: bool,
}

impl Extraction {
    pub fn reconstruction(&self, t: f64) -> f64 {
        self.waves.iter().map(|w| w.eval(t)).sum()
    }
}

fn centered_norm(v: impl Iterator<Item = f64> + Clone) -> f64 {
    let (sum, n) = v.clone().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    let mean = sum / n.max(1) as f64;
    v.map(|x| (x - mean).powi(2)).sum::<f64>().sqrt()
}

/// Repeatedly removes the strongest wave.
///
/// Each pass transforms the current residual, takes the [`dominant_wave`],
/// and refits all accepted waves plus the candidate jointly on the
/// original series. The candidate is kept only if it lowers the residual
/// energy and its amplitude is significant.
pub fn extract_waves(series: &TimeSeries, opts: &ExtractOptions) -> Result<Extraction> {
    if opts.max_waves == 0 {
        return Err(Error::InvalidSeries("max_waves must be >= 1".into()));
    }
    if !(opts.energy_stop > 0.0 && opts.energy_stop < 1.0) {
        return Err(Error::InvalidSeries(format!(
            "energy_stop must lie in (0, 1), got {}",
            opts.energy_stop
        )));
    }
    series.ensure_finite()?;
    let scales = match &opts.scales {
        Some(s) => s.clone(),
        None => default_scales(series, opts.wavelet, opts.scale_count)?,
    };
    let t = series.times();
    let x = series.values();
    let energy0 = centered_norm(x.iter().copied());
    let mean = x.iter().sum::<f64>() / x.len().max(1) as f64;

    let mut waves: Vec<WaveEstimate> = Vec::new();
    let mut baseline = mean;
    let mut ratio = 1.0;
    let mut history = vec![1.0];
    let mut low_confidence = false;
    let residual_of = |ws: &[WaveEstimate]| -> Vec<f64> {
        x.iter()
            .zip(t)
            .map(|(&xi, &ti)| xi - ws.iter().map(|w| w.eval(ti)).sum::<f64>())
            .collect()
    };

    let stop_reason = if energy0 == 0.0 {
        StopReason::FlatSignal
    } else {
        loop {
            if ratio < opts.energy_stop {
                break StopReason::EnergyBelowThreshold;
            }
            if waves.len() >= opts.max_waves {
                break StopReason::MaxWaves;
            }
            let m = waves.len() + 1;
            if series.len() <= 3 * m + 1 {
                break StopReason::SeriesTooShort;
            }
            let resid = series.with_values(residual_of(&waves))?;
            let scalogram = cwt(&resid, &scales, opts.wavelet)?;
            let candidate = match dominant_wave(&scalogram, &resid) {
                Ok(c) => c,
                Err(Error::ZeroScalogram) => break StopReason::NoImprovement,
                Err(e) => return Err(e),
            };

            let mut trial: Vec<WaveEstimate> = waves.clone();
            trial.push(candidate);
            let init = SolitonChainModel {
                beta: baseline,
                components: trial.iter().map(|w| w.component()).collect(),
            };
            let mut fit = fit_soliton_chain(series, m, Some(&init), &FitOptions::default())?;
            if fit.sse.sqrt() / energy0 >= ratio {
                // a poor candidate can trap the joint fit; retry from peaks
                if let Ok(fresh) = fit_soliton_chain(series, m, None, &FitOptions::default()) {
                    if fresh.sse < fit.sse {
                        fit = fresh;
                    }
                }
            }
            // the fit orders components by centre; map them back
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| trial[a].center.total_cmp(&trial[b].center));
            let mut t_value = 0.0;
            for (sorted, &orig) in order.iter().enumerate() {
                let c = fit.model.components[sorted];
                trial[orig].amplitude = c.amplitude;
                trial[orig].k = c.k;
                trial[orig].center = c.center;
                if orig == m - 1 {
                    let se = fit.standard_errors.components[sorted].amplitude;
                    t_value = if se > 0.0 { c.amplitude.abs() / se } else { f64::INFINITY };
                }
            }
            let new_ratio = centered_norm(residual_of(&trial).into_iter()) / energy0;
            if !(new_ratio < ratio) {
                low_confidence = true;
                break StopReason::NoImprovement;
            }
            if !(t_value >= opts.min_t_value) {
                low_confidence = true;
                break StopReason::Insignificant;
            }
            waves = trial;
            baseline = fit.model.beta;
            ratio = new_ratio;
            history.push(ratio);
        }
    };
    if waves.is_empty() {
        low_confidence = true;
    }
    let residual = series.with_values(residual_of(&waves))?;
    Ok(Extraction {
        waves,
        baseline,
        residual,
        energy_history: history,
        stop_reason,
        low_confidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::chain_eval;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn series_of(f: impl Fn(f64) -> f64, n: usize) -> TimeSeries {
        TimeSeries::from_values((0..n).map(|i| f(i as f64)).collect())
    }

    fn scalogram(s: &TimeSeries) -> Scalogram {
        let w = MotherWavelet::default();
        cwt(s, &default_scales(s, w, 64).unwrap(), w).unwrap()
    }

    #[test]
    fn single_soliton_roundtrip() {
        let s = series_of(|t| 12.0 * sech2(0.07 * (t - 83.3)), 200);
        let w = dominant_wave(&scalogram(&s), &s).unwrap();
        assert!(((w.amplitude - 12.0) / 12.0).abs() < 0.01, "{w:?}");
        assert!(((w.k - 0.07) / 0.07).abs() < 0.02, "{w:?}");
        assert!((w.center - 83.3).abs() < 0.5, "{w:?}");
    }

    #[test]
    fn negative_soliton_sign() {
        let s = series_of(|t| 50.0 - 8.0 * sech2(0.05 * (t - 120.0)), 240);
        let w = dominant_wave(&scalogram(&s), &s).unwrap();
        assert!(w.amplitude < 0.0);
        assert!(((w.amplitude + 8.0) / 8.0).abs() < 0.01, "{w:?}");
    }

    #[test]
    fn equal_peaks_prefer_earlier() {
        let s = series_of(|t| sech2(0.1 * (t - 60.0)) + sech2(0.1 * (t - 180.0)), 241);
        let w = dominant_wave(&scalogram(&s), &s).unwrap();
        assert!((w.center - 60.0).abs() < 1.0, "{w:?}");
    }

    #[test]
    fn zero_scalogram_is_an_error() {
        let s = series_of(|_| 0.0, 50);
        assert_eq!(dominant_wave(&scalogram(&s), &s).unwrap_err(), Error::ZeroScalogram);
    }

    #[test]
    fn single_soliton_extraction() {
        let s = series_of(|t| 5.0 + 30.0 * sech2(0.04 * (t - 140.0)), 300);
        let ex = extract_waves(&s, &ExtractOptions::default()).unwrap();
        assert_eq!(ex.waves.len(), 1);
        assert!(ex.energy_history.last().unwrap().powi(2) < 0.01);
        assert!(!ex.low_confidence);
    }

    #[test]
    fn reference_chain_extraction() {
        let m = SolitonChainModel::new(
            310.75,
            vec![
                SolitonComponent::new(71.75, 0.03, 54.16).unwrap(),
                SolitonComponent::new(208.21, 0.04, 122.4).unwrap(),
                SolitonComponent::new(370.57, 0.02, 201.0).unwrap(),
            ],
        );
        let s = series_of(|t| chain_eval(&m, t), 241);
        let opts = ExtractOptions {
            energy_stop: 0.02,
            ..ExtractOptions::default()
        };
        let ex = extract_waves(&s, &opts).unwrap();
        assert_eq!(ex.waves.len(), 3, "{:?}", ex.waves);
        let mut centers: Vec<f64> = ex.waves.iter().map(|w| w.center).collect();
        centers.sort_by(f64::total_cmp);
        for (c, truth) in centers.iter().zip([54.16, 122.4, 201.0]) {
            assert!((c - truth).abs() <= 2.0, "{centers:?}");
        }
        for w in ex.energy_history.windows(2) {
            assert!(w[1] <= w[0]);
        }
        for (i, &ti) in s.times().iter().enumerate() {
            let back = ex.reconstruction(ti) + ex.residual.values()[i];
            assert!((back - s.values()[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn white_noise_is_low_confidence() {
        for seed in [7, 8, 9] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let normal = Normal::new(0.0, 1.0).unwrap();
            let s = TimeSeries::from_values((0..500).map(|_| normal.sample(&mut rng)).collect());
            let opts = ExtractOptions {
                energy_stop: 0.5,
                ..ExtractOptions::default()
            };
            let ex = extract_waves(&s, &opts).unwrap();
            assert!(ex.waves.len() <= 1, "seed {seed}: {:?}", ex.waves);
            assert!(ex.low_confidence);
        }
    }

    #[test]
    fn rejects_bad_options() {
        let s = series_of(|t| t, 30);
        let bad = ExtractOptions {
            energy_stop: 1.5,
            ..ExtractOptions::default()
        };
        assert!(extract_waves(&s, &bad).is_err());
        let bad = ExtractOptions {
            max_waves: 0,
            ..ExtractOptions::default()
        };
        assert!(extract_waves(&s, &bad).is_err());
    }
}
