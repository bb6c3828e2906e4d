use super::series::TimeSeries;
use crate::error::{Error, Result};
use crate::models::{sech2, SolitonChainModel, SolitonComponent};

/// `ln(1 + √2)`: the argument at which `cosh⁻²` falls to one half.
pub const HALF_MAX_ARG: f64 = 0.881_373_587_019_543;

#[derive(Debug, Clone, PartialEq)]
pub struct Initialization {
    pub model: SolitonChainModel,
    /// Fewer than `n` peaks were found; the remainder were placed at equal
    /// spacing.
    pub fallback: bool,
}

/// Initial soliton-chain guess from local maxima.
///
/// `β` is the series minimum. Peaks are taken one at a time from the
/// smoothed residual (moving average over `max(len/20, 3)` samples,
/// rounded up to odd): the highest interior local maximum outside the
/// half-width of already chosen peaks wins, earlier time breaking ties.
/// `A` is the raw residual at the peak, `k = ln(1+√2) / half-width` with the
/// half-width taken from the nearer half-maximum crossing (or valley,
/// when a neighbouring pulse intervenes), and the chosen
/// pulse is subtracted before the next peak is sought.
pub fn initialize_components(series: &TimeSeries, n: usize) -> Result<Initialization> {
    if n == 0 {
        return Err(Error::InvalidSeries("component count must be >= 1".into()));
    }
    if series.len() < 8 * n {
        return Err(Error::SeriesTooShort(format!(
            "{} samples for {n} components (need {})",
            series.len(),
            8 * n
        )));
    }
    series.ensure_finite()?;
    let t = series.times();
    let step = series.step();
    let len = series.len();
    let beta = series.values().iter().copied().fold(f64::INFINITY, f64::min);
    let mut resid: Vec<f64> = series.values().iter().map(|v| v - beta).collect();

    let mut window = (len / 20).max(3);
    if window.is_multiple_of(2) {
        window += 1;
    }

    let mut chosen: Vec<(SolitonComponent, f64)> = Vec::with_capacity(n);
    while chosen.len() < n {
        let smooth = moving_average(&resid, window);
        let mut best: Option<usize> = None;
        for i in 1..len - 1 {
            let is_peak = smooth[i] > smooth[i - 1] && smooth[i] >= smooth[i + 1] && smooth[i] > 0.0;
            if !is_peak {
                continue;
            }
            if chosen
                .iter()
                .any(|(c, hw)| (t[i] - c.center).abs() < *hw)
            {
                continue;
            }
            if best.is_none_or(|b| smooth[i] > smooth[b]) {
                best = Some(i);
            }
        }
        let Some(i) = best else { break };
        let amplitude = resid[i];
        let half_width = half_width(&smooth, i, amplitude / 2.0, step)
            .unwrap_or(len as f64 * step / 4.0)
            .max(step);
        let comp = SolitonComponent {
            amplitude,
            k: HALF_MAX_ARG / half_width,
            center: t[i],
        };
        for (r, &ti) in resid.iter_mut().zip(t) {
            *r -= comp.amplitude * sech2(comp.k * (ti - comp.center));
        }
        chosen.push((comp, half_width));
    }

    let fallback = chosen.len() < n;
    if fallback {
        let missing = n - chosen.len();
        let span = t[len - 1] - t[0];
        for j in 0..missing {
            let center = t[0] + span * (j as f64 + 0.5) / missing as f64;
            let idx = (((center - t[0]) / step).round() as usize).min(len - 1);
            chosen.push((
                SolitonComponent {
                    amplitude: resid[idx],
                    k: HALF_MAX_ARG / (span / (4.0 * n as f64)).max(step),
                    center,
                },
                0.0,
            ));
        }
    }
    Ok(Initialization {
        model: SolitonChainModel::new(beta, chosen.into_iter().map(|(c, _)| c).collect()),
        fallback,
    })
}

/// Centered moving average; windows are truncated at the ends.
pub(crate) fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let n = values.len();
    let mut prefix = vec![0.0; n + 1];
    for (i, v) in values.iter().enumerate() {
        prefix[i + 1] = prefix[i] + v;
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Distance from `peak` to the nearer crossing of `level`, linearly
/// interpolated, in time units. A side stops early at the first valley.
fn half_width(values: &[f64], peak: usize, level: f64, step: f64) -> Option<f64> {
    let crossing = |indices: &mut dyn Iterator<Item = usize>| -> Option<f64> {
        let mut prev = peak;
        for i in indices {
            if values[i] <= level {
                let (a, b) = (values[prev], values[i]);
                let frac = if a == b { 0.0 } else { (a - level) / (a - b) };
                let dist = (prev as f64 - peak as f64).abs() + frac;
                return Some(dist * step);
            }
            if values[i] > values[prev] {
                // valley before the half level: a neighbouring pulse
                return Some((prev as f64 - peak as f64).abs() * step);
            }
            prev = i;
        }
        None
    };
    let left = crossing(&mut (0..peak).rev());
    let right = crossing(&mut (peak + 1..values.len()));
    match (left, right) {
        (Some(l), Some(r)) => Some(l.min(r)),
        (l, r) => l.or(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::chain_eval;

    fn reference_series() -> TimeSeries {
        let m = SolitonChainModel::new(
            310.75,
            vec![
                SolitonComponent::new(71.75, 0.03, 54.16).unwrap(),
                SolitonComponent::new(208.21, 0.04, 122.4).unwrap(),
                SolitonComponent::new(370.57, 0.02, 201.0).unwrap(),
            ],
        );
        TimeSeries::from_values((0..241).map(|t| chain_eval(&m, t as f64)).collect())
    }

    #[test]
    fn finds_reference_centers() {
        let init = initialize_components(&reference_series(), 3).unwrap();
        assert!(!init.fallback);
        let centers: Vec<f64> = init.model.components.iter().map(|c| c.center).collect();
        for (c, truth) in centers.iter().zip([54.16, 122.4, 201.0]) {
            assert!((c - truth).abs() <= 10.0, "{centers:?}");
        }
    }

    #[test]
    fn monotone_ramp_falls_back() {
        let s = TimeSeries::from_values((0..100).map(|i| i as f64).collect());
        let init = initialize_components(&s, 1).unwrap();
        assert!(init.fallback);
        assert_eq!(init.model.components.len(), 1);
    }

    #[test]
    fn single_soliton_estimate() {
        let s = TimeSeries::from_values(
            (0..200)
                .map(|t| 40.0 * sech2(0.08 * (t as f64 - 97.0)))
                .collect(),
        );
        let init = initialize_components(&s, 1).unwrap();
        let c = init.model.components[0];
        assert!(((c.amplitude - 40.0) / 40.0).abs() < 0.05, "{c:?}");
        assert!((c.center - 97.0).abs() <= 1.0);
        assert!(((c.k - 0.08) / 0.08).abs() < 0.3, "{c:?}");
    }

    #[test]
    fn rejects_short_series() {
        let s = TimeSeries::from_values(vec![0.0; 15]);
        assert!(initialize_components(&s, 2).is_err());
        assert!(initialize_components(&s, 0).is_err());
    }

    #[test]
    fn moving_average_truncates_at_edges() {
        let m = moving_average(&[1.0, 2.0, 3.0, 4.0], 3);
        assert_eq!(m, vec![1.5, 2.0, 3.0, 3.5]);
    }
}
