use std::io::Write;

use serde::{Deserialize, Serialize};

use super::extract::WaveEstimate;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    fn of(amplitude: f64) -> Self {
        if amplitude < 0.0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }
}

/// Least-squares line `amplitude = slope·center + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Trend {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveTrain {
    pub sign: Sign,
    /// Ordered by center.
    pub waves: Vec<WaveEstimate>,
    /// `None` with fewer than two distinct centers.
    pub trend: Option<Trend>,
}

fn line_trend(points: &[(f64, f64)]) -> Option<Trend> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sst: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let sse: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if sst > 0.0 { (1.0 - sse / sst).clamp(0.0, 1.0) } else { 1.0 };
    Some(Trend {
        slope,
        intercept,
        r_squared,
    })
}

/// Splits waves by amplitude sign, orders each train by center and fits
/// the peak trend. Positive train first; empty trains are omitted.
pub fn group_wave_trains(waves: &[WaveEstimate]) -> Vec<WaveTrain> {
    [Sign::Positive, Sign::Negative]
        .into_iter()
        .filter_map(|sign| {
            let mut members: Vec<WaveEstimate> = waves
                .iter()
                .filter(|w| Sign::of(w.amplitude) == sign)
                .copied()
                .collect();
            if members.is_empty() {
                return None;
            }
            members.sort_by(|a, b| a.center.total_cmp(&b.center));
            let points: Vec<(f64, f64)> = members.iter().map(|w| (w.center, w.amplitude)).collect();
            Some(WaveTrain {
                sign,
                trend: line_trend(&points),
                waves: members,
            })
        })
        .collect()
}

/// Which train sign plays the historical role; the other is synergetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignRoles {
    #[default]
    PositiveHistorical,
    PositiveSynergetic,
}

impl SignRoles {
    pub fn historical_sign(self) -> Sign {
        match self {
            SignRoles::PositiveHistorical => Sign::Positive,
            SignRoles::PositiveSynergetic => Sign::Negative,
        }
    }

    pub fn synergetic_sign(self) -> Sign {
        match self.historical_sign() {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// `R(t) = P²(t) - Q²(t)` on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RedundancyDecomposition {
    pub times: Vec<f64>,
    /// `P²(t)`: magnitude of the historical train's reconstruction.
    pub historical: Vec<f64>,
    /// `Q²(t)`: magnitude of the synergetic train's reconstruction.
    pub synergetic: Vec<f64>,
    pub total: Vec<f64>,
    pub historical_sign: Sign,
    pub synergetic_sign: Sign,
}

impl RedundancyDecomposition {
    /// Columns `t,historical,synergetic,total`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "historical", "synergetic", "total"])?;
        for i in 0..self.times.len() {
            w.write_record([
                self.times[i].to_string(),
                self.historical[i].to_string(),
                self.synergetic[i].to_string(),
                self.total[i].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Decomposition on the sample times `0, 1, .., series_length - 1`.
pub fn redundancy_split(trains: &[WaveTrain], series_length: usize, roles: SignRoles) -> RedundancyDecomposition {
    let times: Vec<f64> = (0..series_length).map(|i| i as f64).collect();
    redundancy_split_at(trains, &times, roles)
}

pub fn redundancy_split_at(trains: &[WaveTrain], times: &[f64], roles: SignRoles) -> RedundancyDecomposition {
    let part = |sign: Sign| -> Vec<f64> {
        times
            .iter()
            .map(|&t| {
                trains
                    .iter()
                    .filter(|tr| tr.sign == sign)
                    .flat_map(|tr| &tr.waves)
                    .map(|w| w.eval(t))
                    .sum::<f64>()
                    .abs()
            })
            .collect()
    };
    let historical = part(roles.historical_sign());
    let synergetic = part(roles.synergetic_sign());
    let total = historical.iter().zip(&synergetic).map(|(p, q)| p - q).collect();
    RedundancyDecomposition {
        times: times.to_vec(),
        historical,
        synergetic,
        total,
        historical_sign: roles.historical_sign(),
        synergetic_sign: roles.synergetic_sign(),
    }
}
