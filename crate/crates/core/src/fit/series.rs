use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance on step uniformity.
const STEP_TOLERANCE: f64 = 1e-6;

/// Uniformly sampled observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidSeries(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidSeries("non-finite time stamp".into()));
        }
        if times.len() >= 2 {
            let step = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
            if step <= 0.0 {
                return Err(Error::InvalidSeries("times must be strictly increasing".into()));
            }
            for (i, w) in times.windows(2).enumerate() {
                let d = w[1] - w[0];
                if d <= 0.0 || (d - step).abs() > STEP_TOLERANCE * step {
                    return Err(Error::InvalidSeries(format!(
                        "non-uniform sampling at index {}: step {d}, expected {step}",
                        i + 1
                    )));
                }
            }
        }
        Ok(Self { times, values })
    }

    /// Samples at times `0, 1, .., n-1`.
    pub fn from_values(values: Vec<f64>) -> Self {
        let times = (0..values.len()).map(|i| i as f64).collect();
        Self { times, values }
    }

    pub fn uniform(start: f64, step: f64, values: Vec<f64>) -> Result<Self> {
        let times = (0..values.len()).map(|i| start + step * i as f64).collect();
        Self::new(times, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sampling step; 1 for series shorter than two samples.
    pub fn step(&self) -> f64 {
        if self.times.len() < 2 {
            1.0
        } else {
            (self.times[self.times.len() - 1] - self.times[0]) / (self.times.len() - 1) as f64
        }
    }

    /// Same time axis with new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::InvalidSeries(format!(
                "expected {} values, got {}",
                self.len(),
                values.len()
            )));
        }
        Ok(Self {
            times: self.times.clone(),
            values,
        })
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.values.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_sampling() {
        assert!(TimeSeries::new(vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 3.0]).is_ok());
        assert!(TimeSeries::new(vec![0.0, 1.0, 2.5], vec![1.0, 2.0, 3.0]).is_err());
        assert!(TimeSeries::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(TimeSeries::new(vec![1.0, 0.0], vec![1.0, 1.0]).is_err());
        let s = TimeSeries::uniform(1980.0, 1.0, vec![0.0; 42]).unwrap();
        assert_eq!(s.step(), 1.0);
        assert_eq!(s.times()[41], 2021.0);
    }
}
