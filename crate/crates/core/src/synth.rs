//! Seeded generators for synthetic datasets.
//!
//! Each generator is deterministic for a given seed and records its
//! parameters as `#` comment lines ahead of the CSV header.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::fit::TimeSeries;
use crate::models::{logistic_eval, LogisticComponent, SolitonChainModel, SolitonComponent};

/// `β = 310.75` with pulses `(A, k, c)` = (71.75, 0.03, 54.16),
/// (208.21, 0.04, 122.4), (370.57, 0.02, 201).
pub fn reference_chain() -> SolitonChainModel {
    SolitonChainModel::new(
        310.75,
        vec![
            SolitonComponent {
                amplitude: 71.75,
                k: 0.03,
                center: 54.16,
            },
            SolitonComponent {
                amplitude: 208.21,
                k: 0.04,
                center: 122.4,
            },
            SolitonComponent {
                amplitude: 370.57,
                k: 0.02,
                center: 201.0,
            },
        ],
    )
}

pub const CORN_LENGTH: usize = 241;
/// Noise level as a fraction of the largest amplitude.
pub const CORN_NOISE_FRACTION: f64 = 0.01;
pub const NOISE_LENGTH: usize = 1000;
pub const PATENT_LENGTH: usize = 160;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    CornLike,
    PatentLike,
    Noise,
}

impl SyntheticKind {
    pub fn name(self) -> &'static str {
        match self {
            SyntheticKind::CornLike => "corn-like",
            SyntheticKind::PatentLike => "patent-like",
            SyntheticKind::Noise => "noise",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub kind: SyntheticKind,
    pub seed: u64,
    /// Comment lines without the leading `#`.
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Series of column `name` against the first column as time.
    pub fn series(&self, name: &str) -> Result<TimeSeries> {
        let values = self
            .column(name)
            .ok_or_else(|| Error::InvalidSeries(format!("no column `{name}`")))?;
        TimeSeries::new(self.rows.iter().map(|r| r[0]).collect(), values)
    }

    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        for c in &self.comments {
            writeln!(writer, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn generate(kind: SyntheticKind, seed: u64) -> Dataset {
    match kind {
        SyntheticKind::CornLike => corn_like(seed),
        SyntheticKind::PatentLike => patent_like(seed),
        SyntheticKind::Noise => noise(seed),
    }
}

fn header(kind: SyntheticKind, seed: u64) -> Vec<String> {
    vec![format!("kind: {}", kind.name()), format!("seed: {seed}")]
}

/// Soliton chain with the three-pulse parameters of [`reference_chain`] plus
/// Gaussian noise at 1% of the largest amplitude, on `t = 0..240`.
pub fn corn_like(seed: u64) -> Dataset {
    let model = reference_chain();
    let max_a = model.components.iter().map(|c| c.amplitude.abs()).fold(0.0, f64::max);
    let sigma = CORN_NOISE_FRACTION * max_a;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("positive sigma");
    let rows = (0..CORN_LENGTH)
        .map(|i| {
            let t = i as f64;
            vec![t, model.eval(t) + normal.sample(&mut rng)]
        })
        .collect();
    let mut comments = header(SyntheticKind::CornLike, seed);
    comments.push(format!("beta: {}", model.beta));
    for c in &model.components {
        comments.push(format!("component: A={} k={} center={}", c.amplitude, c.k, c.center));
    }
    comments.push(format!("noise_sigma: {sigma}"));
    Dataset {
        kind: SyntheticKind::CornLike,
        seed,
        comments,
        columns: vec!["t".into(), "price".into()],
        rows,
    }
}

pub fn patent_steps() -> Vec<LogisticComponent> {
    vec![
        LogisticComponent {
            x_sat: 40_000.0,
            s: 0.15,
            t0: 35.0,
        },
        LogisticComponent {
            x_sat: 90_000.0,
            s: 0.12,
            t0: 85.0,
        },
        LogisticComponent {
            x_sat: 150_000.0,
            s: 0.2,
            t0: 130.0,
        },
    ]
}

/// Yearly counts whose running total follows a sum of logistic steps.
/// Increments carry multiplicative noise and are clipped at zero, so the
/// cumulative column never decreases.
pub fn patent_like(seed: u64) -> Dataset {
    let steps = patent_steps();
    let level = |t: f64| steps.iter().map(|c| logistic_eval(c, t)).sum::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 0.05).expect("positive sigma");
    let mut total = 0.0;
    let rows = (0..PATENT_LENGTH)
        .map(|i| {
            let t = i as f64;
            let expected = level(t) - level(t - 1.0);
            let count = (expected * (1.0 + normal.sample(&mut rng))).max(0.0);
            total += count;
            vec![t, count, total]
        })
        .collect();
    let mut comments = header(SyntheticKind::PatentLike, seed);
    for c in &steps {
        comments.push(format!("step: x_sat={} s={} t0={}", c.x_sat, c.s, c.t0));
    }
    comments.push("noise: multiplicative, sigma=0.05".into());
    Dataset {
        kind: SyntheticKind::PatentLike,
        seed,
        comments,
        columns: vec!["t".into(), "applications".into(), "cumulative".into()],
        rows,
    }
}

/// Standard Gaussian white noise.
pub fn noise(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).expect("unit sigma");
    let rows = (0..NOISE_LENGTH)
        .map(|i| vec![i as f64, normal.sample(&mut rng)])
        .collect();
    let mut comments = header(SyntheticKind::Noise, seed);
    comments.push("distribution: normal(0, 1)".into());
    Dataset {
        kind: SyntheticKind::Noise,
        seed,
        comments,
        columns: vec!["t".into(), "value".into()],
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bytes(d: &Dataset) -> Vec<u8> {
        let mut out = Vec::new();
        d.write_csv(&mut out).unwrap();
        out
    }

    #[test]
    fn corn_like_is_deterministic() {
        let a = corn_like(1);
        assert_eq!(a.rows.len(), 241);
        assert_eq!(bytes(&a), bytes(&corn_like(1)));
        assert_ne!(bytes(&a), bytes(&corn_like(2)));
        let text = String::from_utf8(bytes(&a)).unwrap();
        assert!(text.starts_with("# kind: corn-like\n# seed: 1\n"));
        assert!(text.contains("\nt,price\n"));
    }

    #[test]
    fn noise_mean_near_zero() {
        let v = noise(7).column("value").unwrap();
        assert_eq!(v.len(), 1000);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!(mean.abs() < 0.1, "{mean}");
    }

    #[test]
    fn patent_cumulative_monotone() {
        for seed in 0..5 {
            let c = patent_like(seed).column("cumulative").unwrap();
            assert!(c.windows(2).all(|w| w[1] >= w[0]));
        }
    }
}
