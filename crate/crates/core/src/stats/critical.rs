//! Embedded critical values for unit-root tests.
//!
//! Source: J. G. MacKinnon (2010), "Critical Values for Cointegration
//! Tests", Queen's Economics Department Working Paper 1227, Table 2.
//! Each row holds the response-surface coefficients `[β∞, β1, β2, β3]` of
//! `crit(T) = β∞ + β1/T + β2/T² + β3/T³` at the 1%, 5% and 10% levels.
//! Tables are tabulated at `T ∈ {25, 50, 100, 250, 500, ∞}` and
//! interpolated linearly in `1/T`.

use serde::{Deserialize, Serialize};

/// Deterministic terms in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RegressionKind {
    #[serde(rename = "none")]
    None,
    #[default]
    #[serde(rename = "constant")]
    Constant,
    #[serde(rename = "constant+trend")]
    ConstantTrend,
}

impl RegressionKind {
    pub fn deterministic_terms(self) -> usize {
        match self {
            RegressionKind::None => 0,
            RegressionKind::Constant => 1,
            RegressionKind::ConstantTrend => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Significance {
    #[serde(rename = "1%")]
    OnePercent,
    #[serde(rename = "5%")]
    FivePercent,
    #[serde(rename = "10%")]
    TenPercent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalValues {
    #[serde(rename = "1%")]
    pub one: f64,
    #[serde(rename = "5%")]
    pub five: f64,
    #[serde(rename = "10%")]
    pub ten: f64,
}

impl CriticalValues {
    /// Finest level at which `statistic` rejects the unit root.
    pub fn reject_at(&self, statistic: f64) -> Option<Significance> {
        if statistic < self.one {
            Some(Significance::OnePercent)
        } else if statistic < self.five {
            Some(Significance::FivePercent)
        } else if statistic < self.ten {
            Some(Significance::TenPercent)
        } else {
            None
        }
    }

    pub fn at(&self, level: Significance) -> f64 {
        match level {
            Significance::OnePercent => self.one,
            Significance::FivePercent => self.five,
            Significance::TenPercent => self.ten,
        }
    }
}

type Surface = [[f64; 4]; 3];

const TAU_NONE: Surface = [
    [-2.56574, -2.2358, -3.627, 0.0],
    [-1.94100, -0.2686, -3.365, 31.223],
    [-1.61682, 0.2656, -2.714, 25.364],
];
const TAU_CONSTANT: Surface = [
    [-3.43035, -6.5393, -16.786, -79.433],
    [-2.86154, -2.8903, -4.234, -40.040],
    [-2.56677, -1.5384, -2.809, 0.0],
];
const TAU_TREND: Surface = [
    [-3.95877, -9.0531, -28.428, -134.155],
    [-3.41049, -4.3904, -9.036, -45.374],
    [-3.12705, -2.5856, -3.925, -22.380],
];
/// Two variables, constant in the cointegrating regression.
const TAU_COINT_2: Surface = [
    [-3.89644, -10.9519, -33.527, 0.0],
    [-3.33613, -6.1101, -6.823, 0.0],
    [-3.04445, -4.2412, -2.720, 0.0],
];

pub const TABLE_SIZES: [f64; 6] = [25.0, 50.0, 100.0, 250.0, 500.0, f64::INFINITY];

fn surface_at(row: &[f64; 4], t: f64) -> f64 {
    let u = 1.0 / t;
    row[0] + u * (row[1] + u * (row[2] + u * row[3]))
}

fn tabulate(s: &Surface) -> [[f64; 3]; 6] {
    let mut out = [[0.0; 3]; 6];
    for (i, &t) in TABLE_SIZES.iter().enumerate() {
        for lvl in 0..3 {
            out[i][lvl] = surface_at(&s[lvl], t);
        }
    }
    out
}

fn interpolate(table: &[[f64; 3]; 6], n: usize) -> CriticalValues {
    let u = 1.0 / (n.max(1) as f64);
    let us: Vec<f64> = TABLE_SIZES.iter().map(|t| 1.0 / t).collect();
    let pick = |lvl: usize| -> f64 {
        if u >= us[0] {
            return table[0][lvl];
        }
        for i in 0..us.len() - 1 {
            let (u0, u1) = (us[i], us[i + 1]);
            if u <= u0 && u >= u1 {
                let w = (u0 - u) / (u0 - u1);
                return table[i][lvl] + w * (table[i + 1][lvl] - table[i][lvl]);
            }
        }
        table[us.len() - 1][lvl]
    };
    CriticalValues {
        one: pick(0),
        five: pick(1),
        ten: pick(2),
    }
}

/// Dickey-Fuller critical values for a regression on `n` observations.
pub fn adf_critical_values(kind: RegressionKind, n: usize) -> CriticalValues {
    let s = match kind {
        RegressionKind::None => &TAU_NONE,
        RegressionKind::Constant => &TAU_CONSTANT,
        RegressionKind::ConstantTrend => &TAU_TREND,
    };
    interpolate(&tabulate(s), n)
}

/// Engle-Granger critical values for the residual test of a two-variable
/// cointegrating regression with intercept.
pub fn engle_granger_critical_values(n: usize) -> CriticalValues {
    interpolate(&tabulate(&TAU_COINT_2), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotic_values() {
        let c = adf_critical_values(RegressionKind::Constant, usize::MAX);
        assert!((c.one + 3.43035).abs() < 1e-4);
        assert!((c.five + 2.86154).abs() < 1e-4);
        assert!((c.ten + 2.56677).abs() < 1e-4);
    }

    #[test]
    fn table_points_match_response_surface() {
        // constant case at T = 100: -3.4975, -2.8909, -2.5824
        let c = adf_critical_values(RegressionKind::Constant, 100);
        assert!((c.one + 3.497501).abs() < 1e-6);
        assert!((c.five + 2.890906).abs() < 1e-6);
        assert!((c.ten + 2.582435).abs() < 1e-6);
        let eg = engle_granger_critical_values(250);
        assert!((eg.one + 3.940784).abs() < 1e-6);
        assert!((eg.five + 3.360680).abs() < 1e-6);
    }

    #[test]
    fn interpolation_is_close_to_surface() {
        for n in [30, 75, 180, 400, 2000] {
            for (kind, s) in [
                (RegressionKind::None, &TAU_NONE),
                (RegressionKind::Constant, &TAU_CONSTANT),
                (RegressionKind::ConstantTrend, &TAU_TREND),
            ] {
                let c = adf_critical_values(kind, n);
                assert!((c.five - surface_at(&s[1], n as f64)).abs() < 0.01, "{kind:?} {n}");
            }
        }
    }

    #[test]
    fn ordering_and_reject_levels() {
        for kind in [RegressionKind::None, RegressionKind::Constant, RegressionKind::ConstantTrend] {
            for n in [10, 25, 60, 300, 10_000] {
                let c = adf_critical_values(kind, n);
                assert!(c.one < c.five && c.five < c.ten);
            }
        }
        let c = adf_critical_values(RegressionKind::Constant, 100);
        assert_eq!(c.reject_at(-5.0), Some(Significance::OnePercent));
        assert_eq!(c.reject_at(-3.0), Some(Significance::FivePercent));
        assert_eq!(c.reject_at(-2.7), Some(Significance::TenPercent));
        assert_eq!(c.reject_at(-1.0), None);
        let eg = engle_granger_critical_values(100);
        assert!(eg.five < c.five);
    }
}
