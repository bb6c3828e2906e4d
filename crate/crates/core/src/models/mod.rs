//! Closed-form evaluators for logistic curves, sech² solitons and soliton
//! chains, plus finite-difference residual checks for KdV-type equations.

mod grid;
mod pde;

pub use grid::GridFunction;
pub use pde::{kdv_residual, kdv_soliton, redundancy_equation_residual};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponential arguments beyond this magnitude are treated as fully
/// saturated: tails evaluate to exactly zero.
pub const EXP_CLAMP: f64 = 350.0;

/// `cosh⁻²(u)`, evaluated without overflow.
pub fn sech2(u: f64) -> f64 {
    let a = u.abs();
    if a > EXP_CLAMP {
        return 0.0;
    }
    let e = (-2.0 * a).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// Standard logistic `1 / (1 + e^{-z})`.
pub fn sigmoid(z: f64) -> f64 {
    if z > EXP_CLAMP {
        1.0
    } else if z < -EXP_CLAMP {
        0.0
    } else if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// S-shaped growth curve `x_sat / (1 + e^{-s (t - t0)})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticComponent {
    pub x_sat: f64,
    pub s: f64,
    pub t0: f64,
}

impl LogisticComponent {
    pub fn new(x_sat: f64, s: f64, t0: f64) -> Result<Self> {
        if !(x_sat.is_finite() && x_sat > 0.0) {
            return Err(Error::InvalidParameter(format!("x_sat must be > 0, got {x_sat}")));
        }
        if !(s.is_finite() && s != 0.0) {
            return Err(Error::InvalidParameter(format!("s must be nonzero, got {s}")));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidParameter("t0 must be finite".into()));
        }
        Ok(Self { x_sat, s, t0 })
    }

    /// The soliton equal to this curve's time derivative:
    /// `A = x_sat·s/4`, `k = s/2`, `c = t0`.
    ///
    /// For decreasing curves (`s < 0`) the derivative is a negative pulse
    /// with `k = |s|/2`.
    pub fn derivative_soliton(&self) -> SolitonComponent {
        SolitonComponent {
            amplitude: self.x_sat * self.s / 4.0,
            k: self.s.abs() / 2.0,
            center: self.t0,
        }
    }
}

/// `x_sat / (1 + exp(-s (t - t0)))`.
pub fn logistic_eval(c: &LogisticComponent, t: f64) -> f64 {
    c.x_sat * sigmoid(c.s * (t - c.t0))
}

/// Exact derivative of [`logistic_eval`]:
/// `(x_sat·s/4) · cosh⁻²[(s/2)(t - t0)]`.
pub fn logistic_derivative_eval(c: &LogisticComponent, t: f64) -> f64 {
    c.x_sat * c.s / 4.0 * sech2(0.5 * c.s * (t - c.t0))
}

/// Solitary pulse `A · cosh⁻²[k (t - c)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonComponent {
    #[serde(rename = "A")]
    pub amplitude: f64,
    pub k: f64,
    pub center: f64,
}

impl SolitonComponent {
    pub fn new(amplitude: f64, k: f64, center: f64) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude != 0.0) {
            return Err(Error::InvalidParameter(format!(
                "amplitude must be nonzero, got {amplitude}"
            )));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter(format!("k must be > 0, got {k}")));
        }
        if !center.is_finite() {
            return Err(Error::InvalidParameter("center must be finite".into()));
        }
        Ok(Self {
            amplitude,
            k,
            center,
        })
    }

    /// Logistic step whose derivative is this pulse: `(2A/k, 2k, c)`.
    ///
    /// A negative pulse maps to a decreasing step of the same height,
    /// returned as `(2|A|/k, -2k, c)`; its level differs from the
    /// antiderivative by the constant `2A/k`.
    pub fn integral_logistic(&self) -> LogisticComponent {
        let height = 2.0 * self.amplitude / self.k;
        if height >= 0.0 {
            LogisticComponent {
                x_sat: height,
                s: 2.0 * self.k,
                t0: self.center,
            }
        } else {
            LogisticComponent {
                x_sat: -height,
                s: -2.0 * self.k,
                t0: self.center,
            }
        }
    }

    /// Total height `2A/k` of the step obtained by integrating the pulse.
    pub fn step_height(&self) -> f64 {
        2.0 * self.amplitude / self.k
    }
}

pub fn soliton_eval(sol: &SolitonComponent, t: f64) -> f64 {
    sol.amplitude * sech2(sol.k * (t - sol.center))
}

/// `∫_{-∞}^{t} A cosh⁻²[k(τ - c)] dτ = (A/k)(1 + tanh[k(t - c)])`.
pub fn soliton_integral_eval(sol: &SolitonComponent, t: f64) -> f64 {
    let u = sol.k * (t - sol.center);
    // 1 + tanh(u) = 2 / (1 + e^{-2u}) = 2·sigmoid(2u)
    sol.amplitude / sol.k * 2.0 * sigmoid(2.0 * u)
}

/// Vertical shift plus an ordered list of solitons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolitonChainModel {
    pub beta: f64,
    pub components: Vec<SolitonComponent>,
}

impl SolitonChainModel {
    /// Builds a chain, ordering components by center.
    pub fn new(beta: f64, mut components: Vec<SolitonComponent>) -> Self {
        components.sort_by(|a, b| a.center.total_cmp(&b.center));
        Self { beta, components }
    }

    pub fn eval(&self, t: f64) -> f64 {
        chain_eval(self, t)
    }

    pub fn eval_many(&self, times: &[f64]) -> Vec<f64> {
        times.iter().map(|&t| chain_eval(self, t)).collect()
    }
}

/// `β + Σ_i A_i cosh⁻²[k_i (t - c_i)]`.
pub fn chain_eval(m: &SolitonChainModel, t: f64) -> f64 {
    m.beta + m.components.iter().map(|c| soliton_eval(c, t)).sum::<f64>()
}

/// Sum of the component antiderivatives, each a logistic step of height
/// `2A_i/k_i` centred at `c_i`, on a zero baseline (β is not integrated).
pub fn cumulative_chain_eval(m: &SolitonChainModel, t: f64) -> f64 {
    m.components.iter().map(|c| soliton_integral_eval(c, t)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_chain() -> SolitonChainModel {
        SolitonChainModel::new(
            310.75,
            vec![
                SolitonComponent::new(71.75, 0.03, 54.16).unwrap(),
                SolitonComponent::new(208.21, 0.04, 122.4).unwrap(),
                SolitonComponent::new(370.57, 0.02, 201.0).unwrap(),
            ],
        )
    }

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let n = if n.is_multiple_of(2) { n } else { n + 1 };
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn logistic_examples() {
        let c = LogisticComponent::new(100.0, 0.5, 10.0).unwrap();
        assert_eq!(logistic_eval(&c, 10.0), 50.0);
        assert!((logistic_eval(&c, 10.0 + 100.0 / 0.5) - 100.0).abs() < 1e-9);
        assert!((logistic_eval(&c, 10.0 + 3f64.ln() / 0.5) - 75.0).abs() < 1e-12);
        // stable far into both tails
        assert_eq!(logistic_eval(&c, 10.0 - 700.0 / 0.5), 0.0);
        assert_eq!(logistic_eval(&c, 10.0 + 700.0 / 0.5), 100.0);
        assert!(LogisticComponent::new(0.0, 1.0, 0.0).is_err());
        assert!(LogisticComponent::new(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn logistic_derivative_examples() {
        let c = LogisticComponent::new(100.0, 0.5, 10.0).unwrap();
        assert_eq!(logistic_derivative_eval(&c, 10.0), 12.5);
        assert!(logistic_derivative_eval(&c, 10.0 + 200.0 / 0.5).abs() < 1e-12);
        for &t in &[-5.0, 3.0, 10.5, 17.0, 30.0] {
            let h = 1e-5;
            let fd = (logistic_eval(&c, t + h) - logistic_eval(&c, t - h)) / (2.0 * h);
            let exact = logistic_derivative_eval(&c, t);
            assert!(((fd - exact) / exact).abs() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn finite_difference_error_is_second_order() {
        let c = LogisticComponent::new(100.0, 0.5, 10.0).unwrap();
        let t = 12.3;
        let exact = logistic_derivative_eval(&c, t);
        let err = |h: f64| {
            ((logistic_eval(&c, t + h) - logistic_eval(&c, t - h)) / (2.0 * h) - exact).abs()
        };
        let ratio = err(1e-2) / err(1e-3);
        assert!((ratio - 100.0).abs() < 10.0, "ratio {ratio}");
    }

    #[test]
    fn soliton_matches_logistic_derivative() {
        let c = LogisticComponent::new(250.0, 0.3, 40.0).unwrap();
        let sol = SolitonComponent::new(c.x_sat * c.s / 4.0, c.s / 2.0, c.t0).unwrap();
        assert_eq!(sol, c.derivative_soliton());
        for i in 0..200 {
            let t = i as f64 * 0.5 - 10.0;
            assert!((soliton_eval(&sol, t) - logistic_derivative_eval(&c, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn soliton_examples() {
        let s = SolitonComponent::new(370.57, 0.02, 201.0).unwrap();
        assert_eq!(soliton_eval(&s, 201.0), 370.57);
        let unit = SolitonComponent::new(1.0, 1.0, 0.0).unwrap();
        let half = (1.0 + 2f64.sqrt()).ln();
        assert!((soliton_eval(&unit, half) - 0.5).abs() < 1e-15);
        for d in [0.1, 3.0, 77.0] {
            assert_eq!(soliton_eval(&s, 201.0 + d), soliton_eval(&s, 201.0 - d));
        }
        assert!(SolitonComponent::new(1.0, -1.0, 0.0).is_err());
        assert!(SolitonComponent::new(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn parameter_maps_are_inverse() {
        for (a, k, c) in [(71.75, 0.03, 54.16), (-12.0, 0.5, -3.0), (1e3, 1e-3, 0.0)] {
            let sol = SolitonComponent::new(a, k, c).unwrap();
            let back = sol.integral_logistic().derivative_soliton();
            assert!(((back.amplitude - a) / a).abs() < 1e-12);
            assert!(((back.k - k) / k).abs() < 1e-12);
            assert_eq!(back.center, c);
        }
    }

    #[test]
    fn chain_examples() {
        let m = reference_chain();
        // independently: β + Σ A/cosh²(k(t-c))
        let t = 54.16f64;
        let direct: f64 = 310.75
            + [(71.75, 0.03, 54.16), (208.21, 0.04, 122.4), (370.57, 0.02, 201.0)]
                .iter()
                .map(|&(a, k, c): &(f64, f64, f64)| a / (k * (t - c)).cosh().powi(2))
                .sum::<f64>();
        assert!((chain_eval(&m, t) - direct).abs() < 1e-10);
        assert!((chain_eval(&m, t) - 390.16127).abs() < 1e-4);

        let empty = SolitonChainModel::new(4.5, vec![]);
        assert_eq!(chain_eval(&empty, 1e6), 4.5);
        assert!((chain_eval(&m, 2000.0) - m.beta).abs() < 1e-3 * 370.57);
    }

    #[test]
    fn chain_is_sorted_by_center() {
        let m = SolitonChainModel::new(
            0.0,
            vec![
                SolitonComponent::new(1.0, 1.0, 5.0).unwrap(),
                SolitonComponent::new(1.0, 1.0, -5.0).unwrap(),
            ],
        );
        assert_eq!(m.components[0].center, -5.0);
    }

    #[test]
    fn cumulative_examples() {
        let unit = SolitonChainModel::new(0.0, vec![SolitonComponent::new(1.0, 1.0, 0.0).unwrap()]);
        assert!((cumulative_chain_eval(&unit, 0.0) - 1.0).abs() < 1e-15);
        assert!(cumulative_chain_eval(&unit, -1e4).abs() < 1e-300);

        let m = reference_chain();
        let lo = 201.0 - 40.0 / 0.02;
        for &t in &[0.0, 54.16, 100.0, 201.0, 240.0, 201.0 + 40.0 / 0.02] {
            let quad = simpson(|s| chain_eval(&m, s) - m.beta, lo, t, 200_000);
            let exact = cumulative_chain_eval(&m, t) - cumulative_chain_eval(&m, lo);
            assert!((quad - exact).abs() < 1e-6, "t={t}: {quad} vs {exact}");
        }
    }

    #[test]
    fn chain_is_derivative_of_cumulative() {
        let m = reference_chain();
        for i in 0..48 {
            let t = i as f64 * 5.0;
            let h = 1e-3;
            let d = (cumulative_chain_eval(&m, t + h) - cumulative_chain_eval(&m, t - h)) / (2.0 * h);
            assert!((d - (chain_eval(&m, t) - m.beta)).abs() < 1e-6, "t={t}");
        }
    }
}
