use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::models::{sech2, sigmoid};

/// Logistic-derivative mother wavelet: the `order`-th derivative of
/// `σ(t) = 1 / (1 + e^{-t})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MotherWavelet {
    order: u32,
}

impl Default for MotherWavelet {
    /// Order 3, the even wavelet: its response to a pulse peaks at the
    /// pulse centre.
    fn default() -> Self {
        Self { order: 3 }
    }
}

/// Kernel tails beyond `|u| > TRUNCATION` are dropped (`|ψ| < 1e-15`).
pub const TRUNCATION: f64 = 36.0;

pub const SUPPORT_WIDTH: f64 = 2.633_915_793_849_633;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Calibration {
    kappa: f64,
    /// Offset `k·|b* - c|` of the response peak from the pulse centre.
    shift: f64,
}

impl MotherWavelet {
    pub fn new(order: u32) -> Result<Self> {
        match order {
            2 | 3 => Ok(Self { order }),
            _ => Err(Error::UnsupportedOrder(order)),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn eval(&self, t: f64) -> f64 {
        let s = sigmoid(t);
        let d1 = s * (1.0 - s);
        match self.order {
            2 => d1 * (1.0 - 2.0 * s),
            _ => d1 * (1.0 - 6.0 * s + 6.0 * s * s),
        }
    }

    /// Nominal width of the unit-scale wavelet: `2 ln(2 + √3)`, the width
    /// of the central lobe of `σ'''` and the spacing of the extrema of `σ''`.
    pub fn support_width(&self) -> f64 {
        SUPPORT_WIDTH
    }

    /// `κ` such that a soliton `cosh⁻²[k(t - c)]` produces its largest
    /// `|W|` at scale `a* = κ / k`.
    pub fn kappa(&self) -> f64 {
        self.calibration().kappa
    }

    /// `k·|b* - c|`: zero for the even wavelet, nonzero for order 2.
    pub fn peak_shift(&self) -> f64 {
        self.calibration().shift
    }

    fn calibration(&self) -> Calibration {
        static CAL: [OnceLock<Calibration>; 2] = [OnceLock::new(), OnceLock::new()];
        *CAL[(self.order - 2) as usize].get_or_init(|| calibrate(*self))
    }
}

/// `order`-th derivative of the standard logistic.
pub fn mother_wavelet(order: u32, t: f64) -> Result<f64> {
    Ok(MotherWavelet::new(order)?.eval(t))
}

/// Continuous response `a^{-1/2} ∫ cosh⁻²(t) ψ((t - b)/a) dt` of the unit
/// soliton (`k = 1`, `c = 0`).
fn unit_response(w: MotherWavelet, a: f64, b: f64) -> f64 {
    // cosh⁻²(t) < 1e-17 beyond |t| = 20
    let half = 20.0;
    let n = (2.0 * half / (5e-3f64).min(a / 50.0)).ceil() as usize;
    let h = 2.0 * half / n as f64;
    let sum: f64 = (0..=n)
        .map(|i| {
            let t = -half + i as f64 * h;
            sech2(t) * w.eval((t - b) / a)
        })
        .sum();
    sum * h / a.sqrt()
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

fn calibrate(w: MotherWavelet) -> Calibration {
    let (kappa, shift) = if w.order == 3 {
        let ln_a = golden_max(|la| unit_response(w, la.exp(), 0.0).abs(), -3.0, 4.0, 1e-9);
        (ln_a.exp(), 0.0)
    } else {
        // alternate the scale and translation searches until both settle
        let mut b = -0.5;
        let mut ln_a = 0.0;
        for _ in 0..40 {
            let prev = (ln_a, b);
            ln_a = golden_max(|la| unit_response(w, la.exp(), b).abs(), -3.0, 4.0, 1e-10);
            let a = ln_a.exp();
            b = -golden_max(|x| unit_response(w, a, -x).abs(), 0.0, 10.0, 1e-10);
            if (ln_a - prev.0).abs() < 1e-9 && (b - prev.1).abs() < 1e-9 {
                break;
            }
        }
        (ln_a.exp(), b.abs())
    };
    Calibration { kappa, shift }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn order_two_examples() {
        assert_eq!(mother_wavelet(2, 0.0).unwrap(), 0.0);
        assert!(mother_wavelet(2, 60.0).unwrap().abs() < 1e-25);
        assert!(mother_wavelet(2, -60.0).unwrap().abs() < 1e-25);
        assert!(mother_wavelet(2, 800.0).unwrap() == 0.0);
        assert_eq!(mother_wavelet(4, 0.0).unwrap_err(), Error::UnsupportedOrder(4));
        assert_eq!(mother_wavelet(1, 0.0).unwrap_err(), Error::UnsupportedOrder(1));
    }

    #[test]
    fn admissible() {
        for order in [2, 3] {
            let w = MotherWavelet::new(order).unwrap();
            let mean = simpson(|t| w.eval(t), -60.0, 60.0, 120_000);
            assert!(mean.abs() < 1e-10, "order {order}: {mean}");
        }
    }

    #[test]
    fn matches_finite_differences_of_logistic() {
        let h = 1e-3;
        for &t in &[-3.0, -0.7, 0.0, 0.4, 2.5] {
            let d2 = (sigmoid(t + h) - 2.0 * sigmoid(t) + sigmoid(t - h)) / (h * h);
            let d3 = (sigmoid(t + 2.0 * h) - 2.0 * sigmoid(t + h) + 2.0 * sigmoid(t - h)
                - sigmoid(t - 2.0 * h))
                / (2.0 * h * h * h);
            assert!((mother_wavelet(2, t).unwrap() - d2).abs() < 1e-6);
            assert!((mother_wavelet(3, t).unwrap() - d3).abs() < 1e-5);
        }
    }

    #[test]
    fn calibration_constants() {
        let w = MotherWavelet::default();
        assert_eq!(w.order(), 3);
        // σ''' changes sign where σ = (3 ± √3)/6
        let s = (3.0 + 3f64.sqrt()) / 6.0;
        let u = (s / (1.0 - s)).ln();
        assert!((w.support_width() - 2.0 * u).abs() < 1e-12);
        assert!(w.eval(u).abs() < 1e-15);
        assert!((w.kappa() - 1.4339).abs() < 2e-3, "{}", w.kappa());
        assert_eq!(w.peak_shift(), 0.0);
        let w2 = MotherWavelet::new(2).unwrap();
        assert!(w2.peak_shift() > 0.1);
        assert!(w2.kappa() > 0.0);
    }
}
