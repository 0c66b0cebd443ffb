//! Log-space least-squares fits of decay rates and growth exponents, and
//! envelope compliance checks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MIN_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("non-positive value {value} at t = {t}")]
    NonPositiveValues { t: f64, value: f64 },
    #[error("window holds {0} samples, at least 8 are required")]
    WindowTooSmall(usize),
    #[error("times and values differ in length")]
    LengthMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitKind {
    Exponential,
    Algebraic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub kind: FitKind,
    /// Decay rate (exponential fits, positive when decaying) or growth
    /// exponent (algebraic fits, positive when growing).
    pub rate_or_exponent: f64,
    /// RMS of the log-space residuals over the window.
    pub residual: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

/// Default fit window: from the later of `t = 5` and 20% of the series span
/// to the last sample.
pub fn default_window(times: &[f64]) -> (f64, f64) {
    match (times.first(), times.last()) {
        (Some(&a), Some(&b)) => ((a + 0.2 * (b - a)).max(5.0), b),
        _ => (0.0, 0.0),
    }
}

fn select(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<Vec<(f64, f64)>, FitError> {
    if times.len() != values.len() {
        return Err(FitError::LengthMismatch);
    }
    let picked: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .map(|(t, v)| (*t, *v))
        .collect();
    if picked.len() < MIN_SAMPLES {
        return Err(FitError::WindowTooSmall(picked.len()));
    }
    if let Some(&(t, value)) = picked.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(FitError::NonPositiveValues { t, value });
    }
    Ok(picked)
}

/// Ordinary least squares `y = a + b x`; returns `(a, b, rms residual)`.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let ss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    (a, b, (ss / n).sqrt())
}

/// Least-squares slope of `ln(value)` against `t`, reported as a decay rate.
pub fn fit_exponential_rate(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayFit, FitError> {
    let picked = select(times, values, window)?;
    let xs: Vec<f64> = picked.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = picked.iter().map(|p| p.1.ln()).collect();
    let (_, slope, residual) = least_squares(&xs, &ys);
    Ok(DecayFit { kind: FitKind::Exponential, rate_or_exponent: -slope, residual, window, samples: xs.len() })
}

/// Least-squares slope of `ln(value)` against `ln(t)`.
pub fn fit_algebraic_exponent(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayFit, FitError> {
    let picked = select(times, values, window)?;
    if let Some(&(t, _)) = picked.iter().find(|(t, _)| !(*t > 0.0)) {
        return Err(FitError::NonPositiveValues { t, value: t });
    }
    let xs: Vec<f64> = picked.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = picked.iter().map(|p| p.1.ln()).collect();
    let (_, slope, residual) = least_squares(&xs, &ys);
    Ok(DecayFit { kind: FitKind::Algebraic, rate_or_exponent: slope, residual, window, samples: xs.len() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    /// `max value/envelope` over the samples.
    pub margin: f64,
    /// Time at which the maximum ratio occurs.
    pub worst_time: f64,
    pub slack: f64,
    pub passed: bool,
}

/// Compares `values` with `envelope(t)` sample by sample.
pub fn envelope_check(times: &[f64], values: &[f64], envelope: impl Fn(f64) -> f64, slack_c: f64) -> EnvelopeReport {
    let mut margin = f64::NEG_INFINITY;
    let mut worst_time = f64::NAN;
    for (&t, &v) in times.iter().zip(values) {
        let env = envelope(t);
        let ratio = if env > 0.0 {
            v / env
        } else if v <= 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if ratio > margin || worst_time.is_nan() {
            margin = ratio;
            worst_time = t;
        }
    }
    if times.is_empty() {
        margin = 0.0;
    }
    EnvelopeReport { margin, worst_time, slack: slack_c, passed: margin <= slack_c }
}

/// Evenly spaced samples `t0, t0 + h, ..., t1` (inclusive, `n >= 2`).
pub fn linspace(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect()
}

/// Logarithmically spaced samples from `t0 > 0` to `t1` (inclusive).
pub fn geomspace(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    let (a, b) = (t0.ln(), t1.ln());
    linspace(a, b, n).into_iter().map(f64::exp).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::exact_theta_alpha0;
    use crate::model::{Mode, Params};
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn synthetic_exponential() {
        let ts = linspace(0.0, 10.0, 101);
        let vs: Vec<f64> = ts.iter().map(|t| (-2.0 * t).exp()).collect();
        let f = fit_exponential_rate(&ts, &vs, (0.0, 10.0)).unwrap();
        assert!((f.rate_or_exponent - 2.0).abs() < 1e-9);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn theta_series_rate() {
        let p = Params { eta_x: 1.0, ..Params::default() };
        let ts = linspace(0.0, 20.0, 81);
        let vs: Vec<f64> = ts
            .iter()
            .map(|&t| exact_theta_alpha0(&p, Mode::new(1, 0.0), Complex64::new(1.0, 0.0), t).unwrap().norm())
            .collect();
        let f = fit_exponential_rate(&ts, &vs, default_window(&ts)).unwrap();
        assert!((f.rate_or_exponent - 1.0).abs() < 1e-9);
        assert_eq!(f.window, (5.0, 20.0));
    }

    #[test]
    fn synthetic_algebraic() {
        let ts = geomspace(1.0, 100.0, 50);
        let f = fit_algebraic_exponent(&ts, &ts, (1.0, 100.0)).unwrap();
        assert!((f.rate_or_exponent - 1.0).abs() < 1e-9);
        let couette: Vec<f64> = ts.iter().map(|t| Complex64::new(1.0, 3.0 * t).norm()).collect();
        let f = fit_algebraic_exponent(&ts, &couette, (20.0, 100.0)).unwrap();
        assert!((f.rate_or_exponent - 1.0).abs() < 1e-3);
    }

    #[test]
    fn fit_errors() {
        let ts = linspace(0.0, 1.0, 5);
        assert!(matches!(fit_exponential_rate(&ts, &ts, (0.0, 1.0)), Err(FitError::WindowTooSmall(5))));
        let ts = linspace(0.0, 1.0, 10);
        assert!(matches!(fit_exponential_rate(&ts, &ts, (0.0, 1.0)), Err(FitError::NonPositiveValues { .. })));
    }

    #[test]
    fn envelope_examples() {
        let ts = linspace(0.0, 3.0, 10);
        let env = |t: f64| (-t).exp() * (1.0 + t * t);
        let vs: Vec<f64> = ts.iter().map(|&t| env(t)).collect();
        let r = envelope_check(&ts, &vs, env, 1.0);
        assert!((r.margin - 1.0).abs() < 1e-15 && r.passed);
        let half: Vec<f64> = vs.iter().map(|v| v * 0.5).collect();
        assert!((envelope_check(&ts, &half, env, 1.0).margin - 0.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn fits_scale_invariant(rate in -3.0f64..3.0, c in 1e-3f64..1e3) {
            let ts = linspace(1.0, 11.0, 30);
            let vs: Vec<f64> = ts.iter().map(|t| (-rate * t).exp() * (1.0 + 0.1 * (3.0 * t).sin())).collect();
            let scaled: Vec<f64> = vs.iter().map(|v| v * c).collect();
            let a = fit_exponential_rate(&ts, &vs, (1.0, 11.0)).unwrap();
            let b = fit_exponential_rate(&ts, &scaled, (1.0, 11.0)).unwrap();
            prop_assert!((a.rate_or_exponent - b.rate_or_exponent).abs() < 1e-9);
            let a = fit_algebraic_exponent(&ts, &vs, (1.0, 11.0)).unwrap();
            let b = fit_algebraic_exponent(&ts, &scaled, (1.0, 11.0)).unwrap();
            prop_assert!((a.rate_or_exponent - b.rate_or_exponent).abs() < 1e-9);
        }

        #[test]
        fn envelope_margin_monotone(bump in 0.0f64..2.0, idx in 0usize..10) {
            let ts = linspace(0.0, 3.0, 10);
            let vs: Vec<f64> = ts.iter().map(|t| 1.0 / (1.0 + t)).collect();
            let mut more = vs.clone();
            more[idx] += bump;
            let env = |t: f64| 2.0 / (1.0 + t);
            prop_assert!(envelope_check(&ts, &more, env, 1.0).margin >= envelope_check(&ts, &vs, env, 1.0).margin);
        }
    }
}
