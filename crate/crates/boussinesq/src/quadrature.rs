//! Globally adaptive Gauss–Kronrod (7, 15) quadrature on finite intervals.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("quadrature did not reach tolerance {tol:e}: error estimate {estimate:e} after {intervals} intervals")]
pub struct QuadratureFailure {
    pub tol: f64,
    pub estimate: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_INTERVALS: usize = 4000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`, bisecting the
/// interval with the largest error estimate until the summed estimate is
/// below `tol`.
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_intervals: usize,
) -> Result<Quadrature, QuadratureFailure> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, intervals: 0 });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let (v, e) = gk15(&mut f, lo, hi);
    let mut parts = vec![(lo, hi, v, e)];
    loop {
        let total_err: f64 = parts.iter().map(|p| p.3).sum();
        if total_err <= tol || !total_err.is_finite() {
            let value: f64 = parts.iter().map(|p| p.2).sum();
            if !value.is_finite() || !total_err.is_finite() {
                return Err(QuadratureFailure { tol, estimate: total_err, intervals: parts.len() });
            }
            return Ok(Quadrature { value: sign * value, error: total_err, intervals: parts.len() });
        }
        if parts.len() >= max_intervals {
            return Err(QuadratureFailure { tol, estimate: total_err, intervals: parts.len() });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (l, r, _, _) = parts.swap_remove(worst);
        let m = 0.5 * (l + r);
        if m <= l || m >= r {
            // interval cannot be split further in floating point
            let total_err: f64 = parts.iter().map(|p| p.3).sum();
            return Err(QuadratureFailure { tol, estimate: total_err, intervals: parts.len() + 1 });
        }
        let (v1, e1) = gk15(&mut f, l, m);
        let (v2, e2) = gk15(&mut f, m, r);
        parts.push((l, m, v1, e1));
        parts.push((m, r, v2, e2));
    }
}

/// Composite Simpson rule with `n` (even) panels; used as an independent check.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 1 { n + 1 } else { n.max(2) };
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let q = integrate(|x| x * x, 0.0, 2.0, 1e-12, 100).unwrap();
        assert!((q.value - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let q = integrate(|x| x.exp(), 1.0, 0.0, 1e-12, 100).unwrap();
        assert!((q.value + (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn sharp_exponential() {
        // int_0^50 e^{-4s} ds = (1 - e^{-200})/4
        let q = integrate(|s| (-4.0 * s).exp(), 0.0, 50.0, 1e-12, 1000).unwrap();
        assert!((q.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn cubic_exponential_against_simpson() {
        let f = |s: f64| (-(s * s * s) / 3.0 - 0.5 * s).exp();
        let q = integrate(f, 0.0, 10.0, 1e-12, 1000).unwrap();
        let s = simpson(f, 0.0, 10.0, 20000);
        assert!((q.value - s).abs() < 1e-10);
    }

    #[test]
    fn budget_exhaustion_reports_failure() {
        let r = integrate(|x| (1.0 / x).sin(), 1e-9, 1.0, 1e-14, 4);
        assert!(r.is_err());
    }
}
