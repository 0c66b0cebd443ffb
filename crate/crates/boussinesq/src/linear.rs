//! Closed-form and quadrature-based solutions of the linearized system, one
//! Fourier mode at a time.
//!
//! For a mode `(k, xi)` in the sheared frame the linearized equations read
//!
//! ```text
//! d/dt w = (-nu_x k^2 - nu_y (xi - beta k t)^2) w + i k th
//! d/dt th = i k alpha / (k^2 + (xi - beta k t)^2) w + (-eta_x k^2 - eta_y (xi - beta k t)^2) th
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Mode, ModeState, Params};
use crate::quadrature::{self, QuadratureFailure};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Absolute tolerance of the inner integrals in [`omega1_profile`].
pub const OMEGA1_QUAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinearError {
    #[error("operation requires alpha = 0, got {0}")]
    AlphaNotZero(f64),
    #[error("operation requires k != 0")]
    ZeroK,
    #[error("operation requires beta = 0, got {0}")]
    ShearNotZero(f64),
    #[error("operation requires vanishing dissipation")]
    Dissipative,
    #[error("alpha = {alpha} is outside the real branch; the exponent has real part {real_part}")]
    OutOfBranch { alpha: f64, real_part: f64 },
    #[error("alpha must be nonnegative, got {0}")]
    NegativeAlpha(f64),
    #[error("profile integral diverges for these coefficients")]
    Divergent,
    #[error(transparent)]
    Quadrature(#[from] QuadratureFailure),
}

/// `int_s^t (xi - kb*tau)^2 dtau` for a real effective wavenumber `kb`.
///
/// Evaluated as `(t-s)((a+b)^2 + a^2 + b^2)/6` with `a = xi - kb*s`,
/// `b = xi - kb*t`, which is the difference of cubes without cancellation and
/// without dividing by `kb`.
pub fn phase_integral_real(kb: f64, xi: f64, s: f64, t: f64) -> f64 {
    let a = xi - kb * s;
    let b = xi - kb * t;
    (t - s) * ((a + b) * (a + b) + a * a + b * b) / 6.0
}

/// `int_s^t (xi - k tau)^2 dtau`; equals `((xi-ks)^3 - (xi-kt)^3)/(3k)` for
/// `k != 0` and `xi^2 (t-s)` for `k = 0`.
pub fn phase_integral(k: i64, xi: f64, s: f64, t: f64) -> f64 {
    phase_integral_real(k as f64, xi, s, t)
}

/// `exp(-cx k^2 (t-s) - cy * phase_integral(k, xi, s, t))` for unit shear.
pub fn heat_factor(cx: f64, cy: f64, k: i64, xi: f64, s: f64, t: f64) -> f64 {
    heat_factor_sheared(cx, cy, Mode::new(k, xi), 1.0, s, t)
}

/// Heat factor for shear rate `beta`: the phase integral uses `xi - beta*k*tau`.
pub fn heat_factor_sheared(cx: f64, cy: f64, mode: Mode, beta: f64, s: f64, t: f64) -> f64 {
    (-heat_exponent(cx, cy, mode, beta, s, t)).exp()
}

/// The nonnegative exponent of [`heat_factor_sheared`].
pub fn heat_exponent(cx: f64, cy: f64, mode: Mode, beta: f64, s: f64, t: f64) -> f64 {
    let k2 = mode.kf() * mode.kf();
    let mut e = cx * k2 * (t - s);
    if cy != 0.0 {
        e += cy * phase_integral_real(beta * mode.kf(), mode.xi, s, t);
    }
    e
}

/// Coefficient matrix of the linearized system at time `t`; the coupling
/// `i k alpha/(k^2 + (xi - beta k t)^2)` is defined as 0 when `k = 0`.
pub fn coefficient_matrix(params: &Params, mode: Mode, t: f64) -> [[Complex64; 2]; 2] {
    let k = mode.kf();
    let xp = mode.xi_phys(params.beta, t);
    let a11 = -params.nu_x * k * k - params.nu_y * xp * xp;
    let a22 = -params.eta_x * k * k - params.eta_y * xp * xp;
    let a21 = if mode.k == 0 || params.alpha == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        I * (k * params.alpha / (k * k + xp * xp))
    };
    [[Complex64::new(a11, 0.0), I * k], [a21, Complex64::new(a22, 0.0)]]
}

/// Applies a 2x2 matrix to a mode state.
pub fn apply(m: &[[Complex64; 2]; 2], s: ModeState) -> ModeState {
    ModeState {
        omega_hat: m[0][0] * s.omega_hat + m[0][1] * s.theta_hat,
        theta_hat: m[1][0] * s.omega_hat + m[1][1] * s.theta_hat,
    }
}

fn require_alpha_zero(params: &Params) -> Result<(), LinearError> {
    if params.alpha != 0.0 {
        Err(LinearError::AlphaNotZero(params.alpha))
    } else {
        Ok(())
    }
}

/// Temperature amplitude for `alpha = 0`: pure heat-factor decay.
pub fn exact_theta_alpha0(
    params: &Params,
    mode: Mode,
    theta0: Complex64,
    t: f64,
) -> Result<Complex64, LinearError> {
    require_alpha_zero(params)?;
    Ok(theta0 * heat_factor_sheared(params.eta_x, params.eta_y, mode, params.beta, 0.0, t))
}

/// Exponent of the Duhamel integrand `heat_nu(s,t) * heat_eta(0,s)`.
fn duhamel_exponent(params: &Params, mode: Mode, s: f64, t: f64) -> f64 {
    heat_exponent(params.nu_x, params.nu_y, mode, params.beta, s, t)
        + heat_exponent(params.eta_x, params.eta_y, mode, params.beta, 0.0, s)
}

fn equal_pairs(params: &Params) -> bool {
    params.nu_x == params.eta_x && params.nu_y == params.eta_y
}

/// The Duhamel contribution `int_0^t heat_nu(s,t) heat_eta(0,s) ds * i k theta0`.
pub fn duhamel_term(
    params: &Params,
    mode: Mode,
    theta0: Complex64,
    t: f64,
    quad_tol: f64,
) -> Result<Complex64, LinearError> {
    require_alpha_zero(params)?;
    if mode.k == 0 || t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let inner = if equal_pairs(params) {
        t * (-duhamel_exponent(params, mode, 0.0, t)).exp()
    } else {
        quadrature::integrate(
            |s| (-duhamel_exponent(params, mode, s, t)).exp(),
            0.0,
            t,
            quad_tol,
            quadrature::DEFAULT_MAX_INTERVALS,
        )?
        .value
    };
    Ok(I * mode.kf() * theta0 * inner)
}

/// Vorticity amplitude for `alpha = 0`: free heat decay of `omega0` plus the
/// Duhamel response to the temperature forcing `i k theta`.
pub fn exact_omega_alpha0(
    params: &Params,
    mode: Mode,
    omega0: Complex64,
    theta0: Complex64,
    t: f64,
    quad_tol: f64,
) -> Result<Complex64, LinearError> {
    require_alpha_zero(params)?;
    let free = omega0 * heat_factor_sheared(params.nu_x, params.nu_y, mode, params.beta, 0.0, t);
    Ok(free + duhamel_term(params, mode, theta0, t, quad_tol)?)
}

/// Which ordering of `(nu_x, eta_x)` and `(nu_y, eta_y)` defines the slow profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Omega1Case {
    EqualCoefficients,
    NuLeEtaBoth,
    NuGeEtaBoth,
    /// `nu_x < eta_x` and `nu_y > eta_y`.
    MixedXLe,
    /// `nu_x > eta_x` and `nu_y < eta_y`.
    MixedXGe,
}

impl Omega1Case {
    pub fn classify(params: &Params) -> Self {
        let a = params.eta_x - params.nu_x;
        let b = params.eta_y - params.nu_y;
        if a == 0.0 && b == 0.0 {
            Omega1Case::EqualCoefficients
        } else if a >= 0.0 && b >= 0.0 {
            Omega1Case::NuLeEtaBoth
        } else if a <= 0.0 && b <= 0.0 {
            Omega1Case::NuGeEtaBoth
        } else if a > 0.0 {
            Omega1Case::MixedXLe
        } else {
            Omega1Case::MixedXGe
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Omega1Case::EqualCoefficients => "equal-coefficients",
            Omega1Case::NuLeEtaBoth => "nu_le_eta_both",
            Omega1Case::NuGeEtaBoth => "nu_ge_eta_both",
            Omega1Case::MixedXLe => "mixed-x-le",
            Omega1Case::MixedXGe => "mixed-x-ge",
        }
    }
}

/// Upper limit `S` past which `exp(c1 s - c3 s^3) < tol/10` and keeps decreasing.
fn truncation_point(c1: f64, c3: f64, tol: f64) -> Result<f64, LinearError> {
    if c3 <= 0.0 && c1 >= 0.0 {
        return Err(LinearError::Divergent);
    }
    let target = (tol / 10.0).ln();
    let mut s = 1.0f64;
    for _ in 0..200 {
        let value = c1 * s - c3 * s * s * s;
        let slope = c1 - 3.0 * c3 * s * s;
        if value < target && slope < 0.0 {
            return Ok(s);
        }
        s *= 2.0;
    }
    Err(LinearError::Divergent)
}

/// The slow vorticity profile `omega_1(t)` for `alpha = 0`.
///
/// Writing the Duhamel integrand as
/// `exp(-nu_x k^2 (t-s) - eta_x k^2 s - nu_y phi(s,t) - eta_y phi(0,s))`, the
/// profile pulls out the factor with the smaller coefficient in the dominant
/// vertical part and extends the remaining integral to infinity:
///
/// * `eta_y > nu_y` (or `eta_y = nu_y`, `eta_x > nu_x`):
///   `exp(-nu_x k^2 t - nu_y phi(0,t)) * int_0^inf exp(-(eta_x-nu_x) k^2 s - (eta_y-nu_y) phi(0,s)) ds`
/// * otherwise, with `s = t - sigma`:
///   `exp(-eta_x k^2 t - eta_y phi(0,t)) * int_0^inf exp(-(nu_x-eta_x) k^2 sigma - (nu_y-eta_y) phi(t-sigma,t)) dsigma`
///
/// For equal pairs the profile is the Duhamel term itself.
pub fn omega1_profile(
    params: &Params,
    mode: Mode,
    theta0: Complex64,
    t: f64,
) -> Result<Complex64, LinearError> {
    omega1_profile_with_tol(params, mode, theta0, t, OMEGA1_QUAD_TOL)
}

pub fn omega1_profile_with_tol(
    params: &Params,
    mode: Mode,
    theta0: Complex64,
    t: f64,
    quad_tol: f64,
) -> Result<Complex64, LinearError> {
    require_alpha_zero(params)?;
    if mode.k == 0 {
        return Err(LinearError::ZeroK);
    }
    let case = Omega1Case::classify(params);
    if case == Omega1Case::EqualCoefficients {
        return duhamel_term(params, mode, theta0, t, quad_tol);
    }
    let k2 = mode.kf() * mode.kf();
    let kb = params.beta * mode.kf();
    let a = params.eta_x - params.nu_x;
    let b = params.eta_y - params.nu_y;
    // lower bound of the phase integral over an interval of length s:
    // kb^2 s^3 / 12 when sheared, xi^2 s otherwise
    let (lin_y, cub_y) = if kb != 0.0 { (0.0, kb * kb / 12.0) } else { (mode.xi * mode.xi, 0.0) };
    let forward = b > 0.0 || (b == 0.0 && a > 0.0);
    let (prefactor, inner) = if forward {
        let pre = (-heat_exponent(params.nu_x, params.nu_y, mode, params.beta, 0.0, t)).exp();
        let upper = truncation_point(-a * k2 - b * lin_y, b * cub_y, quad_tol)?;
        let integrand = |s: f64| (-a * k2 * s - b * phase_integral_real(kb, mode.xi, 0.0, s)).exp();
        let q = quadrature::integrate(integrand, 0.0, upper, quad_tol, quadrature::DEFAULT_MAX_INTERVALS)?;
        (pre, q.value)
    } else {
        let pre = (-heat_exponent(params.eta_x, params.eta_y, mode, params.beta, 0.0, t)).exp();
        let upper = truncation_point(a * k2 + b * lin_y, -b * cub_y, quad_tol)?;
        let integrand =
            |sg: f64| (a * k2 * sg + b * phase_integral_real(kb, mode.xi, t - sg, t)).exp();
        let q = quadrature::integrate(integrand, 0.0, upper, quad_tol, quadrature::DEFAULT_MAX_INTERVALS)?;
        (pre, q.value)
    };
    Ok(I * mode.kf() * theta0 * prefactor * inner)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenClass {
    RealDistinct,
    ComplexPair,
    Degenerate,
}

impl EigenClass {
    pub fn name(&self) -> &'static str {
        match self {
            EigenClass::RealDistinct => "real-distinct",
            EigenClass::ComplexPair => "complex-pair",
            EigenClass::Degenerate => "degenerate",
        }
    }
}

/// Eigen-decomposition of the shear-free coefficient matrix of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenReport {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub alpha_star: f64,
    pub classification: EigenClass,
    pub matrix: [[Complex64; 2]; 2],
}

/// Eigenvalues `-(eta_x+nu_x)k^2/2 - (eta_y+nu_y)xi^2/2 +- r` with
/// `r^2 = D^2 - alpha k^2/(k^2+xi^2)`,
/// `D = ((eta_x-nu_x)k^2 + (eta_y-nu_y)xi^2)/2`, and threshold
/// `alpha* = (k^2+xi^2)/k^2 * D^2`.
///
/// The root of larger modulus is formed directly and the other one through
/// the determinant, so the product stays accurate when one root is tiny.
pub fn eigen_no_shear(params: &Params, mode: Mode) -> Result<EigenReport, LinearError> {
    if params.beta != 0.0 {
        return Err(LinearError::ShearNotZero(params.beta));
    }
    if mode.k == 0 {
        return Err(LinearError::ZeroK);
    }
    let k2 = mode.kf() * mode.kf();
    let xi2 = mode.xi * mode.xi;
    let q = k2 + xi2;
    let half_trace = -(params.eta_x + params.nu_x) * k2 / 2.0 - (params.eta_y + params.nu_y) * xi2 / 2.0;
    let d = (params.eta_x - params.nu_x) * k2 / 2.0 + (params.eta_y - params.nu_y) * xi2 / 2.0;
    let coupling = params.alpha * k2 / q;
    let r2 = d * d - coupling;
    let r = Complex64::new(r2, 0.0).sqrt();
    let alpha_star = q / k2 * d * d;
    let classification = if params.alpha < alpha_star {
        EigenClass::RealDistinct
    } else if params.alpha > alpha_star {
        EigenClass::ComplexPair
    } else {
        EigenClass::Degenerate
    };
    let matrix = coefficient_matrix(params, mode, 0.0);
    let a11 = matrix[0][0].re;
    let a22 = matrix[1][1].re;
    let det = a11 * a22 + coupling;
    let mu = Complex64::new(half_trace, 0.0);
    let (lambda1, lambda2) = if r2 < 0.0 || half_trace == 0.0 {
        (mu + r, mu - r)
    } else {
        // real roots of equal sign: form the larger one, divide for the other
        let big = mu - r;
        (Complex64::new(det, 0.0) / big, big)
    };
    Ok(EigenReport { lambda1, lambda2, alpha_star, classification, matrix })
}

impl EigenReport {
    pub fn trace(&self) -> Complex64 {
        self.matrix[0][0] + self.matrix[1][1]
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix[0][0] * self.matrix[1][1] - self.matrix[0][1] * self.matrix[1][0]
    }

    /// Eigenvector `(i k, lambda - a11)` of the coefficient matrix.
    pub fn eigenvector(&self, lambda: Complex64) -> [Complex64; 2] {
        [self.matrix[0][1], lambda - self.matrix[0][0]]
    }

    /// `exp(M t)` from the eigen-decomposition; the degenerate case uses the
    /// Jordan form `e^{lambda t}(I + t (M - lambda I))`.
    pub fn propagator(&self, t: f64) -> [[Complex64; 2]; 2] {
        let m = &self.matrix;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        if self.classification == EigenClass::Degenerate || self.lambda1 == self.lambda2 {
            let lam = 0.5 * (self.lambda1 + self.lambda2);
            let e = (lam * t).exp();
            return [
                [e * (one + t * (m[0][0] - lam)), e * t * m[0][1]],
                [e * t * m[1][0], e * (one + t * (m[1][1] - lam))],
            ];
        }
        let v1 = self.eigenvector(self.lambda1);
        let v2 = self.eigenvector(self.lambda2);
        let det_v = v1[0] * v2[1] - v2[0] * v1[1];
        if det_v == zero {
            return [[one, zero], [zero, one]];
        }
        let inv = [[v2[1] / det_v, -v2[0] / det_v], [-v1[1] / det_v, v1[0] / det_v]];
        let e1 = (self.lambda1 * t).exp();
        let e2 = (self.lambda2 * t).exp();
        let mut out = [[zero; 2]; 2];
        for (row, out_row) in out.iter_mut().enumerate() {
            for (col, cell) in out_row.iter_mut().enumerate() {
                *cell = v1[row] * e1 * inv[0][col] + v2[row] * e2 * inv[1][col];
            }
        }
        out
    }

    pub fn evolve(&self, state0: ModeState, t: f64) -> ModeState {
        apply(&self.propagator(t), state0)
    }
}

/// Shear-free inviscid evolution: a rotation with frequency
/// `k sqrt(alpha)/sqrt(k^2 + xi^2)`.
pub fn exact_rotation_inviscid(
    alpha: f64,
    mode: Mode,
    state0: ModeState,
    t: f64,
) -> Result<ModeState, LinearError> {
    if mode.k == 0 {
        return Err(LinearError::ZeroK);
    }
    if alpha < 0.0 {
        return Err(LinearError::NegativeAlpha(alpha));
    }
    let q = (mode.kf() * mode.kf() + mode.xi * mode.xi).sqrt();
    if alpha == 0.0 {
        return Ok(inviscid_couette_mode(0.0, mode, state0, t));
    }
    let sa = alpha.sqrt();
    let freq = mode.kf() * sa / q;
    let (s, c) = (freq * t).sin_cos();
    Ok(ModeState {
        omega_hat: c * state0.omega_hat + I * (q / sa) * s * state0.theta_hat,
        theta_hat: I * (sa / q) * s * state0.omega_hat + c * state0.theta_hat,
    })
}

/// Rotation period `2 pi sqrt(k^2 + xi^2) / (|k| sqrt(alpha))`.
pub fn rotation_period(alpha: f64, mode: Mode) -> f64 {
    2.0 * std::f64::consts::PI * (mode.kf() * mode.kf() + mode.xi * mode.xi).sqrt()
        / (mode.kf().abs() * alpha.sqrt())
}

/// `alpha |w|^2 + (k^2 + xi^2)|th|^2`, conserved by the inviscid rotation.
pub fn rotation_energy(alpha: f64, mode: Mode, state: ModeState) -> f64 {
    alpha * state.omega_hat.norm_sqr() + (mode.kf() * mode.kf() + mode.xi * mode.xi) * state.theta_hat.norm_sqr()
}

/// Inviscid, `alpha = 0` solution in the sheared frame: `(w0 + i k t th0, th0)`.
pub fn inviscid_couette_mode(_beta: f64, mode: Mode, state0: ModeState, t: f64) -> ModeState {
    ModeState {
        omega_hat: state0.omega_hat + I * mode.kf() * t * state0.theta_hat,
        theta_hat: state0.theta_hat,
    }
}

/// `gamma(alpha) = 1/4 + sqrt(1 - 4 alpha)/4`, the exponent of the leading
/// hypergeometric branch in `z = -t^2`.
///
/// As a power of `t` the vorticity grows like `t^(2 gamma)`; see
/// [`growth_exponent_in_time`].
pub fn growth_exponent_theory(alpha: f64) -> Result<f64, LinearError> {
    if alpha < 0.0 {
        return Err(LinearError::NegativeAlpha(alpha));
    }
    if alpha > 0.25 {
        return Err(LinearError::OutOfBranch { alpha, real_part: 0.25 });
    }
    Ok(0.25 + (1.0 - 4.0 * alpha).sqrt() / 4.0)
}

/// Growth exponent of `|w(t)| ~ t^p` for the rescaled second-order equation:
/// `p = 2 gamma(alpha) = 1/2 + sqrt(1 - 4 alpha)/2`.
pub fn growth_exponent_in_time(alpha: f64) -> Result<f64, LinearError> {
    growth_exponent_theory(alpha).map(|g| 2.0 * g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::simpson;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phase_integral_examples() {
        assert!((phase_integral(1, 0.0, 0.0, 2.0) - 8.0 / 3.0).abs() < 1e-15);
        assert!((phase_integral(1, 1.0, 0.0, 2.0) - 2.0 / 3.0).abs() < 1e-15);
        // frozen from composite Simpson of (3 - 2 tau)^2 on [1, 4]
        let oracle = simpson(|tau| (3.0 - 2.0 * tau).powi(2), 1.0, 4.0, 2000);
        assert!((oracle - 21.0).abs() < 1e-10);
        assert!((phase_integral(2, 3.0, 1.0, 4.0) - 21.0).abs() < 1e-12);
        assert!((phase_integral(0, 3.0, 1.0, 4.0) - 27.0).abs() < 1e-12);
    }

    #[test]
    fn heat_factor_examples() {
        assert_eq!(heat_factor(0.0, 0.0, 3, 2.0, 0.0, 5.0), 1.0);
        assert!((heat_factor(1.0, 0.0, 1, 0.0, 0.0, 1.0) - (-1f64).exp()).abs() < 1e-15);
        assert!((heat_factor(0.0, 1.0, 1, 1.0, 0.0, 2.0) - (-2.0f64 / 3.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn theta_alpha0_examples() {
        let p = Params { eta_y: 1.0, ..Params::default() };
        let m = Mode::new(1, 0.0);
        assert_eq!(exact_theta_alpha0(&p, m, c(2.0, 1.0), 0.0).unwrap(), c(2.0, 1.0));
        let v = exact_theta_alpha0(&p, m, c(1.0, 0.0), 1.0).unwrap();
        assert!((v.re - (-1.0f64 / 3.0).exp()).abs() < 1e-15);
        let inv = Params::default();
        assert_eq!(exact_theta_alpha0(&inv, m, c(0.3, -0.2), 17.0).unwrap(), c(0.3, -0.2));
        let bad = Params { alpha: 1.0, ..Params::default() };
        assert!(matches!(exact_theta_alpha0(&bad, m, c(1.0, 0.0), 1.0), Err(LinearError::AlphaNotZero(_))));
    }

    #[test]
    fn omega_alpha0_examples() {
        let inv = Params::default();
        let w = exact_omega_alpha0(&inv, Mode::new(1, 0.0), c(1.0, 0.0), c(1.0, 0.0), 3.0, 1e-10).unwrap();
        assert_eq!(w, c(1.0, 3.0));
        let p = Params { nu_x: 1.0, eta_x: 1.0, ..Params::default() };
        let w = exact_omega_alpha0(&p, Mode::new(1, 0.0), c(0.0, 0.0), c(1.0, 0.0), 1.0, 1e-10).unwrap();
        assert!((w - c(0.0, (-1f64).exp())).norm() < 1e-14);
        let q = Params { nu_x: 0.3, nu_y: 0.2, eta_x: 1.0, ..Params::default() };
        let m = Mode::new(2, 0.7);
        let w = exact_omega_alpha0(&q, m, c(0.5, 0.5), c(0.0, 0.0), 2.0, 1e-10).unwrap();
        let h = heat_factor(0.3, 0.2, 2, 0.7, 0.0, 2.0);
        assert!((w - c(0.5, 0.5) * h).norm() < 1e-15);
    }

    #[test]
    fn omega1_examples() {
        // nu = 0, eta_x = 1: omega_1 is the constant i theta0 int_0^inf e^{-s} ds
        let p = Params { eta_x: 1.0, ..Params::default() };
        let w1 = omega1_profile(&p, Mode::new(1, 0.0), c(1.0, 0.0), 50.0).unwrap();
        assert!((w1 - c(0.0, 1.0)).norm() < 1e-10);
        let m = Mode::new(2, 0.0);
        let f2 = duhamel_term(&p, m, c(1.0, 0.0), 1.0, 1e-12).unwrap();
        let w1 = omega1_profile(&p, m, c(1.0, 0.0), 1.0).unwrap();
        let e4 = (-4f64).exp();
        assert!((f2 - c(0.0, 2.0 * (1.0 - e4) / 4.0)).norm() < 1e-12);
        assert!((w1 - f2 - c(0.0, 2.0 * e4 / 4.0)).norm() < 1e-10);
        let eq = Params { nu_x: 0.4, eta_x: 0.4, nu_y: 0.1, eta_y: 0.1, ..Params::default() };
        let m = Mode::new(1, 0.5);
        assert_eq!(
            omega1_profile(&eq, m, c(1.0, 0.0), 2.0).unwrap(),
            duhamel_term(&eq, m, c(1.0, 0.0), 2.0, 1e-10).unwrap()
        );
    }

    #[test]
    fn omega1_case_split() {
        let mk = |nx, ny, ex, ey| Params { nu_x: nx, nu_y: ny, eta_x: ex, eta_y: ey, ..Params::default() };
        assert_eq!(Omega1Case::classify(&mk(0.1, 0.1, 0.1, 0.1)), Omega1Case::EqualCoefficients);
        assert_eq!(Omega1Case::classify(&mk(0.1, 0.1, 0.2, 0.1)), Omega1Case::NuLeEtaBoth);
        assert_eq!(Omega1Case::classify(&mk(0.3, 0.1, 0.2, 0.1)), Omega1Case::NuGeEtaBoth);
        assert_eq!(Omega1Case::classify(&mk(0.1, 0.3, 0.2, 0.1)), Omega1Case::MixedXLe);
        assert_eq!(Omega1Case::classify(&mk(0.3, 0.1, 0.2, 0.2)), Omega1Case::MixedXGe);
    }

    #[test]
    fn omega1_every_case_tracks_duhamel_at_late_times() {
        let cases = [
            Params { nu_x: 0.1, nu_y: 0.05, eta_x: 0.8, eta_y: 0.4, ..Params::default() },
            Params { nu_x: 0.8, nu_y: 0.4, eta_x: 0.1, eta_y: 0.05, ..Params::default() },
            Params { nu_x: 0.1, nu_y: 0.4, eta_x: 0.8, eta_y: 0.05, ..Params::default() },
            Params { nu_x: 0.8, nu_y: 0.05, eta_x: 0.1, eta_y: 0.4, ..Params::default() },
        ];
        let m = Mode::new(1, 0.3);
        for p in cases {
            let early = (duhamel_term(&p, m, c(1.0, 0.0), 1.0, 1e-12).unwrap()
                - omega1_profile(&p, m, c(1.0, 0.0), 1.0).unwrap())
            .norm();
            let late = (duhamel_term(&p, m, c(1.0, 0.0), 6.0, 1e-12).unwrap()
                - omega1_profile(&p, m, c(1.0, 0.0), 6.0).unwrap())
            .norm();
            assert!(late < 1e-3 * early, "{:?}: {early} {late}", Omega1Case::classify(&p));
        }
    }

    #[test]
    fn eigen_examples() {
        let p = Params { alpha: 1.0, beta: 0.0, ..Params::default() };
        let e = eigen_no_shear(&p, Mode::new(1, 0.0)).unwrap();
        assert_eq!(e.classification, EigenClass::ComplexPair);
        assert_eq!(e.alpha_star, 0.0);
        let mut lams = [e.lambda1, e.lambda2];
        lams.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((lams[0] - c(0.0, -1.0)).norm() < 1e-15 && (lams[1] - c(0.0, 1.0)).norm() < 1e-15);

        let p = Params { alpha: 0.01, beta: 0.0, eta_x: 1.0, ..Params::default() };
        let e = eigen_no_shear(&p, Mode::new(1, 0.0)).unwrap();
        assert!((e.alpha_star - 0.25).abs() < 1e-15);
        assert_eq!(e.classification, EigenClass::RealDistinct);
        let r = (0.25f64 - 0.01).sqrt();
        let mut re = [e.lambda1.re, e.lambda2.re];
        re.sort_by(f64::total_cmp);
        assert!((re[0] - (-0.5 - r)).abs() < 1e-14 && (re[1] - (-0.5 + r)).abs() < 1e-14);

        let p = Params { alpha: 0.7, beta: 0.0, nu_x: 0.3, eta_x: 0.3, nu_y: 0.2, eta_y: 0.2, sobolev_n: 0 };
        let e = eigen_no_shear(&p, Mode::new(2, 1.5)).unwrap();
        assert_eq!(e.classification, EigenClass::ComplexPair);
        let expect = -(0.3 * 4.0 + 0.2 * 2.25);
        assert!((e.lambda1.re - expect).abs() < 1e-14 && (e.lambda2.re - expect).abs() < 1e-14);

        assert!(matches!(eigen_no_shear(&p, Mode::new(0, 1.0)), Err(LinearError::ZeroK)));
    }

    #[test]
    fn degenerate_jordan_matches_limit() {
        let base = Params { beta: 0.0, eta_x: 1.0, ..Params::default() };
        let m = Mode::new(1, 0.0);
        let star = eigen_no_shear(&base, m).unwrap().alpha_star;
        let degen = eigen_no_shear(&Params { alpha: star, ..base }, m).unwrap();
        assert_eq!(degen.classification, EigenClass::Degenerate);
        let near = eigen_no_shear(&Params { alpha: star * (1.0 + 1e-9), ..base }, m).unwrap();
        let s0 = ModeState::real(1.0, 0.5);
        let d = degen.evolve(s0, 2.0).max_abs_diff(&near.evolve(s0, 2.0));
        assert!(d < 1e-5, "{d}");
    }

    #[test]
    fn rotation_examples() {
        let s = exact_rotation_inviscid(1.0, Mode::new(1, 0.0), ModeState::real(1.0, 0.0), std::f64::consts::FRAC_PI_2).unwrap();
        assert!(s.max_abs_diff(&ModeState::new(c(0.0, 0.0), c(0.0, 1.0))) < 1e-15);
        let s0 = ModeState::new(c(0.3, 0.1), c(-0.2, 0.4));
        assert_eq!(exact_rotation_inviscid(2.0, Mode::new(2, 1.0), s0, 0.0).unwrap(), s0);
        let s = exact_rotation_inviscid(4.0, Mode::new(1, 0.0), ModeState::real(0.0, 1.0), std::f64::consts::FRAC_PI_2).unwrap();
        assert!(s.max_abs_diff(&ModeState::real(0.0, -1.0)) < 1e-15);
    }

    #[test]
    fn couette_examples() {
        let s0 = ModeState::real(1.0, 1.0);
        assert_eq!(inviscid_couette_mode(1.0, Mode::new(0, 2.0), s0, 9.0), s0);
        assert_eq!(inviscid_couette_mode(1.0, Mode::new(1, 0.0), s0, 5.0), ModeState::new(c(1.0, 5.0), c(1.0, 0.0)));
    }

    #[test]
    fn growth_exponent_examples() {
        assert!((growth_exponent_theory(3.0 / 16.0).unwrap() - 0.375).abs() < 1e-15);
        assert!((growth_exponent_theory(1e-12).unwrap() - 0.5).abs() < 1e-11);
        assert_eq!(growth_exponent_theory(0.25).unwrap(), 0.25);
        assert!(matches!(growth_exponent_theory(0.3), Err(LinearError::OutOfBranch { real_part, .. }) if real_part == 0.25));
        assert!((growth_exponent_in_time(0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn phase_lower_bound(k in 1i64..8, xi in -40.0f64..40.0, t in 0.01f64..50.0) {
            let v = phase_integral(k, xi, 0.0, t);
            let floor = (k * k) as f64 * t * t * t / 12.0;
            prop_assert!(v >= floor * (1.0 - 1e-14));
        }

        #[test]
        fn phase_additivity(k in -6i64..6, xi in -20.0f64..20.0, s in 0.0f64..10.0, d1 in 0.0f64..10.0, d2 in 0.0f64..10.0) {
            let (u, t) = (s + d1, s + d1 + d2);
            let sum = phase_integral(k, xi, s, u) + phase_integral(k, xi, u, t);
            let whole = phase_integral(k, xi, s, t);
            prop_assert!((sum - whole).abs() <= 1e-12 * whole.max(1e-300));
        }

        #[test]
        fn heat_factor_in_unit_interval(cx in 0.0f64..2.0, cy in 0.0f64..2.0, k in -5i64..5, xi in -5.0f64..5.0, s in 0.0f64..3.0, d in 0.0f64..3.0) {
            let h = heat_factor(cx, cy, k, xi, s, s + d);
            prop_assert!(h > 0.0 || (cx * d + cy * d) > 0.0);
            prop_assert!(h <= 1.0);
        }

        #[test]
        fn rotation_conserves_energy(alpha in 0.01f64..5.0, k in 1i64..6, xi in -5.0f64..5.0, t in 0.0f64..50.0, a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let m = Mode::new(k, xi);
            let s0 = ModeState::new(c(a, b), c(b, -a));
            let s = exact_rotation_inviscid(alpha, m, s0, t).unwrap();
            let e0 = rotation_energy(alpha, m, s0);
            prop_assert!((rotation_energy(alpha, m, s) - e0).abs() <= 1e-12 * e0.max(1e-300));
        }

        #[test]
        fn eigen_trace_and_determinant(alpha in 0.0f64..3.0, nx in 0.0f64..2.0, ny in 0.0f64..2.0, ex in 0.0f64..2.0, ey in 0.0f64..2.0, k in 1i64..5, xi in -4.0f64..4.0) {
            let p = Params { alpha, beta: 0.0, nu_x: nx, nu_y: ny, eta_x: ex, eta_y: ey, sobolev_n: 0 };
            let e = eigen_no_shear(&p, Mode::new(k, xi)).unwrap();
            let tr = e.trace();
            let det = e.determinant();
            prop_assert!((e.lambda1 + e.lambda2 - tr).norm() <= 1e-12 * tr.norm().max(1e-300));
            prop_assert!((e.lambda1 * e.lambda2 - det).norm() <= 1e-12 * det.norm().max(1e-300));
        }

        #[test]
        fn hermitian_pairs_evolve_conjugately(nx in 0.0f64..1.0, ex in 0.0f64..1.0, ny in 0.0f64..1.0, ey in 0.0f64..1.0, k in 1i64..4, xi in -3.0f64..3.0, t in 0.0f64..4.0, a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let p = Params { alpha: 0.0, beta: 1.0, nu_x: nx, nu_y: ny, eta_x: ex, eta_y: ey, sobolev_n: 0 };
            let w0 = c(a, b);
            let th0 = c(b, a);
            let plus = exact_omega_alpha0(&p, Mode::new(k, xi), w0, th0, t, 1e-12).unwrap();
            let minus = exact_omega_alpha0(&p, Mode::new(-k, -xi), w0.conj(), th0.conj(), t, 1e-12).unwrap();
            prop_assert!((plus - minus.conj()).norm() < 1e-11);
        }
    }
}
