//! The mixing multiplier `M`, the weight `A = M <D>^N`, and the energy
//! functionals evaluated on modal states and spectral fields.
//!
//! `M` is built for unit shear; for shear rate `beta >= 0` the weighted
//! energies evaluate it at time `beta * t`.

use thiserror::Error;

use crate::model::{sobolev_weight_sq, EnergyReport, Mode, ModeState, Params, SpectralField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnergyError {
    #[error("operation requires k != 0")]
    ZeroK,
    #[error("operation requires beta = 0, got {0}")]
    ShearNotZero(f64),
}

/// Lower bound of our multiplier over all `(t, k, xi)`: `e^{-pi}`.
pub const MULTIPLIER_FLOOR: f64 = 0.043_213_918_263_772_25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierParams {
    pub floor_c: f64,
    pub construction: &'static str,
}

impl Default for MultiplierParams {
    fn default() -> Self {
        MultiplierParams { floor_c: MULTIPLIER_FLOOR, construction: "exact-integral" }
    }
}

/// `M(t,k,xi) = exp(-(1/|k|)[arctan(t - xi/k) + arctan(xi/k)])`, and 1 for `k = 0`.
pub fn multiplier_m(t: f64, mode: Mode) -> f64 {
    if mode.k == 0 {
        return 1.0;
    }
    let k = mode.kf();
    let r = mode.xi / k;
    (-((t - r).atan() + r.atan()) / k.abs()).exp()
}

/// `-dM/dt / M = |k| / (k^2 + (xi - k t)^2)`.
pub fn mdot_ratio(t: f64, mode: Mode) -> Result<f64, EnergyError> {
    if mode.k == 0 {
        return Err(EnergyError::ZeroK);
    }
    let k = mode.kf();
    let d = mode.xi - k * t;
    Ok(k.abs() / (k * k + d * d))
}

/// `-dM/dt * M`; zero on the `k = 0` channel where `M` is constant.
pub fn minus_mdot_m(t: f64, mode: Mode) -> f64 {
    match mdot_ratio(t, mode) {
        Ok(r) => r * multiplier_m(t, mode).powi(2),
        Err(_) => 0.0,
    }
}

/// `A^2 = M^2 (1 + k^2 + xi^2)^N` at frame time `t` and shear `beta`.
pub fn weight_a_sq(params: &Params, mode: Mode, t: f64) -> f64 {
    multiplier_m(params.beta * t, mode).powi(2) * sobolev_weight_sq(params.sobolev_n, mode)
}

fn y_rate(cx: f64, cy: f64, mode: Mode, xi: f64) -> f64 {
    cx * mode.kf() * mode.kf() + cy * xi * xi
}

/// Shear-free energy `alpha ||w||^2_{H^N} + ||grad th||^2_{H^N}` with its exact
/// decay rate: `d/dt value = -dissipation` along the shear-free linear flow,
/// where the dissipation is
/// `2 sum w_N [alpha (nu_x k^2 + nu_y xi^2)|w|^2 + (eta_x k^2 + eta_y xi^2)(k^2 + xi^2)|th|^2]`.
pub fn energy_no_shear(states: &[(Mode, ModeState)], params: &Params) -> Result<EnergyReport, EnergyError> {
    if params.beta != 0.0 {
        return Err(EnergyError::ShearNotZero(params.beta));
    }
    let mut report = EnergyReport::new(0.0);
    let (value, dissipation) = sheared_sums(states.iter().copied(), params, 0.0);
    report.insert("no_shear", value, dissipation);
    Ok(report)
}

fn sheared_sums(states: impl Iterator<Item = (Mode, ModeState)>, params: &Params, t: f64) -> (f64, f64) {
    let mut value = 0.0;
    let mut diss = 0.0;
    for (mode, s) in states {
        let w = sobolev_weight_sq(params.sobolev_n, mode);
        let xp = mode.xi_phys(params.beta, t);
        let q = mode.kf() * mode.kf() + xp * xp;
        let w2 = s.omega_hat.norm_sqr();
        let th2 = s.theta_hat.norm_sqr();
        value += w * (params.alpha * w2 + q * th2);
        diss += 2.0
            * w
            * (params.alpha * y_rate(params.nu_x, params.nu_y, mode, xp) * w2
                + y_rate(params.eta_x, params.eta_y, mode, xp) * q * th2);
    }
    (value, diss)
}

/// `E(t) = alpha ||w||^2_{H^N} + ||d_x th||^2_{H^N} + ||(d_y - t beta d_x) th||^2_{H^N}`.
///
/// On stored (sheared-frame) data the moving-frame gradient has symbol
/// `(k, xi - beta k t)`, so the temperature weight is `k^2 + (xi - beta k t)^2`.
/// The dissipation entry is the dissipative part of `-dE/dt`; the remaining
/// part of the rate is [`sheared_transfer_rate`].
pub fn energy_sheared(states: &[(Mode, ModeState)], params: &Params, t: f64) -> EnergyReport {
    let mut report = EnergyReport::new(t);
    let (value, dissipation) = sheared_sums(states.iter().copied(), params, t);
    report.insert("sheared", value, dissipation);
    report
}

/// `sum w_N d/dt(k^2 + (xi - beta k t)^2) |th|^2 = -2 beta sum w_N k (xi - beta k t)|th|^2`,
/// the non-dissipative part of `dE/dt` produced by the tilting of the gradient.
pub fn sheared_transfer_rate(states: &[(Mode, ModeState)], params: &Params, t: f64) -> f64 {
    states
        .iter()
        .map(|(mode, s)| {
            let w = sobolev_weight_sq(params.sobolev_n, *mode);
            -2.0 * params.beta * mode.kf() * mode.xi_phys(params.beta, t) * w * s.theta_hat.norm_sqr()
        })
        .sum()
}

/// Pointwise-in-time integrands of the bootstrap energy of one field.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BootstrapSample {
    /// `||A f||^2`
    pub sup_term: f64,
    /// `||sqrt(c) grad_t A f||^2` with anisotropic coefficients `c`.
    pub gradient_term: f64,
    /// `||sqrt(-M' M) <D>^N f||^2`
    pub multiplier_term: f64,
}

/// Evaluates the bootstrap integrands of `field` with diffusivities `(cx, cy)`.
pub fn bootstrap_sample(field: &SpectralField, params: &Params, cx: f64, cy: f64) -> BootstrapSample {
    let t = field.frame_time;
    let mut out = BootstrapSample::default();
    for ((r, c), z) in field.data.indexed_iter() {
        let a2 = z.norm_sqr();
        if a2 == 0.0 {
            continue;
        }
        let mode = field.mode_at(r, c);
        let sob = sobolev_weight_sq(params.sobolev_n, mode);
        let m = multiplier_m(params.beta * t, mode);
        let xp = mode.xi_phys(params.beta, t);
        out.sup_term += m * m * sob * a2;
        out.gradient_term += y_rate(cx, cy, mode, xp) * m * m * sob * a2;
        out.multiplier_term += params.beta.abs() * minus_mdot_m(params.beta * t, mode) * sob * a2;
    }
    out
}

/// Running `E_w`, `E_th`: supremum of `||A f||^2` plus trapezoidal time
/// integrals of the gradient and multiplier terms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BootstrapAccumulator {
    pub sup_omega: f64,
    pub sup_theta: f64,
    pub int_omega: f64,
    pub int_theta: f64,
    last: Option<(f64, f64, f64)>,
}

impl BootstrapAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the snapshot `(omega, theta)` taken at `omega.frame_time`.
    pub fn push(&mut self, omega: &SpectralField, theta: &SpectralField, params: &Params) {
        let so = bootstrap_sample(omega, params, params.nu_x, params.nu_y);
        let st = bootstrap_sample(theta, params, params.eta_x, params.eta_y);
        let t = omega.frame_time;
        let io = so.gradient_term + so.multiplier_term;
        let it = st.gradient_term + st.multiplier_term;
        self.sup_omega = self.sup_omega.max(so.sup_term);
        self.sup_theta = self.sup_theta.max(st.sup_term);
        if let Some((t0, io0, it0)) = self.last {
            let h = t - t0;
            self.int_omega += 0.5 * h * (io0 + io);
            self.int_theta += 0.5 * h * (it0 + it);
        }
        self.last = Some((t, io, it));
    }

    pub fn e_omega(&self) -> f64 {
        self.sup_omega + self.int_omega
    }

    pub fn e_theta(&self) -> f64 {
        self.sup_theta + self.int_theta
    }
}

/// `(E_w, E_th)` over a uniformly sampled series of `(omega, theta)` snapshots.
///
/// Snapshot times are taken from the fields' frame times; `dt` is used when
/// the series carries no distinct frame times (all equal), in which case the
/// `k`-th snapshot is placed at `k * dt`.
pub fn energy_bootstrap(series: &[(SpectralField, SpectralField)], params: &Params, dt: f64) -> (f64, f64) {
    let mut acc = BootstrapAccumulator::new();
    let distinct = series.windows(2).all(|w| w[1].0.frame_time > w[0].0.frame_time);
    for (i, (w, th)) in series.iter().enumerate() {
        if distinct || series.len() < 2 {
            acc.push(w, th, params);
        } else {
            let (mut w, mut th) = (w.clone(), th.clone());
            w.frame_time = i as f64 * dt;
            th.frame_time = i as f64 * dt;
            acc.push(&w, &th, params);
        }
    }
    (acc.e_omega(), acc.e_theta())
}

/// Large-`alpha` functional `alpha ||A w||^2 + <A th, -Delta_t A th>`.
///
/// Entry `large_alpha` carries the gradient-form dissipation
/// `alpha ||sqrt(nu) grad_t A w||^2 + ||sqrt(eta) grad_t A th||^2`; entry
/// `large_alpha_squared` the form `alpha ||sqrt(nu) grad_t A w||^2 + eta ||Delta_t A th||^2`.
pub fn energy_largealpha(omega: &SpectralField, theta: &SpectralField, params: &Params) -> EnergyReport {
    let t = omega.frame_time;
    let mut value = 0.0;
    let mut diss_w = 0.0;
    for ((r, c), z) in omega.data.indexed_iter() {
        let mode = omega.mode_at(r, c);
        let a2 = weight_a_sq(params, mode, t) * z.norm_sqr();
        let xp = mode.xi_phys(params.beta, t);
        value += params.alpha * a2;
        diss_w += params.alpha * y_rate(params.nu_x, params.nu_y, mode, xp) * a2;
    }
    let mut diss_grad = 0.0;
    let mut diss_sq = 0.0;
    for ((r, c), z) in theta.data.indexed_iter() {
        let mode = theta.mode_at(r, c);
        let a2 = weight_a_sq(params, mode, t) * z.norm_sqr();
        let xp = mode.xi_phys(params.beta, t);
        let q = mode.kf() * mode.kf() + xp * xp;
        value += q * a2;
        diss_grad += y_rate(params.eta_x, params.eta_y, mode, xp) * a2;
        diss_sq += y_rate(params.eta_x, params.eta_y, mode, xp) * q * a2;
    }
    let mut report = EnergyReport::new(t);
    report.insert("large_alpha", value, diss_w + diss_grad);
    report.insert("large_alpha_squared", value, diss_w + diss_sq);
    report
}

/// Modal form of [`energy_largealpha`] for a list of single-mode states.
pub fn energy_largealpha_modes(states: &[(Mode, ModeState)], params: &Params, t: f64) -> f64 {
    states
        .iter()
        .map(|(mode, s)| {
            let a2 = weight_a_sq(params, *mode, t);
            a2 * (params.alpha * s.omega_hat.norm_sqr() + mode.lap_symbol(params.beta, t) * s.theta_hat.norm_sqr())
        })
        .sum()
}
