//! Dealiased pseudospectral solver for the nonlinear system in the frame
//! moving with the shear,
//!
//! ```text
//! d_t w  + v . grad_t w  = nu_x d_x^2 w  + nu_y (d_y - beta t d_x)^2 w  + d_x th
//! d_t th + v . grad_t th = eta_x d_x^2 th + eta_y (d_y - beta t d_x)^2 th - alpha v_2
//! ```
//!
//! with `v = grad_t^perp Delta_t^{-1} w`, on the torus `[0, 2 pi) x [0, 2 pi / dxi)`.
//! Lattice labels are co-moving: the physical vertical frequency of stored
//! mode `(k, xi)` at time `t` is `xi - beta k t`.

pub mod fft;
pub mod ic;
pub mod snapshot;

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::{energy_largealpha, energy_sheared, BootstrapAccumulator};
use crate::linear::heat_exponent;
use crate::model::{validate, EnergyReport, Mode, ModeState, ModelError, Params, SpectralField};
use fft::Fft2;
pub use ic::{initial_fields, IcProfile, IcSpec, ThetaNorm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("CFL violation at t = {t}: dt = {dt:e} exceeds the limit {limit:e}")]
    CflViolation { t: f64, dt: f64, limit: f64 },
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Transform grid `2 k_max x 2 xi_max` with vertical lattice spacing `dxi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub k_max: usize,
    pub xi_max: usize,
    pub dxi: f64,
}

impl GridSpec {
    /// An `n x n` transform grid.
    pub fn square(n: usize, dxi: f64) -> Self {
        GridSpec { k_max: n / 2, xi_max: n / 2, dxi }
    }

    pub fn nx(&self) -> usize {
        2 * self.k_max
    }

    pub fn ny(&self) -> usize {
        2 * self.xi_max
    }

    /// Retained half-widths `(K_r, Xi_r)` after truncation at `fraction`.
    pub fn retained(&self, fraction: f64) -> (usize, usize) {
        let cut = |m: usize| ((fraction * m as f64 + 1e-9).floor() as usize).min(m.saturating_sub(1));
        (cut(self.k_max), cut(self.xi_max))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum HorizonPolicy {
    /// Compute and report the shear-drift horizon only.
    #[default]
    Report,
    /// Stop the run at the horizon.
    Enforce,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: Params,
    pub grid: GridSpec,
    pub dt: f64,
    pub t_end: f64,
    pub dealias_fraction: f64,
    pub ic: IcSpec,
    pub snapshot_every: usize,
    /// Include the advection terms (off: linear couplings and dissipation only).
    pub nonlinear: bool,
    pub horizon: HorizonPolicy,
    /// CFL number.
    pub cfl: f64,
    /// Keep every recorded state in [`SimOutput::snapshots`].
    pub keep_snapshots: bool,
}

impl SimConfig {
    pub fn new(params: Params, grid: GridSpec, dt: f64, t_end: f64, ic: IcSpec) -> Self {
        SimConfig {
            params,
            grid,
            dt,
            t_end,
            dealias_fraction: 2.0 / 3.0,
            ic,
            snapshot_every: 1,
            nonlinear: true,
            horizon: HorizonPolicy::Report,
            cfl: 0.5,
            keep_snapshots: false,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        validate(self.params)?;
        let bad = |m: &str| Err(SimError::InvalidConfig(m.to_string()));
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad("dt must be positive");
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return bad("t_end must be non-negative");
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return bad("dealias_fraction must lie in (0, 1]");
        }
        if self.snapshot_every == 0 {
            return bad("snapshot_every must be at least 1");
        }
        if self.grid.k_max < 2 || self.grid.xi_max < 2 || !(self.grid.dxi > 0.0) {
            return bad("grid needs k_max, xi_max >= 2 and dxi > 0");
        }
        if !(self.cfl > 0.0) {
            return bad("cfl must be positive");
        }
        if !(self.ic.eps_omega >= 0.0 && self.ic.eps_theta >= 0.0) {
            return bad("initial amplitudes must be non-negative");
        }
        Ok(())
    }

    pub fn retained(&self) -> (usize, usize) {
        self.grid.retained(self.dealias_fraction)
    }

    /// `Xi_r dxi / (beta K_r)`: time after which the co-moving frequency of
    /// the widest retained horizontal mode leaves the retained vertical band.
    pub fn horizon_time(&self) -> f64 {
        let (kr, xr) = self.retained();
        if self.params.beta == 0.0 || kr == 0 {
            f64::INFINITY
        } else {
            xr as f64 * self.grid.dxi / (self.params.beta.abs() * kr as f64)
        }
    }

    /// Physical grid spacing `min(2 pi / n_x, 2 pi / (dxi n_y))`.
    pub fn min_spacing(&self) -> f64 {
        let dx = std::f64::consts::TAU / self.grid.nx() as f64;
        let dy = std::f64::consts::TAU / (self.grid.dxi * self.grid.ny() as f64);
        dx.min(dy)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub omega: SpectralField,
    pub theta: SpectralField,
    pub t: f64,
}

impl SimState {
    pub fn initial(config: &SimConfig) -> Self {
        let (kr, xr) = config.retained();
        let (omega, theta) = initial_fields(&config.ic, &config.params, kr, xr, config.grid.dxi);
        SimState { omega, theta, t: 0.0 }
    }

    pub fn mode_states(&self) -> Vec<(Mode, ModeState)> {
        self.omega
            .data
            .indexed_iter()
            .map(|((r, c), w)| (self.omega.mode_at(r, c), ModeState::new(*w, self.theta.data[[r, c]])))
            .collect()
    }

    fn set_time(&mut self, t: f64) {
        self.t = t;
        self.omega.frame_time = t;
        self.theta.frame_time = t;
    }
}

/// `v = grad_t^perp Delta_t^{-1} w`: `v_hat = i (xi_p, -k) w_hat / (k^2 + xi_p^2)`
/// with `xi_p = xi - beta k t`, and zero on the `(0, 0)` mode.
pub fn velocity_from_vorticity(omega: &SpectralField, t: f64, beta: f64) -> (SpectralField, SpectralField) {
    let mut v1 = omega.same_shape();
    let mut v2 = omega.same_shape();
    v1.frame_time = t;
    v2.frame_time = t;
    for ((r, c), w) in omega.data.indexed_iter() {
        let mode = omega.mode_at(r, c);
        let xp = mode.xi_phys(beta, t);
        let q = mode.kf() * mode.kf() + xp * xp;
        if q == 0.0 {
            continue;
        }
        v1.data[[r, c]] = Complex64::new(0.0, xp / q) * w;
        v2.data[[r, c]] = Complex64::new(0.0, -mode.kf() / q) * w;
    }
    (v1, v2)
}

/// Random Hermitian fields filling the whole retained lattice, each with
/// `L^2` norm `amp`, placed at frame time `t`.
pub fn random_state(config: &SimConfig, seed: u64, amp: f64, t: f64) -> SimState {
    let (kr, xr) = config.retained();
    let mut spec = IcSpec::random(kr as i64, xr as f64 * config.grid.dxi, amp, amp, seed);
    spec.zero_mean_x = false;
    let p = Params { sobolev_n: 0, ..config.params };
    let (mut omega, mut theta) = initial_fields(&spec, &p, kr, xr, config.grid.dxi);
    omega.frame_time = t;
    theta.frame_time = t;
    SimState { omega, theta, t }
}

/// Direct convolution of `-(v . grad_t f)` on the retained lattice, with `v`
/// the velocity of `omega`. Costs `O(n^4)`; a reference for small grids.
pub fn direct_advection(omega: &SpectralField, f: &SpectralField, t: f64, beta: f64) -> SpectralField {
    let (v1, v2) = velocity_from_vorticity(omega, t, beta);
    let mut out = f.same_shape();
    let (kr, xr) = (f.grid_k as i64, f.grid_xi as i64);
    let i = Complex64::new(0.0, 1.0);
    for k1 in -kr..=kr {
        for j1 in -xr..=xr {
            for k2 in -kr..=kr {
                for j2 in -xr..=xr {
                    let (k, j) = (k1 + k2, j1 + j2);
                    if k.abs() > kr || j.abs() > xr {
                        continue;
                    }
                    let m2 = Mode::new(k2, j2 as f64 * f.dxi);
                    let g1 = i * m2.kf() * f.get(k2, j2);
                    let g2 = i * m2.xi_phys(beta, t) * f.get(k2, j2);
                    let term = v1.get(k1, j1) * g1 + v2.get(k1, j1) * g2;
                    out.set(k, j, out.get(k, j) - term);
                }
            }
        }
    }
    out
}

/// Transform buffers and per-mode tables for one lattice.
#[derive(Debug)]
pub struct Solver {
    params: Params,
    fft: Fft2,
    ks: Vec<f64>,
    xis: Vec<f64>,
    buf_v: Vec<Complex64>,
    buf_w: Vec<Complex64>,
    buf_th: Vec<Complex64>,
    nonlinear: bool,
    cfl: f64,
    spacing: f64,
    template: SpectralField,
}

impl Solver {
    pub fn new(config: &SimConfig) -> Result<Self, SimError> {
        config.validate()?;
        let (kr, xr) = config.retained();
        let template = SpectralField::zeros(kr, xr, config.grid.dxi, 0.0);
        let (nr, nc) = template.shape();
        let n = config.grid.nx() * config.grid.ny();
        Ok(Solver {
            params: config.params,
            fft: Fft2::new(config.grid.nx(), config.grid.ny()),
            ks: (0..nr).map(|r| template.k_of(r) as f64).collect(),
            xis: (0..nc).map(|c| template.j_of(c) as f64 * config.grid.dxi).collect(),
            buf_v: vec![Complex64::default(); n],
            buf_w: vec![Complex64::default(); n],
            buf_th: vec![Complex64::default(); n],
            nonlinear: config.nonlinear,
            cfl: config.cfl,
            spacing: config.min_spacing(),
            template,
        })
    }

    pub fn zero_field(&self, t: f64) -> SpectralField {
        let mut f = self.template.clone();
        f.frame_time = t;
        f
    }

    /// Explicit right-hand side `(N_w, N_th)` at time `t`: advection plus the
    /// linear couplings `d_x th` and `-alpha v_2`. Also returns the largest
    /// advecting speed on the grid.
    pub fn rhs(&mut self, omega: &SpectralField, theta: &SpectralField, t: f64) -> (SpectralField, SpectralField, f64) {
        let beta = self.params.beta;
        let alpha = self.params.alpha;
        let mut n_w = self.zero_field(t);
        let mut n_th = self.zero_field(t);
        let mut vmax = 0.0f64;
        if self.nonlinear {
            let (ks, xis) = (&self.ks, &self.xis);
            let xp = |r: usize, c: usize| xis[c] - beta * ks[r] * t;
            // v_1 + i v_2 = (k + i xi_p) w / q
            self.fft.scatter(omega, &mut self.buf_v, |r, c| {
                let (k, x) = (ks[r], xp(r, c));
                let q = k * k + x * x;
                if q == 0.0 {
                    Complex64::default()
                } else {
                    Complex64::new(k / q, x / q)
                }
            });
            // d_X f + i (d_Y - beta t d_X) f = (-xi_p + i k) f
            let grad = |r: usize, c: usize| Complex64::new(-xp(r, c), ks[r]);
            self.fft.scatter(omega, &mut self.buf_w, grad);
            self.fft.scatter(theta, &mut self.buf_th, grad);
            self.fft.inverse(&mut self.buf_v);
            self.fft.inverse(&mut self.buf_w);
            self.fft.inverse(&mut self.buf_th);
            let bt = beta * t;
            for ((v, w), th) in self.buf_v.iter().zip(self.buf_w.iter_mut()).zip(&self.buf_th) {
                let (v1, v2) = (v.re, v.im);
                vmax = vmax.max((v1 - bt * v2).abs()).max(v2.abs());
                *w = Complex64::new(v1 * w.re + v2 * w.im, v1 * th.re + v2 * th.im);
            }
            self.fft.forward(&mut self.buf_w);
            self.fft.gather_pair(&self.buf_w, &mut n_w, &mut n_th);
            n_w.data.mapv_inplace(|z| -z);
            n_th.data.mapv_inplace(|z| -z);
        }
        let (nr, nc) = n_w.shape();
        for r in 0..nr {
            let k = self.ks[r];
            for c in 0..nc {
                let x = self.xis[c] - beta * k * t;
                let q = k * k + x * x;
                n_w.data[[r, c]] += Complex64::new(0.0, k) * theta.data[[r, c]];
                if q > 0.0 {
                    n_th.data[[r, c]] += Complex64::new(0.0, k * alpha / q) * omega.data[[r, c]];
                }
            }
        }
        (n_w, n_th, vmax)
    }

    fn factors(&self, cx: f64, cy: f64, s: f64, t: f64) -> Array2<f64> {
        let mut out = Array2::zeros(self.template.shape());
        for ((r, c), v) in out.indexed_iter_mut() {
            let mode = Mode::new(self.ks[r] as i64, self.xis[c]);
            *v = (-heat_exponent(cx, cy, mode, self.params.beta, s, t)).exp();
        }
        out
    }

    /// Advances `state` by `dt` with the integrating-factor RK4 scheme whose
    /// factors are the exact per-mode heat decays over the substeps.
    pub fn step(&mut self, state: &SimState, dt: f64) -> Result<SimState, SimError> {
        let p = self.params;
        let (t, h) = (state.t, dt);
        let tm = t + 0.5 * h;
        let w1 = self.factors(p.nu_x, p.nu_y, t, tm);
        let w2 = self.factors(p.nu_x, p.nu_y, tm, t + h);
        let th1 = self.factors(p.eta_x, p.eta_y, t, tm);
        let th2 = self.factors(p.eta_x, p.eta_y, tm, t + h);
        let wf = &w1 * &w2;
        let thf = &th1 * &th2;

        let (k1w, k1t, vmax) = self.rhs(&state.omega, &state.theta, t);
        if vmax > 0.0 {
            let limit = self.cfl * self.spacing / vmax;
            if h > limit {
                return Err(SimError::CflViolation { t, dt: h, limit });
            }
        }
        let half = 0.5 * h;
        let stage = |u: &SpectralField, k: &SpectralField, f: &Array2<f64>, g: Option<&Array2<f64>>, c: f64, time: f64| {
            let mut out = u.clone();
            out.frame_time = time;
            match g {
                // f (u + c k)
                None => Zip::from(&mut out.data).and(&k.data).and(f).for_each(|o, k, f| *o = (*o + c * k) * f),
                // f u + c g k
                Some(g) => Zip::from(&mut out.data)
                    .and(&k.data)
                    .and(f)
                    .and(g)
                    .for_each(|o, k, f, g| *o = *o * f + c * g * k),
            }
            out
        };
        let ones = Array2::<f64>::ones(w1.dim());
        let aw = stage(&state.omega, &k1w, &w1, None, half, tm);
        let at = stage(&state.theta, &k1t, &th1, None, half, tm);
        let (k2w, k2t, _) = self.rhs(&aw, &at, tm);
        let bw = stage(&state.omega, &k2w, &w1, Some(&ones), half, tm);
        let bt = stage(&state.theta, &k2t, &th1, Some(&ones), half, tm);
        let (k3w, k3t, _) = self.rhs(&bw, &bt, tm);
        let cw = stage(&state.omega, &k3w, &wf, Some(&w2), h, t + h);
        let ct = stage(&state.theta, &k3t, &thf, Some(&th2), h, t + h);
        let (k4w, k4t, _) = self.rhs(&cw, &ct, t + h);

        let combine = |u: &SpectralField, k1: &SpectralField, k2: &SpectralField, k3: &SpectralField, k4: &SpectralField, ef: &Array2<f64>, e2: &Array2<f64>| {
            // E(t, t+h) (u + h/6 k1) + h/3 E(t+h/2, t+h) (k2 + k3) + h/6 k4
            let mut out = u.clone();
            Zip::from(&mut out.data)
                .and(&k1.data)
                .and(&k4.data)
                .and(ef)
                .for_each(|o, a, d, &f| *o = (*o + (h / 6.0) * *a) * f + (h / 6.0) * *d);
            Zip::from(&mut out.data)
                .and(&k2.data)
                .and(&k3.data)
                .and(e2)
                .for_each(|o, b, c, &g| *o += (h / 3.0) * (*b + *c) * g);
            out.symmetrize();
            out
        };
        let mut next = SimState {
            omega: combine(&state.omega, &k1w, &k2w, &k3w, &k4w, &wf, &w2),
            theta: combine(&state.theta, &k1t, &k2t, &k3t, &k4t, &thf, &th2),
            t: t + h,
        };
        next.set_time(t + h);
        if !next.omega.data.iter().chain(next.theta.data.iter()).all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(SimError::NonFinite(t + h));
        }
        Ok(next)
    }
}

/// `(N_w, N_th)` for one state; builds transform plans on every call.
pub fn nonlinear_term(state: &SimState, config: &SimConfig) -> Result<(SpectralField, SpectralField), SimError> {
    let mut solver = Solver::new(config)?;
    let (a, b, _) = solver.rhs(&state.omega, &state.theta, state.t);
    Ok((a, b))
}

/// One step of length `config.dt`; builds transform plans on every call.
pub fn step(state: &SimState, config: &SimConfig) -> Result<SimState, SimError> {
    Solver::new(config)?.step(state, config.dt)
}

/// Diagnostics recorded at one snapshot time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSample {
    pub t: f64,
    pub report: EnergyReport,
    /// Running bootstrap energies up to `t`.
    pub e_omega: f64,
    pub e_theta: f64,
    /// Running supremum of the large-`alpha` functional plus its accumulated
    /// gradient-form dissipation.
    pub large_alpha_total: f64,
    /// Same with the `eta ||Delta_t A th||^2` dissipation form.
    pub large_alpha_squared_total: f64,
    pub hn_omega: f64,
    pub hn_theta: f64,
    /// `H^N` norms of the `k != 0` part.
    pub hn_omega_osc: f64,
    pub hn_theta_osc: f64,
    pub theta_l2: f64,
    /// Real part of the `(0, 0)` vorticity coefficient.
    pub omega_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapOutcome {
    pub threshold_omega: f64,
    pub threshold_theta: f64,
    pub max_e_omega: f64,
    pub max_e_theta: f64,
    pub exceeded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub samples: Vec<SimSample>,
    pub final_state: SimState,
    pub snapshots: Vec<SimState>,
    pub bootstrap: BootstrapOutcome,
    pub horizon: f64,
    pub horizon_enforced: bool,
    pub t_final: f64,
    pub steps: usize,
}

struct Recorder {
    acc: BootstrapAccumulator,
    la_sup: f64,
    la_int: f64,
    la_sq_int: f64,
    last: Option<(f64, f64, f64)>,
}

impl Recorder {
    fn sample(&mut self, state: &SimState, params: &Params) -> SimSample {
        let t = state.t;
        let mut report = energy_sheared(&state.mode_states(), params, t);
        let la = energy_largealpha(&state.omega, &state.theta, params);
        for (name, e) in &la.entries {
            report.insert(name, e.value, e.dissipation);
        }
        let bo = crate::energy::bootstrap_sample(&state.omega, params, params.nu_x, params.nu_y);
        let bt = crate::energy::bootstrap_sample(&state.theta, params, params.eta_x, params.eta_y);
        report.insert("bootstrap_omega", bo.sup_term, bo.gradient_term + bo.multiplier_term);
        report.insert("bootstrap_theta", bt.sup_term, bt.gradient_term + bt.multiplier_term);
        self.acc.push(&state.omega, &state.theta, params);

        let value = la.value("large_alpha").unwrap_or(0.0);
        let d = la.dissipation("large_alpha").unwrap_or(0.0);
        let dsq = la.dissipation("large_alpha_squared").unwrap_or(0.0);
        self.la_sup = self.la_sup.max(value);
        if let Some((t0, d0, dsq0)) = self.last {
            self.la_int += 0.5 * (t - t0) * (d0 + d);
            self.la_sq_int += 0.5 * (t - t0) * (dsq0 + dsq);
        }
        self.last = Some((t, d, dsq));

        let n = params.sobolev_n;
        let osc = |f: &SpectralField| {
            f.weighted_sum(|m, _| if m.k == 0 { 0.0 } else { crate::model::sobolev_weight_sq(n, m) }).sqrt()
        };
        SimSample {
            t,
            report,
            e_omega: self.acc.e_omega(),
            e_theta: self.acc.e_theta(),
            large_alpha_total: self.la_sup + self.la_int,
            large_alpha_squared_total: self.la_sup + self.la_sq_int,
            hn_omega: state.omega.hn_sq(n).sqrt(),
            hn_theta: state.theta.hn_sq(n).sqrt(),
            hn_omega_osc: osc(&state.omega),
            hn_theta_osc: osc(&state.theta),
            theta_l2: state.theta.l2_sq().sqrt(),
            omega_mean: state.omega.get(0, 0).re,
        }
    }
}

/// Runs from the configured initial data to `t_end` (or the shear-drift
/// horizon under [`HorizonPolicy::Enforce`]), recording diagnostics every
/// `snapshot_every` steps and at the final time.
pub fn run_simulation(config: &SimConfig) -> Result<SimOutput, SimError> {
    let state = SimState::initial(config);
    run_from(config, state)
}

/// [`run_simulation`] from a given initial state.
pub fn run_from(config: &SimConfig, mut state: SimState) -> Result<SimOutput, SimError> {
    let mut solver = Solver::new(config)?;
    let params = config.params;
    let horizon = config.horizon_time();
    let horizon_enforced = config.horizon == HorizonPolicy::Enforce && horizon < config.t_end;
    let t_end = if horizon_enforced { horizon } else { config.t_end };
    let n_steps = ((t_end - state.t) / config.dt - 1e-9).ceil().max(0.0) as usize;
    let mut rec = Recorder { acc: BootstrapAccumulator::new(), la_sup: 0.0, la_int: 0.0, la_sq_int: 0.0, last: None };
    let mut samples = vec![rec.sample(&state, &params)];
    let mut snapshots = Vec::new();
    if config.keep_snapshots {
        snapshots.push(state.clone());
    }
    let t0 = state.t;
    for i in 1..=n_steps {
        let target = if i == n_steps { t_end } else { t0 + i as f64 * config.dt };
        state = solver.step(&state, target - state.t)?;
        state.set_time(target);
        if i % config.snapshot_every == 0 || i == n_steps {
            samples.push(rec.sample(&state, &params));
            if config.keep_snapshots {
                snapshots.push(state.clone());
            }
        }
    }
    let (e1, e2) = (config.ic.eps_omega, config.ic.eps_theta);
    let max_e_omega = samples.iter().map(|s| s.e_omega).fold(0.0, f64::max);
    let max_e_theta = samples.iter().map(|s| s.e_theta).fold(0.0, f64::max);
    let bootstrap = BootstrapOutcome {
        threshold_omega: 8.0 * e1 * e1,
        threshold_theta: 8.0 * e2 * e2,
        max_e_omega,
        max_e_theta,
        exceeded: max_e_omega > 8.0 * e1 * e1 || max_e_theta > 8.0 * e2 * e2,
    };
    Ok(SimOutput {
        t_final: state.t,
        final_state: state,
        samples,
        snapshots,
        bootstrap,
        horizon,
        horizon_enforced,
        steps: n_steps,
    })
}

#[cfg(test)]
mod tests;
