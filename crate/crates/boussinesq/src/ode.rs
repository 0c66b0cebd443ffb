//! Adaptive Dormand–Prince 5(4) integration of the modal systems and of the
//! scalar second-order equation `y'' + alpha/(1 + tau^2) y = 0`.

use num_complex::Complex64;
use thiserror::Error;

use crate::linear::{apply, coefficient_matrix, heat_exponent};
use crate::model::{Mode, ModeState, Params};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step size {dt:e} fell below the floor {floor:e} at t = {t}")]
    StepSizeUnderflow { t: f64, dt: f64, floor: f64 },
    #[error("exceeded {0} steps")]
    TooManySteps(usize),
    #[error("invalid interval or tolerance")]
    InvalidArguments,
    #[error("non-finite state at t = {0}")]
    NonFinite(f64),
}

/// Accepted step times and states of one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub tol_used: f64,
    pub rejected: usize,
}

impl<S: Clone> Trajectory<S> {
    pub fn last(&self) -> &S {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds the initial time")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub tol: f64,
    pub max_steps: usize,
    /// Factor out the diagonal heat decay exactly before stepping.
    pub integrating_factor: bool,
    /// Record every accepted step (otherwise only the endpoints).
    pub record_steps: bool,
}

impl IntegrateOptions {
    pub fn new(tol: f64) -> Self {
        IntegrateOptions { tol, max_steps: 10_000_000, integrating_factor: false, record_steps: true }
    }

    pub fn with_integrating_factor(mut self, on: bool) -> Self {
        self.integrating_factor = on;
        self
    }

    pub fn endpoints_only(mut self) -> Self {
        self.record_steps = false;
        self
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const PI_BETA: f64 = 0.04;
const PI_ALPHA: f64 = 0.2 - 0.75 * PI_BETA;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Integrates `y' = f(t, y)` on `[t0, t1]` for a real state vector.
///
/// The local error of each accepted step, measured in the RMS norm scaled by
/// `tol * (1 + |y|)`, is at most 1.
pub fn dopri5<F>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: &[f64],
    opts: IntegrateOptions,
) -> Result<Trajectory<Vec<f64>>, OdeError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    if !(t1 >= t0) || !(opts.tol > 0.0) {
        return Err(OdeError::InvalidArguments);
    }
    let n = y0.len();
    let mut traj = Trajectory { times: vec![t0], states: vec![y0.to_vec()], tol_used: opts.tol, rejected: 0 };
    if t1 == t0 {
        return Ok(traj);
    }
    let span = t1 - t0;
    let floor = 1e-14 * span;
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    f(t, &y, &mut k[0]);
    let mut h = initial_step(&y, &k[0], opts.tol, span);
    let mut err_prev = 1e-4f64;
    let mut steps = 0usize;
    let mut last_rejected = false;
    while t < t1 {
        if steps >= opts.max_steps {
            return Err(OdeError::TooManySteps(opts.max_steps));
        }
        steps += 1;
        let last = t + h >= t1 || (t1 - (t + h)) < floor;
        if last {
            h = t1 - t;
        }
        if h < floor && !last {
            return Err(OdeError::StepSizeUnderflow { t, dt: h, floor });
        }
        let (k0, rest) = k.split_at_mut(1);
        let k0 = &k0[0];
        for i in 0..n {
            tmp[i] = y[i] + h * A21 * k0[i];
        }
        f(t + C2 * h, &tmp, &mut rest[0]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A31 * k0[i] + A32 * rest[0][i]);
        }
        f(t + C3 * h, &tmp, &mut rest[1]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A41 * k0[i] + A42 * rest[0][i] + A43 * rest[1][i]);
        }
        f(t + C4 * h, &tmp, &mut rest[2]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A51 * k0[i] + A52 * rest[0][i] + A53 * rest[1][i] + A54 * rest[2][i]);
        }
        f(t + C5 * h, &tmp, &mut rest[3]);
        for i in 0..n {
            tmp[i] = y[i]
                + h * (A61 * k0[i] + A62 * rest[0][i] + A63 * rest[1][i] + A64 * rest[2][i] + A65 * rest[3][i]);
        }
        f(t + h, &tmp, &mut rest[4]);
        for i in 0..n {
            ynew[i] = y[i]
                + h * (B1 * k0[i] + B3 * rest[1][i] + B4 * rest[2][i] + B5 * rest[3][i] + B6 * rest[4][i]);
        }
        f(t + h, &ynew, &mut rest[5]);
        let mut err = 0.0;
        for i in 0..n {
            let e = h
                * (E1 * k0[i] + E3 * rest[1][i] + E4 * rest[2][i] + E5 * rest[3][i] + E6 * rest[4][i]
                    + E7 * rest[5][i]);
            let sc = opts.tol * (1.0 + y[i].abs().max(ynew[i].abs()));
            err += (e / sc) * (e / sc);
        }
        err = (err / n.max(1) as f64).sqrt();
        if !err.is_finite() {
            h *= FAC_MIN;
            traj.rejected += 1;
            last_rejected = true;
            if h < floor {
                return Err(OdeError::NonFinite(t));
            }
            continue;
        }
        if err <= 1.0 {
            let mut fac = SAFETY * err.max(1e-10).powf(-PI_ALPHA) * err_prev.powf(PI_BETA);
            fac = fac.clamp(FAC_MIN, FAC_MAX);
            if last_rejected {
                fac = fac.min(1.0);
            }
            err_prev = err.max(1e-4);
            t = if last { t1 } else { t + h };
            std::mem::swap(&mut y, &mut ynew);
            let (first, rest) = k.split_at_mut(1);
            first[0].copy_from_slice(&rest[5]);
            if opts.record_steps || t == t1 {
                traj.times.push(t);
                traj.states.push(y.clone());
            }
            h *= fac;
            last_rejected = false;
        } else {
            let fac = (SAFETY * err.powf(-PI_ALPHA)).max(FAC_MIN);
            h *= fac;
            traj.rejected += 1;
            last_rejected = true;
            if h < floor {
                return Err(OdeError::StepSizeUnderflow { t, dt: h, floor });
            }
        }
    }
    Ok(traj)
}

fn initial_step(y: &[f64], f0: &[f64], tol: f64, span: f64) -> f64 {
    let n = y.len().max(1) as f64;
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (yi, fi) in y.iter().zip(f0) {
        let sc = tol * (1.0 + yi.abs());
        d0 += (yi / sc).powi(2);
        d1 += (fi / sc).powi(2);
    }
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span).max(1e-12 * span)
}

/// Right-hand side of the linearized modal system at time `t`.
pub fn linear_rhs(params: &Params, t: f64, mode: Mode, state: ModeState) -> ModeState {
    apply(&coefficient_matrix(params, mode, t), state)
}

/// Integrates one mode of the linearized system from `t0` to `t1`.
pub fn integrate_mode(
    params: &Params,
    mode: Mode,
    state0: ModeState,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<Trajectory<ModeState>, OdeError> {
    integrate_mode_with(params, mode, state0, t0, t1, IntegrateOptions::new(tol))
}

pub fn integrate_mode_with(
    params: &Params,
    mode: Mode,
    state0: ModeState,
    t0: f64,
    t1: f64,
    opts: IntegrateOptions,
) -> Result<Trajectory<ModeState>, OdeError> {
    let p = *params;
    if !opts.integrating_factor {
        let raw = dopri5(
            |t, y, dy| {
                let d = linear_rhs(&p, t, mode, ModeState::from_slice(y));
                dy.copy_from_slice(&d.to_array());
            },
            t0,
            t1,
            &state0.to_array(),
            opts,
        )?;
        return Ok(map_trajectory(raw, |_, y| ModeState::from_slice(y)));
    }
    // u = state * exp(E(t)) with E the exact diagonal heat exponents from t0
    let e_w = move |t: f64| heat_exponent(p.nu_x, p.nu_y, mode, p.beta, t0, t);
    let e_th = move |t: f64| heat_exponent(p.eta_x, p.eta_y, mode, p.beta, t0, t);
    let raw = dopri5(
        |t, y, dy| {
            let u = ModeState::from_slice(y);
            let m = coefficient_matrix(&p, mode, t);
            let g = e_w(t) - e_th(t);
            let d = ModeState {
                omega_hat: m[0][1] * u.theta_hat * g.exp(),
                theta_hat: m[1][0] * u.omega_hat * (-g).exp(),
            };
            dy.copy_from_slice(&d.to_array());
        },
        t0,
        t1,
        &state0.to_array(),
        opts,
    )?;
    Ok(map_trajectory(raw, |t, y| {
        let u = ModeState::from_slice(y);
        ModeState { omega_hat: u.omega_hat * (-e_w(t)).exp(), theta_hat: u.theta_hat * (-e_th(t)).exp() }
    }))
}

/// Integrates one mode and returns its state at each of `times` (ascending,
/// starting at or after `t0`).
pub fn integrate_mode_at(
    params: &Params,
    mode: Mode,
    state0: ModeState,
    t0: f64,
    times: &[f64],
    opts: IntegrateOptions,
) -> Result<Vec<ModeState>, OdeError> {
    let mut out = Vec::with_capacity(times.len());
    let mut t = t0;
    let mut s = state0;
    for &target in times {
        if target > t {
            let traj = integrate_mode_with(params, mode, s, t, target, opts.endpoints_only())?;
            s = *traj.last();
            t = target;
        }
        out.push(s);
    }
    Ok(out)
}

fn map_trajectory<S>(raw: Trajectory<Vec<f64>>, f: impl Fn(f64, &[f64]) -> S) -> Trajectory<S> {
    let states = raw.times.iter().zip(&raw.states).map(|(&t, y)| f(t, y)).collect();
    Trajectory { times: raw.times, states, tol_used: raw.tol_used, rejected: raw.rejected }
}

/// Integrates `y'' + alpha/(1 + tau^2) y = 0`, the vorticity equation of the
/// inviscid system after shifting time by `xi/k` and rescaling by `beta`.
/// States are `(y, y')`.
pub fn integrate_second_order(
    alpha: f64,
    t0: f64,
    t1: f64,
    y0: f64,
    yp0: f64,
    tol: f64,
) -> Result<Trajectory<[f64; 2]>, OdeError> {
    let raw = dopri5(
        |t, y, dy| {
            dy[0] = y[1];
            dy[1] = -alpha / (1.0 + t * t) * y[0];
        },
        t0,
        t1,
        &[y0, yp0],
        IntegrateOptions::new(tol),
    )?;
    Ok(map_trajectory(raw, |_, y| [y[0], y[1]]))
}

/// Temperature amplitude `theta = (1/(i k)) d/dt omega` recovered from the
/// second-order formulation.
pub fn theta_from_derivative(k: i64, omega_dot: Complex64) -> Complex64 {
    omega_dot / Complex64::new(0.0, k as f64)
}
