//! `modal-exact` and `modal-ode`: single-mode trajectories of the linearized
//! system, from closed forms or from the adaptive integrator.

use rayon::prelude::*;

use super::config::{ModalStudy, ModeSet, Scenario};
use super::report::{Check, ScenarioOutput, Series, Summary};
use super::{log_uniform, random_mode, rng, RunError};
use crate::fit::linspace;
use crate::linear::{
    eigen_no_shear, exact_omega_alpha0, exact_rotation_inviscid, exact_theta_alpha0, inviscid_couette_mode,
    rotation_energy, rotation_period,
};
use crate::model::{Mode, ModeState, Params};
use crate::ode::{integrate_mode_at, integrate_mode_with, linear_rhs, IntegrateOptions};

/// Which closed form applies to `(params, mode)`, if any.
pub(crate) fn closed_form_name(p: &Params, mode: Mode) -> Option<&'static str> {
    if p.alpha == 0.0 {
        Some(if p.is_inviscid() { "inviscid-couette" } else { "alpha0-duhamel" })
    } else if p.beta == 0.0 && mode.k != 0 {
        Some(if p.is_inviscid() { "rotation" } else { "eigen-propagator" })
    } else {
        None
    }
}

pub(crate) fn closed_form(
    p: &Params,
    mode: Mode,
    s0: ModeState,
    t: f64,
    quad_tol: f64,
) -> Result<Option<ModeState>, RunError> {
    let s = match closed_form_name(p, mode) {
        Some("inviscid-couette") => inviscid_couette_mode(p.beta, mode, s0, t),
        Some("alpha0-duhamel") => ModeState::new(
            exact_omega_alpha0(p, mode, s0.omega_hat, s0.theta_hat, t, quad_tol)?,
            exact_theta_alpha0(p, mode, s0.theta_hat, t)?,
        ),
        Some("rotation") => exact_rotation_inviscid(p.alpha, mode, s0, t)?,
        Some(_) => eigen_no_shear(p, mode)?.evolve(s0, t),
        None => return Ok(None),
    };
    Ok(Some(s))
}

/// Period of the shear-free inviscid rotation measured from the zero
/// crossings of `Re w` for the initial state `(1, 0)`; `None` when fewer than
/// three crossings occur before `t_end`.
pub(crate) fn measure_period(p: &Params, mode: Mode, tol: f64, t_end: f64) -> Result<Option<f64>, RunError> {
    let opts = IntegrateOptions::new(tol);
    let traj = integrate_mode_with(p, mode, ModeState::real(1.0, 0.0), 0.0, t_end, opts)?;
    let mut crossings = Vec::new();
    for i in 1..traj.len() {
        let (ta, tb) = (traj.times[i - 1], traj.times[i]);
        let base = traj.states[i - 1];
        if base.omega_hat.re * traj.states[i].omega_hat.re >= 0.0 {
            continue;
        }
        let mut t = ta;
        for _ in 0..50 {
            let s = if t > ta { *integrate_mode_with(p, mode, base, ta, t, opts.endpoints_only())?.last() } else { base };
            let slope = linear_rhs(p, t, mode, s).omega_hat.re;
            if slope == 0.0 {
                break;
            }
            let next = (t - s.omega_hat.re / slope).clamp(ta, tb);
            let done = (next - t).abs() <= 1e-15 * next.abs().max(1.0);
            t = next;
            if done {
                break;
            }
        }
        crossings.push(t);
    }
    let n = crossings.len();
    if n < 3 {
        return Ok(None);
    }
    Ok(Some(2.0 * (crossings[n - 1] - crossings[0]) / (n - 1) as f64))
}

struct Draw {
    params: Params,
    mode: Mode,
}

fn draws(sc: &Scenario, s: &ModalStudy) -> Vec<Draw> {
    let mut r = rng(sc.seed);
    let modes: Vec<Mode> = match &s.modes {
        ModeSet::List(list) => list.clone(),
        ModeSet::Random { count, k_max, xi_max } => (0..*count).map(|_| random_mode(&mut r, *k_max, *xi_max)).collect(),
    };
    modes
        .into_iter()
        .map(|mode| {
            let mut params = sc.params;
            if let Some((lo, hi)) = s.alpha_range {
                params.alpha = log_uniform(&mut r, lo, hi);
            }
            Draw { params, mode }
        })
        .collect()
}

struct DrawResult {
    exact: Option<Vec<ModeState>>,
    numeric: Option<Vec<ModeState>>,
    period: Option<(f64, Option<f64>)>,
}

fn max_component(s: &ModeState) -> f64 {
    s.omega_hat.norm().max(s.theta_hat.norm())
}

pub(super) fn run(sc: &Scenario, s: &ModalStudy, ode: bool) -> Result<ScenarioOutput, RunError> {
    let times = linspace(0.0, s.t_end, s.samples);
    let draws = draws(sc, s);
    let s0 = ModeState::new(s.omega0, s.theta0);
    let opts = IntegrateOptions::new(s.tol).with_integrating_factor(s.integrating_factor);
    let results: Vec<Result<DrawResult, RunError>> = draws
        .par_iter()
        .map(|d| {
            let exact = match closed_form_name(&d.params, d.mode) {
                Some(_) => Some(
                    times
                        .iter()
                        .map(|&t| closed_form(&d.params, d.mode, s0, t, s.quad_tol).map(|x| x.expect("closed form")))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                None => None,
            };
            let numeric = if ode { Some(integrate_mode_at(&d.params, d.mode, s0, 0.0, &times, opts)?) } else { None };
            let rotating = d.params.beta == 0.0 && d.params.is_inviscid() && d.params.alpha > 0.0 && d.mode.k != 0;
            let period = if ode && rotating {
                let theory = rotation_period(d.params.alpha, d.mode);
                Some((theory, measure_period(&d.params, d.mode, s.tol, s.t_end)?))
            } else {
                None
            };
            Ok(DrawResult { exact, numeric, period })
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut summary = Summary::new(&sc.name, if ode { "modal-ode" } else { "modal-exact" });
    if !ode && results.iter().any(|r| r.exact.is_none()) {
        return Err(RunError::Unsupported(
            "modal-exact needs alpha = 0, or beta = 0 with k != 0, for every mode".into(),
        ));
    }

    let mut columns = vec!["t".to_string()];
    for i in 0..draws.len() {
        for part in ["omega_re", "omega_im", "theta_re", "theta_im"] {
            columns.push(format!("m{i}_{part}"));
        }
    }
    let mut series = Series::new(columns);
    let traces: Vec<&Vec<ModeState>> = results
        .iter()
        .map(|r| if ode { r.numeric.as_ref() } else { r.exact.as_ref() }.expect("trace"))
        .collect();
    for (j, &t) in times.iter().enumerate() {
        let mut row = vec![t];
        for tr in &traces {
            let x = tr[j];
            row.extend([x.omega_hat.re, x.omega_hat.im, x.theta_hat.re, x.theta_hat.im]);
        }
        series.push(row);
    }

    if ode {
        let compared: Vec<f64> = results
            .iter()
            .filter_map(|r| {
                let (e, n) = (r.exact.as_ref()?, r.numeric.as_ref()?);
                Some(e.iter().zip(n).map(|(a, b)| a.max_abs_diff(b) / max_component(a).max(1.0)).fold(0.0, f64::max))
            })
            .collect();
        if !compared.is_empty() {
            let worst = compared.iter().cloned().fold(0.0, f64::max);
            summary.push(
                Check::at_most("closed_form_max_error", worst, s.closed_form_tol)
                    .with_detail(format!("{} modes, error relative to max(1, |exact|)", compared.len())),
            );
        }
    }

    if sc.params.beta == 0.0 && sc.params.is_inviscid() && draws.iter().all(|d| d.mode.k != 0) {
        let mut worst = 0.0f64;
        for (d, tr) in draws.iter().zip(&traces) {
            let e0 = rotation_energy(d.params.alpha, d.mode, tr[0]);
            for x in tr.iter() {
                let drift = (rotation_energy(d.params.alpha, d.mode, *x) - e0).abs() / e0.max(f64::MIN_POSITIVE);
                worst = worst.max(drift);
            }
        }
        summary.push(Check::at_most("energy_relative_drift", worst, s.energy_tol));
    }

    let periods: Vec<(f64, Option<f64>)> = results.iter().filter_map(|r| r.period).collect();
    if !periods.is_empty() {
        let missing = periods.iter().filter(|p| p.1.is_none()).count();
        let worst = periods
            .iter()
            .map(|(th, m)| m.map(|m| (m - th).abs() / th).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        let mut check = Check::at_most("period_relative_error", worst, s.period_tol);
        if missing > 0 {
            check = check.with_detail(format!("{missing} modes had fewer than three zero crossings before t_end"));
        }
        summary.push(check);
        summary.info(
            "periods",
            periods.iter().map(|(th, m)| [*th, m.unwrap_or(f64::NAN)]).collect::<Vec<_>>(),
        );
    }

    let finite = traces.iter().all(|tr| tr.iter().all(|x| x.is_finite()));
    summary.push(Check::flag("finite_values", finite));
    summary.info("modes", draws.iter().map(|d| (d.mode.k, d.mode.xi)).collect::<Vec<_>>());
    summary.info("alphas", draws.iter().map(|d| d.params.alpha).collect::<Vec<_>>());
    summary.info(
        "closed_forms",
        draws.iter().map(|d| closed_form_name(&d.params, d.mode).unwrap_or("none")).collect::<Vec<_>>(),
    );
    summary.info("initial_state", [s.omega0.re, s.omega0.im, s.theta0.re, s.theta0.im]);
    Ok(ScenarioOutput::new(summary, series))
}
