//! `envelope-suite`: property suites over random or gridded samples.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{Scenario, Suite, SuiteStudy};
use super::report::{Check, ScenarioOutput, Series, Summary};
use super::{log_uniform, random_k, random_mode, rng, RunError};
use crate::energy::{mdot_ratio, multiplier_m, energy_sheared, MULTIPLIER_FLOOR};
use crate::fit::{envelope_check, linspace};
use crate::linear::{
    duhamel_term, exact_theta_alpha0, heat_exponent, omega1_profile, phase_integral, phase_integral_real,
    Omega1Case,
};
use crate::model::{Mode, ModeState, Params};
use crate::ode::{integrate_mode_at, IntegrateOptions};
use crate::quadrature;
use crate::spectral::{
    direct_advection, nonlinear_term, random_state, run_from, GridSpec, IcSpec, SimConfig, Solver,
};

pub(super) fn run(sc: &Scenario, st: &SuiteStudy) -> Result<ScenarioOutput, RunError> {
    let mut out = match st.suite {
        Suite::PhaseBound => phase_bound(sc, st),
        Suite::ThetaEnvelope => theta_envelope(sc, st)?,
        Suite::Omega1 => omega1(sc, st)?,
        Suite::Multiplier => multiplier(sc, st)?,
        Suite::SolverHygiene => solver_hygiene(sc, st)?,
    };
    out.summary.info("suite", st.suite.name());
    out.summary.info("count", st.count);
    Ok(out)
}

fn names(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

fn phase_bound(sc: &Scenario, st: &SuiteStudy) -> ScenarioOutput {
    let mut r = rng(sc.seed);
    let mut series = Series::new(names(&["draw", "k", "xi", "t", "phase", "bound", "phase_at_center"]));
    let mut violation = 0.0f64;
    let mut equality = 0.0f64;
    for i in 0..st.count {
        let k = random_k(&mut r, 10);
        let xi = r.random_range(-20.0..=20.0);
        let t = st.t_max - r.random_range(0.0..st.t_max);
        let kf = k as f64;
        let bound = kf * kf * t * t * t / 12.0;
        let phase = phase_integral(k, xi, 0.0, t);
        let center = phase_integral(k, kf * t / 2.0, 0.0, t);
        violation = violation.max((bound - phase) / bound);
        equality = equality.max((center - bound).abs() / bound);
        series.push(vec![i as f64, kf, xi, t, phase, bound, center]);
    }
    let mut summary = Summary::new(&sc.name, "envelope-suite");
    summary.push(
        Check::at_most("lower_bound_violation", violation.max(0.0), st.slack)
            .with_detail("max of (k^2 t^3/12 - phase)/(k^2 t^3/12)"),
    );
    summary.push(Check::at_most("equality_at_center", equality, st.slack));
    ScenarioOutput::new(summary, series)
}

/// `max(ln value - ln envelope)` over samples whose envelope is a normal
/// float; returned as the ratio `exp(...)`.
fn log_margin(values: &[f64], log_env: &[f64]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for (v, le) in values.iter().zip(log_env) {
        if *le < -700.0 {
            continue;
        }
        let d = if *v > 0.0 { v.ln() - le } else { f64::NEG_INFINITY };
        worst = worst.max(d);
    }
    if worst == f64::NEG_INFINITY {
        0.0
    } else {
        worst.exp()
    }
}

struct ThetaDraw {
    rest: Params,
    coupled: Params,
    mode: Mode,
    s0: ModeState,
}

fn theta_draw(r: &mut ChaCha8Rng) -> ThetaDraw {
    let nu_x = r.random_range(0.0..0.1);
    let nu_y = r.random_range(0.01..0.1);
    let eta_x = r.random_range(0.0..0.1);
    let eta_y = r.random_range(0.01..0.1);
    let alpha = log_uniform(r, 0.01, 1.0);
    let mode = random_mode(r, 3, 6.0);
    let mut c = || Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
    let s0 = ModeState::new(c(), c());
    let rest = Params { alpha: 0.0, beta: 1.0, nu_x, nu_y, eta_x, eta_y, sobolev_n: 0 };
    ThetaDraw { rest, coupled: Params { alpha, ..rest }, mode, s0 }
}

fn theta_envelope(sc: &Scenario, st: &SuiteStudy) -> Result<ScenarioOutput, RunError> {
    let mut r = rng(sc.seed);
    let draws: Vec<ThetaDraw> = (0..st.count).map(|_| theta_draw(&mut r)).collect();
    let times = linspace(0.0, st.t_max, 301);
    type Traces = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);
    // (|theta|, ln theta envelope, E, E envelope) per draw
    let traces = draws
        .par_iter()
        .map(|d| -> Result<Traces, RunError> {
            let (p, m, k2) = (&d.rest, d.mode, d.mode.kf() * d.mode.kf());
            let th0 = d.s0.theta_hat.norm();
            let mut theta = Vec::new();
            let mut log_env = Vec::new();
            for &t in &times {
                theta.push(exact_theta_alpha0(p, m, d.s0.theta_hat, t)?.norm());
                log_env.push(-p.eta_x * k2 * t - p.eta_y * k2 * t.powi(3) / 12.0 + th0.ln());
            }
            let q = &d.coupled;
            let opts = IntegrateOptions::new(1e-11).with_integrating_factor(true);
            let states = integrate_mode_at(q, m, d.s0, 0.0, &times, opts)?;
            let energy: Vec<f64> =
                states.iter().zip(&times).map(|(s, &t)| energy_sheared(&[(m, *s)], q, t).value("sheared").unwrap()).collect();
            let (mx, my) = (q.nu_x.min(q.eta_x), q.nu_y.min(q.eta_y));
            let env: Vec<f64> =
                times.iter().map(|&t| (1.0 + t * t) * (-mx * t - my * t.powi(3) / 12.0).exp() * energy[0]).collect();
            Ok((theta, log_env, energy, env))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut columns = vec!["t".to_string()];
    for i in 0..draws.len() {
        columns.extend(["theta_abs", "theta_envelope", "energy", "energy_envelope"].iter().map(|q| format!("d{i}_{q}")));
    }
    let mut series = Series::new(columns);
    for (j, &t) in times.iter().enumerate() {
        let mut row = vec![t];
        for (th, le, e, env) in &traces {
            row.extend([th[j], le[j].exp(), e[j], env[j]]);
        }
        series.push(row);
    }
    let theta_margin = traces.iter().map(|(th, le, _, _)| log_margin(th, le)).fold(0.0, f64::max);
    let energy_reports: Vec<_> = traces
        .iter()
        .map(|(_, _, e, env)| {
            let ratio: Vec<f64> = e.iter().zip(env).map(|(v, w)| v / w).collect();
            envelope_check(&times, &ratio, |_| 1.0, st.slack)
        })
        .collect();
    let energy_margin = energy_reports.iter().map(|r| r.margin).fold(0.0, f64::max);
    let mut summary = Summary::new(&sc.name, "envelope-suite");
    summary.push(
        Check::at_most("theta_per_mode_margin", theta_margin, 1.0 + 1e-8)
            .with_detail("|theta(t)| / (exp(-eta_x k^2 t - eta_y k^2 t^3/12)|theta_0|), alpha = 0"),
    );
    summary.push(
        Check::at_most("energy_envelope_margin", energy_margin, st.slack)
            .with_detail("E(t) / ((1+t^2) exp(-min_x t - min_y t^3/12) E(0)), alpha > 0, beta = 1"),
    );
    summary.info("energy_margins", energy_reports.iter().map(|r| r.margin).collect::<Vec<_>>());
    summary.info(
        "draws",
        draws
            .iter()
            .map(|d| {
                let p = d.coupled;
                [p.alpha, p.nu_x, p.nu_y, p.eta_x, p.eta_y, d.mode.kf(), d.mode.xi]
            })
            .collect::<Vec<_>>(),
    );
    summary.info("draw_columns", ["alpha", "nu_x", "nu_y", "eta_x", "eta_y", "k", "xi"]);
    Ok(ScenarioOutput::new(summary, series))
}

/// Coefficient sets `(nu_x, nu_y, eta_x, eta_y)`, one per ordering case.
pub(crate) const OMEGA1_CASES: [(f64, f64, f64, f64); 5] = [
    (0.1, 0.05, 0.1, 0.05),
    (0.05, 0.1, 0.4, 0.8),
    (0.4, 0.8, 0.05, 0.1),
    (0.05, 0.8, 0.4, 0.1),
    (0.4, 0.1, 0.05, 0.8),
];

const OMEGA1_MODES: [(i64, f64); 4] = [(1, 0.0), (1, 2.5), (-2, 1.5), (1, -3.0)];

/// `ln |int_t^inf exp(L(s)) ds|` computed as `L(t) + ln int_0^inf exp(L(t+u) - L(t)) du`.
fn log_tail(l: impl Fn(f64) -> f64, t: f64) -> Result<f64, RunError> {
    let l0 = l(t);
    let mut upper = 1.0;
    while l(t + upper) - l0 > -45.0 || l(t + 2.0 * upper) > l(t + upper) {
        upper *= 2.0;
        if upper > 1e8 {
            return Err(RunError::Unsupported("tail integral does not converge".into()));
        }
    }
    let f = |u: f64| (l(t + u) - l0).exp();
    let rough = quadrature::integrate(f, 0.0, upper, 1e-6, 20_000).map_err(crate::linear::LinearError::from)?;
    let q = quadrature::integrate(f, 0.0, upper, 1e-9 * rough.value.abs(), 20_000)
        .map_err(crate::linear::LinearError::from)?;
    Ok(l0 + q.value.ln())
}

/// `ln |f_2(t) - omega_1(t)| - ln|k theta_0|` from the tail of the profile integral.
fn log_difference(p: &Params, m: Mode, t: f64) -> Result<f64, RunError> {
    let k2 = m.kf() * m.kf();
    let (a, b) = (p.eta_x - p.nu_x, p.eta_y - p.nu_y);
    let phi = |s0: f64, s1: f64| phase_integral_real(m.kf(), m.xi, s0, s1);
    if a == 0.0 && b == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if b > 0.0 || (b == 0.0 && a > 0.0) {
        let pre = heat_exponent(p.nu_x, p.nu_y, m, 1.0, 0.0, t);
        log_tail(|s| -pre - a * k2 * s - b * phi(0.0, s), t)
    } else {
        let pre = heat_exponent(p.eta_x, p.eta_y, m, 1.0, 0.0, t);
        log_tail(|sg| -pre + a * k2 * sg + b * phi(t - sg, t), t)
    }
}

struct Omega1Row {
    case: usize,
    mode: usize,
    t: f64,
    f2: Complex64,
    omega1: Complex64,
    log_diff: f64,
    log_env_diff: f64,
    log_env_omega1: f64,
}

fn omega1(sc: &Scenario, st: &SuiteStudy) -> Result<ScenarioOutput, RunError> {
    let times = linspace(1.0, st.t_max, 117);
    let modes = &OMEGA1_MODES[..st.count.min(OMEGA1_MODES.len())];
    let theta0 = Complex64::new(1.0, 0.0);
    let mut jobs = Vec::new();
    for (ci, _) in OMEGA1_CASES.iter().enumerate() {
        for (mi, _) in modes.iter().enumerate() {
            jobs.push((ci, mi));
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(ci, mi)| -> Result<Vec<Omega1Row>, RunError> {
            let (nu_x, nu_y, eta_x, eta_y) = OMEGA1_CASES[ci];
            let p = Params { alpha: 0.0, beta: 1.0, nu_x, nu_y, eta_x, eta_y, sobolev_n: 0 };
            let m = Mode::new(modes[mi].0, modes[mi].1);
            let k2 = m.kf() * m.kf();
            let k = m.kf().abs();
            let cap = [1.0 / (nu_x * k2), 1.0 / (nu_y * k2).cbrt(), 1.0 / (eta_x * k2), 1.0 / (eta_y * k2).cbrt()]
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            let h1 = (1.0 + k2 + m.xi * m.xi).sqrt();
            let mut out = Vec::new();
            for &t in &times {
                let f2 = duhamel_term(&p, m, theta0, t, 1e-12)?;
                let omega1 = omega1_profile(&p, m, theta0, t)?;
                let log_diff = log_difference(&p, m, t)? + k.ln();
                let log_env_diff = -nu_y.max(eta_y) * k2 * t.powi(3) / 12.0 - nu_x.max(eta_x) * k2 * t + k.ln();
                let log_env_omega1 =
                    t.min(cap).ln() - nu_y.min(eta_y) * k2 * t.powi(3) / 12.0 - nu_x.min(eta_x) * k2 * t / 2.0 + h1.ln();
                out.push(Omega1Row { case: ci, mode: mi, t, f2, omega1, log_diff, log_env_diff, log_env_omega1 });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut series = Series::new(names(&[
        "t", "case", "mode", "f2_re", "f2_im", "omega1_re", "omega1_im", "abs_difference", "difference_envelope",
        "omega1_envelope",
    ]));
    let mut summary = Summary::new(&sc.name, "envelope-suite");
    let mut consistency = 0.0f64;
    let mut per_case = vec![(0.0f64, f64::NEG_INFINITY); OMEGA1_CASES.len()];
    for block in &rows {
        for r in block {
            let direct = (r.f2 - r.omega1).norm();
            let tail = r.log_diff.exp();
            consistency = consistency.max((direct - tail).abs());
            let (d, w) = &mut per_case[r.case];
            *d = d.max((r.log_diff - r.log_env_diff).exp());
            if r.omega1.norm() > 0.0 {
                *w = w.max(r.omega1.norm().ln() - r.log_env_omega1);
            }
            series.push(vec![
                r.t,
                r.case as f64,
                r.mode as f64,
                r.f2.re,
                r.f2.im,
                r.omega1.re,
                r.omega1.im,
                tail,
                r.log_env_diff.exp(),
                r.log_env_omega1.exp(),
            ]);
        }
    }
    summary.push(
        Check::at_most("difference_vs_tail_integral", consistency, 1e-8)
            .with_detail("| |f2 - omega1| - tail integral |, theta_0 = 1"),
    );
    let mut case_names = Vec::new();
    for (ci, (d, w)) in per_case.iter().enumerate() {
        let (nu_x, nu_y, eta_x, eta_y) = OMEGA1_CASES[ci];
        let p = Params { nu_x, nu_y, eta_x, eta_y, ..Params::default() };
        let name = Omega1Case::classify(&p).name();
        case_names.push(name);
        summary.push(Check::at_most(&format!("{name}_difference_margin"), *d, st.slack));
        summary.push(Check::at_most(&format!("{name}_omega1_margin"), w.exp(), st.slack));
    }
    summary.info("cases", case_names);
    summary.info("case_coefficients", OMEGA1_CASES.iter().map(|c| [c.0, c.1, c.2, c.3]).collect::<Vec<_>>());
    summary.info("modes", modes.to_vec());
    Ok(ScenarioOutput::new(summary, series))
}

/// `int_0^t |k|/(k^2 + (xi - k tau)^2) dtau` by adaptive quadrature.
fn integrated_rate(t: f64, mode: Mode) -> Result<f64, RunError> {
    let k = mode.kf();
    let rate = |tau: f64| k.abs() / (k * k + (mode.xi - k * tau).powi(2));
    if t == 0.0 {
        return Ok(0.0);
    }
    let q = quadrature::integrate(rate, 0.0, t, 1e-13, 20_000).map_err(crate::linear::LinearError::from)?;
    Ok(q.value)
}

fn multiplier(sc: &Scenario, st: &SuiteStudy) -> Result<ScenarioOutput, RunError> {
    let ts = linspace(0.0, st.t_max, 25);
    let xis = linspace(-10.0, 10.0, 40);
    let ks: Vec<i64> = (1..=5).flat_map(|k| [k, -k]).collect();
    let mut series = Series::new(names(&["t", "k", "xi", "m", "ratio", "integrated_rate"]));
    let (mut m0_err, mut lo, mut hi, mut ratio_err, mut log_err) = (0.0f64, f64::INFINITY, 0.0f64, 0.0f64, 0.0f64);
    let mut monotone = true;
    for &k in &ks {
        for &xi in &xis {
            let mode = Mode::new(k, xi);
            m0_err = m0_err.max((multiplier_m(0.0, mode) - 1.0).abs());
            let mut prev = f64::INFINITY;
            for &t in &ts {
                let m = multiplier_m(t, mode);
                let ratio = mdot_ratio(t, mode).expect("k != 0");
                let kf = k as f64;
                let formula = kf.abs() / (kf * kf + (xi - kf * t).powi(2));
                let integral = integrated_rate(t, mode)?;
                lo = lo.min(m);
                hi = hi.max(m);
                monotone &= m <= prev;
                prev = m;
                ratio_err = ratio_err.max((ratio - formula).abs() / formula);
                log_err = log_err.max((m.ln() + integral).abs());
                series.push(vec![t, kf, xi, m, ratio, integral]);
            }
        }
    }
    let mut summary = Summary::new(&sc.name, "envelope-suite");
    summary.push(Check::at_most("m_at_zero_error", m0_err, 1e-15));
    summary.push(Check::at_least("m_min", lo, MULTIPLIER_FLOOR));
    summary.push(Check::at_most("m_max", hi, 1.0));
    summary.push(Check::at_most("ratio_relative_error", ratio_err, st.slack));
    summary.push(
        Check::at_most("log_m_vs_integrated_rate", log_err, st.slack)
            .with_detail("|ln M(t) + int_0^t |k|/(k^2 + (xi - k tau)^2) dtau|"),
    );
    summary.push(Check::flag("m_non_increasing", monotone));
    summary.info("grid_points", series.rows.len());
    Ok(ScenarioOutput::new(summary, series))
}

fn max_diff(a: &crate::model::SpectralField, b: &crate::model::SpectralField) -> f64 {
    (&a.data - &b.data).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn solver_hygiene(sc: &Scenario, st: &SuiteStudy) -> Result<ScenarioOutput, RunError> {
    let mut summary = Summary::new(&sc.name, "envelope-suite");
    let mut series = Series::new(names(&["t", "seed", "theta_l2_drift", "hermitian_defect"]));
    let seeds: Vec<u64> = (0..st.count as u64).map(|i| sc.seed.wrapping_add(i)).collect();

    // inviscid runs: symmetry and temperature L^2 conservation
    let cfg = SimConfig::new(Params::inviscid(0.0, 1.0), GridSpec::square(32, 1.0), 0.005, st.t_max, IcSpec::zero());
    cfg.validate()?;
    let mut worst_defect = 0.0f64;
    let mut worst_drift = 0.0f64;
    for &seed in &seeds {
        let mut solver = Solver::new(&cfg)?;
        let mut s = random_state(&cfg, seed, 0.1, 0.0);
        let th0 = s.theta.l2_sq().sqrt();
        let n = (st.t_max / cfg.dt).round() as usize;
        for i in 1..=n {
            s = solver.step(&s, cfg.dt)?;
            let defect = s.omega.hermitian_defect().max(s.theta.hermitian_defect());
            let drift = (s.theta.l2_sq().sqrt() - th0).abs() / th0;
            worst_defect = worst_defect.max(defect);
            if i % 20 == 0 || i == n {
                series.push(vec![s.t, seed as f64, drift, defect]);
            }
        }
        let rate = (s.theta.l2_sq().sqrt() - th0).abs() / th0 / s.t;
        worst_drift = worst_drift.max(rate);
    }
    summary.push(Check::at_most("hermitian_defect", worst_defect, f64::EPSILON));
    summary.push(Check::at_most("theta_l2_drift_per_time", worst_drift, 1e-8));

    // time-step refinement against a fine reference
    let p = Params::isotropic(0.5, 1.0, 0.02, 0.02, 0);
    let base = SimConfig::new(p, GridSpec::square(16, 1.0), 0.04, 1.0, IcSpec::zero());
    let s0 = random_state(&base, sc.seed, 2.0, 0.0);
    let at = |dt: f64| run_from(&SimConfig { dt, ..base.clone() }, s0.clone()).map(|o| o.final_state);
    let (a, b, reference) = (at(0.04)?, at(0.02)?, at(0.005)?);
    let err = |x: &crate::spectral::SimState| max_diff(&x.omega, &reference.omega).max(max_diff(&x.theta, &reference.theta));
    let order = (err(&a) / err(&b)).log2();
    summary.push(Check::at_least("refinement_order", order, 2.0).with_detail("dt = 0.04 vs 0.02, reference dt = 0.005"));

    // pseudospectral products against direct convolution on 8 x 8
    let small = SimConfig::new(Params::inviscid(0.0, 1.0), GridSpec::square(8, 0.7), 0.01, 1.0, IcSpec::zero());
    small.validate()?;
    let mut worst_conv = 0.0f64;
    for &seed in &seeds {
        let s = random_state(&small, seed, 1.0, 0.6);
        let (nw, nt) = nonlinear_term(&s, &small)?;
        let mut bw = direct_advection(&s.omega, &s.omega, s.t, 1.0);
        for ((r, c), z) in bw.data.indexed_iter_mut() {
            *z += Complex64::new(0.0, s.omega.k_of(r) as f64) * s.theta.data[[r, c]];
        }
        let bt = direct_advection(&s.omega, &s.theta, s.t, 1.0);
        let scale = bw.l2_sq().sqrt().max(1.0);
        worst_conv = worst_conv.max(max_diff(&nw, &bw).max(max_diff(&nt, &bt)) / scale);
    }
    summary.push(Check::at_most("convolution_oracle_error", worst_conv, 1e-10));
    summary.info("refinement_errors", [err(&a), err(&b)]);
    summary.info("seeds", seeds);
    Ok(ScenarioOutput::new(summary, series))
}
