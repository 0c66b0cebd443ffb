//! `eigen-sweep`: shear-free eigenvalues over a parameter grid, plus random
//! property draws.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::config::{EigenStudy, Scenario};
use super::report::{Check, ScenarioOutput, Series, Summary};
use super::{log_uniform, random_mode, rng, RunError};
use crate::linear::{eigen_no_shear, EigenClass, EigenReport};
use crate::model::{Mode, ModeState, Params};
use crate::ode::{integrate_mode_with, IntegrateOptions};

fn class_code(c: EigenClass) -> f64 {
    match c {
        EigenClass::RealDistinct => 0.0,
        EigenClass::ComplexPair => 1.0,
        EigenClass::Degenerate => 2.0,
    }
}

/// Relative mismatch of `(lambda1 + lambda2, lambda1 lambda2)` against the
/// trace and determinant of the coefficient matrix.
fn trace_det_errors(r: &EigenReport) -> (f64, f64) {
    let tr = r.trace();
    let det = r.determinant();
    let scale_tr = tr.norm().max(r.lambda1.norm() + r.lambda2.norm());
    let scale_det = det.norm().max(r.lambda1.norm() * r.lambda2.norm());
    let e_tr = (r.lambda1 + r.lambda2 - tr).norm() / scale_tr.max(f64::MIN_POSITIVE);
    let e_det = (r.lambda1 * r.lambda2 - det).norm() / scale_det.max(f64::MIN_POSITIVE);
    (e_tr, e_det)
}

struct DrawOutcome {
    trace_err: f64,
    det_err: f64,
    flip_ok: Option<bool>,
    propagator_err: f64,
}

fn draw_params(r: &mut rand_chacha::ChaCha8Rng) -> (Params, Mode, ModeState) {
    let mut u = || r.random_range(0.0..1.0);
    let p = Params { alpha: 0.0, beta: 0.0, nu_x: u(), nu_y: u(), eta_x: u(), eta_y: u(), sobolev_n: 0 };
    let s0 = ModeState::new(Complex64::new(u() - 0.5, u() - 0.5), Complex64::new(u() - 0.5, u() - 0.5));
    let alpha = log_uniform(r, 1e-3, 10.0);
    let mode = random_mode(r, 5, 5.0);
    (Params { alpha, ..p }, mode, s0)
}

fn property_draw(p: Params, mode: Mode, s0: ModeState, st: &EigenStudy) -> Result<DrawOutcome, RunError> {
    let rep = eigen_no_shear(&p, mode)?;
    let (trace_err, det_err) = trace_det_errors(&rep);
    let a = rep.alpha_star;
    let flip_ok = if a > 0.0 {
        let below = eigen_no_shear(&Params { alpha: a * (1.0 - st.flip_offset), ..p }, mode)?;
        let above = eigen_no_shear(&Params { alpha: a * (1.0 + st.flip_offset), ..p }, mode)?;
        Some(below.classification == EigenClass::RealDistinct && above.classification == EigenClass::ComplexPair)
    } else {
        None
    };
    let exact = rep.evolve(s0, st.t_check);
    let opts = IntegrateOptions::new(1e-12).endpoints_only();
    let num = *integrate_mode_with(&p, mode, s0, 0.0, st.t_check, opts)?.last();
    let scale = exact.omega_hat.norm().max(exact.theta_hat.norm()).max(1.0);
    Ok(DrawOutcome { trace_err, det_err, flip_ok, propagator_err: exact.max_abs_diff(&num) / scale })
}

pub(super) fn run(sc: &Scenario, st: &EigenStudy) -> Result<ScenarioOutput, RunError> {
    let plan = st.plan();
    let columns = ["alpha", "k", "xi", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im", "alpha_star", "classification"];
    let mut series = Series::new(columns.iter().map(|s| s.to_string()).collect());
    let mut sweep_tr = 0.0f64;
    let mut sweep_det = 0.0f64;
    for (alpha, mode) in &plan {
        let p = Params { alpha: *alpha, ..sc.params };
        let r = eigen_no_shear(&p, *mode)?;
        let (a, b) = trace_det_errors(&r);
        sweep_tr = sweep_tr.max(a);
        sweep_det = sweep_det.max(b);
        series.push(vec![
            *alpha,
            mode.kf(),
            mode.xi,
            r.lambda1.re,
            r.lambda1.im,
            r.lambda2.re,
            r.lambda2.im,
            r.alpha_star,
            class_code(r.classification),
        ]);
    }
    let mut summary = Summary::new(&sc.name, "eigen-sweep");
    summary.info("sweep_points", plan.len());
    summary.info("classification_codes", ["real-distinct", "complex-pair", "degenerate"]);
    summary.push(Check::at_most("sweep_trace_relative_error", sweep_tr, st.relative_tol));
    summary.push(Check::at_most("sweep_determinant_relative_error", sweep_det, st.relative_tol));

    if st.draws > 0 {
        let mut r = rng(sc.seed);
        let inputs: Vec<_> = (0..st.draws).map(|_| draw_params(&mut r)).collect();
        let outcomes = inputs
            .par_iter()
            .map(|(p, m, s0)| property_draw(*p, *m, *s0, st))
            .collect::<Result<Vec<_>, _>>()?;
        let max = |f: fn(&DrawOutcome) -> f64| outcomes.iter().map(f).fold(0.0, f64::max);
        summary.push(Check::at_most("draws_trace_relative_error", max(|o| o.trace_err), st.relative_tol));
        summary.push(Check::at_most("draws_determinant_relative_error", max(|o| o.det_err), st.relative_tol));
        let tested = outcomes.iter().filter(|o| o.flip_ok.is_some()).count();
        let flips = outcomes.iter().filter(|o| o.flip_ok == Some(true)).count();
        summary.push(
            Check::flag("classification_flips_at_alpha_star", tested > 0 && flips == tested)
                .with_detail(format!("{flips}/{tested} draws flip; {} draws have alpha* = 0", st.draws - tested)),
        );
        summary.push(Check::at_most("propagator_vs_ode_error", max(|o| o.propagator_err), st.propagator_tol));
        summary.info("draws", st.draws);
    }
    Ok(ScenarioOutput::new(summary, series))
}
