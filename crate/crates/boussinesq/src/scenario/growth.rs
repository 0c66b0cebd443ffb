//! `inviscid-growth`: algebraic growth of the inviscid, `alpha <= 1/4` mode
//! through the second-order equation `y'' + alpha/(1 + t^2) y = 0`.

use rayon::prelude::*;

use super::config::{GrowthStudy, Scenario};
use super::report::{Check, FitRecord, ScenarioOutput, Series, Summary};
use super::RunError;
use crate::fit::{fit_algebraic_exponent, geomspace};
use crate::linear::{growth_exponent_in_time, growth_exponent_theory};
use crate::ode::integrate_second_order;

/// `|y(t)|` at each of `times` (ascending, positive), starting from
/// `(y, y')(0) = initial`.
pub fn growth_trace(alpha: f64, initial: (f64, f64), times: &[f64], tol: f64) -> Result<Vec<f64>, RunError> {
    let mut out = Vec::with_capacity(times.len());
    let (mut t, mut y) = (0.0, [initial.0, initial.1]);
    for &target in times {
        if target > t {
            y = *integrate_second_order(alpha, t, target, y[0], y[1], tol)?.last();
            t = target;
        }
        out.push(y[0].abs());
    }
    Ok(out)
}

pub(super) fn run(sc: &Scenario, st: &GrowthStudy) -> Result<ScenarioOutput, RunError> {
    let times = geomspace(st.t_start, st.t_end, st.samples);
    let traces = st
        .alphas
        .par_iter()
        .map(|&a| growth_trace(a, st.initial, &times, st.tol))
        .collect::<Result<Vec<_>, _>>()?;

    let mut columns = vec!["t".to_string()];
    columns.extend((0..st.alphas.len()).map(|i| format!("a{i}_abs_omega")));
    let mut series = Series::new(columns);
    for (j, &t) in times.iter().enumerate() {
        let mut row = vec![t];
        row.extend(traces.iter().map(|tr| tr[j]));
        series.push(row);
    }

    let mut summary = Summary::new(&sc.name, "inviscid-growth");
    let mut out_fits = Vec::new();
    let z: Vec<f64> = times.iter().map(|t| t * t).collect();
    let window_z = (z[0], z[z.len() - 1]);
    for (i, (&a, tr)) in st.alphas.iter().zip(&traces).enumerate() {
        // exponent in z = t^2, the variable of the hypergeometric asymptotics
        let fit = fit_algebraic_exponent(&z, tr, window_z)?;
        let theory = growth_exponent_theory(a)?;
        let err = (fit.rate_or_exponent - theory).abs();
        summary.push(
            Check::at_most(&format!("a{i}_exponent_error"), err, st.exponent_tol)
                .with_detail(format!("alpha = {a}, fitted {:.6}, theory {:.6}", fit.rate_or_exponent, theory)),
        );
        let fit_t = fit_algebraic_exponent(&times, tr, (st.t_start, st.t_end))?;
        out_fits.push(FitRecord { label: format!("a{i}_z_exponent"), fit, theory: Some(theory) });
        out_fits.push(FitRecord {
            label: format!("a{i}_t_exponent"),
            fit: fit_t,
            theory: Some(growth_exponent_in_time(a)?),
        });
    }
    summary.info("alphas", &st.alphas);
    summary.info("initial", [st.initial.0, st.initial.1]);
    let mut out = ScenarioOutput::new(summary, series);
    out.fits = out_fits;
    Ok(out)
}
