//! `nonlinear-run`: pseudospectral runs over seeds and `alpha` values with
//! the bootstrap, decay-rate and large-`alpha` checks.

use rayon::prelude::*;

use super::config::{min_diffusivities, NonlinearStudy, Scenario};
use super::report::{Check, FitRecord, ScenarioOutput, Series, Summary};
use super::RunError;
use crate::fit::{default_window, fit_exponential_rate};
use crate::spectral::{run_simulation, snapshot::write_snapshot, SimConfig, SimOutput};

pub(super) struct RunSpec {
    pub seed: u64,
    pub alpha: f64,
    pub config: SimConfig,
}

pub(super) fn run_specs(sc: &Scenario, st: &NonlinearStudy) -> Vec<RunSpec> {
    let mut specs = Vec::new();
    for &alpha in &st.alphas {
        for &seed in &st.seeds {
            let mut config = st.sim.clone();
            config.params.alpha = alpha;
            let (eo, et, norm) = st.amplitudes(&sc.params, alpha);
            config.ic.eps_omega = eo;
            config.ic.eps_theta = et;
            config.ic.theta_norm = norm;
            config.ic.seed = seed;
            specs.push(RunSpec { seed, alpha, config });
        }
    }
    specs
}

pub(super) fn run(sc: &Scenario, st: &NonlinearStudy) -> Result<ScenarioOutput, RunError> {
    let specs = run_specs(sc, st);
    let outputs = specs
        .par_iter()
        .map(|s| run_simulation(&s.config))
        .collect::<Result<Vec<SimOutput>, _>>()?;

    let times: Vec<f64> = outputs[0].samples.iter().map(|s| s.t).collect();
    let mut columns = vec!["t".to_string()];
    let quantities = ["e_omega", "e_theta", "hn_omega", "hn_theta", "hn_sum", "sheared", "large_alpha_total"];
    for i in 0..specs.len() {
        columns.extend(quantities.iter().map(|q| format!("r{i}_{q}")));
    }
    let mut series = Series::new(columns);
    for (j, &t) in times.iter().enumerate() {
        let mut row = vec![t];
        for o in &outputs {
            let s = &o.samples[j];
            row.extend([
                s.e_omega,
                s.e_theta,
                s.hn_omega,
                s.hn_theta,
                s.hn_omega + s.hn_theta,
                s.report.value("sheared").unwrap_or(0.0),
                s.large_alpha_total,
            ]);
        }
        series.push(row);
    }

    let mut summary = Summary::new(&sc.name, "nonlinear-run");
    let mut fits = Vec::new();
    let (nu, eta) = min_diffusivities(&sc.params);
    let nu_min = nu.min(eta);
    let theorem_rate = nu_min.cbrt() / 10.0;
    let bare_rate = nu_min * st.sim.grid.dxi.powi(2).min(1.0);
    let window = st.fit_window.unwrap_or_else(|| default_window(&times));
    for (i, (spec, o)) in specs.iter().zip(&outputs).enumerate() {
        if st.bootstrap_check {
            let b = &o.bootstrap;
            summary.push(Check::at_most(&format!("r{i}_bootstrap_omega"), b.max_e_omega, b.threshold_omega));
            summary.push(Check::at_most(&format!("r{i}_bootstrap_theta"), b.max_e_theta, b.threshold_theta));
        }
        if st.decay_check {
            let values: Vec<f64> = o.samples.iter().map(|s| s.hn_omega + s.hn_theta).collect();
            let fit = fit_exponential_rate(&times, &values, window)?;
            let rate = fit.rate_or_exponent;
            summary.push(
                Check::at_least(&format!("r{i}_decay_rate"), rate, theorem_rate)
                    .with_detail(format!("fit residual {:.3e}", fit.residual)),
            );
            summary.push(
                Check::above(&format!("r{i}_exceeds_heat_rate"), rate, bare_rate),
            );
            fits.push(FitRecord { label: format!("r{i}_hn_sum"), fit, theory: Some(theorem_rate) });
        }
        if st.large_alpha_check {
            let (eo, et, _) = st.amplitudes(&sc.params, spec.alpha);
            let eps_sq = 100.0 * (spec.alpha * eo * eo + et * et);
            let worst = o.samples.iter().map(|s| s.large_alpha_total).fold(0.0, f64::max);
            let worst_sq = o.samples.iter().map(|s| s.large_alpha_squared_total).fold(0.0, f64::max);
            summary.push(Check::at_most(&format!("r{i}_large_alpha_total"), worst, eps_sq));
            summary.info(&format!("r{i}_large_alpha_squared_total"), worst_sq);
        }
        summary.info(
            &format!("r{i}"),
            serde_json::json!({
                "seed": spec.seed,
                "alpha": spec.alpha,
                "eps_omega": spec.config.ic.eps_omega,
                "eps_theta": spec.config.ic.eps_theta,
                "t_final": o.t_final,
                "steps": o.steps,
                "horizon": o.horizon,
                "horizon_enforced": o.horizon_enforced,
                "max_e_omega": o.bootstrap.max_e_omega,
                "max_e_theta": o.bootstrap.max_e_theta,
            }),
        );
    }
    summary.info("runs", specs.len());
    summary.info("theorem_rate", theorem_rate);
    summary.info("bare_heat_rate", bare_rate);
    summary.info("fit_window", [window.0, window.1]);
    let (kr, xr) = st.sim.retained();
    summary.info("retained", [kr, xr]);

    let mut out = ScenarioOutput::new(summary, series);
    out.fits = fits;
    if st.write_snapshot {
        let mut bytes = Vec::new();
        write_snapshot(&mut bytes, &outputs[0].final_state, &specs[0].config.params)?;
        out.files.push(("final_state.bin".to_string(), bytes));
    }
    Ok(out)
}
