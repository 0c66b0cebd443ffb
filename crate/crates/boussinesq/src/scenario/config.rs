//! Scenario config files (TOML) and their validation.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::model::{validate, ModelError, Mode, Params};
use crate::spectral::{GridSpec, HorizonPolicy, IcProfile, IcSpec, SimConfig, ThetaNorm};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid field `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl ConfigError {
    fn missing(field: &str) -> Self {
        ConfigError::Validation { field: field.to_string(), message: "required field is missing".into() }
    }

    fn invalid(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Validation { field: field.to_string(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub seed: u64,
    pub params: Params,
    pub output_dir: Option<PathBuf>,
    pub study: Study,
}

impl Scenario {
    pub fn kind(&self) -> &'static str {
        self.study.kind()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Study {
    ModalExact(ModalStudy),
    ModalOde(ModalStudy),
    EigenSweep(EigenStudy),
    InviscidGrowth(GrowthStudy),
    NonlinearRun(NonlinearStudy),
    EnvelopeSuite(SuiteStudy),
}

impl Study {
    pub fn kind(&self) -> &'static str {
        match self {
            Study::ModalExact(_) => "modal-exact",
            Study::ModalOde(_) => "modal-ode",
            Study::EigenSweep(_) => "eigen-sweep",
            Study::InviscidGrowth(_) => "inviscid-growth",
            Study::NonlinearRun(_) => "nonlinear-run",
            Study::EnvelopeSuite(_) => "envelope-suite",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModeSet {
    List(Vec<Mode>),
    /// `k` uniform on `1..=k_max` with random sign, `xi` uniform on `[-xi_max, xi_max]`.
    Random { count: usize, k_max: i64, xi_max: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModalStudy {
    pub modes: ModeSet,
    pub omega0: Complex64,
    pub theta0: Complex64,
    pub t_end: f64,
    pub samples: usize,
    pub tol: f64,
    pub quad_tol: f64,
    pub integrating_factor: bool,
    /// Draw `alpha` log-uniformly from this range, once per mode.
    pub alpha_range: Option<(f64, f64)>,
    pub closed_form_tol: f64,
    pub energy_tol: f64,
    pub period_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenStudy {
    pub alphas: Vec<f64>,
    pub ks: Vec<i64>,
    pub xis: Vec<f64>,
    /// Number of random parameter draws for the property checks (0: none).
    pub draws: usize,
    pub t_check: f64,
    pub relative_tol: f64,
    pub propagator_tol: f64,
    pub flip_offset: f64,
}

impl EigenStudy {
    /// Sweep points in row order: `alpha` outermost, then `k`, then `xi`.
    pub fn plan(&self) -> Vec<(f64, Mode)> {
        let mut out = Vec::new();
        for &a in &self.alphas {
            for &k in &self.ks {
                for &xi in &self.xis {
                    out.push((a, Mode::new(k, xi)));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthStudy {
    pub alphas: Vec<f64>,
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
    pub tol: f64,
    pub initial: (f64, f64),
    pub exponent_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsRule {
    Explicit { eps_omega: f64, eps_theta: f64 },
    /// `eps_1 = min(nu, eta)^{1/2}/100`, `eps_2 = sqrt(nu eta) eps_1/100`.
    BootstrapTheorem,
    /// `alpha ||w_0||^2_{H^N} = ||grad th_0||^2_{H^N} = eps^2/200`.
    LargeAlpha { eps: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearStudy {
    pub sim: SimConfig,
    pub eps_rule: EpsRule,
    pub seeds: Vec<u64>,
    pub alphas: Vec<f64>,
    pub bootstrap_check: bool,
    pub decay_check: bool,
    pub large_alpha_check: bool,
    pub fit_window: Option<(f64, f64)>,
    pub write_snapshot: bool,
}

/// Smallest of `(nu_x, nu_y)` and of `(eta_x, eta_y)`.
pub fn min_diffusivities(p: &Params) -> (f64, f64) {
    (p.nu_x.min(p.nu_y), p.eta_x.min(p.eta_y))
}

impl NonlinearStudy {
    /// `(eps_omega, eps_theta, theta_norm)` for a run with the given `alpha`.
    pub fn amplitudes(&self, params: &Params, alpha: f64) -> (f64, f64, ThetaNorm) {
        match self.eps_rule {
            EpsRule::Explicit { eps_omega, eps_theta } => (eps_omega, eps_theta, self.sim.ic.theta_norm),
            EpsRule::BootstrapTheorem => {
                let (nu, eta) = min_diffusivities(params);
                let e1 = nu.min(eta).sqrt() / 100.0;
                (e1, (nu * eta).sqrt() * e1 / 100.0, ThetaNorm::Sobolev)
            }
            EpsRule::LargeAlpha { eps } => {
                let share = eps / (10.0 * 2f64.sqrt());
                (share / alpha.sqrt(), share, ThetaNorm::Gradient)
            }
        }
    }

    /// `eta^{1/2} nu^{1/3} eps_2 / eps_1`, the upper limit on `alpha` in the
    /// bootstrap theorem.
    pub fn alpha_limit(&self, params: &Params) -> f64 {
        let (nu, eta) = min_diffusivities(params);
        let (e1, e2, _) = self.amplitudes(params, params.alpha.max(1.0));
        eta.sqrt() * nu.cbrt() * e2 / e1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    PhaseBound,
    ThetaEnvelope,
    Omega1,
    Multiplier,
    SolverHygiene,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::PhaseBound => "phase-bound",
            Suite::ThetaEnvelope => "theta-envelope",
            Suite::Omega1 => "omega1",
            Suite::Multiplier => "multiplier",
            Suite::SolverHygiene => "solver-hygiene",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteStudy {
    pub suite: Suite,
    pub count: usize,
    pub t_max: f64,
    pub slack: f64,
}

// ---- raw file layout ----

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema_version: Option<u32>,
    name: Option<String>,
    kind: Option<String>,
    description: Option<String>,
    seed: Option<u64>,
    output_dir: Option<String>,
    params: Option<RawParams>,
    modes: Option<RawModes>,
    time: Option<RawTime>,
    solver: Option<RawSolver>,
    checks: Option<RawChecks>,
    sweep: Option<RawSweep>,
    growth: Option<RawGrowth>,
    sim: Option<RawSim>,
    ic: Option<RawIc>,
    runs: Option<RawRuns>,
    suite: Option<RawSuite>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawParams {
    alpha: Option<f64>,
    beta: Option<f64>,
    nu: Option<f64>,
    eta: Option<f64>,
    nu_x: Option<f64>,
    nu_y: Option<f64>,
    eta_x: Option<f64>,
    eta_y: Option<f64>,
    sobolev_n: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRandomModes {
    count: Option<usize>,
    k_max: Option<i64>,
    xi_max: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModes {
    list: Option<Vec<(i64, f64)>>,
    random: Option<RawRandomModes>,
    omega0: Option<[f64; 2]>,
    theta0: Option<[f64; 2]>,
    alpha_range: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    t_end: Option<f64>,
    samples: Option<usize>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    tol: Option<f64>,
    quad_tol: Option<f64>,
    integrating_factor: Option<bool>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawChecks {
    closed_form_tol: Option<f64>,
    energy_tol: Option<f64>,
    period_tol: Option<f64>,
    draws: Option<usize>,
    t_check: Option<f64>,
    relative_tol: Option<f64>,
    propagator_tol: Option<f64>,
    flip_offset: Option<f64>,
    exponent_tol: Option<f64>,
    bootstrap: Option<bool>,
    decay: Option<bool>,
    large_alpha: Option<bool>,
    fit_window: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    lo: f64,
    hi: f64,
    count: usize,
    #[serde(default)]
    log: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    alpha: Option<Vec<f64>>,
    alpha_range: Option<RawRange>,
    k: Option<Vec<i64>>,
    xi: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrowth {
    alpha: Option<Vec<f64>>,
    t_start: Option<f64>,
    t_end: Option<f64>,
    samples: Option<usize>,
    tol: Option<f64>,
    initial: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSim {
    grid: Option<usize>,
    k_max: Option<usize>,
    xi_max: Option<usize>,
    dxi: Option<f64>,
    dt: Option<f64>,
    t_end: Option<f64>,
    dealias_fraction: Option<f64>,
    snapshot_every: Option<usize>,
    cfl: Option<f64>,
    horizon: Option<HorizonPolicy>,
    nonlinear: Option<bool>,
    write_snapshot: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIc {
    profile: Option<String>,
    k_band: Option<i64>,
    xi_band: Option<f64>,
    k: Option<i64>,
    j: Option<i64>,
    eps_rule: Option<String>,
    eps_omega: Option<f64>,
    eps_theta: Option<f64>,
    eps: Option<f64>,
    theta_norm: Option<ThetaNorm>,
    zero_mean_x: Option<bool>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawRuns {
    seeds: Option<Vec<u64>>,
    alphas: Option<Vec<f64>>,
    alpha_theorem_factors: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSuite {
    name: Option<String>,
    count: Option<usize>,
    t_max: Option<f64>,
    slack: Option<f64>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
    (line, column)
}

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::invalid(field, format!("must be positive, got {v}")))
    }
}

fn nonzero_count(field: &str, v: usize) -> Result<usize, ConfigError> {
    if v == 0 {
        Err(ConfigError::invalid(field, "must be at least 1"))
    } else {
        Ok(v)
    }
}

fn complex(v: Option<[f64; 2]>, default: Complex64) -> Complex64 {
    v.map(|[re, im]| Complex64::new(re, im)).unwrap_or(default)
}

fn build_params(raw: Option<RawParams>) -> Result<Params, ConfigError> {
    let raw = raw.unwrap_or_default();
    let d = Params::default();
    let p = Params {
        alpha: raw.alpha.unwrap_or(d.alpha),
        beta: raw.beta.unwrap_or(d.beta),
        nu_x: raw.nu_x.or(raw.nu).unwrap_or(d.nu_x),
        nu_y: raw.nu_y.or(raw.nu).unwrap_or(d.nu_y),
        eta_x: raw.eta_x.or(raw.eta).unwrap_or(d.eta_x),
        eta_y: raw.eta_y.or(raw.eta).unwrap_or(d.eta_y),
        sobolev_n: raw.sobolev_n.unwrap_or(d.sobolev_n),
    };
    validate(p).map_err(|e| match &e {
        ModelError::NegativeCoefficient { name, .. } => ConfigError::invalid(&format!("params.{name}"), e.to_string()),
        _ => ConfigError::invalid("params", e.to_string()),
    })
}

/// Parses and validates a scenario file.
pub fn parse_config(text: &str) -> Result<Scenario, ConfigError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map(|s| line_col(text, s.start)).unwrap_or((1, 1));
        ConfigError::Parse { line, column, message: e.message().to_string() }
    })?;
    if let Some(v) = raw.schema_version {
        if v != super::SCHEMA_VERSION {
            return Err(ConfigError::invalid("schema_version", format!("unsupported version {v}")));
        }
    }
    let name = raw.name.clone().ok_or_else(|| ConfigError::missing("name"))?;
    let kind = raw.kind.clone().ok_or_else(|| ConfigError::missing("kind"))?;
    let params = build_params(raw.params)?;
    let checks = raw.checks.unwrap_or_default();
    let study = match kind.as_str() {
        "modal-exact" | "modal-ode" => {
            let s = modal_study(raw.modes, raw.time, raw.solver.unwrap_or_default(), &checks)?;
            if kind == "modal-exact" {
                Study::ModalExact(s)
            } else {
                Study::ModalOde(s)
            }
        }
        "eigen-sweep" => Study::EigenSweep(eigen_study(raw.sweep, &checks, &params)?),
        "inviscid-growth" => Study::InviscidGrowth(growth_study(raw.growth, &checks)?),
        "nonlinear-run" => Study::NonlinearRun(nonlinear_study(raw.sim, raw.ic, raw.runs, &checks, &params)?),
        "envelope-suite" => Study::EnvelopeSuite(suite_study(raw.suite)?),
        other => {
            return Err(ConfigError::invalid(
                "kind",
                format!(
                    "unknown kind `{other}` (expected modal-exact, modal-ode, eigen-sweep, inviscid-growth, nonlinear-run or envelope-suite)"
                ),
            ))
        }
    };
    Ok(Scenario {
        name,
        description: raw.description.unwrap_or_default(),
        seed: raw.seed.unwrap_or(0),
        params,
        output_dir: raw.output_dir.map(PathBuf::from),
        study,
    })
}

fn modal_study(
    modes: Option<RawModes>,
    time: Option<RawTime>,
    solver: RawSolver,
    checks: &RawChecks,
) -> Result<ModalStudy, ConfigError> {
    let modes = modes.ok_or_else(|| ConfigError::missing("modes"))?;
    let set = match (modes.list, modes.random) {
        (Some(list), None) => {
            if list.is_empty() {
                return Err(ConfigError::invalid("modes.list", "must not be empty"));
            }
            ModeSet::List(list.into_iter().map(|(k, xi)| Mode::new(k, xi)).collect())
        }
        (None, Some(r)) => {
            let count = nonzero_count("modes.random.count", r.count.ok_or_else(|| ConfigError::missing("modes.random.count"))?)?;
            let k_max = r.k_max.ok_or_else(|| ConfigError::missing("modes.random.k_max"))?;
            if k_max < 1 {
                return Err(ConfigError::invalid("modes.random.k_max", "must be at least 1"));
            }
            let xi_max = r.xi_max.ok_or_else(|| ConfigError::missing("modes.random.xi_max"))?;
            ModeSet::Random { count, k_max, xi_max: xi_max.abs() }
        }
        (Some(_), Some(_)) => return Err(ConfigError::invalid("modes", "give either `list` or `random`, not both")),
        (None, None) => return Err(ConfigError::missing("modes.list")),
    };
    let time = time.ok_or_else(|| ConfigError::missing("time"))?;
    let t_end = positive("time.t_end", time.t_end.ok_or_else(|| ConfigError::missing("time.t_end"))?)?;
    let alpha_range = match modes.alpha_range {
        Some([lo, hi]) if lo > 0.0 && hi >= lo => Some((lo, hi)),
        Some(_) => return Err(ConfigError::invalid("modes.alpha_range", "need 0 < lo <= hi")),
        None => None,
    };
    Ok(ModalStudy {
        modes: set,
        omega0: complex(modes.omega0, Complex64::new(1.0, 0.0)),
        theta0: complex(modes.theta0, Complex64::new(1.0, 0.0)),
        t_end,
        samples: nonzero_count("time.samples", time.samples.unwrap_or(101))?.max(2),
        tol: positive("solver.tol", solver.tol.unwrap_or(1e-10))?,
        quad_tol: positive("solver.quad_tol", solver.quad_tol.unwrap_or(1e-10))?,
        integrating_factor: solver.integrating_factor.unwrap_or(false),
        alpha_range,
        closed_form_tol: positive("checks.closed_form_tol", checks.closed_form_tol.unwrap_or(1e-8))?,
        energy_tol: positive("checks.energy_tol", checks.energy_tol.unwrap_or(1e-10))?,
        period_tol: positive("checks.period_tol", checks.period_tol.unwrap_or(1e-6))?,
    })
}

fn eigen_study(sweep: Option<RawSweep>, checks: &RawChecks, params: &Params) -> Result<EigenStudy, ConfigError> {
    if params.beta != 0.0 {
        return Err(ConfigError::invalid("params.beta", "eigen-sweep requires beta = 0"));
    }
    let sweep = sweep.ok_or_else(|| ConfigError::missing("sweep"))?;
    let alphas = match (sweep.alpha, sweep.alpha_range) {
        (Some(v), None) => v,
        (None, Some(r)) => {
            if r.count == 0 || !(r.lo >= 0.0) || r.hi < r.lo || (r.log && r.lo <= 0.0) {
                return Err(ConfigError::invalid("sweep.alpha_range", "need count >= 1, 0 <= lo <= hi (lo > 0 for log)"));
            }
            if r.log {
                crate::fit::geomspace(r.lo, r.hi, r.count).into_iter().take(r.count).collect()
            } else {
                crate::fit::linspace(r.lo, r.hi, r.count).into_iter().take(r.count).collect()
            }
        }
        (None, None) => return Err(ConfigError::missing("sweep.alpha")),
        (Some(_), Some(_)) => return Err(ConfigError::invalid("sweep", "give either `alpha` or `alpha_range`")),
    };
    if alphas.iter().any(|a| !(*a >= 0.0)) {
        return Err(ConfigError::invalid("sweep.alpha", "values must be non-negative"));
    }
    let ks = sweep.k.ok_or_else(|| ConfigError::missing("sweep.k"))?;
    if ks.contains(&0) {
        return Err(ConfigError::invalid("sweep.k", "k = 0 has no coupling"));
    }
    let xis = sweep.xi.ok_or_else(|| ConfigError::missing("sweep.xi"))?;
    Ok(EigenStudy {
        alphas,
        ks,
        xis,
        draws: checks.draws.unwrap_or(0),
        t_check: positive("checks.t_check", checks.t_check.unwrap_or(5.0))?,
        relative_tol: positive("checks.relative_tol", checks.relative_tol.unwrap_or(1e-12))?,
        propagator_tol: positive("checks.propagator_tol", checks.propagator_tol.unwrap_or(1e-8))?,
        flip_offset: positive("checks.flip_offset", checks.flip_offset.unwrap_or(1e-6))?,
    })
}

fn growth_study(growth: Option<RawGrowth>, checks: &RawChecks) -> Result<GrowthStudy, ConfigError> {
    let g = growth.ok_or_else(|| ConfigError::missing("growth"))?;
    let alphas = g.alpha.ok_or_else(|| ConfigError::missing("growth.alpha"))?;
    if alphas.is_empty() || alphas.iter().any(|a| !(*a >= 0.0 && *a <= 0.25)) {
        return Err(ConfigError::invalid("growth.alpha", "values must lie in [0, 1/4]"));
    }
    let t_start = positive("growth.t_start", g.t_start.unwrap_or(100.0))?;
    let t_end = positive("growth.t_end", g.t_end.unwrap_or(1e4))?;
    if t_end <= t_start {
        return Err(ConfigError::invalid("growth.t_end", "must exceed t_start"));
    }
    let initial = g.initial.map(|[a, b]| (a, b)).unwrap_or((0.0, 1.0));
    Ok(GrowthStudy {
        alphas,
        t_start,
        t_end,
        samples: nonzero_count("growth.samples", g.samples.unwrap_or(200))?.max(crate::fit::MIN_SAMPLES),
        tol: positive("growth.tol", g.tol.unwrap_or(1e-12))?,
        initial,
        exponent_tol: positive("checks.exponent_tol", checks.exponent_tol.unwrap_or(0.02))?,
    })
}

fn nonlinear_study(
    sim: Option<RawSim>,
    ic: Option<RawIc>,
    runs: Option<RawRuns>,
    checks: &RawChecks,
    params: &Params,
) -> Result<NonlinearStudy, ConfigError> {
    let s = sim.ok_or_else(|| ConfigError::missing("sim"))?;
    let dxi = positive("sim.dxi", s.dxi.unwrap_or(1.0))?;
    let grid = match (s.grid, s.k_max, s.xi_max) {
        (Some(n), None, None) => GridSpec::square(n, dxi),
        (None, Some(k), Some(x)) => GridSpec { k_max: k, xi_max: x, dxi },
        (None, None, None) => return Err(ConfigError::missing("sim.grid")),
        _ => return Err(ConfigError::invalid("sim.grid", "give either `grid` or both `k_max` and `xi_max`")),
    };
    let dt = s.dt.ok_or_else(|| ConfigError::missing("sim.dt"))?;
    let t_end = s.t_end.ok_or_else(|| ConfigError::missing("sim.t_end"))?;
    let ic = ic.ok_or_else(|| ConfigError::missing("ic"))?;
    let profile = match ic.profile.as_deref().unwrap_or("random-band") {
        "random-band" => IcProfile::RandomBand { k_band: ic.k_band.unwrap_or(4), xi_band: ic.xi_band.unwrap_or(4.0) },
        "single-mode" => IcProfile::SingleMode {
            k: ic.k.ok_or_else(|| ConfigError::missing("ic.k"))?,
            j: ic.j.ok_or_else(|| ConfigError::missing("ic.j"))?,
        },
        "zero" => IcProfile::Zero,
        other => return Err(ConfigError::invalid("ic.profile", format!("unknown profile `{other}`"))),
    };
    let eps_rule = match ic.eps_rule.as_deref().unwrap_or("explicit") {
        "explicit" => EpsRule::Explicit {
            eps_omega: ic.eps_omega.ok_or_else(|| ConfigError::missing("ic.eps_omega"))?,
            eps_theta: ic.eps_theta.ok_or_else(|| ConfigError::missing("ic.eps_theta"))?,
        },
        "bootstrap-theorem" => EpsRule::BootstrapTheorem,
        "large-alpha" => EpsRule::LargeAlpha { eps: positive("ic.eps", ic.eps.ok_or_else(|| ConfigError::missing("ic.eps"))?)? },
        other => return Err(ConfigError::invalid("ic.eps_rule", format!("unknown rule `{other}`"))),
    };
    let spec = IcSpec {
        profile,
        eps_omega: 0.0,
        eps_theta: 0.0,
        seed: 0,
        zero_mean_x: ic.zero_mean_x.unwrap_or(true),
        theta_norm: ic.theta_norm.unwrap_or_default(),
    };
    let mut config = SimConfig::new(*params, grid, dt, t_end, spec);
    config.dealias_fraction = s.dealias_fraction.unwrap_or(config.dealias_fraction);
    config.snapshot_every = s.snapshot_every.unwrap_or(10);
    config.cfl = s.cfl.unwrap_or(config.cfl);
    config.horizon = s.horizon.unwrap_or_default();
    config.nonlinear = s.nonlinear.unwrap_or(true);
    config.validate().map_err(|e| ConfigError::invalid("sim", e.to_string()))?;

    let runs = runs.unwrap_or_default();
    let mut study = NonlinearStudy {
        sim: config,
        eps_rule,
        seeds: runs.seeds.unwrap_or_else(|| vec![0]),
        alphas: Vec::new(),
        bootstrap_check: checks.bootstrap.unwrap_or(false),
        decay_check: checks.decay.unwrap_or(false),
        large_alpha_check: checks.large_alpha.unwrap_or(false),
        fit_window: checks.fit_window.map(|[a, b]| (a, b)),
        write_snapshot: s.write_snapshot.unwrap_or(true),
    };
    if study.seeds.is_empty() {
        return Err(ConfigError::invalid("runs.seeds", "must not be empty"));
    }
    if study.large_alpha_check && !matches!(study.eps_rule, EpsRule::LargeAlpha { .. }) {
        return Err(ConfigError::invalid("checks.large_alpha", "requires ic.eps_rule = \"large-alpha\""));
    }
    let mut alphas = runs.alphas.unwrap_or_default();
    if let Some(factors) = runs.alpha_theorem_factors {
        let limit = study.alpha_limit(params);
        alphas.extend(factors.iter().map(|f| f * limit));
    }
    if alphas.is_empty() {
        alphas.push(params.alpha);
    }
    if alphas.iter().any(|a| !(*a >= 0.0)) {
        return Err(ConfigError::invalid("runs.alphas", "values must be non-negative"));
    }
    if matches!(study.eps_rule, EpsRule::LargeAlpha { .. }) && alphas.iter().any(|a| *a <= 0.0) {
        return Err(ConfigError::invalid("runs.alphas", "the large-alpha rule needs alpha > 0"));
    }
    study.alphas = alphas;
    Ok(study)
}

fn suite_study(suite: Option<RawSuite>) -> Result<SuiteStudy, ConfigError> {
    let s = suite.ok_or_else(|| ConfigError::missing("suite"))?;
    let name = s.name.ok_or_else(|| ConfigError::missing("suite.name"))?;
    let (suite, count, t_max, slack) = match name.as_str() {
        "phase-bound" => (Suite::PhaseBound, 10_000, 50.0, 1e-12),
        "theta-envelope" => (Suite::ThetaEnvelope, 20, 30.0, 10.0),
        "omega1" => (Suite::Omega1, 3, 30.0, 10.0),
        "multiplier" => (Suite::Multiplier, 10_000, 100.0, 1e-10),
        "solver-hygiene" => (Suite::SolverHygiene, 4, 1.0, 1e-10),
        other => return Err(ConfigError::invalid("suite.name", format!("unknown suite `{other}`"))),
    };
    Ok(SuiteStudy {
        suite,
        count: nonzero_count("suite.count", s.count.unwrap_or(count))?,
        t_max: positive("suite.t_max", s.t_max.unwrap_or(t_max))?,
        slack: positive("suite.slack", s.slack.unwrap_or(slack))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_modal_exact_uses_defaults() {
        let s = parse_config(
            "name = \"m\"\nkind = \"modal-exact\"\n[modes]\nlist = [[1, 0.5]]\n[time]\nt_end = 2.0\n",
        )
        .unwrap();
        assert_eq!(s.kind(), "modal-exact");
        assert_eq!(s.params, Params::default());
        let Study::ModalExact(m) = &s.study else { panic!() };
        assert_eq!((m.tol, m.quad_tol, m.samples), (1e-10, 1e-10, 101));
        assert_eq!(m.closed_form_tol, 1e-8);
        assert_eq!(m.modes, ModeSet::List(vec![Mode::new(1, 0.5)]));
    }

    #[test]
    fn negative_coefficient_is_a_validation_error() {
        let e = parse_config("name = \"m\"\nkind = \"modal-ode\"\n[params]\nnu_x = -1\n").unwrap_err();
        match e {
            ConfigError::Validation { field, message } => {
                assert_eq!(field, "params.nu_x");
                assert!(message.contains("negative"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sweep_plan_cardinality() {
        let s = parse_config(
            "name = \"e\"\nkind = \"eigen-sweep\"\n[params]\nbeta = 0\nnu = 0.1\neta = 0.2\n\
             [sweep]\nalpha_range = { lo = 0.01, hi = 1.0, count = 10, log = true }\nk = [1, 2]\nxi = [0.0, 1.0]\n",
        )
        .unwrap();
        let Study::EigenSweep(e) = &s.study else { panic!() };
        assert_eq!(e.plan().len(), 40);
        assert!((e.alphas[0] - 0.01).abs() < 1e-15 && (e.alphas[9] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_config("name = \"x\"\nkind = = 3\n").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 2, .. }), "{e:?}");
        let e = parse_config("name = \"x\"\nkind = \"modal-ode\"\n\n[params]\nalpah = 1.0\n").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 5, column: 1, .. }), "{e:?}");
    }

    #[test]
    fn missing_fields_are_named() {
        let e = parse_config("kind = \"modal-ode\"\n").unwrap_err();
        assert_eq!(e, ConfigError::missing("name"));
        let e = parse_config("name = \"x\"\nkind = \"nonlinear-run\"\n[sim]\ngrid = 32\nt_end = 1.0\n").unwrap_err();
        assert_eq!(e, ConfigError::missing("sim.dt"));
        let e = parse_config("name = \"x\"\nkind = \"modal-ode\"\n[modes]\nlist = [[1, 0.0]]\n").unwrap_err();
        assert_eq!(e, ConfigError::missing("time"));
        let e = parse_config("name = \"x\"\nkind = \"envelope-suite\"\n").unwrap_err();
        assert_eq!(e, ConfigError::missing("suite"));
    }

    #[test]
    fn nonlinear_theorem_constants() {
        let s = parse_config(
            "name = \"n\"\nkind = \"nonlinear-run\"\n[params]\nnu = 0.05\neta = 0.05\n\
             [sim]\ngrid = 32\ndt = 0.1\nt_end = 1.0\n[ic]\neps_rule = \"bootstrap-theorem\"\n\
             [runs]\nseeds = [1, 2]\nalpha_theorem_factors = [0.0, 0.5]\n",
        )
        .unwrap();
        let Study::NonlinearRun(n) = &s.study else { panic!() };
        let (e1, e2, _) = n.amplitudes(&s.params, 0.0);
        assert!((e1 - 0.05f64.sqrt() / 100.0).abs() < 1e-18);
        assert!((e2 - 0.05 * e1 / 100.0).abs() < 1e-20);
        assert_eq!(n.alphas[0], 0.0);
        let expect = 0.5 * 0.05f64.sqrt() * 0.05f64.cbrt() * e2 / e1;
        assert!((n.alphas[1] - expect).abs() < 1e-18);
        assert_eq!(n.sim.grid.nx(), 32);
        assert_eq!(n.sim.snapshot_every, 10);
    }

    #[test]
    fn large_alpha_amplitudes() {
        let s = parse_config(
            "name = \"n\"\nkind = \"nonlinear-run\"\n[params]\nalpha = 1.0\nnu = 0.1\neta = 2.5\n\
             [sim]\ngrid = 32\ndt = 0.1\nt_end = 1.0\n[ic]\neps_rule = \"large-alpha\"\neps = 0.01\n\
             [checks]\nlarge_alpha = true\n",
        )
        .unwrap();
        let Study::NonlinearRun(n) = &s.study else { panic!() };
        let (a, b, norm) = n.amplitudes(&s.params, 4.0);
        assert_eq!(norm, ThetaNorm::Gradient);
        assert!((4.0 * a * a + b * b - 1e-4 / 100.0).abs() < 1e-18);
    }
}
