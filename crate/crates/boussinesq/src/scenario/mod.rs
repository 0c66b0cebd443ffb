//! Scenario files and their runners.
//!
//! A scenario is a TOML document naming one study kind plus its options (see
//! `docs/config.md`). [`run_scenario`] executes it and returns the artifacts;
//! [`ScenarioOutput::write`] puts them on disk as `series.csv`, `fits.json`
//! and `summary.json`.

pub mod config;
mod eigen;
mod growth;
mod modal;
mod nonlinear;
pub mod report;
mod suites;

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use config::{parse_config, ConfigError, EpsRule, ModeSet, Scenario, Study, Suite};
pub use growth::growth_trace;
pub use report::{Check, Comparison, FitRecord, ScenarioOutput, Series, Summary, SCHEMA_VERSION};

use crate::energy::EnergyError;
use crate::fit::FitError;
use crate::linear::LinearError;
use crate::model::Mode;
use crate::ode::OdeError;
use crate::spectral::SimError;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error("{0}")]
    Unsupported(String),
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, RunError> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_config(&text)?)
}

/// Runs a scenario in memory. Deterministic for a fixed config and seed.
pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioOutput, RunError> {
    let mut out = match &scenario.study {
        Study::ModalExact(s) => modal::run(scenario, s, false)?,
        Study::ModalOde(s) => modal::run(scenario, s, true)?,
        Study::EigenSweep(s) => eigen::run(scenario, s)?,
        Study::InviscidGrowth(s) => growth::run(scenario, s)?,
        Study::NonlinearRun(s) => nonlinear::run(scenario, s)?,
        Study::EnvelopeSuite(s) => suites::run(scenario, s)?,
    };
    out.summary.info("seed", scenario.seed);
    if !scenario.description.is_empty() {
        out.summary.info("description", &scenario.description);
    }
    Ok(out)
}

/// Runs a scenario and writes its artifacts to `dir`.
pub fn run_to_dir(scenario: &Scenario, dir: &Path) -> Result<ScenarioOutput, RunError> {
    let out = run_scenario(scenario)?;
    out.write(dir)?;
    Ok(out)
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer in `1..=k_max` with a random sign.
pub(crate) fn random_k(rng: &mut ChaCha8Rng, k_max: i64) -> i64 {
    let k = rng.random_range(1..=k_max);
    if rng.random::<bool>() {
        k
    } else {
        -k
    }
}

pub(crate) fn random_mode(rng: &mut ChaCha8Rng, k_max: i64, xi_max: f64) -> Mode {
    let k = random_k(rng, k_max);
    let xi = if xi_max > 0.0 { rng.random_range(-xi_max..=xi_max) } else { 0.0 };
    Mode::new(k, xi)
}

/// Log-uniform draw from `[lo, hi]`.
pub(crate) fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    (rng.random_range(lo.ln()..=hi.ln())).exp()
}
