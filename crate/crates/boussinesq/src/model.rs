//! Physical parameters, Fourier modes, modal states and spectral fields.
//!
//! Spectral data is stored in the sheared frame `(x - beta*t*y, y)`. A stored
//! vertical frequency `xi` corresponds to the physical vertical frequency
//! `xi - beta*k*t`, so `(d_x, d_y - t*beta*d_x)` acts on stored data as
//! multiplication by `i*(k, xi - beta*k*t)`.

use std::collections::BTreeMap;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("negative coefficient {name} = {value}")]
    NegativeCoefficient { name: &'static str, value: f64 },
    #[error("non-finite parameter {0}")]
    NonFinite(&'static str),
}

/// The six physical constants and the Sobolev index used by weighted norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
    pub nu_x: f64,
    pub nu_y: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    pub sobolev_n: u32,
}

impl Default for Params {
    fn default() -> Self {
        Params { alpha: 0.0, beta: 1.0, nu_x: 0.0, nu_y: 0.0, eta_x: 0.0, eta_y: 0.0, sobolev_n: 0 }
    }
}

impl Params {
    /// Isotropic dissipation: `nu_x = nu_y = nu`, `eta_x = eta_y = eta`.
    pub fn isotropic(alpha: f64, beta: f64, nu: f64, eta: f64, sobolev_n: u32) -> Self {
        Params { alpha, beta, nu_x: nu, nu_y: nu, eta_x: eta, eta_y: eta, sobolev_n }
    }

    pub fn inviscid(alpha: f64, beta: f64) -> Self {
        Params { alpha, beta, ..Params::default() }
    }

    pub fn is_inviscid(&self) -> bool {
        self.nu_x == 0.0 && self.nu_y == 0.0 && self.eta_x == 0.0 && self.eta_y == 0.0
    }
}

/// Returns `params` unchanged when every coefficient is finite and the
/// dissipation coefficients and `alpha` are nonnegative.
pub fn validate(params: Params) -> Result<Params, ModelError> {
    let named = [
        ("alpha", params.alpha),
        ("nu_x", params.nu_x),
        ("nu_y", params.nu_y),
        ("eta_x", params.eta_x),
        ("eta_y", params.eta_y),
    ];
    if !params.beta.is_finite() {
        return Err(ModelError::NonFinite("beta"));
    }
    for (name, value) in named {
        if !value.is_finite() {
            return Err(ModelError::NonFinite(name));
        }
        if value < 0.0 {
            return Err(ModelError::NegativeCoefficient { name, value });
        }
    }
    Ok(params)
}

/// One Fourier frequency: integer horizontal wavenumber, real vertical frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub k: i64,
    pub xi: f64,
}

impl Mode {
    pub fn new(k: i64, xi: f64) -> Self {
        Mode { k, xi }
    }

    pub fn kf(&self) -> f64 {
        self.k as f64
    }

    /// Physical vertical frequency `xi - beta*k*t` of the stored label.
    pub fn xi_phys(&self, beta: f64, t: f64) -> f64 {
        self.xi - beta * self.kf() * t
    }

    /// `k^2 + (xi - beta*k*t)^2`, the symbol of `-Delta_t`.
    pub fn lap_symbol(&self, beta: f64, t: f64) -> f64 {
        let xp = self.xi_phys(beta, t);
        self.kf() * self.kf() + xp * xp
    }
}

/// Vorticity and temperature amplitudes of a single mode.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModeState {
    pub omega_hat: Complex64,
    pub theta_hat: Complex64,
}

impl ModeState {
    pub fn new(omega_hat: Complex64, theta_hat: Complex64) -> Self {
        ModeState { omega_hat, theta_hat }
    }

    pub fn real(omega: f64, theta: f64) -> Self {
        ModeState { omega_hat: Complex64::new(omega, 0.0), theta_hat: Complex64::new(theta, 0.0) }
    }

    pub fn is_finite(&self) -> bool {
        self.omega_hat.is_finite() && self.theta_hat.is_finite()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ModeState { omega_hat: self.omega_hat * c, theta_hat: self.theta_hat * c }
    }

    pub fn conj(&self) -> Self {
        ModeState { omega_hat: self.omega_hat.conj(), theta_hat: self.theta_hat.conj() }
    }

    pub fn max_abs_diff(&self, other: &ModeState) -> f64 {
        (self.omega_hat - other.omega_hat).norm().max((self.theta_hat - other.theta_hat).norm())
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.omega_hat.re, self.omega_hat.im, self.theta_hat.re, self.theta_hat.im]
    }

    pub fn from_slice(v: &[f64]) -> Self {
        ModeState { omega_hat: Complex64::new(v[0], v[1]), theta_hat: Complex64::new(v[2], v[3]) }
    }
}

/// `(1 + k^2 + xi^2)^(n/2)`.
pub fn sobolev_weight(n: u32, mode: Mode) -> f64 {
    sobolev_weight_sq(n, mode).sqrt()
}

/// `(1 + k^2 + xi^2)^n`, the squared weight used in modal `H^N` sums.
pub fn sobolev_weight_sq(n: u32, mode: Mode) -> f64 {
    let base = 1.0 + mode.kf() * mode.kf() + mode.xi * mode.xi;
    base.powi(n as i32)
}

/// Complex data on the lattice `k in -K..=K`, `xi = dxi * j`, `j in -Xi..=Xi`.
///
/// `data[[k + K, j + Xi]]` holds the coefficient of mode `(k, j*dxi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid_k: usize,
    pub grid_xi: usize,
    pub dxi: f64,
    pub data: Array2<Complex64>,
    pub frame_time: f64,
}

impl SpectralField {
    pub fn zeros(grid_k: usize, grid_xi: usize, dxi: f64, frame_time: f64) -> Self {
        SpectralField {
            grid_k,
            grid_xi,
            dxi,
            data: Array2::zeros((2 * grid_k + 1, 2 * grid_xi + 1)),
            frame_time,
        }
    }

    pub fn same_shape(&self) -> Self {
        SpectralField::zeros(self.grid_k, self.grid_xi, self.dxi, self.frame_time)
    }

    pub fn shape(&self) -> (usize, usize) {
        (2 * self.grid_k + 1, 2 * self.grid_xi + 1)
    }

    pub fn k_of(&self, row: usize) -> i64 {
        row as i64 - self.grid_k as i64
    }

    pub fn j_of(&self, col: usize) -> i64 {
        col as i64 - self.grid_xi as i64
    }

    pub fn mode_at(&self, row: usize, col: usize) -> Mode {
        Mode::new(self.k_of(row), self.j_of(col) as f64 * self.dxi)
    }

    pub fn index_of(&self, k: i64, j: i64) -> Option<(usize, usize)> {
        let (r, c) = (k + self.grid_k as i64, j + self.grid_xi as i64);
        let (nr, nc) = self.shape();
        if r < 0 || c < 0 || r as usize >= nr || c as usize >= nc {
            None
        } else {
            Some((r as usize, c as usize))
        }
    }

    pub fn get(&self, k: i64, j: i64) -> Complex64 {
        self.index_of(k, j).map(|ix| self.data[ix]).unwrap_or_default()
    }

    pub fn set(&mut self, k: i64, j: i64, value: Complex64) {
        if let Some(ix) = self.index_of(k, j) {
            self.data[ix] = value;
        }
    }

    /// Largest `|data(k,j) - conj(data(-k,-j))|` over the lattice.
    pub fn hermitian_defect(&self) -> f64 {
        let (nr, nc) = self.shape();
        let mut worst = 0.0f64;
        for r in 0..nr {
            for c in 0..nc {
                let d = self.data[[r, c]] - self.data[[nr - 1 - r, nc - 1 - c]].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// Replaces the data by its Hermitian part `(f + conj(f(-.)))/2`.
    pub fn symmetrize(&mut self) {
        let (nr, nc) = self.shape();
        let orig = self.data.clone();
        for r in 0..nr {
            for c in 0..nc {
                self.data[[r, c]] = 0.5 * (orig[[r, c]] + orig[[nr - 1 - r, nc - 1 - c]].conj());
            }
        }
    }

    /// Discrete `L^2` norm squared, `sum |f|^2`.
    pub fn l2_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `sum (1 + k^2 + xi^2)^n |f|^2`.
    pub fn hn_sq(&self, n: u32) -> f64 {
        self.weighted_sum(|m, _| sobolev_weight_sq(n, m))
    }

    /// `sum w(mode, frame_time) |f|^2` in lattice order.
    pub fn weighted_sum(&self, w: impl Fn(Mode, f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for ((r, c), z) in self.data.indexed_iter() {
            acc += w(self.mode_at(r, c), self.frame_time) * z.norm_sqr();
        }
        acc
    }
}

/// Time-stamped values of named energy functionals with their dissipation rates.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyReport {
    pub time: f64,
    pub entries: BTreeMap<String, EnergyEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyEntry {
    pub value: f64,
    pub dissipation: f64,
}

impl EnergyReport {
    pub fn new(time: f64) -> Self {
        EnergyReport { time, entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, name: &str, value: f64, dissipation: f64) {
        self.entries.insert(name.to_string(), EnergyEntry { value, dissipation });
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.entries.get(name).map(|e| e.value)
    }

    pub fn dissipation(&self, name: &str) -> Option<f64> {
        self.entries.get(name).map(|e| e.dissipation)
    }

    pub fn is_valid(&self) -> bool {
        self.entries.values().all(|e| e.value >= 0.0 && e.dissipation >= 0.0)
    }
}
