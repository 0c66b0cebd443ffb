//! Initial data for the nonlinear solver: band-limited random fields or a
//! single Fourier mode, rescaled to prescribed norms.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{sobolev_weight_sq, Params, SpectralField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "kebab-case")]
pub enum IcProfile {
    Zero,
    /// Random amplitudes and phases on `|k| <= k_band`, `|xi| <= xi_band`.
    RandomBand { k_band: i64, xi_band: f64 },
    /// The real field `2 Re(e^{i(k x + j dxi y)})` in both unknowns.
    SingleMode { k: i64, j: i64 },
}

/// Which norm of the temperature is set to `eps_theta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaNorm {
    /// `||th||_{H^N}`
    #[default]
    Sobolev,
    /// `||grad th||_{H^N}`
    Gradient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcSpec {
    #[serde(flatten)]
    pub profile: IcProfile,
    /// `||w_0||_{H^N}`
    pub eps_omega: f64,
    pub eps_theta: f64,
    #[serde(default)]
    pub seed: u64,
    /// Exclude the `k = 0` modes from the random band.
    #[serde(default = "yes")]
    pub zero_mean_x: bool,
    #[serde(default)]
    pub theta_norm: ThetaNorm,
}

fn yes() -> bool {
    true
}

impl IcSpec {
    pub fn random(k_band: i64, xi_band: f64, eps_omega: f64, eps_theta: f64, seed: u64) -> Self {
        IcSpec {
            profile: IcProfile::RandomBand { k_band, xi_band },
            eps_omega,
            eps_theta,
            seed,
            zero_mean_x: true,
            theta_norm: ThetaNorm::Sobolev,
        }
    }

    pub fn single_mode(k: i64, j: i64, eps_omega: f64, eps_theta: f64) -> Self {
        IcSpec {
            profile: IcProfile::SingleMode { k, j },
            eps_omega,
            eps_theta,
            seed: 0,
            zero_mean_x: false,
            theta_norm: ThetaNorm::Sobolev,
        }
    }

    pub fn zero() -> Self {
        IcSpec::single_mode(0, 0, 0.0, 0.0).with_profile(IcProfile::Zero)
    }

    fn with_profile(mut self, profile: IcProfile) -> Self {
        self.profile = profile;
        self
    }
}

fn fill(field: &mut SpectralField, spec: &IcSpec, rng: &mut ChaCha8Rng) {
    match &spec.profile {
        IcProfile::Zero => {}
        IcProfile::SingleMode { k, j } => {
            field.set(*k, *j, Complex64::new(1.0, 0.0));
            field.set(-*k, -*j, Complex64::new(1.0, 0.0));
        }
        IcProfile::RandomBand { k_band, xi_band } => {
            let (nr, nc) = field.shape();
            for r in 0..nr {
                for c in 0..nc {
                    let mode = field.mode_at(r, c);
                    let amp: f64 = rng.random();
                    let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
                    let inside = mode.k.abs() <= *k_band
                        && mode.xi.abs() <= *xi_band
                        && !(mode.k == 0 && (spec.zero_mean_x || field.j_of(c) == 0));
                    if inside {
                        field.data[[r, c]] = Complex64::from_polar(amp, phase);
                    }
                }
            }
            field.symmetrize();
        }
    }
}

fn rescale(field: &mut SpectralField, norm_sq: f64, target: f64) {
    let s = if norm_sq > 0.0 { target / norm_sq.sqrt() } else { 0.0 };
    field.data.mapv_inplace(|z| z * s);
}

/// Builds `(w_0, th_0)` on a `(2K+1) x (2Xi+1)` lattice at frame time 0.
pub fn initial_fields(
    spec: &IcSpec,
    params: &Params,
    grid_k: usize,
    grid_xi: usize,
    dxi: f64,
) -> (SpectralField, SpectralField) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut omega = SpectralField::zeros(grid_k, grid_xi, dxi, 0.0);
    let mut theta = omega.clone();
    fill(&mut omega, spec, &mut rng);
    fill(&mut theta, spec, &mut rng);
    let n = params.sobolev_n;
    let w_sq = omega.hn_sq(n);
    rescale(&mut omega, w_sq, spec.eps_omega);
    let th_sq = match spec.theta_norm {
        ThetaNorm::Sobolev => theta.hn_sq(n),
        ThetaNorm::Gradient => theta.weighted_sum(|m, _| sobolev_weight_sq(n, m) * (m.kf() * m.kf() + m.xi * m.xi)),
    };
    rescale(&mut theta, th_sq, spec.eps_theta);
    (omega, theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_are_exact() {
        let p = Params { sobolev_n: 5, ..Params::default() };
        let spec = IcSpec::random(4, 4.0, 2e-3, 1e-6, 7);
        let (w, th) = initial_fields(&spec, &p, 10, 10, 1.0);
        assert!((w.hn_sq(5).sqrt() / 2e-3 - 1.0).abs() < 1e-13);
        assert!((th.hn_sq(5).sqrt() / 1e-6 - 1.0).abs() < 1e-13);
        assert!(w.is_hermitian(0.0) && th.is_hermitian(0.0));
        for j in -10..=10 {
            assert_eq!(w.get(0, j), Complex64::default());
        }
        assert_eq!(w.get(5, 0), Complex64::default());
        assert_ne!(w.data, th.data);
    }

    #[test]
    fn seeds_are_deterministic() {
        let p = Params::default();
        let a = initial_fields(&IcSpec::random(3, 3.0, 1.0, 1.0, 11), &p, 6, 6, 0.5);
        let b = initial_fields(&IcSpec::random(3, 3.0, 1.0, 1.0, 11), &p, 6, 6, 0.5);
        let c = initial_fields(&IcSpec::random(3, 3.0, 1.0, 1.0, 12), &p, 6, 6, 0.5);
        assert_eq!(a, b);
        assert_ne!(a.0.data, c.0.data);
    }

    #[test]
    fn gradient_norm_and_zero() {
        let p = Params { sobolev_n: 0, ..Params::default() };
        let mut spec = IcSpec::single_mode(1, 2, 0.5, 0.3);
        spec.theta_norm = ThetaNorm::Gradient;
        let (w, th) = initial_fields(&spec, &p, 3, 3, 1.0);
        assert!((w.l2_sq() - 0.25).abs() < 1e-15);
        // |grad|^2 = 1 + 4 on both conjugate modes
        assert!((th.l2_sq() * 5.0 - 0.09).abs() < 1e-15);
        let (w, th) = initial_fields(&IcSpec::zero(), &p, 3, 3, 1.0);
        assert_eq!(w.l2_sq() + th.l2_sq(), 0.0);
    }
}
