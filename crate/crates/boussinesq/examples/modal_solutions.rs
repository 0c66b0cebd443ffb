//! Single Fourier mode: closed forms against the adaptive integrator.
//!
//!     cargo run --example modal_solutions

use boussinesq::linear::{exact_rotation_inviscid, inviscid_couette_mode, rotation_period};
use boussinesq::model::{Mode, ModeState, Params};
use boussinesq::ode::{integrate_mode_at, IntegrateOptions};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mode = Mode::new(2, 1.5);
    let s0 = ModeState::new(Complex64::new(1.0, 0.0), Complex64::new(0.2, -0.1));
    let times = [0.0, 1.0, 5.0, 20.0];
    let opts = IntegrateOptions::new(1e-11);

    // alpha = 0, inviscid: the temperature is frozen and w grows linearly
    let p = Params::inviscid(0.0, 1.0);
    let num = integrate_mode_at(&p, mode, s0, 0.0, &times, opts)?;
    println!("inviscid couette, k = {}, xi = {}", mode.k, mode.xi);
    for (t, s) in times.iter().zip(&num) {
        let exact = inviscid_couette_mode(1.0, mode, s0, *t);
        println!("  t = {t:5.1}  w = {:.6}  error = {:.2e}", s.omega_hat, s.max_abs_diff(&exact));
    }

    // beta = 0, inviscid: a rotation with a fixed period
    let alpha = 2.0;
    let p = Params::inviscid(alpha, 0.0);
    let num = integrate_mode_at(&p, mode, s0, 0.0, &times, opts)?;
    println!("shear-free rotation, alpha = {alpha}, period = {:.6}", rotation_period(alpha, mode));
    for (t, s) in times.iter().zip(&num) {
        let exact = exact_rotation_inviscid(alpha, mode, s0, *t)?;
        println!("  t = {t:5.1}  w = {:.6}  error = {:.2e}", s.omega_hat, s.max_abs_diff(&exact));
    }

    // viscous with shear: no closed form, integrating factor on
    let p = Params { alpha: 0.5, beta: 1.0, nu_x: 0.01, nu_y: 0.01, eta_x: 0.01, eta_y: 0.01, sobolev_n: 0 };
    let num = integrate_mode_at(&p, mode, s0, 0.0, &times, opts.with_integrating_factor(true))?;
    println!("viscous couette, alpha = 0.5, nu = eta = 0.01");
    for (t, s) in times.iter().zip(&num) {
        println!("  t = {t:5.1}  |w| = {:.6e}  |th| = {:.6e}", s.omega_hat.norm(), s.theta_hat.norm());
    }
    Ok(())
}
