//! Shear-free eigenvalues across alpha and the threshold alpha*.
//!
//!     cargo run --example eigen_sweep

use boussinesq::linear::eigen_no_shear;
use boussinesq::model::{Mode, ModeState, Params};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = Params { alpha: 0.0, beta: 0.0, nu_x: 0.1, nu_y: 0.05, eta_x: 0.3, eta_y: 0.2, sobolev_n: 0 };
    let mode = Mode::new(1, 1.0);
    let star = eigen_no_shear(&Params { alpha: 1.0, ..base }, mode)?.alpha_star;
    println!("k = {}, xi = {}, alpha* = {star:.6}", mode.k, mode.xi);
    println!("{:>10} {:>24} {:>24}  class", "alpha", "lambda1", "lambda2");
    for i in 0..9 {
        let alpha = star * 10f64.powf(-1.0 + 0.25 * i as f64);
        let r = eigen_no_shear(&Params { alpha, ..base }, mode)?;
        println!("{alpha:10.4e} {:>24.6} {:>24.6}  {}", r.lambda1, r.lambda2, r.classification.name());
    }

    let r = eigen_no_shear(&Params { alpha: 2.0 * star, ..base }, mode)?;
    let s0 = ModeState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    for t in [0.0, 1.0, 5.0, 10.0] {
        let s = r.evolve(s0, t);
        println!("t = {t:4.1}  w = {:.6}  th = {:.6}", s.omega_hat, s.theta_hat);
    }
    Ok(())
}
