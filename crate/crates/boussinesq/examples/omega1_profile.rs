//! The slow vorticity profile driven by temperature when alpha = 0.
//!
//!     cargo run --example omega1_profile

use boussinesq::linear::{exact_omega_alpha0, omega1_profile, Omega1Case};
use boussinesq::model::{Mode, Params};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mode = Mode::new(1, 2.5);
    let th0 = Complex64::new(1.0, 0.0);
    let cases = [(0.05, 0.1, 0.4, 0.8), (0.4, 0.8, 0.05, 0.1), (0.05, 0.8, 0.4, 0.1)];
    for (nu_x, nu_y, eta_x, eta_y) in cases {
        let p = Params { alpha: 0.0, beta: 1.0, nu_x, nu_y, eta_x, eta_y, sobolev_n: 0 };
        println!("{} (nu = {nu_x}, {nu_y}; eta = {eta_x}, {eta_y})", Omega1Case::classify(&p).name());
        for t in [1.0, 2.0, 4.0, 8.0] {
            let w1 = omega1_profile(&p, mode, th0, t)?;
            let full = exact_omega_alpha0(&p, mode, Complex64::new(0.0, 0.0), th0, t, 1e-12)?;
            println!("  t = {t:3.0}  |w1| = {:.6e}  |w - w1| = {:.3e}", w1.norm(), (full - w1).norm());
        }
    }
    Ok(())
}
