//! The Fourier multiplier M and the energy functionals on a few modes.
//!
//!     cargo run --example multiplier_energies

use boussinesq::energy::{energy_no_shear, energy_sheared, mdot_ratio, multiplier_m};
use boussinesq::model::{Mode, ModeState, Params};
use boussinesq::ode::{integrate_mode_at, IntegrateOptions};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mode = Mode::new(1, 3.0);
    println!("M and -M'/M for k = 1, xi = 3");
    for t in [0.0, 1.0, 3.0, 5.0, 20.0] {
        println!("  t = {t:4.1}  M = {:.6}  ratio = {:.6e}", multiplier_m(t, mode), mdot_ratio(t, mode)?);
    }

    let p = Params { alpha: 0.5, beta: 1.0, nu_x: 0.02, nu_y: 0.02, eta_x: 0.02, eta_y: 0.02, sobolev_n: 2 };
    let modes = [Mode::new(1, 0.0), Mode::new(-2, 1.0), Mode::new(3, -2.0)];
    let s0 = ModeState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.5));
    let times = [0.0, 2.0, 5.0, 10.0];
    let opts = IntegrateOptions::new(1e-10).with_integrating_factor(true);
    let traces = modes
        .iter()
        .map(|m| integrate_mode_at(&p, *m, s0, 0.0, &times, opts))
        .collect::<Result<Vec<_>, _>>()?;
    for (j, t) in times.iter().enumerate() {
        let states: Vec<(Mode, ModeState)> = modes.iter().zip(&traces).map(|(m, tr)| (*m, tr[j])).collect();
        let e = energy_sheared(&states, &p, *t);
        print!("t = {t:4.1}");
        for (name, entry) in &e.entries {
            print!("  {name} = {:.4e} (D = {:.3e})", entry.value, entry.dissipation);
        }
        println!();
    }

    let p0 = Params { beta: 0.0, ..p };
    let states: Vec<(Mode, ModeState)> = modes.iter().map(|m| (*m, s0)).collect();
    let e = energy_no_shear(&states, &p0)?;
    for (name, entry) in &e.entries {
        println!("shear-free {name} = {:.6e}, dissipation {:.6e}", entry.value, entry.dissipation);
    }
    Ok(())
}
