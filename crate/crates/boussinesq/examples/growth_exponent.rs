//! Algebraic growth of the inviscid mode for alpha <= 1/4.
//!
//!     cargo run --example growth_exponent

use boussinesq::fit::{fit_algebraic_exponent, geomspace};
use boussinesq::linear::{growth_exponent_in_time, growth_exponent_theory};
use boussinesq::scenario::growth_trace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let times = geomspace(100.0, 1e4, 100);
    let z: Vec<f64> = times.iter().map(|t| t * t).collect();
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "alpha", "fit(z)", "gamma", "fit(t)", "2 gamma");
    for alpha in [0.0, 0.05, 0.1, 0.15, 0.2, 0.25] {
        let y = growth_trace(alpha, (0.0, 1.0), &times, 1e-12)?;
        let fz = fit_algebraic_exponent(&z, &y, (z[0], z[z.len() - 1]))?;
        let ft = fit_algebraic_exponent(&times, &y, (100.0, 1e4))?;
        println!(
            "{alpha:8.3} {:10.5} {:10.5} {:10.5} {:10.5}",
            fz.rate_or_exponent,
            growth_exponent_theory(alpha)?,
            ft.rate_or_exponent,
            growth_exponent_in_time(alpha)?
        );
    }
    Ok(())
}
