//! Near the threshold a junction without a Neumann zero mode acts as a
//! Dirichlet point: T(k) -> -I linearly in k.
//!
//!     cargo run --example low_energy

use qgs::edge::DEFAULT_STEPS;
use qgs::lowk;
use qgs::potential::EffectivePotential;

fn main() -> qgs::error::Result<()> {
    let ks = [0.2, 0.1, 0.05, 0.025];
    for (name, ends) in [
        ("flat", vec![EffectivePotential::zero(); 3]),
        ("barrier B = 1", vec![EffectivePotential::constant(1.0); 3]),
        ("well at pi^2/4", vec![EffectivePotential::constant(-std::f64::consts::PI.powi(2) / 4.0); 3]),
    ] {
        let mode = lowk::neumann_zero_mode_check(&ends, 1e-6)?;
        let fit = lowk::low_k_scaling(&ends, &ks, DEFAULT_STEPS)?;
        println!("{name}:");
        println!(
            "  nearest Neumann eigenvalue {:.3e} (extrapolated {:.1e}), zero mode: {}",
            mode.nearest_eigenvalue, mode.extrapolated_eigenvalue, mode.has_zero_mode
        );
        for (k, (m, p)) in ks.iter().zip(fit.norms_minus.iter().zip(&fit.norms_plus)) {
            println!("  k = {k:<6} ||I - T|| = {m:.6}  ||I + T|| = {p:.6}");
        }
        match (fit.limit, fit.slope) {
            (Some(limit), Some(slope)) => println!("  {limit:?} limit, slope {slope:.4}"),
            _ => println!("  no vanishing norm ({:?})", fit.declined),
        }
    }
    Ok(())
}
