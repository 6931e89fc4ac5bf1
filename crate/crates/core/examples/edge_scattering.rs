//! Reflection and transmission through one profiled fiber end, swept over k.
//!
//!     cargo run --example edge_scattering

use qgs::edge::{self, DEFAULT_STEPS};
use qgs::potential::potential_q;
use qgs::profile::EdgeProfile;

fn main() -> qgs::error::Result<()> {
    // a bulge of 30% radius at the middle of the end zone
    let profile = EdgeProfile::poly_bump(0.3 * 64.0, 3)?;
    let q = potential_q(&profile, 1.0)?;
    println!("sup |Q| = {:.4}", q.sup_norm(1000));

    println!("{:>6} {:>10} {:>10} {:>12} {:>12}", "k", "|r|", "|t|", "flux - 1", "beta/alpha");
    for i in 1..=12 {
        let k = 0.25 * i as f64;
        let pair = edge::line_scattering(&q, k, DEFAULT_STEPS)?;
        let bc = edge::boundary_coefficients(&q, k, DEFAULT_STEPS)?;
        println!(
            "{k:>6.2} {:>10.6} {:>10.6} {:>12.2e} {:>12.6}",
            pair.r.norm(),
            pair.t.norm(),
            pair.flux() - 1.0,
            bc.reflection().arg()
        );
    }

    // the integrator is fourth order
    let stiff = qgs::potential::EffectivePotential::constant(2.0);
    let exact = 1f64.cosh();
    let e1 = (edge::transfer_matrix(&stiff, 1.0, 100)?.m[0][0] - exact).abs();
    let e2 = (edge::transfer_matrix(&stiff, 1.0, 200)?.m[0][0] - exact).abs();
    println!("step halving reduces the error by {:.1}x", e1 / e2);
    Ok(())
}
