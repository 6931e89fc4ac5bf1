//! Eigenvalues of compact graphs from the secular system.
//!
//!     cargo run --example spectrum

use qgs::graph::GraphSpec;
use qgs::profile::EdgeProfile;
use qgs::solver::{self, Network};

fn main() -> qgs::error::Result<()> {
    let eps = 0.1;
    let segment = |from: EdgeProfile, to: EdgeProfile| {
        GraphSpec::new("segment")
            .vertex("left")
            .vertex("right")
            .edge("e", "left", "right", 1.0, from, to)
            .build()
    };

    let flat = Network::new(segment(EdgeProfile::Flat, EdgeProfile::Flat)?);
    let ks = solver::find_eigenvalues(&flat, 0.1, 1.65, eps, 400)?;
    println!("flat segment (expect n pi / 10):");
    for (n, k) in ks.iter().enumerate() {
        println!("  k_{} = {k:.12}  error {:.1e}", n + 1, k - (n + 1) as f64 * std::f64::consts::PI / 10.0);
    }

    let profiled = Network::new(segment(
        EdgeProfile::poly_bump(32.0, 3)?,
        EdgeProfile::poly_bump(-76.8, 4)?,
    )?);
    let lim = solver::find_eigenvalues(&profiled, 0.1, 1.65, eps, 400)?;
    let full = solver::find_eigenvalues_full(&profiled, 0.1, 1.65, eps, 400)?;
    println!("profiled segment, limiting vs full:");
    for (a, b) in lim.iter().zip(&full) {
        println!("  {a:.10}  {b:.10}  energy {:.4}", (a / eps).powi(2));
    }
    Ok(())
}
