//! S-matrix of a two-junction graph, solved both through the vertex matrices
//! and through the full equations with resolved junction zones.
//!
//!     cargo run --example graph_scattering

use qgs::graph::GraphSpec;
use qgs::profile::EdgeProfile;
use qgs::solver::{self, Network};

fn main() -> qgs::error::Result<()> {
    let bump = |delta: f64, p: i64| EdgeProfile::poly_bump(delta * 4f64.powi(p as i32), p);
    let graph = GraphSpec::new("two junctions")
        .vertex("a")
        .vertex("b")
        .lead("in", "a", bump(0.3, 3)?)
        .edge("mid", "a", "b", 1.0, bump(-0.25, 4)?, bump(0.4, 3)?)
        .lead("out", "b", bump(0.2, 5)?)
        .build()?;
    let net = Network::new(graph);
    let eps = 0.05;

    println!("{:>6} {:>10} {:>10} {:>12} {:>12}", "k", "|tau_10|", "|tau_00|", "unitarity", "lim - full");
    for i in 0..=20 {
        let k = 0.3 + 0.1 * i as f64;
        let s = solver::graph_smatrix(&net, k, eps)?;
        let full = solver::graph_smatrix_full(&net, k, eps)?;
        let gap = qgs::linalg::op_norm(&(&s.tau - &full.tau));
        println!(
            "{k:>6.2} {:>10.6} {:>10.6} {:>12.2e} {:>12.2e}",
            s.tau[(1, 0)].norm(),
            s.tau[(0, 0)].norm(),
            s.unitarity_residual,
            gap
        );
    }

    // the limiting function along the middle edge for a wave from `in`
    let w = solver::solve_limiting_scattering(&net, 1.0, eps, 0)?;
    for i in 0..=4 {
        let s = 0.25 * i as f64;
        println!("psi(mid, s = {s:.2}) = {:.6}", solver::evaluate_solution(&w, 1, s)?);
    }
    Ok(())
}
