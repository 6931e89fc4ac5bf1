//! Vertex scattering matrix of a three-edge junction: closed form against the
//! direct matching solve, gluing conditions, and the solution near the vertex.
//!
//!     cargo run --example vertex_matrix

use qgs::edge::DEFAULT_STEPS;
use qgs::linalg;
use qgs::potential::EffectivePotential;
use qgs::profile::EdgeProfile;
use qgs::vertex;

fn main() -> qgs::error::Result<()> {
    let ends: Vec<EffectivePotential> = [(32.0, 3), (-102.4, 4), (307.2, 5)]
        .iter()
        .map(|&(a, p)| EdgeProfile::poly_bump(a, p).map(|pr| EffectivePotential::from_profile(pr, 1.0)))
        .collect::<Result<_, _>>()?;
    let k = 1.0;

    let pairs = vertex::scatter_pairs(&ends, k, DEFAULT_STEPS)?;
    let (closed, gamma) = vertex::star_matrix_closed_form(&pairs)?;
    let direct = vertex::star_matrix_direct(&ends, k, DEFAULT_STEPS)?;
    println!("T(k = {k}):");
    for i in 0..3 {
        let row: Vec<String> = (0..3)
            .map(|j| format!("{:+.6}{:+.6}i", closed.t[(i, j)].re, closed.t[(i, j)].im))
            .collect();
        println!("  {}", row.join("  "));
    }
    println!("||closed - direct|| = {:.2e}", linalg::op_norm(&(&closed.t - &direct.t)));

    let report = vertex::check_unitary_symmetric(&closed, 1e-8);
    println!(
        "unitarity {:.2e}, symmetry {:.2e}",
        report.unitarity_residual, report.symmetry_residual
    );

    // the width drops out of the unrescaled problem
    for eps in [0.1, 0.01] {
        let t = vertex::star_matrix_direct_unscaled(&ends, k, eps, DEFAULT_STEPS)?;
        println!("eps = {eps}: ||T_eps - T|| = {:.2e}", linalg::op_norm(&(&t.t - &closed.t)));
    }

    let glue = vertex::gluing_matrices(&closed, 0.05, k)?;
    println!(
        "gluing: rank [P R] = {}, sigma_min(I+T) = {:.3e}, C hermitian to {:.2e}",
        glue.rank(1e-8),
        glue.sigma_min_plus,
        glue.c.as_ref().map(linalg::hermiticity_residual).unwrap_or(f64::NAN)
    );

    // unit wave in on edge 0: continuous at the vertex, no net flux
    let sol = vertex::reconstruct_star_solution(&ends, &pairs, &gamma, 0, DEFAULT_STEPS)?;
    println!(
        "star solution: continuity {:.2e}, flux {:.2e}, psi_1(0.5) = {:.6}",
        sol.continuity_residual(),
        sol.flux_residual(),
        sol.value(1, 0.5)?
    );

    let kirchhoff = vertex::star_matrix(&vec![EffectivePotential::zero(); 4], k, DEFAULT_STEPS)?.0;
    println!("flat degree-4 junction: t_00 = {:.3}, t_01 = {:.3}", kirchhoff.t[(0, 0)].re, kirchhoff.t[(0, 1)].re);
    Ok(())
}
