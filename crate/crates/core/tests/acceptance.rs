//! End-to-end acceptance checks; one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use qgs::edge::{self, DEFAULT_STEPS};
use qgs::graph::{EndRef, MetricGraph};
use qgs::linalg;
use qgs::lowk::{self, LowKLimit};
use qgs::potential::EffectivePotential;
use qgs::profile::EdgeProfile;
use qgs::solver::{self, Network, VertexForm};
use qgs::vertex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{graph_file, random_profile, random_star};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn sample_stars() -> Vec<Vec<EffectivePotential>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..50)
        .map(|_| {
            let d = rng.gen_range(2..=5);
            random_star(&mut rng, d)
        })
        .collect()
}

const SAMPLE_K: [f64; 3] = [0.3, 1.0, 2.7];

fn kirchhoff_limit() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in 2..=6 {
        let pots = vec![EffectivePotential::zero(); d];
        let (t, _) = vertex::star_matrix(&pots, 1.0, DEFAULT_STEPS).unwrap();
        for n in 0..d {
            for m in 0..d {
                let expect = if n == m { 2.0 / d as f64 - 1.0 } else { 2.0 / d as f64 };
                worst = worst.max((t.t[(n, m)] - expect).norm());
            }
        }
    }
    outcome(worst < 1e-12, format!("max entry error {worst:.2e}"))
}

fn closed_form_vs_direct(stars: &[Vec<EffectivePotential>]) -> Outcome {
    let mut worst: f64 = 0.0;
    for pots in stars {
        for &k in &SAMPLE_K {
            let pairs = vertex::scatter_pairs(pots, k, DEFAULT_STEPS).unwrap();
            let (closed, _) = vertex::star_matrix_closed_form(&pairs).unwrap();
            let direct = vertex::star_matrix_direct(pots, k, DEFAULT_STEPS).unwrap();
            worst = worst.max(linalg::op_norm(&(&closed.t - &direct.t)));
        }
    }
    outcome(worst < 1e-7, format!("max ||T_closed - T_direct|| {worst:.2e} over 150 cases"))
}

fn vertex_properties(stars: &[Vec<EffectivePotential>]) -> Outcome {
    let (mut unitarity, mut symmetry, mut hermiticity) = (0.0f64, 0.0f64, 0.0f64);
    let mut rank_failures = 0;
    let mut with_c = 0;
    for pots in stars {
        for &k in &SAMPLE_K {
            let (t, _) = vertex::star_matrix(pots, k, DEFAULT_STEPS).unwrap();
            let report = vertex::check_unitary_symmetric(&t, 1e-8);
            unitarity = unitarity.max(report.unitarity_residual);
            symmetry = symmetry.max(report.symmetry_residual);
            let g = vertex::gluing_matrices(&t, 1.0, k).unwrap();
            if g.rank(1e-8) != t.degree() {
                rank_failures += 1;
            }
            if g.sigma_min_plus >= 1e-3 {
                if let Some(c) = &g.c {
                    with_c += 1;
                    hermiticity = hermiticity.max(linalg::hermiticity_residual(c));
                }
            }
        }
    }
    outcome(
        unitarity < 1e-8 && symmetry < 1e-8 && rank_failures == 0 && hermiticity < 1e-7,
        format!(
            "unitarity {unitarity:.2e}, symmetry {symmetry:.2e}, rank failures {rank_failures}, \
             ||C - C*|| {hermiticity:.2e} on {with_c} invertible cases"
        ),
    )
}

fn eps_independence(stars: &[Vec<EffectivePotential>]) -> Outcome {
    let mut worst: f64 = 0.0;
    for pots in stars.iter().take(10) {
        for &k in &SAMPLE_K {
            let a = vertex::star_matrix_direct_unscaled(pots, k, 0.1, DEFAULT_STEPS).unwrap();
            let b = vertex::star_matrix_direct_unscaled(pots, k, 0.01, DEFAULT_STEPS).unwrap();
            worst = worst.max(linalg::op_norm(&(&a.t - &b.t)));
        }
    }
    outcome(worst < 1e-10, format!("max ||T(0.1) - T(0.01)|| {worst:.2e}"))
}

fn test_graphs() -> Vec<(&'static str, MetricGraph)> {
    vec![
        ("3-lead star", graph_file("star3.json")),
        ("two junctions", graph_file("two_junctions.json")),
        ("profiled segment", graph_file("profiled_segment.json")),
    ]
}

const SWEEP_EPS: f64 = 0.05;

fn sweep_k() -> Vec<f64> {
    (0..50).map(|i| 0.3 + 2.7 * i as f64 / 49.0).collect()
}

fn limiting_vs_full() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut singular = 0;
    for (_, g) in test_graphs() {
        let net = Network::new(g);
        for k in sweep_k() {
            match (
                solver::solve_limiting_all(&net, k, SWEEP_EPS, VertexForm::Amplitude),
                solver::solve_full_all(&net, k, SWEEP_EPS),
            ) {
                (Ok(lim), Ok(full)) => {
                    for (l, f) in lim.iter().zip(&full) {
                        worst = worst.max(l.max_difference(&f.wave));
                    }
                }
                _ => singular += 1,
            }
        }
    }
    outcome(
        worst < 1e-7 && singular == 0,
        format!("max coefficient difference {worst:.2e} over 3 graphs x 50 k ({singular} singular)"),
    )
}

fn smatrix_properties() -> Outcome {
    let (mut unitarity, mut symmetry) = (0.0f64, 0.0f64);
    let mut regular = 0;
    for (_, g) in test_graphs() {
        let net = Network::new(g);
        for k in sweep_k() {
            if let Ok(s) = solver::graph_smatrix(&net, k, SWEEP_EPS) {
                regular += 1;
                unitarity = unitarity.max(s.unitarity_residual);
                symmetry = symmetry.max(s.symmetry_residual);
            }
        }
    }
    outcome(
        unitarity < 1e-7 && symmetry < 1e-7 && regular == 150,
        format!("||tau tau* - I|| {unitarity:.2e}, ||tau - tau^T|| {symmetry:.2e} on {regular} regular k"),
    )
}

fn dirichlet_spectrum() -> Outcome {
    let net = Network::new(graph_file("dirichlet_segment.json"));
    let ks = solver::find_eigenvalues(&net, 0.1, 1.65, 0.1, 400).unwrap();
    let worst = if ks.len() == 5 {
        ks.iter()
            .enumerate()
            .map(|(i, k)| (k - (i + 1) as f64 * PI / 10.0).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    outcome(
        worst < 1e-9,
        format!("{} eigenvalues, max |k - n pi/10| {worst:.2e}", ks.len()),
    )
}

fn low_energy() -> Outcome {
    let ks = [0.2, 0.1, 0.05, 0.025];
    let flat = vec![EffectivePotential::zero(); 3];
    let flat_mode = lowk::neumann_zero_mode_check(&flat, 1e-6).unwrap();
    let flat_fit = lowk::low_k_scaling(&flat, &ks, DEFAULT_STEPS).unwrap();
    let a = flat_mode.has_zero_mode
        && flat_mode.smallest_eigenvalue_magnitude < 1e-10
        && flat_fit.limit.is_none();

    let barrier = vec![EffectivePotential::constant(1.0); 3];
    let barrier_mode = lowk::neumann_zero_mode_check(&barrier, 1e-6).unwrap();
    let fit = lowk::low_k_scaling(&barrier, &ks, DEFAULT_STEPS).unwrap();
    let slope = fit.slope.unwrap_or(f64::NAN);
    let b = !barrier_mode.has_zero_mode
        && fit.limit == Some(LowKLimit::Dirichlet)
        && (slope - 1.0).abs() < 0.1;

    let mut net = Network::new(common::star_graph(vec![EdgeProfile::Flat; 3], 0.0));
    for e in 0..3 {
        net.set_end_potential(EndRef::from(e), EffectivePotential::constant(1.0))
            .unwrap();
    }
    let k = *ks.last().unwrap();
    let mut ratio: f64 = 0.0;
    for m in 0..3 {
        let w = solver::solve_limiting_scattering(&net, k, 0.1, m).unwrap();
        let at_vertex = (0..3)
            .map(|e| w.end_value(EndRef::from(e)).unwrap().norm())
            .fold(0.0, f64::max);
        ratio = ratio.max(at_vertex / w.peak());
    }
    let c = ratio < 0.05;
    outcome(
        a && b && c,
        format!(
            "(a) flat zero mode {:.1e}, fit declined: {}; (b) barrier nearest eigenvalue {:.3}, slope {slope:.4}; \
             (c) |psi(v)|/max|psi| {ratio:.2e}",
            flat_mode.smallest_eigenvalue_magnitude,
            flat_fit.limit.is_none(),
            barrier_mode.nearest_eigenvalue,
        ),
    )
}

fn edge_conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut flux, mut conj) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let q = EffectivePotential::from_profile(random_profile(&mut rng), rng.gen_range(0.0..3.0));
        let k = rng.gen_range(0.05..4.0);
        let pair = edge::line_scattering(&q, k, DEFAULT_STEPS).unwrap();
        let bc = edge::boundary_coefficients(&q, k, DEFAULT_STEPS).unwrap();
        flux = flux.max((pair.flux() - 1.0).abs());
        conj = conj.max((bc.beta - bc.alpha.conj()).norm());
    }
    outcome(
        flux < 1e-8 && conj < 1e-9,
        format!("max ||r|^2 + |t|^2 - 1| {flux:.2e}, max |beta - conj alpha| {conj:.2e}"),
    )
}

fn integrator_order() -> Outcome {
    let q = EffectivePotential::constant(2.0);
    let k = 1.0;
    // q0 - k^2 = 1: cosh / sinh propagator
    let exact = [[1f64.cosh(), 1f64.sinh()], [1f64.sinh(), 1f64.cosh()]];
    let err = |steps| {
        let m = edge::transfer_matrix(&q, k, steps).unwrap().m;
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (m[i][j] - exact[i][j]).abs())
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (err(100), err(200));
    let ratio = coarse / fine;
    outcome(
        ratio >= 8.0,
        format!("error {coarse:.2e} -> {fine:.2e}, ratio {ratio:.1}"),
    )
}

type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let stars = sample_stars();
    let criteria: Vec<Criterion> = vec![
        ("1 Kirchhoff limit of flat stars", Duration::from_secs(1), Box::new(kirchhoff_limit)),
        ("2 closed form vs direct star solve", Duration::from_secs(30), Box::new(|| closed_form_vs_direct(&stars))),
        ("3 unitarity, symmetry, rank, Hermitian C", Duration::from_secs(30), Box::new(|| vertex_properties(&stars))),
        ("4 eps-independence of the star matrix", Duration::from_secs(30), Box::new(|| eps_independence(&stars))),
        ("5 limiting vs full solve", Duration::from_secs(60), Box::new(limiting_vs_full)),
        ("6 graph S-matrix unitary and symmetric", Duration::from_secs(60), Box::new(smatrix_properties)),
        ("7 Dirichlet segment spectrum", Duration::from_secs(60), Box::new(dirichlet_spectrum)),
        ("8 low-energy Dirichlet degeneration", Duration::from_secs(60), Box::new(low_energy)),
        ("9 edge flux and alpha/beta conjugacy", Duration::from_secs(30), Box::new(edge_conservation)),
        ("10 fourth-order integrator", Duration::from_secs(5), Box::new(integrator_order)),
    ];
    let mut failures = 0;
    for (name, budget, check) in &criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let pass = result.pass && elapsed <= *budget;
        if !pass {
            failures += 1;
        }
        println!(
            "[{}] {name}: {} ({:.2} s)",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
