//! Randomized invariants across the library.

mod common;

use proptest::prelude::*;
use qgs::edge::{self, DEFAULT_STEPS};
use qgs::graph::{GraphSpec, MetricGraph, Transverse};
use qgs::linalg;
use qgs::lowk;
use qgs::potential::EffectivePotential;
use qgs::profile::EdgeProfile;
use qgs::solver::{self, Network, VertexForm};
use qgs::vertex;

use common::bump;

fn profile() -> impl Strategy<Value = EdgeProfile> {
    (3i64..=5, 0.1f64..0.6, any::<bool>())
        .prop_map(|(p, m, neg)| bump(if neg { -m } else { m }, p))
}

fn potential() -> impl Strategy<Value = EffectivePotential> {
    (profile(), 0.0f64..3.0).prop_map(|(p, l)| EffectivePotential::from_profile(p, l))
}

fn star(max_d: usize) -> impl Strategy<Value = Vec<EffectivePotential>> {
    (0.0f64..2.0, prop::collection::vec(profile(), 2..=max_d)).prop_map(|(l, ps)| {
        ps.into_iter()
            .map(|p| EffectivePotential::from_profile(p, l))
            .collect()
    })
}

fn dumbbell() -> impl Strategy<Value = MetricGraph> {
    (prop::collection::vec(profile(), 4), 0.5f64..2.0, 0.0f64..2.0).prop_map(|(ps, len, l)| {
        GraphSpec::new("dumbbell")
            .vertex("a")
            .vertex("b")
            .lead("in", "a", ps[0].clone())
            .edge("mid", "a", "b", len, ps[1].clone(), ps[2].clone())
            .lead("out", "b", ps[3].clone())
            .transverse(Transverse::LambdaPrime(l))
            .build()
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn profile_derivatives_match_differences(p in profile(), xi in 0.01f64..0.99) {
        let h = 1e-5;
        let v = p.eval(xi).unwrap();
        let lo = p.eval(xi - h).unwrap().a;
        let hi = p.eval(xi + h).unwrap().a;
        prop_assert!((v.da - (hi - lo) / (2.0 * h)).abs() < 1e-5 * (1.0 + v.da.abs()));
        prop_assert!((v.d2a - (hi - 2.0 * v.a + lo) / (h * h)).abs() < 1e-3 * (1.0 + v.d2a.abs()));
    }

    #[test]
    fn potential_is_root_curvature(p in profile(), xi in 0.05f64..0.95) {
        let q = EffectivePotential::from_profile(p.clone(), 0.0);
        let h = 1e-4;
        let root = |x: f64| p.eval(x).unwrap().a.sqrt();
        let fd = (root(xi + h) - 2.0 * root(xi) + root(xi - h)) / (h * h) / root(xi);
        prop_assert!((q.q(xi) - fd).abs() < 1e-6 * (1.0 + fd.abs()) + 1e-6, "{} vs {}", q.q(xi), fd);
    }

    #[test]
    fn transfer_matrix_is_unimodular(q in potential(), k in 0.05f64..4.0) {
        let tm = edge::transfer_matrix(&q, k, DEFAULT_STEPS).unwrap();
        prop_assert!((tm.det() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn line_scattering_conserves_flux(q in potential(), k in 0.05f64..4.0) {
        let pair = edge::line_scattering(&q, k, DEFAULT_STEPS).unwrap();
        prop_assert!((pair.flux() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn boundary_coefficients_are_conjugate(q in potential(), k in 0.05f64..4.0) {
        let bc = edge::boundary_coefficients(&q, k, DEFAULT_STEPS).unwrap();
        prop_assert!((bc.beta - bc.alpha.conj()).norm() < 1e-9);
        prop_assert!((bc.reflection().norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn closed_form_matches_direct(pots in star(5), k in 0.1f64..3.0) {
        let pairs = vertex::scatter_pairs(&pots, k, DEFAULT_STEPS).unwrap();
        if let Ok((closed, _)) = vertex::star_matrix_closed_form(&pairs) {
            let direct = vertex::star_matrix_direct(&pots, k, DEFAULT_STEPS).unwrap();
            prop_assert!(linalg::op_norm(&(&closed.t - &direct.t)) < 1e-7);
        }
    }

    #[test]
    fn vertex_matrix_is_unitary_symmetric_full_rank(pots in star(5), k in 0.1f64..3.0, eps in 0.01f64..1.0) {
        let (t, _) = vertex::star_matrix(&pots, k, DEFAULT_STEPS).unwrap();
        let report = vertex::check_unitary_symmetric(&t, 1e-8);
        prop_assert!(report.unitarity_residual < 1e-8 && report.symmetry_residual < 1e-8);
        let g = vertex::gluing_matrices(&t, eps, k).unwrap();
        prop_assert_eq!(g.rank(1e-8), pots.len());
    }

    #[test]
    fn star_matrix_is_relabeling_covariant(pots in star(4), k in 0.1f64..3.0) {
        let (t, _) = vertex::star_matrix(&pots, k, DEFAULT_STEPS).unwrap();
        let rev: Vec<_> = pots.iter().rev().cloned().collect();
        let (tr, _) = vertex::star_matrix(&rev, k, DEFAULT_STEPS).unwrap();
        let d = pots.len();
        for i in 0..d {
            for j in 0..d {
                prop_assert!((t.t[(i, j)] - tr.t[(d - 1 - i, d - 1 - j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gluing_and_amplitude_forms_agree(g in dumbbell(), k in 0.2f64..3.0, eps in 0.02f64..0.2) {
        let net = Network::new(g);
        let a = solver::solve_limiting_all(&net, k, eps, VertexForm::Amplitude);
        let b = solver::solve_limiting_all(&net, k, eps, VertexForm::Gluing);
        if let (Ok(a), Ok(b)) = (a, b) {
            for (x, y) in a.iter().zip(&b) {
                prop_assert!(x.max_difference(y) < 1e-7 * x.peak().max(1.0));
            }
        }
    }

    #[test]
    fn limiting_and_full_solves_agree(g in dumbbell(), k in 0.2f64..3.0, eps in 0.02f64..0.2) {
        let net = Network::new(g);
        if let (Ok(lim), Ok(full)) = (
            solver::solve_limiting_all(&net, k, eps, VertexForm::Amplitude),
            solver::solve_full_all(&net, k, eps),
        ) {
            for (l, f) in lim.iter().zip(&full) {
                prop_assert!(l.max_difference(&f.wave) < 1e-7);
                prop_assert!(f.flux_residual() < 1e-7);
            }
        }
    }

    #[test]
    fn graph_smatrix_is_reciprocal_and_unitary(g in dumbbell(), k in 0.2f64..3.0, eps in 0.02f64..0.2) {
        if let Ok(s) = solver::graph_smatrix(&Network::new(g), k, eps) {
            prop_assert!(s.symmetry_residual < 1e-8);
            prop_assert!(s.unitarity_residual < 1e-8);
        }
    }

    #[test]
    fn graph_files_round_trip(g in dumbbell()) {
        let text = qgs::io::serialize_graph(&g);
        prop_assert_eq!(qgs::io::parse_graph_file(&text).unwrap(), g);
    }

    #[test]
    fn zero_mode_detection_ignores_edge_order(depths in prop::collection::vec(-3.0f64..3.0, 3)) {
        let pots: Vec<_> = depths.iter().map(|&b| EffectivePotential::constant(b)).collect();
        let rev: Vec<_> = pots.iter().rev().cloned().collect();
        let a = lowk::neumann_zero_mode_check_with(&pots, 1e-6, 128).unwrap();
        let b = lowk::neumann_zero_mode_check_with(&rev, 1e-6, 128).unwrap();
        prop_assert_eq!(a.has_zero_mode, b.has_zero_mode);
        prop_assert!((a.nearest_eigenvalue - b.nearest_eigenvalue).abs() < 1e-10);
    }
}
