#![allow(dead_code)]

use qgs::graph::{GraphSpec, MetricGraph};
use qgs::potential::EffectivePotential;
use qgs::profile::EdgeProfile;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// poly_bump with peak radius deviation `delta`.
pub fn bump(delta: f64, p: i64) -> EdgeProfile {
    EdgeProfile::poly_bump(delta * 4f64.powi(p as i32), p).unwrap()
}

pub fn random_profile(rng: &mut ChaCha8Rng) -> EdgeProfile {
    let p = rng.gen_range(3..=5);
    let magnitude = rng.gen_range(0.1..0.6);
    let delta = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
    bump(delta, p)
}

pub fn random_star(rng: &mut ChaCha8Rng, d: usize) -> Vec<EffectivePotential> {
    let lambda_prime = rng.gen_range(0.0..2.0);
    (0..d)
        .map(|_| EffectivePotential::from_profile(random_profile(rng), lambda_prime))
        .collect()
}

pub fn graph_file(name: &str) -> MetricGraph {
    let path = format!("{}/graphs/{name}", env!("CARGO_MANIFEST_DIR"));
    qgs::io::parse_graph_file(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn star_graph(profiles: Vec<EdgeProfile>, lambda_prime: f64) -> MetricGraph {
    let mut spec = GraphSpec::new("star")
        .vertex("v0")
        .transverse(qgs::graph::Transverse::LambdaPrime(lambda_prime));
    for (i, p) in profiles.into_iter().enumerate() {
        spec = spec.lead(format!("e{i}"), "v0", p);
    }
    spec.build().unwrap()
}
