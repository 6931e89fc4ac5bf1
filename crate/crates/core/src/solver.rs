//! Scattering and eigenvalue problems on a whole graph.
//!
//! Every edge end carries its own outward coordinate `sigma` from the vertex it
//! touches. Outside the `eps`-neighbourhoods of vertices the solution on that
//! end reads `b e^{-ik sigma/eps} + a e^{ik sigma/eps}`: `b` is the incoming and
//! `a` the outgoing amplitude. On a finite edge of length `l` the two ends see
//! the same wave, which gives `b_to = e^{ikl/eps} a_from` and
//! `b_from = e^{ikl/eps} a_to`.
//!
//! Two assemblies are available. The limiting one replaces every vertex by its
//! scattering data (`a = T_v b`, or `a = (beta/alpha) b` at degree-one
//! vertices). The full one integrates the end potentials from Kirchhoff
//! vertex data and matches plane waves at `xi = 1`; it never looks at `T_v`.
//! For this model both must produce the same amplitudes.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::edge::{self, boundary_coefficients, BoundaryCoefficients, DEFAULT_STEPS};
use crate::error::{Error, Result};
use crate::graph::{EndRef, MetricGraph, Side, VertexKind};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::phase;
use crate::potential::EffectivePotential;
use crate::vertex::{self, VertexMatrix, VertexRoute};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A metric graph together with the potential on every edge end.
#[derive(Debug, Clone)]
pub struct Network {
    graph: MetricGraph,
    ends: Vec<EndRef>,
    // slot of (edge, side) in `ends`
    slots: Vec<[Option<usize>; 2]>,
    potentials: Vec<EffectivePotential>,
    steps: usize,
}

fn side_index(side: Side) -> usize {
    match side {
        Side::From => 0,
        Side::To => 1,
    }
}

impl Network {
    /// Uses each end's profile and the graph's transverse eigenvalue.
    pub fn new(graph: MetricGraph) -> Self {
        let ends = graph.ends();
        let mut slots = vec![[None, None]; graph.edges().len()];
        for (i, end) in ends.iter().enumerate() {
            slots[end.edge][side_index(end.side)] = Some(i);
        }
        let potentials = ends
            .iter()
            .map(|&e| graph.end_potential(e).expect("every listed end has a profile"))
            .collect();
        Network {
            graph,
            ends,
            slots,
            potentials,
            steps: DEFAULT_STEPS,
        }
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    /// Existing edge ends in slot order.
    pub fn ends(&self) -> &[EndRef] {
        &self.ends
    }

    pub fn slot(&self, end: EndRef) -> Option<usize> {
        self.slots.get(end.edge)?[side_index(end.side)]
    }

    pub fn end_potential(&self, end: EndRef) -> Option<&EffectivePotential> {
        self.slot(end).map(|i| &self.potentials[i])
    }

    /// Replaces the potential of one end, e.g. by a step potential that no
    /// profile generates.
    pub fn set_end_potential(&mut self, end: EndRef, q: EffectivePotential) -> Result<()> {
        let i = self
            .slot(end)
            .ok_or_else(|| Error::invalid(format!("edge end {end:?} does not exist")))?;
        self.potentials[i] = q;
        Ok(())
    }

    /// Potentials of the ends at vertex `v`, in incidence order.
    pub fn vertex_potentials(&self, v: usize) -> Vec<EffectivePotential> {
        self.graph
            .incident_ends(v)
            .iter()
            .map(|&e| self.potentials[self.slot(e).unwrap()].clone())
            .collect()
    }

    /// Slot indices of the lead ends, in edge order.
    pub fn lead_slots(&self) -> Vec<usize> {
        self.graph
            .leads()
            .into_iter()
            .map(|e| self.slots[e][0].unwrap())
            .collect()
    }

    /// Scattering data of every vertex at `k`.
    pub fn couplings(&self, k: f64) -> Result<Vec<VertexCoupling>> {
        (0..self.graph.vertices().len())
            .map(|v| match self.graph.vertices()[v].kind {
                VertexKind::V1 => {
                    let end = self.graph.incident_ends(v)[0];
                    let q = &self.potentials[self.slot(end).unwrap()];
                    boundary_coefficients(q, k, self.steps).map(VertexCoupling::Boundary)
                }
                VertexKind::V2 => vertex::star_matrix(&self.vertex_potentials(v), k, self.steps)
                    .map(|(t, route)| VertexCoupling::Star(t, route)),
            })
            .collect()
    }
}

/// Limiting vertex condition at a given `k`.
#[derive(Debug, Clone, PartialEq)]
pub enum VertexCoupling {
    Star(VertexMatrix, VertexRoute),
    Boundary(BoundaryCoefficients),
}

/// How the limiting vertex conditions enter the linear system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VertexForm {
    /// `a = T b` and `a = (beta/alpha) b`.
    #[default]
    Amplitude,
    /// The raw gluing conditions on values and derivatives of the limiting function.
    Gluing,
}

/// Incoming/outgoing amplitudes on every edge end.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub k: f64,
    pub eps: f64,
    ends: Vec<EndRef>,
    slots: Vec<[Option<usize>; 2]>,
    lengths: Vec<f64>,
    /// `(b, a)` per end slot.
    pub amplitudes: Vec<(Complex64, Complex64)>,
}

impl WaveField {
    fn new(net: &Network, k: f64, eps: f64, amplitudes: Vec<(Complex64, Complex64)>) -> Self {
        WaveField {
            k,
            eps,
            ends: net.ends.clone(),
            slots: net.slots.clone(),
            lengths: net.graph.edges().iter().map(|e| e.length).collect(),
            amplitudes,
        }
    }

    pub fn ends(&self) -> &[EndRef] {
        &self.ends
    }

    /// `(b, a)` on an end.
    pub fn amplitude(&self, end: EndRef) -> Option<(Complex64, Complex64)> {
        let slot = self.slots.get(end.edge)?[side_index(end.side)]?;
        Some(self.amplitudes[slot])
    }

    /// Value of the limiting function at the vertex, seen from `end`.
    pub fn end_value(&self, end: EndRef) -> Option<Complex64> {
        self.amplitude(end).map(|(b, a)| a + b)
    }

    /// `max |psi|` over the whole graph: `|a| + |b|` on the worst end.
    pub fn peak(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|(b, a)| a.norm() + b.norm())
            .fold(0.0, f64::max)
    }

    /// Largest amplitude difference to another field on the same graph.
    pub fn max_difference(&self, other: &WaveField) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|((b1, a1), (b2, a2))| (b1 - b2).norm().max((a1 - a2).norm()))
            .fold(0.0, f64::max)
    }
}

/// Value of the limiting function on `edge` at distance `s` from its `from` vertex.
pub fn evaluate_solution(w: &WaveField, edge: usize, s: f64) -> Result<Complex64> {
    let length = *w
        .lengths
        .get(edge)
        .ok_or_else(|| Error::invalid(format!("edge {edge} out of range")))?;
    if !(s >= 0.0 && s <= length) {
        return Err(Error::invalid(format!(
            "s = {s} outside edge {edge} of length {length}"
        )));
    }
    let (b, a) = w.amplitude(EndRef::from(edge)).unwrap();
    let out = phase::carrier(w.k, s, w.eps);
    Ok(b * out.conj() + a * out)
}

fn check_k_eps(k: f64, eps: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// Rows of the finite-edge phase relations; returns rows filled.
fn fill_edge_rows(
    net: &Network,
    k: f64,
    eps: f64,
    a: &mut CMatrix,
    row: &mut usize,
    b_col: impl Fn(usize) -> usize,
    a_col: impl Fn(usize) -> usize,
) {
    for (e, edge) in net.graph.edges().iter().enumerate() {
        if edge.is_lead() {
            continue;
        }
        let carrier = phase::carrier(k, edge.length, eps);
        let from = net.slots[e][0].unwrap();
        let to = net.slots[e][1].unwrap();
        for (near, far) in [(from, to), (to, from)] {
            // b_far = e^{ikl/eps} a_near
            a[(*row, b_col(far))] = ONE;
            a[(*row, a_col(near))] = -carrier;
            *row += 1;
        }
    }
}

/// Homogeneous part of the limiting system; lead rows are `b = 0`.
fn limiting_matrix(
    net: &Network,
    couplings: &[VertexCoupling],
    k: f64,
    eps: f64,
    form: VertexForm,
) -> CMatrix {
    let n = 2 * net.ends.len();
    let b_col = |slot: usize| 2 * slot;
    let a_col = |slot: usize| 2 * slot + 1;
    let mut a = CMatrix::zeros(n, n);
    let mut row = 0;
    let dphi = I * k / eps;
    for (v, coupling) in couplings.iter().enumerate() {
        let slots: Vec<usize> = net
            .graph
            .incident_ends(v)
            .iter()
            .map(|&e| net.slot(e).unwrap())
            .collect();
        match (coupling, form) {
            (VertexCoupling::Star(t, _), VertexForm::Amplitude) => {
                for (i, &si) in slots.iter().enumerate() {
                    a[(row, a_col(si))] += ONE;
                    for (j, &sj) in slots.iter().enumerate() {
                        a[(row, b_col(sj))] -= t.t[(i, j)];
                    }
                    row += 1;
                }
            }
            (VertexCoupling::Star(t, _), VertexForm::Gluing) => {
                // P dphi - R phi with phi = a + b, dphi = (ik/eps)(a - b)
                let g = vertex::gluing_matrices(t, eps, k).expect("k and eps checked");
                for i in 0..slots.len() {
                    for (j, &sj) in slots.iter().enumerate() {
                        a[(row, a_col(sj))] += g.p[(i, j)] * dphi - g.r[(i, j)];
                        a[(row, b_col(sj))] += -g.p[(i, j)] * dphi - g.r[(i, j)];
                    }
                    row += 1;
                }
            }
            (VertexCoupling::Boundary(bc), VertexForm::Amplitude) => {
                a[(row, a_col(slots[0]))] = bc.alpha;
                a[(row, b_col(slots[0]))] = -bc.beta;
                row += 1;
            }
            (VertexCoupling::Boundary(bc), VertexForm::Gluing) => {
                let p = I * eps / k * (bc.alpha + bc.beta);
                let r = bc.alpha - bc.beta;
                a[(row, a_col(slots[0]))] = p * dphi - r;
                a[(row, b_col(slots[0]))] = -p * dphi - r;
                row += 1;
            }
        }
    }
    fill_edge_rows(net, k, eps, &mut a, &mut row, b_col, a_col);
    for slot in net.lead_slots() {
        a[(row, b_col(slot))] = ONE;
        row += 1;
    }
    debug_assert_eq!(row, n);
    a
}

/// Unit incoming wave on each lead in turn; one column per lead.
fn lead_rhs(net: &Network, n: usize) -> CMatrix {
    let leads = net.lead_slots();
    let mut rhs = CMatrix::zeros(n, leads.len());
    for m in 0..leads.len() {
        rhs[(n - leads.len() + m, m)] = ONE;
    }
    rhs
}

fn split_columns(net: &Network, k: f64, eps: f64, x: &CMatrix, stride: usize) -> Vec<WaveField> {
    (0..x.ncols())
        .map(|m| {
            let amps = (0..net.ends.len())
                .map(|s| (x[(stride * s, m)], x[(stride * s + 1, m)]))
                .collect();
            WaveField::new(net, k, eps, amps)
        })
        .collect()
}

fn check_scattering(net: &Network, k: f64, eps: f64) -> Result<()> {
    check_k_eps(k, eps)?;
    if net.graph.leads().is_empty() {
        return Err(Error::NoChannels);
    }
    Ok(())
}

/// Limiting scattering solutions for every lead.
pub fn solve_limiting_all(net: &Network, k: f64, eps: f64, form: VertexForm) -> Result<Vec<WaveField>> {
    check_scattering(net, k, eps)?;
    let couplings = net.couplings(k)?;
    let a = limiting_matrix(net, &couplings, k, eps, form);
    let rhs = lead_rhs(net, a.nrows());
    let x = linalg::solve(&a, &rhs, "limiting network", k)?;
    Ok(split_columns(net, k, eps, &x, 2))
}

/// Limiting scattering solution with a unit wave incoming on lead `m`
/// (`m` counts leads in edge order).
pub fn solve_limiting_scattering(net: &Network, k: f64, eps: f64, m: usize) -> Result<WaveField> {
    solve_limiting_scattering_with(net, k, eps, m, VertexForm::Amplitude)
}

pub fn solve_limiting_scattering_with(
    net: &Network,
    k: f64,
    eps: f64,
    m: usize,
    form: VertexForm,
) -> Result<WaveField> {
    let r = net.graph.leads().len();
    if m >= r && r > 0 {
        return Err(Error::invalid(format!("lead index {m} out of range ({r} leads)")));
    }
    let mut all = solve_limiting_all(net, k, eps, form)?;
    Ok(all.swap_remove(m))
}

/// Solution of the full problem with the end potentials resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct FullSolution {
    /// Free-region amplitudes, directly comparable with the limiting field.
    pub wave: WaveField,
    /// Solution value at each vertex (zero at degree-one vertices).
    pub vertex_values: Vec<Complex64>,
    /// Outward derivative in the rescaled coordinate at each end slot.
    pub derivatives: Vec<Complex64>,
    ends: Vec<EndRef>,
    end_vertex: Vec<usize>,
    potentials: Vec<EffectivePotential>,
    steps: usize,
}

impl FullSolution {
    /// Largest `|sum of outward derivatives|` over degree-two-or-more vertices.
    pub fn flux_residual(&self) -> f64 {
        let nv = self.vertex_values.len();
        let mut sums = vec![ZERO; nv];
        let mut degree = vec![0usize; nv];
        for (slot, &v) in self.end_vertex.iter().enumerate() {
            sums[v] += self.derivatives[slot];
            degree[v] += 1;
        }
        (0..nv)
            .filter(|&v| degree[v] >= 2)
            .map(|v| sums[v].norm())
            .fold(0.0, f64::max)
    }

    /// Value of the solution on `edge` at distance `s` from its `from` vertex,
    /// resolving the near-vertex zones.
    pub fn evaluate(&self, edge: usize, s: f64) -> Result<Complex64> {
        let eps = self.wave.eps;
        let length = *self
            .wave
            .lengths
            .get(edge)
            .ok_or_else(|| Error::invalid(format!("edge {edge} out of range")))?;
        if !(s >= 0.0 && s <= length) {
            return Err(Error::invalid(format!("s = {s} outside edge {edge}")));
        }
        let (end, sigma) = if s < eps {
            (EndRef::from(edge), s)
        } else if length - s < eps {
            (EndRef::to(edge), length - s)
        } else {
            return evaluate_solution(&self.wave, edge, s);
        };
        let slot = self.ends.iter().position(|&e| e == end).unwrap();
        let xi = sigma / eps;
        let u = self.vertex_values[self.end_vertex[slot]];
        if xi == 0.0 {
            return Ok(u);
        }
        let steps = ((self.steps as f64 * xi).ceil() as usize).max(edge::MIN_STEPS);
        let tm = edge::transfer_matrix_between(&self.potentials[slot], self.wave.k, 0.0, xi, steps)?;
        Ok(tm.apply([u, self.derivatives[slot]])[0])
    }
}

/// Layout of the full system: `[b, a]` per slot, then `u` per vertex, then `p` per slot.
struct FullLayout {
    slots: usize,
    vertices: usize,
}

impl FullLayout {
    fn b(&self, s: usize) -> usize {
        2 * s
    }
    fn a(&self, s: usize) -> usize {
        2 * s + 1
    }
    fn u(&self, v: usize) -> usize {
        2 * self.slots + v
    }
    fn p(&self, s: usize) -> usize {
        2 * self.slots + self.vertices + s
    }
    fn size(&self) -> usize {
        3 * self.slots + self.vertices
    }
}

fn full_matrix(net: &Network, k: f64, eps: f64) -> Result<(CMatrix, FullLayout)> {
    let layout = FullLayout {
        slots: net.ends.len(),
        vertices: net.graph.vertices().len(),
    };
    let n = layout.size();
    let mut a = CMatrix::zeros(n, n);
    let mut row = 0;
    let ik = I * k;
    let out = Complex64::from_polar(1.0, k);
    let inc = out.conj();
    for (slot, &end) in net.ends.iter().enumerate() {
        let v = net.graph.end_vertex(end).unwrap();
        let m = edge::transfer_matrix(&net.potentials[slot], k, net.steps)?.m;
        // (phi, phi')(1) from vertex data equals the plane-wave pair at xi = 1
        a[(row, layout.u(v))] = m[0][0].into();
        a[(row, layout.p(slot))] = m[0][1].into();
        a[(row, layout.b(slot))] = -inc;
        a[(row, layout.a(slot))] = -out;
        row += 1;
        a[(row, layout.u(v))] = m[1][0].into();
        a[(row, layout.p(slot))] = m[1][1].into();
        a[(row, layout.b(slot))] = ik * inc;
        a[(row, layout.a(slot))] = -ik * out;
        row += 1;
    }
    for (v, vert) in net.graph.vertices().iter().enumerate() {
        match vert.kind {
            VertexKind::V1 => a[(row, layout.u(v))] = ONE,
            VertexKind::V2 => {
                for &end in net.graph.incident_ends(v) {
                    a[(row, layout.p(net.slot(end).unwrap()))] += ONE;
                }
            }
        }
        row += 1;
    }
    fill_edge_rows(net, k, eps, &mut a, &mut row, |s| layout.b(s), |s| layout.a(s));
    for slot in net.lead_slots() {
        a[(row, layout.b(slot))] = ONE;
        row += 1;
    }
    debug_assert_eq!(row, n);
    Ok((a, layout))
}

/// Full scattering solutions for every lead.
pub fn solve_full_all(net: &Network, k: f64, eps: f64) -> Result<Vec<FullSolution>> {
    check_scattering(net, k, eps)?;
    net.graph.check_eps(eps).map_err(Error::from)?;
    let (a, layout) = full_matrix(net, k, eps)?;
    let rhs = lead_rhs(net, a.nrows());
    let x = linalg::solve(&a, &rhs, "full network", k)?;
    let waves = split_columns(net, k, eps, &x, 2);
    let end_vertex: Vec<usize> = net
        .ends
        .iter()
        .map(|&e| net.graph.end_vertex(e).unwrap())
        .collect();
    Ok(waves
        .into_iter()
        .enumerate()
        .map(|(m, wave)| FullSolution {
            wave,
            vertex_values: (0..layout.vertices).map(|v| x[(layout.u(v), m)]).collect(),
            derivatives: (0..layout.slots).map(|s| x[(layout.p(s), m)]).collect(),
            ends: net.ends.clone(),
            end_vertex: end_vertex.clone(),
            potentials: net.potentials.clone(),
            steps: net.steps,
        })
        .collect())
}

pub fn solve_full_scattering(net: &Network, k: f64, eps: f64, m: usize) -> Result<FullSolution> {
    let r = net.graph.leads().len();
    if m >= r && r > 0 {
        return Err(Error::invalid(format!("lead index {m} out of range ({r} leads)")));
    }
    let mut all = solve_full_all(net, k, eps)?;
    Ok(all.swap_remove(m))
}

/// Scattering matrix over the leads: `tau[(j, m)]` is the outgoing amplitude
/// on lead `j` for a unit wave incoming on lead `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSMatrix {
    pub tau: CMatrix,
    pub k: f64,
    pub eps: f64,
    pub unitarity_residual: f64,
    pub symmetry_residual: f64,
}

impl GraphSMatrix {
    fn from_fields(net: &Network, fields: &[WaveField], k: f64, eps: f64) -> Self {
        let leads = net.lead_slots();
        let r = leads.len();
        let tau = CMatrix::from_fn(r, r, |j, m| fields[m].amplitudes[leads[j]].1);
        GraphSMatrix {
            unitarity_residual: linalg::unitarity_residual(&tau),
            symmetry_residual: linalg::symmetry_residual(&tau),
            tau,
            k,
            eps,
        }
    }

    pub fn channels(&self) -> usize {
        self.tau.nrows()
    }
}

pub fn graph_smatrix(net: &Network, k: f64, eps: f64) -> Result<GraphSMatrix> {
    let fields = solve_limiting_all(net, k, eps, VertexForm::Amplitude)?;
    Ok(GraphSMatrix::from_fields(net, &fields, k, eps))
}

/// Scattering matrix read off the full solve.
pub fn graph_smatrix_full(net: &Network, k: f64, eps: f64) -> Result<GraphSMatrix> {
    let sols = solve_full_all(net, k, eps)?;
    let fields: Vec<WaveField> = sols.into_iter().map(|s| s.wave).collect();
    Ok(GraphSMatrix::from_fields(net, &fields, k, eps))
}

fn check_compact(net: &Network, k: f64, eps: f64) -> Result<()> {
    check_k_eps(k, eps)?;
    if !net.graph.is_compact() {
        return Err(Error::NotCompact);
    }
    Ok(())
}

/// Smallest singular value of the homogeneous limiting system; zero exactly
/// when `(k/eps)^2` is an eigenvalue of the limiting problem.
pub fn secular_value(net: &Network, k: f64, eps: f64) -> Result<f64> {
    check_compact(net, k, eps)?;
    let couplings = net.couplings(k)?;
    let a = limiting_matrix(net, &couplings, k, eps, VertexForm::Amplitude);
    Ok(linalg::min_singular_value(&a))
}

/// Same as [`secular_value`] for the full system.
pub fn secular_value_full(net: &Network, k: f64, eps: f64) -> Result<f64> {
    check_compact(net, k, eps)?;
    net.graph.check_eps(eps).map_err(Error::from)?;
    let (a, _) = full_matrix(net, k, eps)?;
    Ok(linalg::min_singular_value(&a))
}

/// Refined minima with a secular value below this are eigenvalues.
pub const EIGEN_ACCEPT: f64 = 1e-6;
/// Golden-section stopping width in `k`.
pub const EIGEN_K_TOL: f64 = 1e-10;

/// Eigenvalue wavenumbers in `[k_min, k_max]` of the limiting problem.
pub fn find_eigenvalues(net: &Network, k_min: f64, k_max: f64, eps: f64, grid: usize) -> Result<Vec<f64>> {
    check_compact(net, k_min.max(f64::MIN_POSITIVE), eps)?;
    find_secular_roots(|k| secular_value(net, k, eps), k_min, k_max, grid)
}

/// Eigenvalue wavenumbers of the full problem.
pub fn find_eigenvalues_full(
    net: &Network,
    k_min: f64,
    k_max: f64,
    eps: f64,
    grid: usize,
) -> Result<Vec<f64>> {
    check_compact(net, k_min.max(f64::MIN_POSITIVE), eps)?;
    net.graph.check_eps(eps).map_err(Error::from)?;
    find_secular_roots(|k| secular_value_full(net, k, eps), k_min, k_max, grid)
}

/// Grid scan for local minima of `f`, each refined by golden-section search and
/// kept if the refined value is below [`EIGEN_ACCEPT`].
pub fn find_secular_roots<F>(f: F, k_min: f64, k_max: f64, grid: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if !(k_min > 0.0 && k_max > k_min) {
        return Err(Error::invalid(format!(
            "need 0 < k_min < k_max, got [{k_min}, {k_max}]"
        )));
    }
    if grid < 3 {
        return Err(Error::invalid("eigenvalue grid needs at least 3 points"));
    }
    let ks: Vec<f64> = (0..grid)
        .map(|i| k_min + (k_max - k_min) * i as f64 / (grid - 1) as f64)
        .collect();
    let values = ks.par_iter().map(|&k| f(k)).collect::<Result<Vec<_>>>()?;

    let mut brackets = Vec::new();
    for i in 0..grid {
        let left = if i == 0 { f64::INFINITY } else { values[i - 1] };
        let right = if i + 1 == grid { f64::INFINITY } else { values[i + 1] };
        if values[i] <= left && values[i] < right {
            brackets.push((ks[i.saturating_sub(1)], ks[(i + 1).min(grid - 1)]));
        }
    }
    let refined = brackets
        .par_iter()
        .map(|&(lo, hi)| golden_section(&f, lo, hi))
        .collect::<Result<Vec<_>>>()?;
    let mut roots: Vec<f64> = refined
        .into_iter()
        .filter(|&(_, v)| v < EIGEN_ACCEPT)
        .map(|(k, _)| k)
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 10.0 * EIGEN_K_TOL);
    Ok(roots)
}

fn golden_section<F>(f: &F, mut lo: f64, mut hi: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > EIGEN_K_TOL {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let k = 0.5 * (lo + hi);
    Ok((k, f(k)?))
}
