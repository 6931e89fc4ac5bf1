//! Vertex scattering matrices of star graphs.
//!
//! On a star of `d` half-lines carrying the end potentials, the scattering
//! solution excited from edge `m` reads `delta_{nm} e^{-ik xi} + t_{nm} e^{ik xi}`
//! on edge `n` beyond the potential. The matrix `T = [t_{nm}]` maps incoming
//! amplitudes to outgoing ones, `a = T b`, and fixes the vertex condition of
//! the limiting graph problem.
//!
//! Two independent routes are provided: a closed form built from the line
//! scattering data `(r_n, t_n)` of each end, and a direct solve of the
//! star matching problem with Kirchhoff conditions at the vertex.

use num_complex::Complex64;

use crate::edge::{self, line_scattering, plane_wave_split, ScatterPair, TransferMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE};
use crate::potential::EffectivePotential;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this magnitude, `1 + r_j`, `rho` or `t_j` make the closed form unusable.
pub const POLE_THRESHOLD: f64 = 1e-10;

/// Scattering matrix of a star at wavenumber `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexMatrix {
    pub t: CMatrix,
    pub k: f64,
}

impl VertexMatrix {
    pub fn new(t: CMatrix, k: f64) -> Self {
        VertexMatrix { t, k }
    }

    pub fn degree(&self) -> usize {
        self.t.nrows()
    }

    /// The matrix of continuity plus zero flux sum for `d` straight tubes.
    pub fn kirchhoff(d: usize, k: f64) -> Self {
        let off = Complex64::new(2.0 / d as f64, 0.0);
        let t = CMatrix::from_fn(d, d, |i, j| if i == j { off - ONE } else { off });
        VertexMatrix { t, k }
    }
}

/// Per-column coefficients of the closed-form star solution.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaCoefficients {
    /// `gamma[(n, m)]` multiplies the line solution of edge `n` in column `m`.
    pub gamma: CMatrix,
    pub rho: Complex64,
}

/// Closed-form star matrix from the line data of each end.
pub fn star_matrix_closed_form(pairs: &[ScatterPair]) -> Result<(VertexMatrix, GammaCoefficients)> {
    let d = pairs.len();
    if d < 2 {
        return Err(Error::invalid(format!("star needs degree >= 2, got {d}")));
    }
    let k = pairs[0].k;
    if pairs.iter().any(|p| p.k != k) {
        return Err(Error::invalid("scatter pairs computed at different k"));
    }
    for (j, p) in pairs.iter().enumerate() {
        if (ONE + p.r).norm() < POLE_THRESHOLD {
            return Err(Error::PoleAtVertex(format!("|1 + r_{j}| below threshold")));
        }
        if p.t.norm() < POLE_THRESHOLD {
            return Err(Error::PoleAtVertex(format!("|t_{j}| below threshold")));
        }
    }
    let rho: Complex64 = pairs.iter().map(|p| (ONE - p.r) / (ONE + p.r)).sum();
    if rho.norm() < POLE_THRESHOLD {
        return Err(Error::PoleAtVertex("|rho| below threshold".into()));
    }

    let mut t = CMatrix::zeros(d, d);
    let mut gamma = CMatrix::zeros(d, d);
    for m in 0..d {
        let (rm, tm) = (pairs[m].r, pairs[m].t);
        let one_rm = ONE + rm;
        let back = (ONE + rm.conj()) / (tm.conj() * one_rm);
        let g_mm = 2.0 * tm / (one_rm * one_rm * rho) - back;
        gamma[(m, m)] = g_mm;
        t[(m, m)] = 2.0 * tm * tm / (one_rm * one_rm * rho) - tm * back;
        for n in (0..d).filter(|&n| n != m) {
            let (rn, tn) = (pairs[n].r, pairs[n].t);
            let one_rn = ONE + rn;
            gamma[(n, m)] = (ONE + rm.conj()) / (tm.conj() * one_rn) + g_mm * one_rm / one_rn;
            t[(n, m)] = 2.0 * tm * tn / (one_rm * one_rn * rho);
        }
    }
    Ok((VertexMatrix { t, k }, GammaCoefficients { gamma, rho }))
}

/// Line data of every end at `k`.
pub fn scatter_pairs(
    potentials: &[EffectivePotential],
    k: f64,
    steps: usize,
) -> Result<Vec<ScatterPair>> {
    potentials
        .iter()
        .map(|q| line_scattering(q, k, steps))
        .collect()
}

/// Solves the star matching problem given per-end propagators over `[0, x]`.
///
/// `wavenumber * x` is the matching phase; derivatives are taken in the same
/// coordinate as the propagators.
fn solve_star(props: &[[[f64; 2]; 2]], wavenumber: f64, x: f64, k: f64) -> Result<CMatrix> {
    let d = props.len();
    let n = 2 * d + 1;
    let ik = I * wavenumber;
    let out = Complex64::from_polar(1.0, wavenumber * x);
    let inc = Complex64::from_polar(1.0, -wavenumber * x);
    // unknowns: [u, p_1..p_d, t_1..t_d]
    let mut a = CMatrix::zeros(n, n);
    let mut b = CMatrix::zeros(n, d);
    for (j, m) in props.iter().enumerate() {
        let (r0, r1) = (2 * j, 2 * j + 1);
        a[(r0, 0)] = m[0][0].into();
        a[(r0, 1 + j)] = m[0][1].into();
        a[(r0, 1 + d + j)] = -out;
        a[(r1, 0)] = m[1][0].into();
        a[(r1, 1 + j)] = m[1][1].into();
        a[(r1, 1 + d + j)] = -ik * out;
        b[(r0, j)] = inc;
        b[(r1, j)] = -ik * inc;
    }
    for j in 0..d {
        a[(2 * d, 1 + j)] = ONE;
    }
    let x = linalg::solve(&a, &b, "star matching", k)?;
    Ok(x.rows(1 + d, d).into_owned())
}

/// Star matrix from a direct solve in the rescaled coordinate.
pub fn star_matrix_direct(
    potentials: &[EffectivePotential],
    k: f64,
    steps: usize,
) -> Result<VertexMatrix> {
    check_degree(potentials.len())?;
    let props = potentials
        .iter()
        .map(|q| edge::transfer_matrix(q, k, steps).map(|tm| tm.m))
        .collect::<Result<Vec<_>>>()?;
    Ok(VertexMatrix {
        t: solve_star(&props, k, 1.0, k)?,
        k,
    })
}

/// Star matrix from a direct solve of the unrescaled problem
/// `-phi'' + eps^-2 Q(s/eps) phi = (k/eps)^2 phi` on `s in [0, eps]`.
pub fn star_matrix_direct_unscaled(
    potentials: &[EffectivePotential],
    k: f64,
    eps: f64,
    steps: usize,
) -> Result<VertexMatrix> {
    check_degree(potentials.len())?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
    }
    if steps < edge::MIN_STEPS {
        return Err(Error::invalid(format!("too few integration steps: {steps}")));
    }
    let wavenumber = k / eps;
    let energy = wavenumber * wavenumber;
    let inv_eps2 = 1.0 / (eps * eps);
    let props = potentials
        .iter()
        .map(|q| edge::propagate(|s| inv_eps2 * q.q(s / eps) - energy, 0.0, eps, steps))
        .collect::<Result<Vec<_>>>()?;
    Ok(VertexMatrix {
        t: solve_star(&props, wavenumber, eps, k)?,
        k,
    })
}

fn check_degree(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::invalid(format!("star needs degree >= 2, got {d}")))
    } else {
        Ok(())
    }
}

/// Which route produced a vertex matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRoute {
    ClosedForm,
    /// Closed form hit a pole; the direct solve was used instead.
    DirectFallback,
}

/// Closed form where applicable, direct solve otherwise.
pub fn star_matrix(
    potentials: &[EffectivePotential],
    k: f64,
    steps: usize,
) -> Result<(VertexMatrix, VertexRoute)> {
    check_degree(potentials.len())?;
    let pairs = scatter_pairs(potentials, k, steps)?;
    match star_matrix_closed_form(&pairs) {
        Ok((t, _)) => Ok((t, VertexRoute::ClosedForm)),
        Err(Error::PoleAtVertex(_)) => {
            star_matrix_direct(potentials, k, steps).map(|t| (t, VertexRoute::DirectFallback))
        }
        Err(e) => Err(e),
    }
}

/// Vertex condition `P dphi/ds - R phi = 0` with `P = (i eps/k)(I + T)`, `R = I - T`.
#[derive(Debug, Clone, PartialEq)]
pub struct GluingCondition {
    pub p: CMatrix,
    pub r: CMatrix,
    pub eps: f64,
    pub k: f64,
    /// Smallest singular value of `I + T`.
    pub sigma_min_plus: f64,
    /// Smallest singular value of `I - T`.
    pub sigma_min_minus: f64,
    /// `C = (-ik/eps)(I + T)^-1 (I - T)` when `I + T` is invertible.
    pub c: Option<CMatrix>,
}

/// `I +- T` with a smallest singular value below this count as singular.
pub const INVERTIBLE_TOL: f64 = 1e-8;

impl GluingCondition {
    pub fn plus_invertible(&self) -> bool {
        self.sigma_min_plus > INVERTIBLE_TOL
    }

    pub fn minus_invertible(&self) -> bool {
        self.sigma_min_minus > INVERTIBLE_TOL
    }

    /// Rank of the `d x 2d` block `[P, R]` from singular values above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        let d = self.p.nrows();
        let mut block = CMatrix::zeros(d, 2 * d);
        block.columns_mut(0, d).copy_from(&self.p);
        block.columns_mut(d, d).copy_from(&self.r);
        linalg::singular_values(&block)
            .iter()
            .filter(|&&s| s > tol)
            .count()
    }

    /// Residual of the condition for boundary data `(phi, dphi/ds)`.
    pub fn residual(&self, phi: &CMatrix, dphi: &CMatrix) -> CMatrix {
        &self.p * dphi - &self.r * phi
    }
}

pub fn gluing_matrices(t: &VertexMatrix, eps: f64, k: f64) -> Result<GluingCondition> {
    if !(eps > 0.0) || !(k > 0.0) {
        return Err(Error::invalid(format!(
            "eps and k must be positive, got eps = {eps}, k = {k}"
        )));
    }
    let d = t.degree();
    let id = linalg::identity(d);
    let plus = &id + &t.t;
    let minus = &id - &t.t;
    let sigma_min_plus = linalg::min_singular_value(&plus);
    let sigma_min_minus = linalg::min_singular_value(&minus);
    let c = if sigma_min_plus > INVERTIBLE_TOL {
        plus.clone()
            .lu()
            .solve(&minus)
            .map(|x| x * Complex64::new(0.0, -k / eps))
    } else {
        None
    };
    Ok(GluingCondition {
        p: plus * Complex64::new(0.0, eps / k),
        r: minus,
        eps,
        k,
        sigma_min_plus,
        sigma_min_minus,
        c,
    })
}

/// Residuals of the structural properties of a vertex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyReport {
    pub unitarity_residual: f64,
    pub symmetry_residual: f64,
    pub rank_ok: bool,
}

pub fn check_unitary_symmetric(t: &VertexMatrix, tol: f64) -> PropertyReport {
    let d = t.degree();
    let id = linalg::identity(d);
    let mut block = CMatrix::zeros(d, 2 * d);
    block.columns_mut(0, d).copy_from(&(&id + &t.t));
    block.columns_mut(d, d).copy_from(&(&id - &t.t));
    let s = linalg::singular_values(&block);
    PropertyReport {
        unitarity_residual: linalg::unitarity_residual(&t.t),
        symmetry_residual: linalg::symmetry_residual(&t.t),
        rank_ok: s.len() == d && s[d - 1] > tol,
    }
}

/// Closed-form scattering solution of one column, evaluated by integrating
/// each end's ODE from the vertex.
#[derive(Debug, Clone)]
pub struct StarSolution {
    potentials: Vec<EffectivePotential>,
    k: f64,
    steps: usize,
    column: usize,
    /// `(phi_n(0), phi_n'(0))` per edge.
    cauchy: Vec<[Complex64; 2]>,
}

pub fn reconstruct_star_solution(
    potentials: &[EffectivePotential],
    pairs: &[ScatterPair],
    gamma: &GammaCoefficients,
    m: usize,
    steps: usize,
) -> Result<StarSolution> {
    let d = pairs.len();
    if potentials.len() != d || gamma.gamma.nrows() != d {
        return Err(Error::invalid("potentials, pairs and gamma differ in size"));
    }
    if m >= d {
        return Err(Error::invalid(format!("column {m} out of range for degree {d}")));
    }
    let k = pairs[m].k;
    let ik = I * k;
    let (rm, tm) = (pairs[m].r, pairs[m].t);
    let cauchy = (0..d)
        .map(|n| {
            let g = gamma.gamma[(n, m)];
            let (rn, _) = (pairs[n].r, pairs[n].t);
            // line solution: psi(0) = 1 + r, psi'(0) = ik (1 - r)
            let mut value = g * (ONE + rn);
            let mut deriv = g * ik * (ONE - rn);
            if n == m {
                value += (ONE + rm.conj()) / tm.conj();
                deriv += -ik * (ONE - rm.conj()) / tm.conj();
            }
            [value, deriv]
        })
        .collect();
    Ok(StarSolution {
        potentials: potentials.to_vec(),
        k,
        steps,
        column: m,
        cauchy,
    })
}

impl StarSolution {
    pub fn column(&self) -> usize {
        self.column
    }

    pub fn vertex_values(&self) -> Vec<Complex64> {
        self.cauchy.iter().map(|c| c[0]).collect()
    }

    pub fn vertex_derivatives(&self) -> Vec<Complex64> {
        self.cauchy.iter().map(|c| c[1]).collect()
    }

    /// Largest spread of the vertex values across edges.
    pub fn continuity_residual(&self) -> f64 {
        let v = self.vertex_values();
        v.iter().map(|x| (x - v[0]).norm()).fold(0.0, f64::max)
    }

    /// `|sum_n phi_n'(0)|`.
    pub fn flux_residual(&self) -> f64 {
        self.vertex_derivatives().iter().sum::<Complex64>().norm()
    }

    fn propagator(&self, n: usize, xi: f64) -> Result<TransferMatrix> {
        let steps = ((self.steps as f64 * xi).ceil() as usize).max(edge::MIN_STEPS);
        edge::transfer_matrix_between(&self.potentials[n], self.k, 0.0, xi, steps)
    }

    /// `(phi_n, phi_n')` at `xi`.
    pub fn eval(&self, n: usize, xi: f64) -> Result<[Complex64; 2]> {
        if n >= self.cauchy.len() {
            return Err(Error::invalid(format!("edge {n} out of range")));
        }
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::invalid(format!("xi must be >= 0, got {xi}")));
        }
        if xi == 0.0 {
            return Ok(self.cauchy[n]);
        }
        if xi <= 1.0 {
            return Ok(self.propagator(n, xi)?.apply(self.cauchy[n]));
        }
        let (b, a) = self.far_field(n)?;
        let (inc, out) = (
            Complex64::from_polar(1.0, -self.k * xi),
            Complex64::from_polar(1.0, self.k * xi),
        );
        Ok([b * inc + a * out, I * self.k * (a * out - b * inc)])
    }

    pub fn value(&self, n: usize, xi: f64) -> Result<Complex64> {
        self.eval(n, xi).map(|v| v[0])
    }

    /// Incoming and outgoing amplitudes `(b, a)` on edge `n` beyond the potential.
    pub fn far_field(&self, n: usize) -> Result<(Complex64, Complex64)> {
        let y = self.propagator(n, 1.0)?.apply(self.cauchy[n]);
        Ok(plane_wave_split(y[0], y[1], self.k, 1.0))
    }
}
