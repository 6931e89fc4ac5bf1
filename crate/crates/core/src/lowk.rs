//! Behaviour of a star vertex as `k -> 0`.
//!
//! Generically the vertex matrix tends to `-I` (a Dirichlet condition for the
//! limiting function). The exception is a star whose Neumann problem
//! `-phi'' + B phi = 0` on `s in [0, 2]` per edge, with `B` the end potential
//! on `[0, 1]` and zero beyond, Kirchhoff data at the vertex and
//! `phi'(2) = 0`, has a nontrivial solution.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, identity};
use crate::potential::EffectivePotential;
use crate::vertex;

/// Grid points per unit length in the Neumann problem.
pub const DEFAULT_POINTS_PER_UNIT: usize = 512;
/// Coarser grids are rejected.
pub const MIN_POINTS_PER_EDGE: usize = 64;
/// Wavenumbers below this are rejected by [`low_k_scaling`].
pub const MIN_SCALING_K: f64 = 1e-4;

const EDGE_LENGTH: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroModeReport {
    pub smallest_eigenvalue_magnitude: f64,
    /// Eigenvalue closest to zero, with sign.
    pub nearest_eigenvalue: f64,
    /// Richardson combination of the nearest eigenvalue on this grid and on
    /// the grid with twice the spacing.
    pub extrapolated_eigenvalue: f64,
    pub has_zero_mode: bool,
    pub tol: f64,
}

pub fn neumann_zero_mode_check(potentials: &[EffectivePotential], tol: f64) -> Result<ZeroModeReport> {
    neumann_zero_mode_check_with(potentials, tol, DEFAULT_POINTS_PER_UNIT)
}

pub fn neumann_zero_mode_check_with(
    potentials: &[EffectivePotential],
    tol: f64,
    points_per_unit: usize,
) -> Result<ZeroModeReport> {
    if potentials.len() < 2 {
        return Err(Error::invalid(format!(
            "star needs degree >= 2, got {}",
            potentials.len()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let per_edge = (EDGE_LENGTH * points_per_unit as f64) as usize;
    if per_edge < MIN_POINTS_PER_EDGE {
        return Err(Error::invalid(format!(
            "grid of {per_edge} points per edge is too coarse (need {MIN_POINTS_PER_EDGE})"
        )));
    }
    let fine = NeumannStar::new(potentials, per_edge)?.nearest_eigenvalue();
    let coarse = NeumannStar::new(potentials, per_edge / 2)?.nearest_eigenvalue();
    Ok(ZeroModeReport {
        smallest_eigenvalue_magnitude: fine.abs(),
        nearest_eigenvalue: fine,
        extrapolated_eigenvalue: (4.0 * fine - coarse) / 3.0,
        has_zero_mode: fine.abs() < tol,
        tol,
    })
}

/// Second-order discretization of the Neumann star problem as a symmetric
/// pencil `K x = lambda W x` with lumped weights (half cells at the vertex and
/// at `s = 2`). Inertia comes from eliminating each edge from `s = 2` inward.
struct NeumannStar {
    h: f64,
    // B around s_j = j h, j = 0..=n, per edge
    b: Vec<Vec<f64>>,
}

impl NeumannStar {
    fn new(potentials: &[EffectivePotential], n: usize) -> Result<Self> {
        let h = EDGE_LENGTH / n as f64;
        let b: Vec<Vec<f64>> = potentials
            .iter()
            .map(|q| {
                // cell averages keep second order across the jump of B at s = 1
                let mut row: Vec<f64> = (0..=n)
                    .map(|j| {
                        let s = j as f64 * h;
                        0.5 * (q.q(s - 0.25 * h) + q.q(s + 0.25 * h))
                    })
                    .collect();
                row[0] = q.q(0.25 * h);
                row
            })
            .collect();
        if b.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinitePotential(f64::NAN));
        }
        Ok(NeumannStar { h, b })
    }

    /// Number of eigenvalues below `x`.
    fn count_below(&self, x: f64) -> usize {
        let h2 = self.h * self.h;
        let mut negative = 0;
        let mut vertex_pivot = 0.0;
        for b in &self.b {
            let n = b.len() - 1;
            // pivots are 1 + m, written this way to stay exact for B = 0, x = 0
            let mut m = 0.5 * h2 * (b[n] - x);
            for &bj in b[1..n].iter().rev() {
                let pivot = guard(1.0 + m);
                if pivot < 0.0 {
                    negative += 1;
                }
                m = m / pivot + h2 * (bj - x);
            }
            let pivot = guard(1.0 + m);
            if pivot < 0.0 {
                negative += 1;
            }
            vertex_pivot += m / pivot + 0.5 * h2 * (b[0] - x);
        }
        if vertex_pivot < 0.0 {
            negative += 1;
        }
        negative
    }

    fn spectrum_bounds(&self) -> (f64, f64) {
        let lo = self.b.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let hi = self.b.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo - 1.0, hi + 4.0 / (self.h * self.h) + 1.0)
    }

    /// Smallest `x` in `[lo, hi]` with `count_below(x) > n`, i.e. eigenvalue `n` (0-based).
    fn eigenvalue(&self, n: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn nearest_eigenvalue(&self) -> f64 {
        let (lo, hi) = self.spectrum_bounds();
        let below = self.count_below(0.0);
        let above = self.eigenvalue(below, 0.0, hi);
        if below == 0 {
            return above;
        }
        let under = self.eigenvalue(below - 1, lo, 0.0);
        if under.abs() < above.abs() {
            under
        } else {
            above
        }
    }
}

fn guard(pivot: f64) -> f64 {
    if pivot == 0.0 {
        f64::MIN_POSITIVE
    } else {
        pivot
    }
}

/// Which limit the vertex matrix approaches as `k -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowKLimit {
    /// `T -> -I`: `||I + T||` vanishes.
    Dirichlet,
    /// `T -> I`: `||I - T||` vanishes.
    Neumann,
}

/// Why no slope was fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitDeclined {
    NoVanishingNorm,
    NonMonotone,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub k_samples: Vec<f64>,
    /// `||I - T(k)||` per sample.
    pub norms_minus: Vec<f64>,
    /// `||I + T(k)||` per sample.
    pub norms_plus: Vec<f64>,
    pub limit: Option<LowKLimit>,
    /// Log-log slope of the vanishing norm.
    pub slope: Option<f64>,
    pub declined: Option<FitDeclined>,
}

impl ScalingFit {
    /// The norm sequence that tends to zero, if any.
    pub fn vanishing_norms(&self) -> Option<&[f64]> {
        match self.limit? {
            LowKLimit::Dirichlet => Some(&self.norms_plus),
            LowKLimit::Neumann => Some(&self.norms_minus),
        }
    }
}

pub fn low_k_scaling(potentials: &[EffectivePotential], k_samples: &[f64], steps: usize) -> Result<ScalingFit> {
    if k_samples.len() < 2 {
        return Err(Error::invalid("need at least two wavenumbers"));
    }
    if k_samples.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::invalid("wavenumbers must be strictly decreasing"));
    }
    let k_min = *k_samples.last().unwrap();
    if !(k_min >= MIN_SCALING_K) {
        return Err(Error::invalid(format!(
            "smallest wavenumber {k_min} is below {MIN_SCALING_K}"
        )));
    }
    let norms = k_samples
        .par_iter()
        .map(|&k| {
            let t = vertex::star_matrix_direct(potentials, k, steps)?.t;
            let id = identity(t.nrows());
            Ok((linalg::op_norm(&(&id - &t)), linalg::op_norm(&(&id + &t))))
        })
        .collect::<Result<Vec<_>>>()?;
    let (norms_minus, norms_plus): (Vec<f64>, Vec<f64>) = norms.into_iter().unzip();

    let mut fit = ScalingFit {
        k_samples: k_samples.to_vec(),
        norms_minus,
        norms_plus,
        limit: None,
        slope: None,
        declined: None,
    };
    let shrink = (k_samples[0] / k_min).sqrt();
    let vanishes = |n: &[f64]| n[0] > 0.0 && n[0] / n[n.len() - 1].max(f64::MIN_POSITIVE) >= shrink;
    fit.limit = if vanishes(&fit.norms_plus) {
        Some(LowKLimit::Dirichlet)
    } else if vanishes(&fit.norms_minus) {
        Some(LowKLimit::Neumann)
    } else {
        None
    };
    match fit.vanishing_norms() {
        None => fit.declined = Some(FitDeclined::NoVanishingNorm),
        Some(n) if n.windows(2).any(|w| !(w[1] < w[0])) || n.iter().any(|&v| !(v > 0.0)) => {
            fit.declined = Some(FitDeclined::NonMonotone)
        }
        Some(n) => fit.slope = Some(log_log_slope(k_samples, n)),
    }
    Ok(fit)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
