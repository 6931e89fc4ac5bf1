//! Scattering by a single edge end: transfer matrices of `-phi'' + Q phi = k^2 phi`
//! on the rescaled interval `[0, 1]`, line reflection/transmission coefficients,
//! and the plane-wave content of the Dirichlet-started solution used at
//! degree-one vertices.
//!
//! All computations are done in the rescaled coordinate, so nothing here
//! depends on the fiber width.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potential::EffectivePotential;

/// Step count used when the caller has no preference.
pub const DEFAULT_STEPS: usize = 4096;
/// Fewer steps than this are rejected.
pub const MIN_STEPS: usize = 100;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real 2x2 propagator mapping `(phi, phi')(x0)` to `(phi, phi')(x1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m: [[f64; 2]; 2],
    pub k: f64,
}

impl TransferMatrix {
    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, y: [Complex64; 2]) -> [Complex64; 2] {
        [
            y[0] * self.m[0][0] + y[1] * self.m[0][1],
            y[0] * self.m[1][0] + y[1] * self.m[1][1],
        ]
    }

    /// Free propagator over `[0, 1]`.
    pub fn free(k: f64) -> Self {
        let (s, c) = k.sin_cos();
        TransferMatrix {
            m: [[c, s / k], [-k * s, c]],
            k,
        }
    }
}

/// Fundamental matrix of `y'' = coef(x) y` from `x0` to `x1` by classical RK4.
///
/// Columns are the solutions started from `(1, 0)` and `(0, 1)`.
pub(crate) fn propagate<F>(coef: F, x0: f64, x1: f64, steps: usize) -> Result<[[f64; 2]; 2]>
where
    F: Fn(f64) -> f64,
{
    let h = (x1 - x0) / steps as f64;
    // state: [phi_a, dphi_a, phi_b, dphi_b]
    let mut y = [1.0, 0.0, 0.0, 1.0];
    let rhs = |c: f64, y: &[f64; 4]| [y[1], c * y[0], y[3], c * y[2]];
    let axpy = |y: &[f64; 4], a: f64, d: &[f64; 4]| {
        [y[0] + a * d[0], y[1] + a * d[1], y[2] + a * d[2], y[3] + a * d[3]]
    };
    let mut c0 = coef(x0);
    for i in 0..steps {
        let x = x0 + i as f64 * h;
        let xm = x + 0.5 * h;
        let xe = if i + 1 == steps { x1 } else { x + h };
        let cm = coef(xm);
        let c1 = coef(xe);
        if !c0.is_finite() || !cm.is_finite() || !c1.is_finite() {
            let bad = [(x, c0), (xm, cm), (xe, c1)]
                .into_iter()
                .find(|(_, c)| !c.is_finite())
                .map_or(x, |(x, _)| x);
            return Err(Error::NonFinitePotential(bad));
        }
        let k1 = rhs(c0, &y);
        let k2 = rhs(cm, &axpy(&y, 0.5 * h, &k1));
        let k3 = rhs(cm, &axpy(&y, 0.5 * h, &k2));
        let k4 = rhs(c1, &axpy(&y, h, &k3));
        for j in 0..4 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        c0 = c1;
    }
    Ok([[y[0], y[2]], [y[1], y[3]]])
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("wavenumber must be positive, got {k}")))
    }
}

fn check_steps(steps: usize) -> Result<()> {
    if steps >= MIN_STEPS {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "integrator needs at least {MIN_STEPS} steps, got {steps}"
        )))
    }
}

/// Propagator of `-phi'' + Q phi = k^2 phi` across `[0, 1]`.
pub fn transfer_matrix(q: &EffectivePotential, k: f64, steps: usize) -> Result<TransferMatrix> {
    transfer_matrix_between(q, k, 0.0, 1.0, steps)
}

/// Propagator across `[x0, x1]`.
pub fn transfer_matrix_between(
    q: &EffectivePotential,
    k: f64,
    x0: f64,
    x1: f64,
    steps: usize,
) -> Result<TransferMatrix> {
    check_k(k)?;
    check_steps(steps)?;
    let energy = k * k;
    let m = if q.is_zero() {
        // exact free propagation over the sub-interval
        let (s, c) = (k * (x1 - x0)).sin_cos();
        [[c, s / k], [-k * s, c]]
    } else {
        propagate(|x| q.q(x) - energy, x0, x1, steps)?
    };
    Ok(TransferMatrix { m, k })
}

/// Reflection and transmission of the line problem with the potential on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPair {
    pub r: Complex64,
    pub t: Complex64,
    pub k: f64,
}

impl ScatterPair {
    /// `|r|^2 + |t|^2`, one for a real potential.
    pub fn flux(&self) -> f64 {
        self.r.norm_sqr() + self.t.norm_sqr()
    }
}

/// Solves `psi = e^{iks} + r e^{-iks}` for `s < 0`, `psi = t e^{iks}` for `s > 1`.
pub fn line_scattering(q: &EffectivePotential, k: f64, steps: usize) -> Result<ScatterPair> {
    let tm = transfer_matrix(q, k, steps)?;
    line_scattering_from(&tm)
}

/// Same as [`line_scattering`] with a precomputed propagator.
pub fn line_scattering_from(tm: &TransferMatrix) -> Result<ScatterPair> {
    let k = tm.k;
    let [[m11, m12], [m21, m22]] = tm.m;
    let ik = I * k;
    let phase = Complex64::from_polar(1.0, k);
    // unknowns (r, t); see the matching conditions in the doc comment
    let a11 = m11 - ik * m12;
    let a12 = -phase;
    let a21 = m21 - ik * m22;
    let a22 = -ik * phase;
    let b1 = -(m11 + ik * m12);
    let b2 = -(m21 + ik * m22);
    let det = a11 * a22 - a12 * a21;
    let scale = (a11.norm() + a12.norm()) * (a21.norm() + a22.norm());
    if det.norm() <= 1e-14 * scale {
        return Err(Error::Singular {
            system: "line matching",
            k,
            condition: scale / det.norm(),
        });
    }
    let r = (b1 * a22 - a12 * b2) / det;
    let t = (a11 * b2 - b1 * a21) / det;
    Ok(ScatterPair { r, t, k })
}

/// Plane-wave content `phi = alpha e^{-iks} + beta e^{iks}` (for `s >= 1`) of
/// the solution started from `phi(0) = 0`, `phi'(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCoefficients {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub k: f64,
}

impl BoundaryCoefficients {
    /// `beta / alpha`: the outgoing-to-incoming amplitude ratio at a degree-one vertex.
    pub fn reflection(&self) -> Complex64 {
        self.beta / self.alpha
    }
}

pub fn boundary_coefficients(
    q: &EffectivePotential,
    k: f64,
    steps: usize,
) -> Result<BoundaryCoefficients> {
    let tm = transfer_matrix(q, k, steps)?;
    let (phi, dphi) = (tm.m[0][1], tm.m[1][1]);
    let (alpha, beta) = plane_wave_split(phi.into(), dphi.into(), k, 1.0);
    Ok(BoundaryCoefficients { alpha, beta, k })
}

/// Coefficients `(b, a)` with `b e^{-ikx} + a e^{ikx}` matching `(phi, phi')` at `x`.
pub(crate) fn plane_wave_split(
    phi: Complex64,
    dphi: Complex64,
    k: f64,
    x: f64,
) -> (Complex64, Complex64) {
    let ik = I * k;
    let incoming = (ik * phi - dphi) * Complex64::from_polar(1.0, k * x) / (2.0 * ik);
    let outgoing = (ik * phi + dphi) * Complex64::from_polar(1.0, -k * x) / (2.0 * ik);
    (incoming, outgoing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::EdgeProfile;

    fn bump(a: f64, p: i64, lp: f64) -> EffectivePotential {
        EffectivePotential::from_profile(EdgeProfile::poly_bump(a, p).unwrap(), lp)
    }

    /// Closed-form propagator of a constant potential over unit length.
    fn constant_oracle(q0: f64, k: f64) -> [[f64; 2]; 2] {
        let e = k * k - q0;
        if e > 0.0 {
            let kap = e.sqrt();
            let (s, c) = kap.sin_cos();
            [[c, s / kap], [-kap * s, c]]
        } else {
            let kap = (-e).sqrt();
            let (s, c) = (kap.sinh(), kap.cosh());
            [[c, s / kap], [kap * s, c]]
        }
    }

    #[test]
    fn free_propagator() {
        let k = 1.7;
        let tm = transfer_matrix(&EffectivePotential::zero(), k, DEFAULT_STEPS).unwrap();
        let f = TransferMatrix::free(k);
        for i in 0..2 {
            for j in 0..2 {
                assert!((tm.m[i][j] - f.m[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn constant_potential_matches_closed_form() {
        for &(q0, k) in &[(2.0, 1.0), (0.5, 1.3), (-3.0, 0.4), (9.0, 2.0)] {
            let tm = transfer_matrix(&EffectivePotential::constant(q0), k, DEFAULT_STEPS).unwrap();
            let o = constant_oracle(q0, k);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((tm.m[i][j] - o[i][j]).abs() < 1e-9, "q0={q0} k={k}");
                }
            }
        }
    }

    #[test]
    fn wronskian_is_conserved() {
        for &k in &[0.3, 1.0, 4.0] {
            let tm = transfer_matrix(&bump(0.6, 3, 2.0), k, DEFAULT_STEPS).unwrap();
            assert!((tm.det() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let o = constant_oracle(2.0, 1.0);
        let err = |steps| {
            let tm = transfer_matrix(&EffectivePotential::constant(2.0), 1.0, steps).unwrap();
            (0..4)
                .map(|n| (tm.m[n / 2][n % 2] - o[n / 2][n % 2]).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(100), err(200));
        assert!(e1 / e2 >= 8.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn rejects_bad_arguments() {
        let q = EffectivePotential::zero();
        assert!(transfer_matrix(&q, 0.0, DEFAULT_STEPS).is_err());
        assert!(transfer_matrix(&q, 1.0, 10).is_err());
    }

    #[test]
    fn nonfinite_potential_is_reported() {
        let q = EffectivePotential::constant(f64::NAN);
        assert!(matches!(
            transfer_matrix(&q, 1.0, DEFAULT_STEPS),
            Err(Error::NonFinitePotential(_))
        ));
    }

    #[test]
    fn flat_line_is_transparent() {
        let p = line_scattering(&EffectivePotential::zero(), 0.8, DEFAULT_STEPS).unwrap();
        assert!(p.r.norm() < 1e-15);
        assert!((p.t - 1.0).norm() < 1e-15);
    }

    #[test]
    fn rectangular_barrier_matches_textbook_formula() {
        // barrier of height 2 on (0, 1) at k = 1, so kappa = sqrt(k^2 - 2) = i
        let (q0, k) = (2.0, 1.0);
        let kap = Complex64::new(k * k - q0, 0.0).sqrt();
        let kk = Complex64::new(k, 0.0);
        let (s, c) = (kap.sin(), kap.cos());
        let denom = c - I * (kk * kk + kap * kap) / (2.0 * kk * kap) * s;
        let t_oracle = Complex64::from_polar(1.0, -k) / denom;
        let r_oracle = I * (kap * kap - kk * kk) / (2.0 * kk * kap) * s / denom;
        let p = line_scattering(&EffectivePotential::constant(q0), k, DEFAULT_STEPS).unwrap();
        assert!((p.t - t_oracle).norm() < 1e-10, "{} vs {}", p.t, t_oracle);
        assert!((p.r - r_oracle).norm() < 1e-10, "{} vs {}", p.r, r_oracle);
    }

    #[test]
    fn flux_is_conserved_for_profiles() {
        for &k in &[0.5, 1.0, 3.0] {
            let p = line_scattering(&bump(0.5, 3, 1.0), k, DEFAULT_STEPS).unwrap();
            assert!((p.flux() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn flat_boundary_coefficients() {
        let k = 1.3;
        let bc = boundary_coefficients(&EffectivePotential::zero(), k, DEFAULT_STEPS).unwrap();
        assert!((bc.alpha - I / (2.0 * k)).norm() < 1e-15);
        assert!((bc.beta + I / (2.0 * k)).norm() < 1e-15);
        // alpha + beta = 0: the vertex condition degenerates to psi(v) = 0
        assert!((bc.alpha + bc.beta).norm() < 1e-15);
        assert!((bc.reflection() + 1.0).norm() < 1e-14);
    }

    #[test]
    fn profiled_boundary_coefficients_are_conjugate_and_converged() {
        let q = bump(0.45, 4, 1.0);
        let fine = boundary_coefficients(&q, 1.0, DEFAULT_STEPS).unwrap();
        let coarse = boundary_coefficients(&q, 1.0, DEFAULT_STEPS / 2).unwrap();
        assert!((fine.beta - fine.alpha.conj()).norm() < 1e-9);
        assert!((fine.alpha - coarse.alpha).norm() < 1e-11);
        assert!((fine.alpha.norm() - fine.beta.norm()).abs() < 1e-9);
    }

    #[test]
    fn plane_wave_split_round_trip() {
        let (k, x) = (1.4, 0.7);
        let b = Complex64::new(0.3, -1.1);
        let a = Complex64::new(-0.2, 0.5);
        let phi = b * Complex64::from_polar(1.0, -k * x) + a * Complex64::from_polar(1.0, k * x);
        let dphi = I * k
            * (-b * Complex64::from_polar(1.0, -k * x) + a * Complex64::from_polar(1.0, k * x));
        let (b2, a2) = plane_wave_split(phi, dphi, k, x);
        assert!((b - b2).norm() < 1e-14 && (a - a2).norm() < 1e-14);
    }
}
