//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Spectral norm (largest singular value).
pub fn op_norm(a: &CMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

pub fn min_singular_value(a: &CMatrix) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

/// 2-norm condition number; infinite for a singular matrix.
pub fn condition_number(a: &CMatrix) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Systems with a larger condition number are reported as singular.
pub const SINGULAR_CONDITION: f64 = 1e13;

/// Solves `a x = b`, reporting near-singular systems instead of returning garbage.
pub(crate) fn solve(a: &CMatrix, b: &CMatrix, system: &'static str, k: f64) -> Result<CMatrix> {
    let condition = condition_number(a);
    if !(condition < SINGULAR_CONDITION) {
        return Err(Error::Singular {
            system,
            k,
            condition,
        });
    }
    a.clone().lu().solve(b).ok_or(Error::Singular {
        system,
        k,
        condition,
    })
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `||a a* - I||`.
pub fn unitarity_residual(a: &CMatrix) -> f64 {
    op_norm(&(a * a.adjoint() - identity(a.nrows())))
}

/// `||a - a^T||`.
pub fn symmetry_residual(a: &CMatrix) -> f64 {
    op_norm(&(a - a.transpose()))
}

/// `||a - a*||`.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    op_norm(&(a - a.adjoint()))
}
