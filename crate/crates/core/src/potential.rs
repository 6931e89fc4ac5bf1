//! Effective 1D potential induced by a fiber profile, and transverse modes.
//!
//! After separating the cross-section eigenfunction and removing the
//! first-order term by the `A^{-1/2}` substitution, each edge end carries the
//! potential
//!
//! ```text
//! Q(xi) = A''/(2A) - (A'/A)^2 / 4 + lambda' (1 - A^2) / A^2
//! ```
//!
//! on `xi in [0, 1]` and zero beyond.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, ProfileError, Result};
use crate::profile::EdgeProfile;

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Profile(EdgeProfile),
    /// Constant value on `[0, 1]`, zero outside.
    Constant(f64),
}

/// Potential `Q` on the rescaled end coordinate, supported in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivePotential {
    source: Source,
    lambda_prime: f64,
}

impl EffectivePotential {
    pub fn zero() -> Self {
        Self::from_profile(EdgeProfile::Flat, 0.0)
    }

    /// Potential of a fiber end with the given profile and transverse eigenvalue.
    pub fn from_profile(profile: EdgeProfile, lambda_prime: f64) -> Self {
        EffectivePotential {
            source: Source::Profile(profile),
            lambda_prime,
        }
    }

    /// Step potential equal to `q0` on `[0, 1]`. Not generated by any profile,
    /// but the classic test case for the star problems.
    pub fn constant(q0: f64) -> Self {
        EffectivePotential {
            source: Source::Constant(q0),
            lambda_prime: 0.0,
        }
    }

    pub fn lambda_prime(&self) -> f64 {
        self.lambda_prime
    }

    pub fn profile(&self) -> Option<&EdgeProfile> {
        match &self.source {
            Source::Profile(p) => Some(p),
            Source::Constant(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.source {
            Source::Profile(p) => p.is_flat(),
            Source::Constant(q0) => *q0 == 0.0,
        }
    }

    /// `Q(xi)`; zero for `xi` outside `[0, 1]`.
    pub fn q(&self, xi: f64) -> f64 {
        if !(0.0..=1.0).contains(&xi) {
            return 0.0;
        }
        match &self.source {
            Source::Constant(q0) => *q0,
            Source::Profile(EdgeProfile::Flat) => 0.0,
            Source::Profile(p) => {
                let v = p.eval_unchecked(xi);
                let ratio = v.da / v.a;
                let a2 = v.a * v.a;
                v.d2a / (2.0 * v.a) - 0.25 * ratio * ratio + self.lambda_prime * (1.0 - a2) / a2
            }
        }
    }

    /// Largest `|Q|` on a uniform sample of `[0, 1]`.
    pub fn sup_norm(&self, samples: usize) -> f64 {
        (0..=samples)
            .map(|i| self.q(i as f64 / samples as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// Builds the effective potential of a profile for transverse eigenvalue `lambda_prime`.
pub fn potential_q(profile: &EdgeProfile, lambda_prime: f64) -> Result<EffectivePotential> {
    if !lambda_prime.is_finite() || lambda_prime < 0.0 {
        return Err(Error::invalid(format!(
            "transverse eigenvalue must be finite and >= 0, got {lambda_prime}"
        )));
    }
    Ok(EffectivePotential::from_profile(profile.clone(), lambda_prime))
}

/// Dirichlet mode of the cross-section interval `[0, L]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseMode {
    pub index: u32,
    pub length: f64,
    pub eigenvalue: f64,
}

impl TransverseMode {
    /// `sqrt(2/L) sin(n pi phi / L)`, normalised in `L^2(0, L)`.
    pub fn eigenfunction(&self, phi: f64) -> f64 {
        (2.0 / self.length).sqrt() * (self.index as f64 * PI * phi / self.length).sin()
    }
}

pub fn transverse_modes_interval(length: f64, index: i64) -> Result<TransverseMode> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::invalid(format!(
            "interval length must be positive, got {length}"
        )));
    }
    if index < 1 || index > u32::MAX as i64 {
        return Err(Error::invalid(format!(
            "mode index must be >= 1, got {index}"
        )));
    }
    let index = index as u32;
    let root = index as f64 * PI / length;
    Ok(TransverseMode {
        index,
        length,
        eigenvalue: root * root,
    })
}

/// Value of the separated solution `psi(point) * alpha(phi / eps)`.
pub fn assemble_product_solution(
    psi: Complex64,
    mode: &TransverseMode,
    eps: f64,
    phi: f64,
) -> Result<Complex64> {
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    let scaled = phi / eps;
    if !(0.0..=mode.length).contains(&scaled) {
        return Err(Error::Profile(ProfileError::OutOfRange(scaled)));
    }
    Ok(psi * mode.eigenfunction(scaled))
}
