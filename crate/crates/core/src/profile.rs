//! Fiber radius profiles `A(xi)` on the rescaled end coordinate `xi = s / eps`.
//!
//! A profile describes the cross-section radius near one edge end. On `[0, 1]`
//! it may deviate from the unit tube radius; beyond `xi = 1` it is identically
//! one. Every family returns the radius together with its first two
//! derivatives, which feed the effective potential.

use crate::error::ProfileError;

/// Radius and its first two derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValue {
    pub a: f64,
    pub da: f64,
    pub d2a: f64,
}

impl ProfileValue {
    pub const UNIT: ProfileValue = ProfileValue {
        a: 1.0,
        da: 0.0,
        d2a: 0.0,
    };
}

/// Parametric radius profile of one edge end.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeProfile {
    /// `A = 1`: a straight tube, zero potential.
    Flat,
    /// `A = 1 + a (xi (1 - xi))^p` with `p >= 3`.
    PolyBump { amplitude: f64, exponent: u32 },
    /// Natural cubic spline through sampled `(xi, A)` pairs.
    Table(TableProfile),
}

impl EdgeProfile {
    pub fn flat() -> Self {
        EdgeProfile::Flat
    }

    pub fn poly_bump(amplitude: f64, exponent: i64) -> Result<Self, ProfileError> {
        if !amplitude.is_finite() {
            return Err(ProfileError::NonFinite("amplitude"));
        }
        if exponent < 3 {
            return Err(ProfileError::Exponent(exponent));
        }
        let exponent = u32::try_from(exponent).map_err(|_| ProfileError::Exponent(exponent))?;
        // minimum of A is attained at xi = 1/2
        let min = 1.0 + amplitude * 0.25f64.powi(exponent as i32);
        if min <= 0.0 {
            return Err(ProfileError::NonPositive {
                xi: 0.5,
                value: min,
            });
        }
        Ok(EdgeProfile::PolyBump {
            amplitude,
            exponent,
        })
    }

    pub fn table(samples: Vec<(f64, f64)>) -> Result<Self, ProfileError> {
        TableProfile::new(samples).map(EdgeProfile::Table)
    }

    pub fn is_flat(&self) -> bool {
        match self {
            EdgeProfile::Flat => true,
            EdgeProfile::PolyBump { amplitude, .. } => *amplitude == 0.0,
            EdgeProfile::Table(t) => t.samples.iter().all(|&(_, a)| a == 1.0),
        }
    }

    /// Evaluates `(A, A', A'')` at `xi`, which must lie in `[0, 1]`.
    pub fn eval(&self, xi: f64) -> Result<ProfileValue, ProfileError> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(ProfileError::OutOfRange(xi));
        }
        Ok(self.eval_unchecked(xi))
    }

    /// Same as [`EdgeProfile::eval`] but returns the unit tube outside `[0, 1]`.
    pub(crate) fn eval_unchecked(&self, xi: f64) -> ProfileValue {
        if !(0.0..=1.0).contains(&xi) {
            return ProfileValue::UNIT;
        }
        match self {
            EdgeProfile::Flat => ProfileValue::UNIT,
            EdgeProfile::PolyBump {
                amplitude,
                exponent,
            } => poly_bump_eval(*amplitude, *exponent, xi),
            EdgeProfile::Table(t) => t.eval(xi),
        }
    }
}

/// Free-function form of [`EdgeProfile::eval`].
pub fn profile_eval(profile: &EdgeProfile, xi: f64) -> Result<ProfileValue, ProfileError> {
    profile.eval(xi)
}

fn poly_bump_eval(amplitude: f64, exponent: u32, xi: f64) -> ProfileValue {
    let p = exponent as i32;
    let w = xi * (1.0 - xi);
    let dw = 1.0 - 2.0 * xi;
    let pf = p as f64;
    // p >= 3, so every power below is nonnegative
    let wp2 = w.powi(p - 2);
    let wp1 = wp2 * w;
    let wp = wp1 * w;
    ProfileValue {
        a: 1.0 + amplitude * wp,
        da: amplitude * pf * wp1 * dw,
        d2a: amplitude * pf * ((pf - 1.0) * wp2 * dw * dw - 2.0 * wp1),
    }
}

/// Sampled profile interpolated by a natural cubic spline.
#[derive(Debug, Clone)]
pub struct TableProfile {
    samples: Vec<(f64, f64)>,
    // spline second derivatives at the knots
    moments: Vec<f64>,
}

impl PartialEq for TableProfile {
    fn eq(&self, other: &Self) -> bool {
        self.samples == other.samples
    }
}

/// Tolerance on `A(1) = 1` for sampled profiles.
const TABLE_END_TOL: f64 = 1e-12;

impl TableProfile {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self, ProfileError> {
        if samples.len() < 3 {
            return Err(ProfileError::Table("need at least 3 samples".into()));
        }
        if samples.iter().any(|&(x, a)| !x.is_finite() || !a.is_finite()) {
            return Err(ProfileError::NonFinite("table sample"));
        }
        if samples[0].0 != 0.0 || samples[samples.len() - 1].0 != 1.0 {
            return Err(ProfileError::Table("samples must span exactly [0, 1]".into()));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(ProfileError::Table(
                "sample abscissae must be strictly increasing".into(),
            ));
        }
        if let Some(&(xi, value)) = samples.iter().find(|&&(_, a)| a <= 0.0) {
            return Err(ProfileError::NonPositive { xi, value });
        }
        let end = samples[samples.len() - 1].1;
        if (end - 1.0).abs() > TABLE_END_TOL {
            return Err(ProfileError::Table(format!(
                "radius at xi = 1 must be 1, got {end}"
            )));
        }
        let moments = natural_spline_moments(&samples);
        let table = TableProfile { samples, moments };
        // the spline may undershoot between positive knots
        const CHECK_POINTS: usize = 2048;
        for i in 0..=CHECK_POINTS {
            let xi = i as f64 / CHECK_POINTS as f64;
            let v = table.eval(xi).a;
            if v <= 0.0 {
                return Err(ProfileError::NonPositive { xi, value: v });
            }
        }
        Ok(table)
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    fn eval(&self, xi: f64) -> ProfileValue {
        let n = self.samples.len();
        let i = match self
            .samples
            .binary_search_by(|probe| probe.0.partial_cmp(&xi).unwrap())
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let (x0, y0) = self.samples[i];
        let (x1, y1) = self.samples[i + 1];
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        let h = x1 - x0;
        let t0 = x1 - xi;
        let t1 = xi - x0;
        let a = (m0 * t0.powi(3) + m1 * t1.powi(3)) / (6.0 * h)
            + (y0 / h - m0 * h / 6.0) * t0
            + (y1 / h - m1 * h / 6.0) * t1;
        let da = (-m0 * t0 * t0 + m1 * t1 * t1) / (2.0 * h) - (y0 / h - m0 * h / 6.0)
            + (y1 / h - m1 * h / 6.0);
        let d2a = (m0 * t0 + m1 * t1) / h;
        ProfileValue { a, da, d2a }
    }
}

/// Second derivatives of the natural cubic spline through `pts`.
fn natural_spline_moments(pts: &[(f64, f64)]) -> Vec<f64> {
    let n = pts.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // tridiagonal system for interior moments (Thomas algorithm)
    let inner = n - 2;
    let mut diag = vec![0.0; inner];
    let mut upper = vec![0.0; inner];
    let mut rhs = vec![0.0; inner];
    for j in 0..inner {
        let i = j + 1;
        let h0 = pts[i].0 - pts[i - 1].0;
        let h1 = pts[i + 1].0 - pts[i].0;
        diag[j] = 2.0 * (h0 + h1);
        upper[j] = h1;
        rhs[j] = 6.0 * ((pts[i + 1].1 - pts[i].1) / h1 - (pts[i].1 - pts[i - 1].1) / h0);
    }
    for j in 1..inner {
        let lower = pts[j + 1].0 - pts[j].0;
        let w = lower / diag[j - 1];
        diag[j] -= w * upper[j - 1];
        rhs[j] -= w * rhs[j - 1];
    }
    m[inner] = rhs[inner - 1] / diag[inner - 1];
    for j in (0..inner - 1).rev() {
        m[j + 1] = (rhs[j] - upper[j] * m[j + 2]) / diag[j];
    }
    m
}
