//! Carrier phases `e^{i k l / eps}` for long edges at small `eps`.
//!
//! `k l / eps` can be large; the product and quotient are formed in
//! double-double arithmetic and reduced modulo `2 pi` before the final
//! rounding, so the phase keeps full double precision.

use num_complex::Complex64;

// 2 pi as an unevaluated sum hi + lo
const TWO_PI_HI: f64 = std::f64::consts::TAU;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> DoubleDouble {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    DoubleDouble { hi: s, lo: err }
}

fn two_prod(a: f64, b: f64) -> DoubleDouble {
    let p = a * b;
    DoubleDouble {
        hi: p,
        lo: a.mul_add(b, -p),
    }
}

impl DoubleDouble {
    fn div(self, d: f64) -> DoubleDouble {
        let q1 = self.hi / d;
        let rem = (-q1).mul_add(d, self.hi) + self.lo;
        let q2 = rem / d;
        two_sum(q1, q2)
    }

    /// `self - n * 2 pi` for the integer `n` nearest `self / 2 pi`.
    fn reduce_two_pi(self) -> f64 {
        let n = (self.hi / TWO_PI_HI).round();
        let p = two_prod(n, TWO_PI_HI);
        let head = self.hi - p.hi;
        head + (self.lo - p.lo - n * TWO_PI_LO)
    }
}

/// `(k * l / eps) mod 2 pi`, in `[-pi, pi]` up to rounding.
pub fn reduced_phase(k: f64, l: f64, eps: f64) -> f64 {
    two_prod(k, l).div(eps).reduce_two_pi()
}

/// `e^{i k l / eps}`.
pub fn carrier(k: f64, l: f64, eps: f64) -> Complex64 {
    Complex64::from_polar(1.0, reduced_phase(k, l, eps))
}
