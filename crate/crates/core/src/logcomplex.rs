//! Complex numbers held as `(ln|z|, arg z)`.
//!
//! The scaled Touchard values and the steepest-descent prefactors range
//! over many hundreds of decades once `Gamma(n)` and `t_k^{n-1}` are
//! involved, so magnitudes are carried as logarithms and only collapsed to
//! `f64` at the very end.

use std::f64::consts::{LN_10, PI, TAU};
use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    /// Natural log of the modulus; `-inf` encodes zero.
    pub ln_abs: f64,
    /// Argument, reduced to `(-pi, pi]`.
    pub arg: f64,
}

fn reduce_arg(a: f64) -> f64 {
    if !a.is_finite() {
        return a;
    }
    let r = (a + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        ln_abs: f64::NEG_INFINITY,
        arg: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        ln_abs: 0.0,
        arg: 0.0,
    };

    pub fn new(ln_abs: f64, arg: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex {
            ln_abs,
            arg: reduce_arg(arg),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        // hypot avoids overflow for components near f64::MAX
        LogComplex::new(z.re.hypot(z.im).ln(), z.im.atan2(z.re))
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    /// Builds `mr 2^er + i mi 2^ei` without forming either part, for
    /// parts that come out of big-integer or multiprecision arithmetic.
    pub fn from_binary_parts((mr, er): (f64, i64), (mi, ei): (f64, i64)) -> Self {
        if mr == 0.0 && mi == 0.0 {
            return Self::ZERO;
        }
        let e = if mr == 0.0 {
            ei
        } else if mi == 0.0 {
            er
        } else {
            er.max(ei)
        };
        let re = crate::hp::ldexp(mr, er - e);
        let im = crate::hp::ldexp(mi, ei - e);
        let base = LogComplex::from_complex(Complex64::new(re, im));
        LogComplex::new(base.ln_abs + e as f64 * std::f64::consts::LN_2, base.arg)
    }

    /// `exp(w)` without ever forming the (possibly overflowing) value.
    pub fn exp(w: Complex64) -> Self {
        LogComplex::new(w.re, w.im)
    }

    pub fn is_zero(&self) -> bool {
        self.ln_abs == f64::NEG_INFINITY
    }

    pub fn abs(&self) -> f64 {
        self.ln_abs.exp()
    }

    pub fn log10_abs(&self) -> f64 {
        self.ln_abs / LN_10
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.ln_abs.exp(), self.arg)
    }

    pub fn conj(&self) -> Self {
        LogComplex::new(self.ln_abs, -self.arg)
    }

    pub fn scale(&self, ln_factor: f64) -> Self {
        LogComplex::new(self.ln_abs + ln_factor, self.arg)
    }

    /// Sum of two values, rescaled by the larger modulus before adding.
    pub fn add(&self, other: &LogComplex) -> Self {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (big, small) = if self.ln_abs >= other.ln_abs {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = Complex64::from_polar((small.ln_abs - big.ln_abs).exp(), small.arg - big.arg);
        let w = Complex64::new(1.0, 0.0) + ratio;
        // below the rounding floor of the larger term
        if w.norm() <= 4.0 * f64::EPSILON {
            return Self::ZERO;
        }
        let lw = LogComplex::from_complex(w);
        LogComplex::new(big.ln_abs + lw.ln_abs, big.arg + lw.arg)
    }

    pub fn sub(&self, other: &LogComplex) -> Self {
        self.add(&-*other)
    }

    /// Real part, still in log form (phase 0 or pi).
    pub fn real_part(&self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        let c = self.arg.cos();
        if c == 0.0 {
            return Self::ZERO;
        }
        LogComplex::new(self.ln_abs + c.abs().ln(), if c < 0.0 { PI } else { 0.0 })
    }

    pub fn imag_part(&self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        let s = self.arg.sin();
        if s == 0.0 {
            return Self::ZERO;
        }
        LogComplex::new(self.ln_abs + s.abs().ln(), if s < 0.0 { PI } else { 0.0 })
    }

    /// `|self - reference| / |reference|`.
    pub fn relative_error(&self, reference: &LogComplex) -> f64 {
        let diff = self.sub(reference);
        if diff.is_zero() {
            return 0.0;
        }
        (diff.ln_abs - reference.ln_abs).exp()
    }

    /// Real and imaginary parts as `(mantissa, decimal exponent)` pairs;
    /// usable when the parts themselves would overflow an `f64`.
    pub fn parts_decimal(&self) -> ((f64, i64), (f64, i64)) {
        (
            decimal_split(self.ln_abs, self.arg.cos()),
            decimal_split(self.ln_abs, self.arg.sin()),
        )
    }
}

fn decimal_split(ln_abs: f64, factor: f64) -> (f64, i64) {
    if factor == 0.0 || ln_abs == f64::NEG_INFINITY {
        return (0.0, 0);
    }
    let l10 = ln_abs / LN_10 + factor.abs().log10();
    let mut e = l10.floor();
    let mut m = 10f64.powf(l10 - e);
    if m >= 10.0 {
        m /= 10.0;
        e += 1.0;
    }
    (m.copysign(factor), e as i64)
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.ln_abs + rhs.ln_abs, self.arg + rhs.arg)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.ln_abs - rhs.ln_abs, self.arg - rhs.arg)
    }
}

impl Neg for LogComplex {
    type Output = LogComplex;
    fn neg(self) -> LogComplex {
        if self.is_zero() {
            return self;
        }
        LogComplex::new(self.ln_abs, self.arg + PI)
    }
}

impl From<Complex64> for LogComplex {
    fn from(z: Complex64) -> Self {
        LogComplex::from_complex(z)
    }
}

impl fmt::Display for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_complex();
        if z.re.is_finite() && z.im.is_finite() {
            write!(f, "{:e}{:+e}i", z.re, z.im)
        } else {
            write!(f, "exp({:e}) * exp({:e}i)", self.ln_abs, self.arg)
        }
    }
}
