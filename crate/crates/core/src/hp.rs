//! Multiprecision complex arithmetic on top of `astro-float`.
//!
//! Used where double precision is provably not enough: the Bell-polynomial
//! coefficient sums cancel catastrophically for large `s`, and comparing an
//! optimally truncated series against the exact value needs the saddle and
//! the prefactor to ~25 digits.

use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_complex::Complex64;
use num_rational::BigRational;

use crate::logcomplex::LogComplex;

const RM: RoundingMode = RoundingMode::ToEven;

/// Precision in bits used for a given Bell row. About 1.2 decimal digits
/// are lost to cancellation per unit of `s`; this keeps > 60 good bits.
pub fn precision_for_order(s: usize) -> usize {
    128 + 10 * s
}

#[derive(Debug, Clone)]
pub struct HpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub prec: usize,
}

pub fn ldexp(x: f64, mut e: i64) -> f64 {
    let mut v = x;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

/// `x = m * 2^e` with `m` an `f64` in `[0.5, 1)` (or zero).
pub fn split_bigfloat(x: &BigFloat) -> (f64, i64) {
    if x.is_zero() {
        return (0.0, 0);
    }
    match x.as_raw_parts() {
        Some((words, _, sign, e, _)) => {
            let top = *words.last().unwrap_or(&0);
            let next = if words.len() > 1 { words[words.len() - 2] } else { 0 };
            let m = (top as f64 + next as f64 / 18446744073709551616.0) / 18446744073709551616.0;
            let m = if sign == Sign::Neg { -m } else { m };
            (m, e as i64)
        }
        None => (f64::NAN, 0),
    }
}

pub fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    let (m, e) = split_bigfloat(x);
    ldexp(m, e)
}

pub fn bigint_to_bigfloat(x: &BigInt, prec: usize) -> BigFloat {
    let (sign, _) = x.to_u64_digits();
    if sign == BigSign::NoSign {
        return BigFloat::from_f64(0.0, prec);
    }
    let bits = x.bits();
    let pad = (64 - bits % 64) % 64;
    let mag = x.magnitude() << pad;
    let words = mag.to_u64_digits();
    let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
    let v = BigFloat::from_words(&words, s, bits as i32);
    v.add(&BigFloat::from_f64(0.0, prec), prec, RM)
}

pub fn rational_to_bigfloat(x: &BigRational, prec: usize) -> BigFloat {
    let n = bigint_to_bigfloat(x.numer(), prec + 64);
    let d = bigint_to_bigfloat(x.denom(), prec + 64);
    n.div(&d, prec, RM)
}

impl HpComplex {
    pub fn zero(prec: usize) -> Self {
        Self::from_f64(0.0, 0.0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        HpComplex {
            re: BigFloat::from_f64(re, prec),
            im: BigFloat::from_f64(im, prec),
            prec,
        }
    }

    pub fn from_c64(z: Complex64, prec: usize) -> Self {
        Self::from_f64(z.re, z.im, prec)
    }

    pub fn from_parts(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        HpComplex { re, im, prec }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(bigfloat_to_f64(&self.re), bigfloat_to_f64(&self.im))
    }

    pub fn to_log_complex(&self) -> LogComplex {
        LogComplex::from_binary_parts(split_bigfloat(&self.re), split_bigfloat(&self.im))
    }

    pub fn conj(&self) -> Self {
        HpComplex {
            re: self.re.clone(),
            im: self.im.clone().neg(),
            prec: self.prec,
        }
    }

    pub fn scale_real(&self, r: &BigFloat) -> Self {
        HpComplex {
            re: self.re.mul(r, self.prec, RM),
            im: self.im.mul(r, self.prec, RM),
            prec: self.prec,
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn powi(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = HpComplex::one(self.prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }
}

/// Guard bits for intermediate products.
fn working_precision(p: usize) -> usize {
    p + 32
}

impl<'a> Add<&'a HpComplex> for &'a HpComplex {
    type Output = HpComplex;
    fn add(self, o: &HpComplex) -> HpComplex {
        let p = self.prec.max(o.prec);
        HpComplex {
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
            prec: p,
        }
    }
}

impl<'a> Sub<&'a HpComplex> for &'a HpComplex {
    type Output = HpComplex;
    fn sub(self, o: &HpComplex) -> HpComplex {
        let p = self.prec.max(o.prec);
        HpComplex {
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
            prec: p,
        }
    }
}

impl<'a> Mul<&'a HpComplex> for &'a HpComplex {
    type Output = HpComplex;
    fn mul(self, o: &HpComplex) -> HpComplex {
        let p = self.prec.max(o.prec);
        let w = working_precision(p);
        let re = self
            .re
            .mul(&o.re, w, RM)
            .sub(&self.im.mul(&o.im, w, RM), p, RM);
        let im = self
            .re
            .mul(&o.im, w, RM)
            .add(&self.im.mul(&o.re, w, RM), p, RM);
        HpComplex { re, im, prec: p }
    }
}

impl<'a> Div<&'a HpComplex> for &'a HpComplex {
    type Output = HpComplex;
    fn div(self, o: &HpComplex) -> HpComplex {
        let p = self.prec.max(o.prec);
        let w = working_precision(p);
        let den = o.re.mul(&o.re, w, RM).add(&o.im.mul(&o.im, w, RM), w, RM);
        let re = self
            .re
            .mul(&o.re, w, RM)
            .add(&self.im.mul(&o.im, w, RM), w, RM)
            .div(&den, p, RM);
        let im = self
            .im
            .mul(&o.re, w, RM)
            .sub(&self.re.mul(&o.im, w, RM), w, RM)
            .div(&den, p, RM);
        HpComplex { re, im, prec: p }
    }
}

impl Neg for &HpComplex {
    type Output = HpComplex;
    fn neg(self) -> HpComplex {
        HpComplex {
            re: self.re.clone().neg(),
            im: self.im.clone().neg(),
            prec: self.prec,
        }
    }
}

/// Transcendental functions need the constants cache, so they live on a
/// context object rather than on the values.
pub struct HpContext {
    pub prec: usize,
    cc: Consts,
}

impl std::fmt::Debug for HpContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HpContext").field("prec", &self.prec).finish()
    }
}

impl HpContext {
    pub fn new(prec: usize) -> Self {
        HpContext {
            prec,
            cc: Consts::new().expect("astro-float constants cache"),
        }
    }

    pub fn real(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.prec)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.prec, RM)
    }

    pub fn parse(&mut self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, self.prec, RM, &mut self.cc)
    }

    pub fn format(&mut self, x: &BigFloat) -> String {
        x.format(Radix::Dec, RM, &mut self.cc)
            .unwrap_or_else(|_| "NaN".into())
    }

    pub fn ln_real(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(self.prec, RM, &mut self.cc)
    }

    pub fn exp_real(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(self.prec, RM, &mut self.cc)
    }

    pub fn sqrt_real(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.prec, RM)
    }

    pub fn atan2(&mut self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        let p = self.prec;
        if x.is_zero() {
            let half_pi = self.pi().div(&BigFloat::from_f64(2.0, p), p, RM);
            return if y.is_negative() { half_pi.neg() } else { half_pi };
        }
        let base = y.div(x, p, RM).atan(p, RM, &mut self.cc);
        if x.is_positive() {
            base
        } else if y.is_negative() {
            base.sub(&self.pi(), p, RM)
        } else {
            base.add(&self.pi(), p, RM)
        }
    }

    pub fn exp(&mut self, z: &HpComplex) -> HpComplex {
        let p = self.prec;
        let r = self.exp_real(&z.re);
        let c = z.im.cos(p, RM, &mut self.cc);
        let s = z.im.sin(p, RM, &mut self.cc);
        HpComplex {
            re: r.mul(&c, p, RM),
            im: r.mul(&s, p, RM),
            prec: p,
        }
    }

    /// Principal logarithm, argument in `(-pi, pi]`.
    pub fn ln(&mut self, z: &HpComplex) -> HpComplex {
        let p = self.prec;
        let half = BigFloat::from_f64(0.5, p);
        let re = self.ln_real(&z.norm_sqr()).mul(&half, p, RM);
        let im = self.atan2(&z.im, &z.re);
        HpComplex { re, im, prec: p }
    }

    /// Principal square root.
    pub fn sqrt(&mut self, z: &HpComplex) -> HpComplex {
        let p = self.prec;
        let half = BigFloat::from_f64(0.5, p);
        let r = self.sqrt_real(&z.norm_sqr());
        let re = self.sqrt_real(&r.add(&z.re, p, RM).mul(&half, p, RM));
        let mut im = self.sqrt_real(&r.sub(&z.re, p, RM).mul(&half, p, RM));
        if z.im.is_negative() {
            im = im.neg();
        }
        HpComplex { re, im, prec: p }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Num;

    #[test]
    fn bigint_roundtrip_through_bigfloat() {
        let x = BigInt::from_str_radix("-123456789012345678901234567890123", 10).unwrap();
        let mut ctx = HpContext::new(256);
        let f = bigint_to_bigfloat(&x, 256);
        assert_eq!(ctx.format(&f), "-1.23456789012345678901234567890123e+32");
        assert!((bigfloat_to_f64(&f) / -1.2345678901234568e32 - 1.0).abs() < 1e-16);
    }

    #[test]
    fn complex_field_ops() {
        let a = HpComplex::from_f64(1.5, -2.0, 200);
        let b = HpComplex::from_f64(-0.25, 3.0, 200);
        let q = &(&a * &b) / &b;
        assert!((q.to_c64() - a.to_c64()).norm() < 1e-30);
        let p = a.powi(5).to_c64();
        let expect = Complex64::new(1.5, -2.0).powi(5);
        assert!((p - expect).norm() / expect.norm() < 1e-15);
    }

    #[test]
    fn transcendental_functions_match_f64() {
        let mut ctx = HpContext::new(192);
        let z = HpComplex::from_f64(-0.7, 2.3, 192);
        let zc = Complex64::new(-0.7, 2.3);
        assert!((ctx.ln(&z).to_c64() - zc.ln()).norm() < 1e-15);
        assert!((ctx.exp(&z).to_c64() - zc.exp()).norm() < 1e-15);
        assert!((ctx.sqrt(&z).to_c64() - zc.sqrt()).norm() < 1e-15);
        let neg = HpComplex::from_f64(-4.0, 0.0, 192);
        assert!((ctx.sqrt(&neg).to_c64() - Complex64::new(0.0, 2.0)).norm() < 1e-30);
        let w = HpComplex::from_f64(-1.0, -1e-30, 192);
        assert!(ctx.ln(&w).to_c64().im < -3.0);
    }

    #[test]
    fn precision_grows_with_order() {
        assert!(precision_for_order(30) > precision_for_order(2));
    }
}
