//! Exact reference evaluation of `T_n(z) = sum_k S(n,k) z^k`.
//!
//! Everything here is done in exact integer/rational arithmetic; the only
//! rounding happens when a result is turned into a [`LogComplex`].

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::logcomplex::LogComplex;

/// Triangular table of Stirling numbers of the second kind, `S(n,k)` for
/// `0 <= k <= n <= n_max`. Immutable once built.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    /// Builds rows `0..=n_max` with `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
    pub fn build(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![BigUint::one()]);
        for n in 1..=n_max {
            let prev = &rows[n - 1];
            let mut row = vec![BigUint::zero(); n + 1];
            for k in 1..=n {
                let mut v = prev.get(k - 1).cloned().unwrap_or_default();
                if k < n {
                    v += &prev[k] * BigUint::from(k);
                }
                row[k] = v;
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `S(n,k)`; zero outside the triangle.
    pub fn get(&self, n: usize, k: usize) -> BigUint {
        self.rows
            .get(n)
            .and_then(|r| r.get(k))
            .cloned()
            .unwrap_or_default()
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }
}

/// Complex number with exact rational parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplexRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactComplexRational { re, im }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        ExactComplexRational {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    /// `(re_num/re_den) + i (im_num/im_den)`.
    pub fn from_fractions(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        ExactComplexRational {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }

    /// Exact image of a double-precision complex number (every finite
    /// `f64` is a dyadic rational).
    pub fn from_c64(z: Complex64) -> Self {
        let conv = |v: f64| BigRational::from_float(v).expect("finite input");
        ExactComplexRational {
            re: conv(z.re),
            im: conv(z.im),
        }
    }

    pub fn conj(&self) -> Self {
        ExactComplexRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        ExactComplexRational {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        let part = |r: &BigRational| {
            let (m, e) = rational_split(r);
            crate::hp::ldexp(m, e)
        };
        Complex64::new(part(&self.re), part(&self.im))
    }

    /// Single rounding from the exact value into log form.
    pub fn to_log_complex(&self) -> LogComplex {
        LogComplex::from_binary_parts(rational_split(&self.re), rational_split(&self.im))
    }
}

/// `r = m * 2^e` with `|m|` in `[0.5, 1)`, correct to about one ulp.
pub fn rational_split(r: &BigRational) -> (f64, i64) {
    if r.is_zero() {
        return (0.0, 0);
    }
    let num = r.numer().abs();
    let den = r.denom();
    // 66 quotient bits: the truncating division and the f64 rounding stay
    // within one ulp together
    let shift = 66 + den.bits() as i64 - num.bits() as i64;
    let q = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    let qb = q.bits() as i64;
    let m = q.to_f64().unwrap_or(f64::NAN);
    let m = crate::hp::ldexp(m, -qb);
    let m = if r.is_negative() { -m } else { m };
    (m, qb - shift)
}

impl<'a> Add<&'a ExactComplexRational> for &'a ExactComplexRational {
    type Output = ExactComplexRational;
    fn add(self, o: &ExactComplexRational) -> ExactComplexRational {
        ExactComplexRational {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl<'a> Sub<&'a ExactComplexRational> for &'a ExactComplexRational {
    type Output = ExactComplexRational;
    fn sub(self, o: &ExactComplexRational) -> ExactComplexRational {
        ExactComplexRational {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl<'a> Mul<&'a ExactComplexRational> for &'a ExactComplexRational {
    type Output = ExactComplexRational;
    fn mul(self, o: &ExactComplexRational) -> ExactComplexRational {
        ExactComplexRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &ExactComplexRational {
    type Output = ExactComplexRational;
    fn neg(self) -> ExactComplexRational {
        ExactComplexRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

/// Which normalising factor has been divided out of a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleRemoved {
    None,
    FactorialN,
    GammaN,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub value: LogComplex,
    pub scale_removed: ScaleRemoved,
    /// The `n` the scale refers to.
    pub n: u32,
}

impl ScaledValue {
    /// Multiplies the removed factor back in (once).
    pub fn unscaled(&self) -> LogComplex {
        let ln_factor = match self.scale_removed {
            ScaleRemoved::None => 0.0,
            ScaleRemoved::FactorialN => ln_factorial(self.n),
            ScaleRemoved::GammaN => {
                if self.n == 0 {
                    f64::INFINITY
                } else {
                    ln_factorial(self.n - 1)
                }
            }
        };
        self.value.scale(ln_factor)
    }
}

pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Gaussian-integer numerator and the integer denominator `d^n` of
/// `T_n(z)`, with `z = (a + ib)/d`. Horner in exact integers.
fn touchard_numerator(
    table: &StirlingTable,
    n: usize,
    z: &ExactComplexRational,
) -> (BigInt, BigInt, BigInt) {
    let d: BigInt = z.re.denom().lcm(z.im.denom());
    let a = z.re.numer() * (&d / z.re.denom());
    let b = z.im.numer() * (&d / z.im.denom());
    let row = table.row(n);
    // acc = sum_k S(n,k) (a+ib)^k d^(n-k)
    let mut acc_re = BigInt::from(row[n].clone());
    let mut acc_im = BigInt::zero();
    let mut dpow = BigInt::one();
    for k in (0..n).rev() {
        let re = &acc_re * &a - &acc_im * &b;
        let im = &acc_re * &b + &acc_im * &a;
        dpow *= &d;
        acc_re = re + BigInt::from(row[k].clone()) * &dpow;
        acc_im = im;
    }
    (acc_re, acc_im, dpow)
}

fn touchard_with_table(table: &StirlingTable, n: usize, z: &ExactComplexRational) -> ExactComplexRational {
    let (re, im, den) = touchard_numerator(table, n, z);
    ExactComplexRational {
        re: BigRational::new(re, den.clone()),
        im: BigRational::new(im, den),
    }
}

/// `T_n(z)` exactly.
pub fn touchard_exact(n: usize, z: &ExactComplexRational) -> ExactComplexRational {
    let table = StirlingTable::build(n);
    touchard_with_table(&table, n, z)
}

/// `T_n(z)/n!` exactly.
pub fn touchard_scaled_exact(n: usize, z: &ExactComplexRational) -> ExactComplexRational {
    let table = StirlingTable::build(n);
    touchard_scaled_with_table(&table, n, z)
}

pub fn touchard_scaled_with_table(
    table: &StirlingTable,
    n: usize,
    z: &ExactComplexRational,
) -> ExactComplexRational {
    let (re, im, den) = touchard_numerator(table, n, z);
    let den = den * BigInt::from(factorial(n as u32));
    ExactComplexRational {
        re: BigRational::new(re, den.clone()),
        im: BigRational::new(im, den),
    }
}

/// `T_n(z)/n!` for a double-precision `z`, evaluated exactly at the
/// rational image of `z` and rounded once.
pub fn touchard_scaled(n: usize, z: Complex64) -> ScaledValue {
    let exact = touchard_scaled_exact(n, &ExactComplexRational::from_c64(z));
    ScaledValue {
        value: exact.to_log_complex(),
        scale_removed: ScaleRemoved::FactorialN,
        n: n as u32,
    }
}

/// Checks `T_{n+1}(z) = z sum_k C(n,k) T_k(z)` in exact arithmetic.
pub fn touchard_recurrence_check(n: usize, z: &ExactComplexRational) -> bool {
    let table = StirlingTable::build(n + 1);
    let lhs = touchard_with_table(&table, n + 1, z);
    let mut sum = ExactComplexRational::zero();
    let mut binom = BigInt::one();
    for k in 0..=n {
        let term = touchard_with_table(&table, k, z).scale(&BigRational::from_integer(binom.clone()));
        sum = &sum + &term;
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    lhs == z * &sum
}

/// `z^n` times the partial sum of the large-`|z|` expansion
/// `1 + n(n-1){1/(2z) + (3n-5)(n-2)/(24z^2) + (n-2)^2(n-3)^2/(48z^3)}`,
/// keeping `terms` of its four terms.
pub fn large_z_expansion(n: u32, z: Complex64, terms: usize) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::ZeroArgument);
    }
    if !(1..=4).contains(&terms) {
        return Err(Error::InvalidParameter(format!(
            "large-z expansion supports 1..=4 terms, got {terms}"
        )));
    }
    let nf = n as f64;
    let lead = nf * (nf - 1.0);
    let w = z.inv();
    let corrections = [
        w / 2.0,
        w * w * ((3.0 * nf - 5.0) * (nf - 2.0) / 24.0),
        w * w * w * ((nf - 2.0).powi(2) * (nf - 3.0).powi(2) / 48.0),
    ];
    let mut series = Complex64::new(0.0, 0.0);
    for c in corrections.iter().take(terms - 1) {
        series += c;
    }
    Ok(z.powu(n) * (Complex64::new(1.0, 0.0) + series * lead))
}
