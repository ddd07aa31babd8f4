//! Expansion coefficients `c_{2s}(t_k)`.
//!
//! The Bell-polynomial sums are generic over the scalar so the same code
//! runs in double precision (cheap checks) and in multiprecision (the
//! values actually used; the alternating sum loses about a digit per order).

use num_complex::Complex64;

use crate::hp::{precision_for_order, HpComplex};

/// Minimal field interface shared by `Complex64` and `HpComplex`.
pub trait CoeffField: Clone {
    /// A constant at the same precision as `self`.
    fn constant(&self, v: f64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_c64(&self) -> Complex64;
}

impl CoeffField for Complex64 {
    fn constant(&self, v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl CoeffField for HpComplex {
    fn constant(&self, v: f64) -> Self {
        HpComplex::from_f64(v, 0.0, self.prec)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_c64(&self) -> Complex64 {
        HpComplex::to_c64(self)
    }
}

/// `a_r = psi^{(r+2)}(t)/(r+2)!` for `r = 0..=r_max`, using
/// `psi^{(m)}(t_k) = 1/t_k + (-1)^m (m-1)!/t_k^m`, i.e.
/// `a_r = 1/(t (r+2)!) + (-1)^r / ((r+2) t^{r+2})`.
pub fn local_coefficients<F: CoeffField>(t: &F, r_max: usize) -> Vec<F> {
    let one = t.constant(1.0);
    let tinv = one.div(t);
    let mut inv_fact = one.constant(0.5); // 1/2!
    let mut tpow = tinv.mul(&tinv); // t^{-2}
    let mut out = Vec::with_capacity(r_max + 1);
    for r in 0..=r_max {
        let m = (r + 2) as f64;
        let first = tinv.mul(&inv_fact);
        let second = tpow.div(&one.constant(m));
        out.push(if r % 2 == 0 {
            first.add(&second)
        } else {
            first.sub(&second)
        });
        inv_fact = inv_fact.div(&one.constant(m + 1.0));
        tpow = tpow.mul(&tinv);
    }
    out
}

/// Partial ordinary Bell polynomials `B_{kj}(a_1, a_2, ...)` for
/// `0 <= j <= k <= k_max`; `a[0]` is not used.
pub fn bell_table<F: CoeffField>(a: &[F], k_max: usize) -> Vec<Vec<F>> {
    assert!(a.len() > k_max, "need a_1..a_{k_max}");
    let zero = a[0].constant(0.0);
    let mut b: Vec<Vec<F>> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut row = Vec::with_capacity(k + 1);
        row.push(if k == 0 { a[0].constant(1.0) } else { zero.clone() });
        for j in 1..=k {
            let mut acc = zero.clone();
            for r in 1..=(k + 1 - j) {
                acc = acc.add(&a[r].mul(&b[k - r][j - 1]));
            }
            row.push(acc);
        }
        b.push(row);
    }
    b
}

/// `c_{2s} = ((-1)^s / a_0^s) sum_{j=0}^{2s} (-1)^j (s+1/2)_j / (j! a_0^j) B_{2s,j}`.
pub fn wojdylo<F: CoeffField>(a0: &F, bell: &[Vec<F>], s: usize) -> F {
    let row = &bell[2 * s];
    let one = a0.constant(1.0);
    let a0_inv = one.div(a0);
    let mut weight = one.clone(); // (-1)^j (s+1/2)_j / (j! a_0^j)
    let mut sum = a0.constant(0.0);
    for (j, bj) in row.iter().enumerate().take(2 * s + 1) {
        sum = sum.add(&weight.mul(bj));
        let num = one.constant(s as f64 + 0.5 + j as f64);
        let den = one.constant((j + 1) as f64);
        weight = weight.mul(&num).div(&den).mul(&a0_inv).neg();
    }
    let mut pref = one;
    for _ in 0..s {
        pref = pref.mul(&a0_inv).neg();
    }
    pref.mul(&sum)
}

/// `c_0 ..= c_{2 s_max}` in a precision chosen for `s_max`.
pub fn wojdylo_coefficients_hp(t: &HpComplex, s_max: usize) -> Vec<HpComplex> {
    let prec = precision_for_order(s_max).max(t.prec);
    let t = HpComplex::from_parts(t.re.clone(), t.im.clone(), prec);
    let a = local_coefficients(&t, 2 * s_max.max(1));
    let bell = bell_table(&a, 2 * s_max);
    (0..=s_max).map(|s| wojdylo(&a[0], &bell, s)).collect()
}

/// Same, starting from a double-precision saddle taken as exact.
pub fn wojdylo_coefficients(t: Complex64, s_max: usize) -> Vec<Complex64> {
    let ht = HpComplex::from_c64(t, precision_for_order(s_max));
    wojdylo_coefficients_hp(&ht, s_max)
        .iter()
        .map(|c| c.to_c64())
        .collect()
}

/// `c_2 = -P_2(t)/(12 (1+t)^3)`, `c_4 = P_4(t)/(864 (1+t)^6)`.
pub fn c2_c4_closed_form(t: Complex64) -> (Complex64, Complex64) {
    let horner = |coef: &[f64]| coef.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c);
    let p2 = horner(&[2.0, -3.0, -20.0, -18.0, 2.0]);
    let p4 = horner(&[4.0, -156.0, -695.0, -696.0, 1092.0, 2916.0, 1972.0, -72.0, 4.0]);
    let u = t + 1.0;
    let u3 = u * u * u;
    (-p2 / (u3 * 12.0), p4 / (u3 * u3 * 864.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn bell_base_and_fourth_row() {
        let a: Vec<Complex64> = [0.0, 2.0, 3.0, 5.0, 7.0].iter().map(|&v| c(v)).collect();
        let b = bell_table(&a, 4);
        assert_eq!(b[0][0], c(1.0));
        for row in b.iter().skip(1) {
            assert_eq!(row[0], c(0.0));
        }
        let (a1, a2, a3, a4) = (2.0, 3.0, 5.0, 7.0);
        assert_eq!(b[4][1], c(a4));
        assert_eq!(b[4][2], c(a2 * a2 + 2.0 * a1 * a3));
        assert_eq!(b[4][3], c(3.0 * a1 * a1 * a2));
        assert_eq!(b[4][4], c(a1.powi(4)));
    }

    fn binom(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn bell_with_unit_arguments_is_binomial() {
        // coefficient of x^k in (x + x^2 + ...)^j, counted by brute force
        fn compositions(k: usize, j: usize) -> u64 {
            if j == 0 {
                return u64::from(k == 0);
            }
            (1..=k).map(|first| compositions(k - first, j - 1)).sum()
        }
        let a = vec![c(1.0); 12];
        let b = bell_table(&a, 11);
        for (k, row) in b.iter().enumerate().skip(1) {
            for (j, v) in row.iter().enumerate().skip(1) {
                assert_eq!(v.re, compositions(k, j) as f64);
                assert_eq!(v.re, binom(k as u64 - 1, j as u64 - 1));
            }
        }
    }

    #[test]
    fn local_coefficients_match_finite_differences() {
        let t = Complex64::new(1.2021679, 0.0);
        let mu = t.re * t.re.exp();
        let psi = |u: Complex64| u.exp() / mu - u.ln();
        let a = local_coefficients(&t, 1);
        assert!((a[0] - (t + 1.0) / (t * t) / 2.0).norm() < 1e-13);
        let h = 1e-3;
        let d3 = (psi(t + 2.0 * h) - psi(t - 2.0 * h) - 2.0 * (psi(t + h) - psi(t - h))) / (2.0 * h * h * h);
        assert!((d3 / 6.0 - a[1]).norm() < 1e-6);
        let closed = (t.inv() - 2.0 / (t * t * t)) / 6.0;
        assert!((closed - a[1]).norm() < 1e-15);
    }

    #[test]
    fn wojdylo_matches_closed_form_in_double_precision() {
        let t = Complex64::new(-0.83431, 4.53027);
        let a = local_coefficients(&t, 4);
        let b = bell_table(&a, 4);
        let (c2, c4) = c2_c4_closed_form(t);
        assert_eq!(wojdylo(&a[0], &b, 0), c(1.0));
        assert!((wojdylo(&a[0], &b, 1) - c2).norm() < 1e-12 * c2.norm());
        assert!((wojdylo(&a[0], &b, 2) - c4).norm() < 1e-10 * c4.norm());
    }

    #[test]
    fn multiprecision_route_agrees() {
        let t = Complex64::new(1.2021678731970429, 0.0);
        let cs = wojdylo_coefficients(t, 3);
        let (c2, c4) = c2_c4_closed_form(t);
        assert_eq!(cs[0], c(1.0));
        assert!((cs[1] - c2).norm() < 1e-14);
        assert!((cs[2] - c4).norm() < 1e-14);
    }
}
