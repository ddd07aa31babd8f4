use std::f64::consts::{E, PI};

use astro_float::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use touchard::exact::{
    factorial, touchard_exact, touchard_recurrence_check, touchard_scaled, ExactComplexRational, StirlingTable,
};
use touchard::hp::{bigfloat_to_f64, rational_to_bigfloat, HpComplex, HpContext};
use touchard::saddle::{solve_saddle, ExpansionParams, SaddleGeometry};
use touchard::series::{assemble, AssemblyMode};
use touchard::stokes::{contributory_saddles, mu_boundary};

fn rational_point() -> impl Strategy<Value = ExactComplexRational> {
    (-30i64..=30, 1i64..=12, -30i64..=30, 1i64..=12)
        .prop_map(|(a, b, c, d)| ExactComplexRational::from_fractions(a, b, c, d))
}

fn count(mu: f64, frac: f64) -> usize {
    let g = SaddleGeometry::new(mu, frac * PI).unwrap();
    contributory_saddles(&g).unwrap().len()
}

fn near_boundary(mu: f64) -> bool {
    (1..=8).any(|k| (mu - mu_boundary(k).unwrap()).abs() < 1e-3) || (mu - 1.0 / E).abs() < 1e-3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugate_symmetry(n in 0usize..=40, z in rational_point()) {
        prop_assert_eq!(touchard_exact(n, &z.conj()), touchard_exact(n, &z).conj());
    }

    #[test]
    fn binomial_recurrence(n in 0usize..=30, z in rational_point()) {
        prop_assert!(touchard_recurrence_check(n, &z));
    }

    #[test]
    fn reversed_row_form(n in 1usize..=25, z in rational_point()) {
        prop_assume!(!z.is_zero());
        // sum_k S(n,k) z^k = z^n sum_k S(n,n-k) z^{-k}
        let table = StirlingTable::build(n);
        let w = {
            let d = &z.re * &z.re + &z.im * &z.im;
            ExactComplexRational::new(&z.re / &d, -(&z.im / &d))
        };
        let mut sum = ExactComplexRational::zero();
        for k in 0..=n {
            let s = BigRational::from_integer(BigInt::from(table.get(n, n - k)));
            sum = &sum + &w.pow(k as u32).scale(&s);
        }
        prop_assert_eq!(touchard_exact(n, &z), &z.pow(n as u32) * &sum);
    }

    #[test]
    fn saddle_residuals(mu in 0.05f64..27.0, frac in 0.0f64..=1.0, k in -8i64..=8) {
        let g = SaddleGeometry::new(mu, frac * PI).unwrap();
        let s = solve_saddle(&g, k).unwrap();
        prop_assert!(s.residual(&g) <= 1e-12 * mu.max(1.0), "residual {}", s.residual(&g));
        let d = (s.t.exp() * Complex64::from_polar(1.0, g.theta)) / mu - s.t.inv();
        prop_assert!(d.norm() <= 1e-12 * s.t.norm().max(1.0));
        prop_assert!((s.psi2 - (1.0 + s.t) / (s.t * s.t)).norm() <= 1e-12 * s.psi2.norm());
    }

    #[test]
    fn contributory_parity(mu in 0.01f64..27.0, frac in 0.0f64..=1.0) {
        prop_assume!(!near_boundary(mu));
        let c0 = count(mu, 0.0);
        let cpi = count(mu, 1.0);
        prop_assert_eq!(c0 % 2, 1);
        if mu < 1.0 / E {
            prop_assert_eq!(cpi, 1);
        } else {
            prop_assert_eq!(cpi % 2, 0);
        }
        // one switching saddle per interval
        let cmid = count(mu, frac);
        prop_assert!((cmid as i64 - c0 as i64).abs() <= 1);
    }

    #[test]
    fn assembled_values_real_on_axes(n in 10u32..=60, x in 1.0f64..120.0, on_pi in any::<bool>()) {
        let frac = if on_pi { 1.0 } else { 0.0 };
        prop_assume!(!(on_pi && (n as f64 / x - 1.0 / E).abs() < 0.03));
        let p = ExpansionParams::with_theta_over_pi(n, x, frac).unwrap();
        for mode in [AssemblyMode::Reduced, AssemblyMode::Full] {
            let v = assemble(&p, 2, mode).unwrap().value;
            let im = v.imag_part();
            prop_assert!(im.is_zero() || im.abs() <= 1e-12 * v.abs());
        }
    }
}

#[test]
fn stirling_by_set_partitions() {
    // restricted growth strings of length 10 with maximum block index 4
    fn count(pos: usize, max: usize, len: usize, blocks: usize) -> u64 {
        if pos == len {
            return u64::from(max + 1 == blocks);
        }
        (0..=(max + 1).min(blocks - 1))
            .map(|b| count(pos + 1, max.max(b), len, blocks))
            .sum()
    }
    assert_eq!(count(1, 0, 10, 5), 42525);
    assert_eq!(StirlingTable::build(10).get(10, 5), BigUint::from(42525u32));
}

#[test]
fn dobinski_series() {
    let prec = 256;
    let mut ctx = HpContext::new(prec);
    for (num, den) in [(1i64, 2i64), (1, 1), (3, 1)] {
        let z = BigRational::new(num.into(), den.into());
        for n in 0..=15u32 {
            // e^{-z} sum_{k <= K} k^n z^k / k!
            let mut sum = BigRational::from_integer(0.into());
            let mut zk_over_fact = BigRational::from_integer(1.into());
            let mut k = 0u32;
            loop {
                let term = &zk_over_fact * BigRational::from_integer(BigInt::from(k).pow(n));
                sum += &term;
                k += 1;
                zk_over_fact = zk_over_fact * &z / BigRational::from_integer(k.into());
                let small = rational_to_bigfloat(&term, 64);
                if k > 2 * (n + 4) && bigfloat_to_f64(&small) < 1e-30 {
                    break;
                }
            }
            let zf = rational_to_bigfloat(&z, prec);
            let weight = ctx.exp_real(&zf.neg());
            let dobinski = bigfloat_to_f64(&rational_to_bigfloat(&sum, prec).mul(
                &weight,
                prec,
                astro_float::RoundingMode::ToEven,
            ));
            let zc = ExactComplexRational::new(z.clone(), BigRational::from_integer(0.into()));
            let exact = touchard_exact(n as usize, &zc).to_c64().re;
            assert!(
                ((dobinski - exact) / exact).abs() <= 1e-15,
                "n = {n}, z = {num}/{den}: {dobinski} vs {exact}"
            );
        }
    }
}

#[test]
fn scaled_value_matches_factorial_division() {
    for n in [5usize, 17, 40] {
        let z = Complex64::new(2.5, -1.25);
        let exact = touchard_exact(n, &ExactComplexRational::from_c64(z)).to_c64();
        let f = factorial(n as u32);
        let scaled = touchard_scaled(n, z).value.to_complex();
        let fl: f64 = f.to_string().parse().unwrap();
        assert!((scaled * fl - exact).norm() <= 1e-12 * exact.norm());
    }
}

#[test]
fn staircase_in_mu() {
    let b: Vec<f64> = (1..=8).map(|k| mu_boundary(k).unwrap()).collect();
    for (j, &mu_k) in b.iter().enumerate() {
        let k = j + 1;
        let below = mu_k - 0.01;
        let above = mu_k + 0.01;
        let d0 = count(above, 0.0) as i64 - count(below, 0.0) as i64;
        let dpi = count(above, 1.0) as i64 - count(below, 1.0) as i64;
        if k % 2 == 0 {
            assert_eq!((d0, dpi), (2, 0), "mu_{k}");
        } else {
            assert_eq!((d0, dpi), (0, 2), "mu_{k}");
        }
    }
    let mut prev = (0, 0);
    let mut mu = 1.0 / E + 0.05;
    while mu < 27.0 {
        if !near_boundary(mu) {
            let c = (count(mu, 0.0), count(mu, 1.0));
            assert!(c.0 >= prev.0 && c.1 >= prev.1, "mu = {mu}");
            prev = c;
        }
        mu += 0.25;
    }
}

#[test]
fn error_decreases_with_n() {
    let mut last = f64::INFINITY;
    for n in [20u32, 30, 50, 80, 100] {
        let p = ExpansionParams::new(n, 5.0, 0.0).unwrap();
        let exact = touchard_scaled((n - 1) as usize, p.z()).value;
        let err = assemble(&p, 2, AssemblyMode::Reduced).unwrap().value.relative_error(&exact);
        assert!(err < last, "n = {n}: {err} !< {last}");
        last = err;
    }
}

#[test]
fn phase_derivatives_by_central_differences() {
    let prec = 320;
    let mut ctx = HpContext::new(prec);
    let rm = astro_float::RoundingMode::ToEven;
    let h = BigFloat::from_f64(1e-5, prec);
    for (mu, frac, k) in [(2.0, 0.0, 1i64), (4.0, 0.0, 0), (4.0, 1.0, 2), (12.0, 0.4, -1), (0.3, 1.0, 0)] {
        let g = SaddleGeometry::new(mu, frac * PI).unwrap();
        let s = solve_saddle(&g, k).unwrap();
        let t0 = HpComplex::from_c64(s.t, prec);
        let rot = HpComplex::from_c64(Complex64::from_polar(1.0 / mu, g.theta), prec);
        // psi(t) = e^{t + i theta}/mu - log t
        let mut psi = |t: &HpComplex| &(&ctx.exp(t) * &rot) - &ctx.ln(t);
        for m in 2..=6u32 {
            let mut acc = HpComplex::zero(prec);
            let mut binom = 1.0f64;
            for j in 0..=m {
                let offset = h.mul(&BigFloat::from_f64(m as f64 / 2.0 - j as f64, prec), prec, rm);
                let t = &t0 + &HpComplex::from_parts(offset, BigFloat::from_f64(0.0, prec), prec);
                let w = if j % 2 == 0 { binom } else { -binom };
                acc = &acc + &psi(&t).scale_real(&BigFloat::from_f64(w, prec));
                binom = binom * (m - j) as f64 / (j + 1) as f64;
            }
            let mut hm = BigFloat::from_f64(1.0, prec);
            for _ in 0..m {
                hm = hm.mul(&h, prec, rm);
            }
            let inv = BigFloat::from_f64(1.0, prec).div(&hm, prec, rm);
            let fd = acc.scale_real(&inv).to_c64();
            let fact: f64 = (1..m).map(f64::from).product();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let closed = s.t.inv() + sign * fact / s.t.powu(m);
            assert!(
                (fd - closed).norm() <= 1e-7 * closed.norm().max(1.0),
                "m = {m}, t = {}: {fd} vs {closed}",
                s.t
            );
        }
    }
}
