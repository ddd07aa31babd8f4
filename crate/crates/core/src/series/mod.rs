//! Steepest-descent series for each saddle and their assembly into the
//! large-`n` approximation of `T_{n-1}(z)/Gamma(n)`.
//!
//! `J_k ~ Gamma(n) e^{-z + n/t_k} / (sqrt(2 pi (1+t_k)) t_k^{n-1})
//!        sum_s c_{2s}(t_k) (1/2)_s / n^{s+1/2}`;
//! everything here has `Gamma(n)` removed.

pub mod coeffs;

use std::f64::consts::{E, PI};

use astro_float::{BigFloat, RoundingMode};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{touchard_scaled_exact, ExactComplexRational};
use crate::hp::{precision_for_order, rational_to_bigfloat, HpComplex, HpContext};
use crate::logcomplex::LogComplex;
use crate::saddle::{solve_saddle, ExpansionParams, SaddlePoint};
use crate::stokes::{contributory_saddles, ContributorySet, COALESCENCE_WINDOW};

pub use coeffs::{c2_c4_closed_form, wojdylo_coefficients, CoeffField};

/// Highest order the series routines accept.
pub const MAX_ORDER: usize = 40;

const DEGENERATE_RADIUS: f64 = 1e-3;

fn check_degenerate(t: Complex64) -> Result<()> {
    if (t + 1.0).norm() <= DEGENERATE_RADIUS {
        Err(Error::DegenerateSaddle { t })
    } else {
        Ok(())
    }
}

/// `psi(t) - psi(t_k) = sum_r a_r (t - t_k)^{r+2}`, truncated at `r_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalExpansion {
    pub saddle: SaddlePoint,
    pub a: Vec<Complex64>,
    pub r_max: usize,
}

pub fn local_expansion(saddle: &SaddlePoint, r_max: usize) -> Result<LocalExpansion> {
    check_degenerate(saddle.t)?;
    Ok(LocalExpansion {
        saddle: *saddle,
        a: coeffs::local_coefficients(&saddle.t, r_max),
        r_max,
    })
}

/// Bell table of a local expansion, `B_{kj}` for `k <= k_max`.
pub fn bell_table(local: &LocalExpansion, k_max: usize) -> Result<Vec<Vec<Complex64>>> {
    if local.r_max < k_max {
        return Err(Error::TruncationTooLarge {
            requested: k_max,
            available: local.r_max,
        });
    }
    Ok(coeffs::bell_table(&local.a, k_max))
}

/// `c_{2s}(t_k)`, evaluated by the Bell-polynomial formula in multiprecision
/// from the saddle location.
pub fn wojdylo_c2s(local: &LocalExpansion, s: usize) -> Result<Complex64> {
    if local.r_max < 2 * s {
        return Err(Error::TruncationTooLarge {
            requested: s,
            available: local.r_max / 2,
        });
    }
    if local.a[0].norm() < 1e-14 {
        return Err(Error::DegenerateSaddle { t: local.saddle.t });
    }
    Ok(wojdylo_coefficients(local.saddle.t, s)[s])
}

/// `(1/2)_s = Gamma(s + 1/2)/Gamma(1/2)`.
pub fn half_rising(s: usize) -> f64 {
    (0..s).fold(1.0, |acc, i| acc * (0.5 + i as f64))
}

/// Log of `e^{-z + n/t} / (sqrt(2 pi (1+t)) t^{n-1})`, principal square root.
pub fn jk_prefactor(t: Complex64, z: Complex64, n: u32) -> LogComplex {
    let w = -z + t.inv() * n as f64;
    let one_t = t + 1.0;
    let nm1 = (n - 1) as f64;
    let ln_abs = w.re - nm1 * t.norm().ln() - 0.5 * (2.0 * PI * one_t.norm()).ln();
    let arg = w.im - nm1 * t.arg() - 0.5 * one_t.arg();
    LogComplex::new(ln_abs, arg)
}

/// One saddle's truncated series.
#[derive(Debug, Clone, PartialEq)]
pub struct JkExpansion {
    pub saddle: SaddlePoint,
    /// `c_0, c_2, ..., c_{2S}`.
    pub c: Vec<Complex64>,
    /// `c_{2s} (1/2)_s / n^{s+1/2}`.
    pub terms: Vec<Complex64>,
    pub prefactor: LogComplex,
    pub truncation: usize,
    pub value: LogComplex,
}

impl JkExpansion {
    /// Value with terms `0..=s`.
    pub fn partial(&self, s: usize) -> LogComplex {
        let sum = self.terms[..=s.min(self.terms.len() - 1)]
            .iter()
            .fold(LogComplex::ZERO, |acc, &x| acc.add(&LogComplex::from(x)));
        self.prefactor * sum
    }
}

fn check_order(s: usize) -> Result<()> {
    if s > MAX_ORDER {
        Err(Error::TruncationTooLarge {
            requested: s,
            available: MAX_ORDER,
        })
    } else {
        Ok(())
    }
}

/// Series for saddle `t_k`, terms `0..=truncation`.
pub fn jk_series(saddle: &SaddlePoint, params: &ExpansionParams, truncation: usize) -> Result<JkExpansion> {
    check_degenerate(saddle.t)?;
    check_order(truncation)?;
    let n = params.n as f64;
    let c = wojdylo_coefficients(saddle.t, truncation);
    let terms: Vec<Complex64> = c
        .iter()
        .enumerate()
        .map(|(s, cs)| cs * (half_rising(s) / n.powf(s as f64 + 0.5)))
        .collect();
    let prefactor = jk_prefactor(saddle.t, params.z(), params.n);
    let mut out = JkExpansion {
        saddle: *saddle,
        c,
        terms,
        prefactor,
        truncation,
        value: LogComplex::ZERO,
    };
    out.value = out.partial(truncation);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssemblyMode {
    /// Dominant series only: `J_0` for `theta = 0`, `J_0 + J_1` inside
    /// `(0, pi)`, `2 Re J_0` or the real-saddle form at `theta = pi`.
    Reduced,
    /// Every saddle of the contributory set.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assembly {
    pub value: LogComplex,
    pub mode: AssemblyMode,
    /// Saddle series that were summed (before any `2 Re` folding).
    pub series: Vec<JkExpansion>,
    pub contributory: Option<ContributorySet>,
}

impl Assembly {
    pub fn series_for(&self, k: i64) -> Option<&JkExpansion> {
        self.series.iter().find(|j| j.saddle.k == k)
    }
}

fn twice_real(v: LogComplex) -> LogComplex {
    v.real_part().scale(2f64.ln())
}

/// Large-`n` approximation of `T_{n-1}(z)/Gamma(n)`.
pub fn assemble(params: &ExpansionParams, truncation: usize, mode: AssemblyMode) -> Result<Assembly> {
    let geom = params.geometry();
    let mu = geom.mu;
    if geom.on_negative_axis() && (mu - 1.0 / E).abs() < COALESCENCE_WINDOW {
        return Err(Error::Coalescence { mu });
    }
    let series_for = |k: i64| -> Result<JkExpansion> {
        let s = solve_saddle(&geom, k)?;
        jk_series(&s, params, truncation)
    };
    match mode {
        AssemblyMode::Reduced => {
            let j0 = series_for(0)?;
            let (value, series) = if geom.on_positive_axis() || geom.has_real_negative_pair() {
                (j0.value, vec![j0])
            } else if geom.on_negative_axis() {
                (twice_real(j0.value), vec![j0])
            } else {
                let j1 = series_for(1)?;
                (j0.value.add(&j1.value), vec![j0, j1])
            };
            Ok(Assembly {
                value,
                mode,
                series,
                contributory: None,
            })
        }
        AssemblyMode::Full => {
            let set = contributory_saddles(&geom)?;
            let mut series = Vec::new();
            let mut value = LogComplex::ZERO;
            if geom.on_positive_axis() {
                // J_0 + 2 Re sum_{k >= 1} J_k
                for &k in set.indices.iter().filter(|&&k| k >= 0) {
                    let j = series_for(k)?;
                    let v = if k == 0 { j.value } else { twice_real(j.value) };
                    value = value.add(&v);
                    series.push(j);
                }
            } else if geom.on_negative_axis() && !geom.has_real_negative_pair() {
                // pairs t_k, t_{1-k}: 2 Re sum_{k <= 0} J_k
                for &k in set.indices.iter().filter(|&&k| k <= 0) {
                    let j = series_for(k)?;
                    value = value.add(&twice_real(j.value));
                    series.push(j);
                }
            } else {
                for &k in &set.indices {
                    let j = series_for(k)?;
                    value = value.add(&j.value);
                    series.push(j);
                }
            }
            Ok(Assembly {
                value,
                mode,
                series,
                contributory: Some(set),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalTruncation {
    pub s_opt: usize,
    pub value: LogComplex,
    /// The smallest term sits at `s_max`: no interior minimum was found.
    pub at_limit: bool,
    pub series: JkExpansion,
}

/// Truncation at the smallest `|terms[s]|`, `0 <= s <= s_max`.
pub fn optimal_truncation(saddle: &SaddlePoint, params: &ExpansionParams, s_max: usize) -> Result<OptimalTruncation> {
    let series = jk_series(saddle, params, s_max)?;
    let s_opt = smallest_term_index(&series.terms);
    Ok(OptimalTruncation {
        s_opt,
        value: series.partial(s_opt),
        at_limit: s_opt == s_max && s_max > 0,
        series,
    })
}

/// Index of the smallest modulus; ties go to the lower index.
pub fn smallest_term_index(terms: &[Complex64]) -> usize {
    let mut best = 0;
    for (s, t) in terms.iter().enumerate() {
        if t.norm() < terms[best].norm() {
            best = s;
        }
    }
    best
}

/// First `s` with `|terms[s]| < |terms[s+1]|`, if any.
pub fn first_local_minimum(terms: &[Complex64]) -> Option<usize> {
    terms.windows(2).position(|w| w[0].norm() < w[1].norm())
}

/// Multiprecision version of a single saddle series, for comparisons
/// against the exact value below double-precision resolution.
#[derive(Debug, Clone)]
pub struct HpSeries {
    pub t: HpComplex,
    pub prefactor: HpComplex,
    pub terms: Vec<HpComplex>,
}

impl HpSeries {
    pub fn partial(&self, s: usize) -> HpComplex {
        let mut sum = HpComplex::zero(self.prefactor.prec);
        for term in &self.terms[..=s.min(self.terms.len() - 1)] {
            sum = &sum + term;
        }
        &self.prefactor * &sum
    }
}

const RM: RoundingMode = RoundingMode::ToEven;

fn hp_z(params: &ExpansionParams, ctx: &mut HpContext) -> HpComplex {
    let p = ctx.prec;
    let x = BigFloat::from_f64(params.x, p);
    if params.theta == 0.0 {
        HpComplex::from_parts(x, BigFloat::from_f64(0.0, p), p)
    } else if params.geometry().on_negative_axis() {
        HpComplex::from_parts(x.neg(), BigFloat::from_f64(0.0, p), p)
    } else {
        let th = BigFloat::from_f64(params.theta, p);
        let polar = ctx.exp(&HpComplex::from_parts(BigFloat::from_f64(0.0, p), th, p));
        polar.scale_real(&x)
    }
}

/// Newton on `t e^t = mu e^{-i theta}` (single-valued, so no branch
/// bookkeeping), started from the double-precision saddle.
fn refine_saddle(saddle: &SaddlePoint, params: &ExpansionParams, ctx: &mut HpContext) -> HpComplex {
    let p = ctx.prec;
    let n = BigFloat::from_f64(params.n as f64, p);
    let z = hp_z(params, ctx);
    // mu e^{-i theta} = n / z
    let n_c = HpComplex::from_parts(n, BigFloat::from_f64(0.0, p), p);
    let rhs = &n_c / &z;
    let one = HpComplex::one(p);
    let mut t = HpComplex::from_c64(saddle.t, p);
    let iterations = (p as f64 / 40.0).log2().ceil() as usize + 3;
    for _ in 0..iterations {
        let et = ctx.exp(&t);
        let f = &(&t * &et) - &rhs;
        let d = &et * &(&t + &one);
        t = &t - &(&f / &d);
    }
    t
}

/// `Gamma(n)`-scaled series of saddle `saddle` through order `s_max`, in
/// `prec` bits (raised if the coefficients need more).
pub fn jk_series_hp(saddle: &SaddlePoint, params: &ExpansionParams, s_max: usize, prec: usize) -> Result<HpSeries> {
    check_degenerate(saddle.t)?;
    check_order(s_max)?;
    let p = prec.max(precision_for_order(s_max));
    let mut ctx = HpContext::new(p);
    let t = refine_saddle(saddle, params, &mut ctx);
    let c = coeffs::wojdylo_coefficients_hp(&t, s_max);
    let n = params.n;
    let nf = BigFloat::from_f64(n as f64, p);
    let sqrt_n = ctx.sqrt_real(&nf);
    let mut terms = Vec::with_capacity(s_max + 1);
    // (1/2)_s / n^{s + 1/2}
    let mut w = BigFloat::from_f64(1.0, p).div(&sqrt_n, p, RM);
    for (s, cs) in c.iter().enumerate() {
        let cs = HpComplex::from_parts(cs.re.clone(), cs.im.clone(), p);
        terms.push(cs.scale_real(&w));
        let f = BigFloat::from_f64(0.5 + s as f64, p);
        w = w.mul(&f, p, RM).div(&nf, p, RM);
    }
    let z = hp_z(params, &mut ctx);
    let n_c = HpComplex::from_parts(nf.clone(), BigFloat::from_f64(0.0, p), p);
    let expo = &(&n_c / &t) - &z;
    let num = ctx.exp(&expo);
    let one = HpComplex::one(p);
    let two_pi = ctx.pi().mul(&BigFloat::from_f64(2.0, p), p, RM);
    let root = ctx.sqrt(&(&t + &one).scale_real(&two_pi));
    let den = &root * &t.powi((n - 1) as u64);
    Ok(HpSeries {
        t,
        prefactor: &num / &den,
        terms,
    })
}

/// `T_{n-1}(z)/(n-1)!` at the exact rational image of `z`, in `prec` bits.
pub fn exact_scaled_hp(params: &ExpansionParams, prec: usize) -> HpComplex {
    let z = ExactComplexRational::from_c64(params.z());
    let v = touchard_scaled_exact((params.n - 1) as usize, &z);
    HpComplex::from_parts(rational_to_bigfloat(&v.re, prec), rational_to_bigfloat(&v.im, prec), prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::touchard_scaled;
    use crate::saddle::SaddleGeometry;

    fn params(n: u32, x: f64, frac: f64) -> ExpansionParams {
        ExpansionParams::with_theta_over_pi(n, x, frac).unwrap()
    }

    #[test]
    fn local_expansion_shape() {
        let s = solve_saddle(&SaddleGeometry::new(4.0, 0.0).unwrap(), 0).unwrap();
        let l = local_expansion(&s, 0).unwrap();
        assert_eq!(l.a.len(), 1);
        assert!((l.a[0] - s.psi2 / 2.0).norm() < 1e-13);
        let l = local_expansion(&s, 1).unwrap();
        let t = s.t;
        assert!((l.a[1] - (t.inv() - 2.0 / (t * t * t)) / 6.0).norm() < 1e-14);
    }

    #[test]
    fn degenerate_saddle_is_rejected() {
        let g = SaddleGeometry::new(1.0 / E, PI).unwrap();
        let s = solve_saddle(&g, 0).unwrap();
        assert!(matches!(local_expansion(&s, 2), Err(Error::DegenerateSaddle { .. })));
    }

    #[test]
    fn coefficient_table_leading_rows() {
        let s = solve_saddle(&SaddleGeometry::new(4.0, 0.0).unwrap(), 0).unwrap();
        let l = local_expansion(&s, 20).unwrap();
        assert_eq!(wojdylo_c2s(&l, 0).unwrap(), Complex64::new(1.0, 0.0));
        let c2 = wojdylo_c2s(&l, 1).unwrap();
        // the printed table carries the opposite sign for odd s; the closed
        // form fixes the sign, the table the digits
        assert!((c2.re.abs() / 3.8686291792e-1 - 1.0).abs() < 5e-11);
        assert!(c2.re > 0.0);
        let (cc2, cc4) = c2_c4_closed_form(s.t);
        assert!((cc2 - c2).norm() < 1e-10 * c2.norm());
        assert!((cc4.re / 5.8050222467e-2 - 1.0).abs() < 5e-11);
    }

    #[test]
    fn table_five_corner() {
        let p = params(20, 2.0, 0.0);
        let a = assemble(&p, 2, AssemblyMode::Reduced).unwrap();
        let exact = touchard_scaled(19, p.z()).value;
        let err = a.value.relative_error(&exact);
        assert!((err / 1.713e-5 - 1.0).abs() < 0.05, "err = {err}");
        assert!(a.value.imag_part().is_zero() || a.value.imag_part().abs() < 1e-12 * a.value.abs());
    }

    #[test]
    fn subdominant_pair_at_mu_four() {
        let p = params(16, 4.0, 0.0);
        let s1 = solve_saddle(&p.geometry(), 1).unwrap();
        let j1 = jk_series(&s1, &p, 2).unwrap();
        let v = 2.0 * j1.value.to_complex().re;
        assert!((v / -1.344958e-13 - 1.0).abs() < 5e-7, "{v}");
    }

    #[test]
    fn coalescence_rejected() {
        let p = ExpansionParams::with_theta_over_pi(20, 20.0 / 0.37, 1.0).unwrap();
        assert!(matches!(assemble(&p, 2, AssemblyMode::Reduced), Err(Error::Coalescence { .. })));
    }

    #[test]
    fn full_mode_real_on_axes() {
        for frac in [0.0, 1.0] {
            let p = params(30, 3.0, frac);
            let a = assemble(&p, 2, AssemblyMode::Full).unwrap();
            let im = a.value.imag_part();
            assert!(im.is_zero() || im.abs() < 1e-12 * a.value.abs());
        }
    }

    #[test]
    fn truncation_limits() {
        let p = params(16, 4.0, 0.0);
        let s0 = solve_saddle(&p.geometry(), 0).unwrap();
        let o = optimal_truncation(&s0, &p, 0).unwrap();
        assert_eq!(o.s_opt, 0);
        assert!(!o.at_limit);
        assert!(jk_series(&s0, &p, MAX_ORDER + 1).is_err());
    }

    #[test]
    fn hp_series_agrees_with_double() {
        let p = params(16, 4.0, 0.0);
        let s0 = solve_saddle(&p.geometry(), 0).unwrap();
        let d = jk_series(&s0, &p, 5).unwrap();
        let h = jk_series_hp(&s0, &p, 5, 200).unwrap();
        let hv = h.partial(5).to_log_complex();
        assert!(hv.relative_error(&d.value) < 1e-13);
    }
}
