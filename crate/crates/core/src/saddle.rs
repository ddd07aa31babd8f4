//! Saddles of `psi(t) = e^{t + i theta}/mu - log t`, i.e. the roots of
//! `t e^t = mu e^{-i theta}`.
//!
//! Saddle `t_k` is the root of `t + Log t = log mu + (2 pi k - theta) i`
//! (principal log), so it lives in the strip
//! `(2k-1) pi - theta < Im t < (2k+1) pi - theta`.

use std::f64::consts::{E, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Saddle-level data: only `mu` and `theta` matter for the geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleGeometry {
    pub mu: f64,
    pub theta: f64,
}

impl SaddleGeometry {
    pub fn new(mu: f64, theta: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in [0, pi], got {theta}"
            )));
        }
        Ok(SaddleGeometry { mu, theta })
    }

    /// `theta = pi` up to rounding of `fraction * pi`.
    pub fn on_negative_axis(&self) -> bool {
        (self.theta - PI).abs() < 1e-13
    }

    pub fn on_positive_axis(&self) -> bool {
        self.theta == 0.0
    }

    /// `mu e^{-i theta}`.
    pub fn rhs(&self) -> Complex64 {
        Complex64::from_polar(self.mu, -self.theta)
    }

    /// `2 pi k - theta`.
    pub fn phase_target(&self, k: i64) -> f64 {
        TAU * k as f64 - self.theta
    }

    /// The two real saddles on the negative axis (`theta = pi`, `mu < 1/e`).
    pub fn has_real_negative_pair(&self) -> bool {
        self.on_negative_axis() && self.mu * E < 1.0
    }
}

/// One instance of the problem: `z = x e^{i theta}` and the order `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionParams {
    pub n: u32,
    pub x: f64,
    pub theta: f64,
}

impl ExpansionParams {
    pub fn new(n: u32, x: f64, theta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
        }
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::InvalidParameter(format!("x must be positive, got {x}")));
        }
        SaddleGeometry::new(1.0, theta)?;
        Ok(ExpansionParams { n, x, theta })
    }

    /// `theta = fraction * pi`, snapping the endpoints exactly.
    pub fn with_theta_over_pi(n: u32, x: f64, fraction: f64) -> Result<Self> {
        Self::new(n, x, theta_from_fraction(fraction))
    }

    pub fn mu(&self) -> f64 {
        self.n as f64 / self.x
    }

    pub fn geometry(&self) -> SaddleGeometry {
        SaddleGeometry {
            mu: self.mu(),
            theta: self.theta,
        }
    }

    /// `z = x e^{i theta}`, with the real axis hit exactly at the endpoints.
    pub fn z(&self) -> Complex64 {
        if self.theta == 0.0 {
            Complex64::new(self.x, 0.0)
        } else if self.geometry().on_negative_axis() {
            Complex64::new(-self.x, 0.0)
        } else {
            Complex64::from_polar(self.x, self.theta)
        }
    }
}

pub fn theta_from_fraction(fraction: f64) -> f64 {
    if fraction == 1.0 {
        PI
    } else {
        fraction * PI
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePoint {
    pub k: i64,
    pub t: Complex64,
    /// `psi(t_k)`, with the log on the branch fixed by `k`.
    pub psi: Complex64,
    /// `psi''(t_k) = (1 + t_k)/t_k^2`.
    pub psi2: Complex64,
    /// `arg t_k`; `-pi` or `pi` for a saddle sitting on the cut.
    pub omega: f64,
    pub contributory: Option<bool>,
    /// `|1 + t_k| < 0.05`: close to the double saddle at `t = -1`.
    pub near_coalescence: bool,
}

impl SaddlePoint {
    fn at(geom: &SaddleGeometry, k: i64, t: Complex64) -> Self {
        let phase = geom.phase_target(k);
        let omega = phase - t.im;
        // psi(t_k) = 1/t_k + t_k - log mu - (2 pi k - theta) i
        let psi = t.inv() + t - Complex64::new(geom.mu.ln(), phase);
        SaddlePoint {
            k,
            t,
            psi,
            psi2: (t + 1.0) / (t * t),
            omega,
            contributory: None,
            near_coalescence: (t + 1.0).norm() < 0.05,
        }
    }

    /// `|t e^t - mu e^{-i theta}|`.
    pub fn residual(&self, geom: &SaddleGeometry) -> f64 {
        (self.t * self.t.exp() - geom.rhs()).norm()
    }

    /// `|t_k|` and `arg t_k` form of `Re psi(t_k)`.
    pub fn re_psi_polar(&self, mu: f64) -> f64 {
        let r = self.t.norm();
        (1.0 / r + r) * self.omega.cos() - mu.ln()
    }
}

const HALLEY_MAX_ITER: usize = 60;

fn halley(y: f64, mut w: f64) -> f64 {
    let tol = 1e-15 * y.abs().max(1.0);
    for _ in 0..HALLEY_MAX_ITER {
        let ew = w.exp();
        let f = w * ew - y;
        if f.abs() <= tol {
            break;
        }
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(1.0) {
            break;
        }
    }
    w
}

/// Series about the branch point in `p = +-sqrt(2(1 + e y))`.
fn branch_series(p: f64) -> f64 {
    -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p.powi(3) - 43.0 / 540.0 * p.powi(4)
}

/// Principal real branch `W_0(y)`, `y >= -1/e`.
pub fn lambert_w0(y: f64) -> Result<f64> {
    let q = 1.0 + E * y;
    if q.is_nan() || q < -1e-15 || !y.is_finite() {
        return Err(Error::Domain {
            function: "lambert_w0",
            value: y,
        });
    }
    if q <= 0.0 {
        return Ok(-1.0);
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let p = (2.0 * q).sqrt();
    if q < 0.02 {
        let w = branch_series(p);
        return Ok(polish_near_branch(y, w));
    }
    let guess = if y < 3.0 {
        if q < 0.5 {
            branch_series(p)
        } else {
            y.ln_1p() * (1.0 - y.ln_1p() / (2.0 + y.ln_1p()))
        }
    } else {
        let l = y.ln();
        l - l.ln()
    };
    Ok(halley(y, guess))
}

/// Lower real branch `W_{-1}(y)`, `-1/e <= y < 0`.
pub fn lambert_wm1(y: f64) -> Result<f64> {
    let q = 1.0 + E * y;
    if q.is_nan() || q < -1e-15 || y.is_nan() || y >= 0.0 {
        return Err(Error::Domain {
            function: "lambert_wm1",
            value: y,
        });
    }
    if q <= 0.0 {
        return Ok(-1.0);
    }
    let p = -(2.0 * q).sqrt();
    if q < 0.02 {
        let w = branch_series(p);
        return Ok(polish_near_branch(y, w));
    }
    let guess = if q < 0.5 {
        branch_series(p)
    } else {
        let l = (-y).ln();
        l - (-l).ln()
    };
    Ok(halley(y, guess))
}

/// Halley steps that are kept only while they shrink the residual; the
/// iteration is badly conditioned right at the branch point.
fn polish_near_branch(y: f64, mut w: f64) -> f64 {
    let res = |w: f64| (w * w.exp() - y).abs();
    for _ in 0..8 {
        let cand = halley_step(y, w);
        if !(cand.is_finite() && res(cand) < res(w)) || (cand + 1.0).signum() != (w + 1.0).signum() {
            break;
        }
        w = cand;
    }
    w
}

fn halley_step(y: f64, w: f64) -> f64 {
    let ew = w.exp();
    let f = w * ew - y;
    let wp1 = w + 1.0;
    w - f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
}

/// `log mu - 1/2 log M + i(2 pi k - theta - arctan phi_k)` with
/// `M = (log mu)^2 + (2 pi k - theta)^2`, `phi_k = (2 pi k - theta)/log mu`.
pub fn saddle_initial_guess(geom: &SaddleGeometry, k: i64) -> Complex64 {
    let lm = geom.mu.ln();
    let phi = geom.phase_target(k);
    let m = lm * lm + phi * phi;
    let at = if lm == 0.0 {
        if phi > 0.0 {
            PI / 2.0
        } else if phi < 0.0 {
            -PI / 2.0
        } else {
            0.0
        }
    } else {
        (phi / lm).atan()
    };
    Complex64::new(lm - 0.5 * m.ln(), phi - at)
}

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_TOL: f64 = 1e-14;

/// Newton on `f(t) = t + Log t - log mu - (2 pi k - theta) i`.
fn newton(geom: &SaddleGeometry, k: i64, start: Complex64) -> std::result::Result<Complex64, Complex64> {
    let target = Complex64::new(geom.mu.ln(), geom.phase_target(k));
    let (lo, hi) = (target.im - PI, target.im + PI);
    let f = |t: Complex64| t + t.ln() - target;
    let scale = target.norm().max(1.0);
    let mut t = start;
    let mut ft = f(t);
    for _ in 0..NEWTON_MAX_ITER {
        if ft.norm() <= NEWTON_TOL * scale {
            return Ok(t);
        }
        let step = ft / (Complex64::new(1.0, 0.0) + t.inv());
        let mut lambda = 1.0;
        let mut next = t;
        let mut f_next = ft;
        // damped step: halve until the residual does not grow
        for _ in 0..30 {
            let mut cand = t - step * lambda;
            if cand.im <= lo || cand.im >= hi {
                // pull back into the strip
                cand.im = cand.im.clamp(lo + 1e-3 * PI, hi - 1e-3 * PI);
            }
            if cand.norm() == 0.0 {
                lambda *= 0.5;
                continue;
            }
            let fc = f(cand);
            if fc.norm().is_finite() && fc.norm() < ft.norm() {
                next = cand;
                f_next = fc;
                break;
            }
            lambda *= 0.5;
        }
        if next == t {
            // no progress possible at double precision
            if ft.norm() <= 1e3 * NEWTON_TOL * scale {
                return Ok(t);
            }
            return Err(t);
        }
        let moved = (next - t).norm();
        t = next;
        ft = f_next;
        if moved <= 4.0 * f64::EPSILON * t.norm().max(1.0) && ft.norm() <= 1e3 * NEWTON_TOL * scale {
            return Ok(t);
        }
    }
    if ft.norm() <= NEWTON_TOL * scale {
        Ok(t)
    } else {
        Err(t)
    }
}

/// Alternative starting points: asymptotic `L1 - log L1` and both signs of
/// the branch-point series `-1 +- p` in the complex `mu e^{-i theta}`.
fn fallback_guesses(geom: &SaddleGeometry, k: i64) -> Vec<Complex64> {
    let l1 = Complex64::new(geom.mu.ln(), geom.phase_target(k));
    let mut v = vec![l1 - l1.ln()];
    let q = Complex64::new(1.0, 0.0) + geom.rhs() * E;
    let p = (q * 2.0).sqrt();
    for s in [1.0, -1.0] {
        let pp = p * s;
        v.push(Complex64::new(-1.0, 0.0) + pp - pp * pp / 3.0);
    }
    let centre = geom.phase_target(k);
    for re in [-2.0, 0.0, 1.0] {
        for off in [-0.5, 0.0, 0.5] {
            v.push(Complex64::new(re, centre + off * PI));
        }
    }
    v
}

/// Saddle `t_k`. For `theta = 0`, `k = 0` this is `W_0(mu)`; for
/// `theta = pi`, `mu < 1/e`, `k = 0` is `W_0(-mu)` in `(-1, 0)` and `k = 1`
/// is `W_{-1}(-mu)`.
pub fn solve_saddle(geom: &SaddleGeometry, k: i64) -> Result<SaddlePoint> {
    SaddleGeometry::new(geom.mu, geom.theta)?;
    if geom.on_positive_axis() && k == 0 {
        let w = lambert_w0(geom.mu)?;
        return Ok(SaddlePoint::at(geom, 0, Complex64::new(w, 0.0)));
    }
    if geom.on_negative_axis() && (k == 0 || k == 1) {
        let q = 1.0 - geom.mu * E;
        if q >= 0.0 {
            let w = if k == 0 {
                lambert_w0(-geom.mu)?
            } else {
                lambert_wm1(-geom.mu)?
            };
            let g = SaddleGeometry { theta: PI, ..*geom };
            return Ok(SaddlePoint::at(&g, k, Complex64::new(w, 0.0)));
        }
    }
    let first = saddle_initial_guess(geom, k);
    let mut last = first;
    for guess in std::iter::once(first).chain(fallback_guesses(geom, k)) {
        match newton(geom, k, guess) {
            Ok(t) => return Ok(SaddlePoint::at(geom, k, t)),
            Err(t) => last = t,
        }
    }
    Err(Error::NoConvergence {
        k,
        iterations: NEWTON_MAX_ITER,
        last,
    })
}

pub fn saddle_family(geom: &SaddleGeometry, k_min: i64, k_max: i64) -> Result<Vec<SaddlePoint>> {
    if k_min > k_max {
        return Err(Error::InvalidParameter(format!(
            "empty saddle window [{k_min}, {k_max}]"
        )));
    }
    (k_min..=k_max).map(|k| solve_saddle(geom, k)).collect()
}
