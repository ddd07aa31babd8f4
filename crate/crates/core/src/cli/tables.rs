//! Regeneration of the reference tables, row by row, next to the printed
//! values in [`golden`](super::golden).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::golden::{reference, AxisRow, PhaseRow};
use super::{Outcome, Report, RunConfig};
use crate::error::{Error, Result};
use crate::exact::touchard_scaled;
use crate::logcomplex::LogComplex;
use crate::saddle::{lambert_w0, saddle_initial_guess, solve_saddle, ExpansionParams, SaddleGeometry};
use crate::series::{assemble, jk_series, wojdylo_coefficients, AssemblyMode};
use crate::stokes::{mu_boundary, stokes_angle};

/// Truncation used by every printed approximation table.
pub const TABLE_TRUNCATION: usize = 2;

/// Table ids accepted by `table --id`.
pub const TABLE_IDS: [u32; 7] = [1, 2, 4, 5, 6, 7, 8];

fn rel(computed: f64, printed: f64) -> f64 {
    if printed == 0.0 {
        computed.abs()
    } else {
        ((computed - printed) / printed).abs()
    }
}

/// Saddle row for `mu = 2`, `theta = 0`.
#[derive(Debug, Clone)]
pub struct SaddleCheck {
    pub k: i64,
    pub printed: Complex64,
    pub solved: Complex64,
    pub printed_guess: Complex64,
    pub guess: Complex64,
}

impl SaddleCheck {
    /// Largest componentwise deviation of the solved saddle.
    pub fn deviation(&self) -> f64 {
        (self.solved.re - self.printed.re)
            .abs()
            .max((self.solved.im - self.printed.im).abs())
    }

    pub fn guess_deviation(&self) -> f64 {
        (self.guess.re - self.printed_guess.re)
            .abs()
            .max((self.guess.im - self.printed_guess.im).abs())
    }
}

pub fn saddle_checks() -> Result<Vec<SaddleCheck>> {
    let geom = SaddleGeometry::new(2.0, 0.0)?;
    reference()
        .saddles
        .iter()
        .map(|row| {
            Ok(SaddleCheck {
                k: row.k,
                printed: Complex64::new(row.solved[0], row.solved[1]),
                solved: solve_saddle(&geom, row.k)?.t,
                printed_guess: Complex64::new(row.approx[0], row.approx[1]),
                guess: saddle_initial_guess(&geom, row.k),
            })
        })
        .collect()
}

/// `(k, printed mu_k, computed mu_k)`.
pub fn boundary_checks() -> Result<Vec<(usize, f64, f64)>> {
    reference()
        .boundaries
        .iter()
        .map(|row| Ok((row.k, row.mu, mu_boundary(row.k)?)))
        .collect()
}

/// `(mu, printed theta_s/pi, computed theta_s/pi)`.
pub fn stokes_checks() -> Result<Vec<(f64, f64, f64)>> {
    reference()
        .stokes
        .iter()
        .map(|row| {
            let theta = stokes_angle(row.mu, None)?.ok_or_else(|| {
                Error::RootFinding(format!("no Stokes crossing for mu = {}", row.mu))
            })?;
            Ok((row.mu, row.theta_over_pi, theta / PI))
        })
        .collect()
}

/// One real-axis cell: exact value and relative error at truncation 2.
#[derive(Debug, Clone)]
pub struct AxisCheck {
    pub row: AxisRow,
    pub exact: LogComplex,
    pub approx: LogComplex,
    pub error: f64,
}

impl AxisCheck {
    /// Relative deviation of the exact value from the printed one.
    pub fn value_deviation(&self) -> f64 {
        rel(self.exact.to_complex().re, self.row.value)
    }

    pub fn error_deviation(&self) -> f64 {
        rel(self.error, self.row.error)
    }
}

fn axis_check(row: &AxisRow, theta_over_pi: f64) -> Result<AxisCheck> {
    let params = ExpansionParams::with_theta_over_pi(row.n, row.x, theta_over_pi)?;
    let exact = touchard_scaled((row.n - 1) as usize, params.z()).value;
    let approx = assemble(&params, TABLE_TRUNCATION, AssemblyMode::Reduced)?.value;
    Ok(AxisCheck {
        row: row.clone(),
        exact,
        approx,
        error: approx.relative_error(&exact),
    })
}

pub fn positive_axis_checks() -> Result<Vec<AxisCheck>> {
    reference().positive_axis.iter().map(|r| axis_check(r, 0.0)).collect()
}

pub fn negative_axis_checks() -> Result<Vec<AxisCheck>> {
    reference().negative_axis.iter().map(|r| axis_check(r, 1.0)).collect()
}

/// One row of the phase sweep at `n = 50`, `|z| = 5`.
#[derive(Debug, Clone)]
pub struct PhaseCheck {
    pub row: PhaseRow,
    pub exact: Complex64,
    pub approx: Complex64,
    /// `|J_1 / J_0|` at truncation 2.
    pub ratio: f64,
}

impl PhaseCheck {
    fn part_dev(computed: f64, printed: f64, scale: f64) -> f64 {
        (computed - printed).abs() / scale
    }

    /// Largest deviation of either part, relative to the printed modulus.
    pub fn exact_deviation(&self) -> f64 {
        let scale = self.row.exact[0].hypot(self.row.exact[1]);
        Self::part_dev(self.exact.re, self.row.exact[0], scale)
            .max(Self::part_dev(self.exact.im, self.row.exact[1], scale))
    }

    pub fn approx_deviation(&self) -> f64 {
        let scale = self.row.approx[0].hypot(self.row.approx[1]);
        Self::part_dev(self.approx.re, self.row.approx[0], scale)
            .max(Self::part_dev(self.approx.im, self.row.approx[1], scale))
    }

    pub fn ratio_deviation(&self) -> f64 {
        rel(self.ratio, self.row.ratio)
    }
}

pub const PHASE_N: u32 = 50;
pub const PHASE_X: f64 = 5.0;

pub fn phase_checks() -> Result<Vec<PhaseCheck>> {
    reference()
        .phase_sweep
        .iter()
        .map(|row| {
            let params = ExpansionParams::with_theta_over_pi(PHASE_N, PHASE_X, row.theta_over_pi)?;
            let geom = params.geometry();
            let exact = touchard_scaled((PHASE_N - 1) as usize, params.z()).value;
            let approx = assemble(&params, TABLE_TRUNCATION, AssemblyMode::Reduced)?.value;
            let j0 = jk_series(&solve_saddle(&geom, 0)?, &params, TABLE_TRUNCATION)?.value;
            let j1 = jk_series(&solve_saddle(&geom, 1)?, &params, TABLE_TRUNCATION)?.value;
            Ok(PhaseCheck {
                row: row.clone(),
                exact: exact.to_complex(),
                approx: approx.to_complex(),
                ratio: (j1.ln_abs - j0.ln_abs).exp(),
            })
        })
        .collect()
}

/// `(s, printed c_{2s}, computed c_{2s})` at `t_0 = W(4)`.
pub fn coefficient_checks() -> Result<Vec<(usize, f64, f64)>> {
    let t0 = lambert_w0(4.0)?;
    let rows = &reference().coefficients;
    let s_max = rows.iter().map(|r| r.s).max().unwrap_or(0);
    let c = wojdylo_coefficients(Complex64::new(t0, 0.0), s_max);
    Ok(rows.iter().map(|r| (r.s, r.value, c[r.s].re)).collect())
}

pub fn cmd_table(config: &RunConfig) -> Result<Outcome> {
    let id = config
        .table_id
        .ok_or_else(|| Error::InvalidParameter(format!("--id is required, one of {TABLE_IDS:?}")))?;
    let st = config.style();
    let report = match id {
        1 => {
            let mut r = Report::new(
                "saddles t_k for mu = 2, theta = 0",
                &["k", "t_re", "t_im", "printed_re", "printed_im", "deviation", "guess_re", "guess_im", "guess_deviation"],
            );
            for c in saddle_checks()? {
                r.push(vec![
                    c.k.to_string(),
                    st.real(c.solved.re),
                    st.real(c.solved.im),
                    st.real(c.printed.re),
                    st.real(c.printed.im),
                    st.real(c.deviation()),
                    st.real(c.guess.re),
                    st.real(c.guess.im),
                    st.real(c.guess_deviation()),
                ]);
            }
            r
        }
        2 => {
            let mut r = Report::new("interval boundaries mu_k", &["k", "mu_k", "printed", "deviation"]);
            for (k, printed, computed) in boundary_checks()? {
                r.push(vec![
                    k.to_string(),
                    st.fixed(computed),
                    st.fixed(printed),
                    st.real(computed - printed),
                ]);
            }
            r
        }
        4 => {
            let mut r = Report::new("Stokes angles", &["mu", "theta_s_over_pi", "printed", "deviation"]);
            for (mu, printed, computed) in stokes_checks()? {
                r.push(vec![
                    st.fixed(mu),
                    st.fixed(computed),
                    st.fixed(printed),
                    st.real(computed - printed),
                ]);
            }
            r
        }
        5 | 6 => {
            let (title, checks) = if id == 5 {
                ("T_{n-1}(x)/(n-1)! and relative error at s = 2", positive_axis_checks()?)
            } else {
                ("T_{n-1}(-x)/(n-1)! and relative error at s = 2", negative_axis_checks()?)
            };
            let mut r = Report::new(
                title,
                &["n", "x", "exact", "printed", "value_deviation", "error", "printed_error", "error_deviation"],
            );
            for c in checks {
                r.push(vec![
                    c.row.n.to_string(),
                    st.fixed(c.row.x),
                    st.complex_parts(&c.exact).0,
                    st.real(c.row.value),
                    st.real(c.value_deviation()),
                    st.real(c.error),
                    st.real(c.row.error),
                    st.real(c.error_deviation()),
                ]);
            }
            r
        }
        7 => {
            let mut r = Report::new(
                "n = 50, z = 5 e^{i theta}: exact, approximation at s = 2, |J_1/J_0|",
                &[
                    "theta_over_pi",
                    "exact_re",
                    "exact_im",
                    "approx_re",
                    "approx_im",
                    "ratio",
                    "exact_deviation",
                    "approx_deviation",
                    "ratio_deviation",
                ],
            );
            for c in phase_checks()? {
                r.push(vec![
                    st.fixed(c.row.theta_over_pi),
                    st.real(c.exact.re),
                    st.real(c.exact.im),
                    st.real(c.approx.re),
                    st.real(c.approx.im),
                    st.real(c.ratio),
                    st.real(c.exact_deviation()),
                    st.real(c.approx_deviation()),
                    st.real(c.ratio_deviation()),
                ]);
            }
            r
        }
        8 => {
            let mut r = Report::new("c_{2s}(t_0), mu = 4", &["s", "c_2s", "printed", "relative_deviation"]);
            for (s, printed, computed) in coefficient_checks()? {
                r.push(vec![
                    s.to_string(),
                    st.real(computed),
                    st.real(printed),
                    st.real(rel(computed, printed)),
                ]);
            }
            r
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown table id {other}, expected one of {TABLE_IDS:?}"
            )));
        }
    };
    Ok(Outcome {
        output: report.render(config.output_format),
        failed: false,
    })
}
