//! Steepest-path topology: which saddles the loop contour can be deformed
//! onto, and where that set changes.

use std::f64::consts::{E, PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::saddle::{solve_saddle, SaddleGeometry, SaddlePoint};

/// `psi(t) = e^{t + i theta}/mu - Log t` on the principal sheet.
pub fn psi(t: Complex64, geom: &SaddleGeometry) -> Result<Complex64> {
    if t.norm() == 0.0 {
        return Err(Error::Domain {
            function: "psi",
            value: 0.0,
        });
    }
    Ok(psi_with_arg(t, geom, t.arg()))
}

/// `psi` with `Im log t` supplied by the caller (side of the cut, or a
/// continuously tracked argument).
pub fn psi_with_arg(t: Complex64, geom: &SaddleGeometry, arg: f64) -> Complex64 {
    let e = Complex64::from_polar(t.re.exp() / geom.mu, t.im + geom.theta);
    e - Complex64::new(t.norm().ln(), arg)
}

/// `psi'(t) = e^{t + i theta}/mu - 1/t`.
pub fn psi_prime(t: Complex64, geom: &SaddleGeometry) -> Complex64 {
    Complex64::from_polar(t.re.exp() / geom.mu, t.im + geom.theta) - t.inv()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Descent,
    Ascent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    LeftInfinity,
    /// Approaching `Im t = (2m+1) pi - theta` (descent) or
    /// `Im t = 2 m pi - theta` (ascent) as `Re t -> +inf`.
    RightStrip(i64),
    Origin,
    BranchCut,
    StepLimit,
}

impl Direction {
    pub fn label(&self) -> &'static str {
        match self {
            Direction::Descent => "descent",
            Direction::Ascent => "ascent",
        }
    }
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

impl Terminal {
    pub fn label(&self) -> String {
        match self {
            Terminal::LeftInfinity => "left_infinity".into(),
            Terminal::RightStrip(m) => format!("right_strip({m})"),
            Terminal::Origin => "origin".into(),
            Terminal::BranchCut => "branch_cut".into(),
            Terminal::StepLimit => "step_limit".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathPolyline {
    pub saddle_k: i64,
    pub direction: Direction,
    pub branch: Branch,
    pub points: Vec<Complex64>,
    /// `psi` at each point, on the sheet continued from the saddle.
    pub psi_values: Vec<Complex64>,
    /// The constant `Im psi` of the level set being followed.
    pub level: f64,
    pub terminal: Terminal,
}

impl PathPolyline {
    pub fn min_distance_to(&self, t: Complex64) -> f64 {
        self.points
            .iter()
            .map(|p| (p - t).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_level_drift(&self) -> f64 {
        self.psi_values
            .iter()
            .map(|v| (v.im - self.level).abs())
            .fold(0.0, f64::max)
    }
}

pub const LEFT_CUTOFF: f64 = 30.0;
const RIGHT_MARGIN: f64 = 4.0;
const ORIGIN_RADIUS: f64 = 1e-3;
const H_MIN: f64 = 1e-4;
const H_MAX: f64 = 0.1;
const DRIFT_TOL: f64 = 1e-8;

/// Continuously tracked `arg t`; leaving `[-pi, pi]` means the path has
/// crossed the cut.
fn unwrap_arg(prev: f64, t: Complex64) -> f64 {
    let a = t.arg();
    a + TAU * ((prev - a) / TAU).round()
}

/// Traces the steepest descent or ascent path leaving `saddle` on `branch`.
pub fn trace_path(
    saddle: &SaddlePoint,
    geom: &SaddleGeometry,
    direction: Direction,
    branch: Branch,
    step: f64,
    max_len: f64,
) -> Result<PathPolyline> {
    if (saddle.t + 1.0).norm() <= 1e-3 {
        return Err(Error::DegenerateSaddle { t: saddle.t });
    }
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidParameter(format!("step must be positive, got {step}")));
    }
    let base = match direction {
        Direction::Descent => (PI - saddle.psi2.arg()) / 2.0,
        Direction::Ascent => -saddle.psi2.arg() / 2.0,
    };
    let dir_arg = match branch {
        Branch::Plus => base,
        Branch::Minus => base + PI,
    };
    let u = Complex64::from_polar(1.0, dir_arg);
    let sign = match direction {
        Direction::Descent => -1.0,
        Direction::Ascent => 1.0,
    };
    let t0 = saddle.t;
    let on_cut = t0.im == 0.0 && t0.re < 0.0;
    // a saddle on the cut is seen from the side the branch leaves into
    let start_arg = if on_cut {
        if u.im >= 0.0 {
            PI
        } else {
            -PI
        }
    } else {
        t0.arg()
    };
    let level = psi_with_arg(t0, geom, start_arg).im;

    let field = |t: Complex64| -> Complex64 {
        let d = psi_prime(t, geom);
        let n = d.norm();
        if n == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            d.conj() / n * sign
        }
    };
    let project = |mut t: Complex64, arg_hint: f64| -> (Complex64, f64) {
        let mut a = arg_hint;
        for _ in 0..3 {
            a = unwrap_arg(a, t);
            let v = psi_with_arg(t, geom, a).im;
            let d = psi_prime(t, geom);
            let n2 = d.norm_sqr();
            if n2 == 0.0 {
                break;
            }
            t -= Complex64::new(0.0, v - level) * d.conj() / n2;
        }
        (t, unwrap_arg(a, t))
    };

    let mut t = t0 + u * step;
    let mut arg = if on_cut { start_arg } else { t0.arg() };
    arg = unwrap_arg(arg, t);
    let (tp, ap) = project(t, arg);
    t = tp;
    arg = ap;

    let mut points = vec![t0];
    let mut psi_values = vec![psi_with_arg(t0, geom, start_arg)];
    let mut re_last = psi_values[0].re;
    let right_edge = t0.re.max(0.0) + RIGHT_MARGIN;
    let left_radius = t0.norm() + LEFT_CUTOFF;
    let mut length = step;
    let mut h = step.clamp(H_MIN, H_MAX);

    let terminal = loop {
        let v = psi_with_arg(t, geom, arg);
        let monotone = match direction {
            Direction::Descent => v.re < re_last,
            Direction::Ascent => v.re > re_last,
        };
        if monotone {
            points.push(t);
            psi_values.push(v);
            re_last = v.re;
        }
        if arg.abs() > PI {
            break Terminal::BranchCut;
        }
        // far out on the left the level sets are rays of constant arg t
        if t.re < -LEFT_CUTOFF || (t.re < 0.0 && t.norm() > left_radius) {
            break Terminal::LeftInfinity;
        }
        if t.norm() < ORIGIN_RADIUS {
            break Terminal::Origin;
        }
        if t.re > right_edge {
            let m = match direction {
                Direction::Descent => ((t.im + geom.theta - PI) / TAU).round(),
                Direction::Ascent => ((t.im + geom.theta) / TAU).round(),
            };
            break Terminal::RightStrip(m as i64);
        }
        if length >= max_len {
            break Terminal::StepLimit;
        }
        // adaptive RK4 step, never more than half way to the pole at 0
        h = h.min(0.5 * t.norm()).max(H_MIN.min(0.5 * t.norm()));
        loop {
            let k1 = field(t);
            let k2 = field(t + k1 * (h / 2.0));
            let k3 = field(t + k2 * (h / 2.0));
            let k4 = field(t + k3 * h);
            let cand = t + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            let cand_arg = unwrap_arg(arg, cand);
            let drift = (psi_with_arg(cand, geom, cand_arg).im - level).abs();
            if drift > DRIFT_TOL && h > H_MIN && h > 0.5 * ORIGIN_RADIUS {
                h = (h / 2.0).max(H_MIN);
                continue;
            }
            let (pt, pa) = project(cand, cand_arg);
            t = pt;
            arg = pa;
            length += h;
            if drift <= DRIFT_TOL / 4.0 {
                h = (h * 1.5).min(H_MAX);
            }
            break;
        }
    };

    Ok(PathPolyline {
        saddle_k: saddle.k,
        direction,
        branch,
        points,
        psi_values,
        level,
        terminal,
    })
}

/// Default step and length used for verification shots.
pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_MAX_LEN: f64 = 200.0;

/// Closest approach of either descent branch from `from` to `to`.
pub fn connection_distance(from: &SaddlePoint, to: &SaddlePoint, geom: &SaddleGeometry) -> Result<f64> {
    let mut best = f64::INFINITY;
    for branch in [Branch::Plus, Branch::Minus] {
        let path = trace_path(from, geom, Direction::Descent, branch, DEFAULT_STEP, DEFAULT_MAX_LEN)?;
        best = best.min(path.min_distance_to(to.t));
    }
    Ok(best)
}

/// The saddle that appears or disappears inside interval `i`
/// (`mu_i < mu < mu_{i+1}`, `mu_0 = 0`), and the neighbour whose descent
/// path connects to it at the Stokes angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchingPair {
    pub switching: i64,
    pub partner: i64,
}

pub fn switching_pair(interval: usize) -> SwitchingPair {
    let j = (interval / 2) as i64;
    if interval.is_multiple_of(2) {
        SwitchingPair {
            switching: -(j + 1),
            partner: -j,
        }
    } else {
        SwitchingPair {
            switching: j + 2,
            partner: j + 1,
        }
    }
}

/// Contributory index ranges at `theta = 0` and `theta = pi` for interval `i`.
pub fn endpoint_ranges(interval: usize) -> ((i64, i64), (i64, i64)) {
    let j = (interval / 2) as i64;
    if interval.is_multiple_of(2) {
        ((-(j + 1), j + 1), (-j, j + 1))
    } else {
        ((-(j + 1), j + 1), (-(j + 1), j + 2))
    }
}

fn im_gap(geom: &SaddleGeometry, pair: SwitchingPair) -> Result<(f64, f64)> {
    let a = solve_saddle(geom, pair.partner)?;
    let b = solve_saddle(geom, pair.switching)?;
    Ok((a.psi.im - b.psi.im, a.psi.re - b.psi.re))
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut lo: f64, mut hi: f64, mut flo: f64, tol: f64) -> Result<f64> {
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesCrossing {
    pub theta: f64,
    pub pair: SwitchingPair,
    /// Closest approach of the partner's descent path to the switching saddle.
    pub connection_distance: f64,
}

const THETA_GRID: usize = 96;
pub const CONNECTION_TOL: f64 = 1e-2;

/// Stokes angle in `[0, pi]` for the given pair (default: the switching
/// pair of `mu`'s interval). `Ok(None)` when no verified root exists.
pub fn stokes_crossing(mu: f64, pair: Option<SwitchingPair>) -> Result<Option<StokesCrossing>> {
    SaddleGeometry::new(mu, 0.0)?;
    let pair = match pair {
        Some(p) => p,
        None => switching_pair(interval_index(mu)?),
    };
    let gap = |theta: f64| -> Result<(f64, f64)> { im_gap(&SaddleGeometry { mu, theta }, pair) };
    let thetas: Vec<f64> = (0..=THETA_GRID)
        .map(|i| if i == THETA_GRID { PI } else { PI * i as f64 / THETA_GRID as f64 })
        .collect();
    let mut prev: Option<(f64, f64)> = None;
    for &th in &thetas {
        let (g, _) = gap(th)?;
        if let Some((pth, pg)) = prev {
            let mut brackets = Vec::new();
            sign_changes(&|x| gap(x).map(|v| v.0), (pth, pg), (th, g), 0, &mut brackets)?;
            for (lo, glo, hi, ghi) in brackets {
                if gap(hi)?.1 <= 0.0 {
                    continue;
                }
                let root = if ghi == 0.0 {
                    hi
                } else {
                    bisect(|x| gap(x).map(|v| v.0), lo, hi, glo, 1e-14)?
                };
                let geom = SaddleGeometry { mu, theta: root };
                let a = solve_saddle(&geom, pair.partner)?;
                let b = solve_saddle(&geom, pair.switching)?;
                if (a.t + 1.0).norm() > 1e-3 {
                    let d = connection_distance(&a, &b, &geom)?;
                    if d <= CONNECTION_TOL {
                        return Ok(Some(StokesCrossing {
                            theta: root,
                            pair,
                            connection_distance: d,
                        }));
                    }
                }
            }
        }
        prev = Some((th, g));
    }
    Ok(None)
}

/// Sign changes of `f` on `[a, b]`, subdividing while the jump is large so
/// that steep crossings are kept and branch jumps of `Im psi` are dropped.
fn sign_changes<F: Fn(f64) -> Result<f64>>(
    f: &F,
    (a, fa): (f64, f64),
    (b, fb): (f64, f64),
    depth: usize,
    out: &mut Vec<(f64, f64, f64, f64)>,
) -> Result<()> {
    if (fb - fa).abs() < 1.0 {
        if fb == 0.0 || (fb > 0.0) != (fa > 0.0) {
            out.push((a, fa, b, fb));
        }
        return Ok(());
    }
    if depth >= 12 {
        return Ok(());
    }
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    sign_changes(f, (a, fa), (m, fm), depth + 1, out)?;
    sign_changes(f, (m, fm), (b, fb), depth + 1, out)
}

pub fn stokes_angle(mu: f64, pair: Option<SwitchingPair>) -> Result<Option<f64>> {
    Ok(stokes_crossing(mu, pair)?.map(|c| c.theta))
}

/// Boundary `mu_k` for any `k >= 1`: the `mu` at which the Stokes angle of
/// interval `k-1` reaches `pi` (odd `k`) or `0` (even `k`).
fn compute_boundary(k: usize, after: f64) -> Result<f64> {
    let pair = switching_pair(k - 1);
    let theta = if k % 2 == 1 { PI } else { 0.0 };
    let gap = |mu: f64| im_gap(&SaddleGeometry { mu, theta }, pair);
    let step = 0.02;
    let mut mu = after.max(1.0 / E + 0.05);
    let (mut pg, _) = gap(mu)?;
    while mu < 200.0 {
        let next = mu + step;
        let (g, _) = gap(next)?;
        let mut brackets = Vec::new();
        sign_changes(&|m| gap(m).map(|v| v.0), (mu, pg), (next, g), 0, &mut brackets)?;
        for (lo, glo, hi, ghi) in brackets {
            if gap(hi)?.1 > 0.0 {
                return if ghi == 0.0 {
                    Ok(hi)
                } else {
                    bisect(|m| gap(m).map(|v| v.0), lo, hi, glo, 1e-13)
                };
            }
        }
        mu = next;
        pg = g;
    }
    Err(Error::RootFinding(format!("no sign change for boundary {k}")))
}

const BOUNDARY_COUNT: usize = 12;

fn boundaries() -> &'static Result<Vec<f64>> {
    static CACHE: OnceLock<Result<Vec<f64>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut out: Vec<f64> = Vec::with_capacity(BOUNDARY_COUNT);
        for k in 1..=BOUNDARY_COUNT {
            let after = out.last().copied().unwrap_or(0.0);
            out.push(compute_boundary(k, after)?);
        }
        Ok(out)
    })
}

/// Interval boundary `mu_k`, `1 <= k <= 8`.
pub fn mu_boundary(k: usize) -> Result<f64> {
    if !(1..=8).contains(&k) {
        return Err(Error::InvalidParameter(format!("boundary index must be 1..=8, got {k}")));
    }
    boundary_any(k)
}

fn boundary_any(k: usize) -> Result<f64> {
    match boundaries() {
        Ok(v) => v
            .get(k - 1)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("boundary {k} beyond the computed range"))),
        Err(e) => Err(e.clone()),
    }
}

/// Index `i` with `mu_i < mu < mu_{i+1}`.
pub fn interval_index(mu: f64) -> Result<usize> {
    let b = match boundaries() {
        Ok(v) => v,
        Err(e) => return Err(e.clone()),
    };
    if mu >= *b.last().unwrap() {
        return Err(Error::InvalidParameter(format!(
            "mu = {mu} lies beyond the last computed boundary"
        )));
    }
    Ok(b.iter().take_while(|&&m| m <= mu).count())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContributorySet {
    pub geometry: SaddleGeometry,
    /// Contiguous range `-k_lower ..= k_upper`.
    pub indices: Vec<i64>,
    /// `K` in `[-K', K]`.
    pub k_upper: i64,
    /// `K'` in `[-K', K]`.
    pub k_lower: i64,
    pub interval: usize,
    pub stokes: Option<StokesCrossing>,
    /// `mu` within `1e-3` of an interval boundary.
    pub near_boundary: bool,
    /// `theta = pi` and `mu` near `1/e`: expansions are unreliable.
    pub near_coalescence: bool,
}

impl ContributorySet {
    pub fn contains(&self, k: i64) -> bool {
        k >= -self.k_lower && k <= self.k_upper
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

pub const COALESCENCE_WINDOW: f64 = 0.02;

pub fn contributory_saddles(geom: &SaddleGeometry) -> Result<ContributorySet> {
    let geom = SaddleGeometry::new(geom.mu, geom.theta)?;
    let mu = geom.mu;
    let interval = interval_index(mu)?;
    let near_boundary = (1..=BOUNDARY_COUNT)
        .filter_map(|k| boundary_any(k).ok())
        .any(|m| (mu - m).abs() < 1e-3);
    let near_coalescence = geom.on_negative_axis() && (mu - 1.0 / E).abs() < COALESCENCE_WINDOW;
    let (at_zero, at_pi) = endpoint_ranges(interval);
    let mut stokes = None;
    let (lo, hi) = if geom.has_real_negative_pair() {
        (0, 0)
    } else if geom.on_positive_axis() {
        at_zero
    } else if geom.on_negative_axis() {
        at_pi
    } else {
        stokes = stokes_crossing(mu, None)?;
        match stokes {
            Some(s) if geom.theta >= s.theta => at_pi,
            Some(_) => at_zero,
            None => {
                return Err(Error::RootFinding(format!("no Stokes angle found for mu = {mu}")));
            }
        }
    };
    Ok(ContributorySet {
        geometry: geom,
        indices: (lo..=hi).collect(),
        k_upper: hi,
        k_lower: -lo,
        interval,
        stokes,
        near_boundary,
        near_coalescence,
    })
}

/// Sets `contributory` on each saddle from `set`.
pub fn mark_contributory(set: &ContributorySet, saddles: &mut [SaddlePoint]) {
    for s in saddles {
        s.contributory = Some(set.contains(s.k));
    }
}
