use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{Outcome, Report, RunConfig};
use crate::error::{Error, Result};
use crate::exact::touchard_scaled;
use crate::saddle::{saddle_initial_guess, solve_saddle, SaddleGeometry};
use crate::series::{assemble, AssemblyMode};
use crate::stokes::{
    contributory_saddles, interval_index, mark_contributory, mu_boundary, stokes_crossing, trace_path, Branch,
    ContributorySet, Direction, PathPolyline, DEFAULT_MAX_LEN, DEFAULT_STEP,
};

fn done(report: Report, config: &RunConfig) -> Outcome {
    Outcome {
        output: report.render(config.output_format),
        failed: false,
    }
}

fn describe_set(set: &ContributorySet) -> String {
    let list: Vec<String> = set.indices.iter().map(|k| k.to_string()).collect();
    format!("[{}]", list.join(" "))
}

pub fn cmd_eval(config: &RunConfig) -> Result<Outcome> {
    let params = config.params()?;
    let st = config.style();
    let exact = touchard_scaled((params.n - 1) as usize, params.z()).value;
    let approx = assemble(&params, config.truncation, config.mode)?;
    let err = approx.value.relative_error(&exact);
    let mut r = Report::new(
        format!("T_{{n-1}}(z)/(n-1)!  n = {}, x = {}, theta/pi = {}", params.n, params.x, config.theta_over_pi),
        &["field", "value"],
    );
    let mut kv = |k: &str, v: String| r.push(vec![k.to_string(), v]);
    kv("mu", st.fixed(params.mu()));
    let (er, ei) = st.complex_parts(&exact);
    kv("exact_re", er);
    kv("exact_im", ei);
    let (ar, ai) = st.complex_parts(&approx.value);
    kv("asymptotic_re", ar);
    kv("asymptotic_im", ai);
    kv("relative_error", st.real(err));
    kv("truncation", config.truncation.to_string());
    kv(
        "mode",
        match config.mode {
            AssemblyMode::Reduced => "reduced",
            AssemblyMode::Full => "full",
        }
        .to_string(),
    );
    let used: Vec<String> = approx.series.iter().map(|j| j.saddle.k.to_string()).collect();
    kv("saddles_summed", format!("[{}]", used.join(" ")));
    match contributory_saddles(&params.geometry()) {
        Ok(set) => {
            kv("contributory", describe_set(&set));
            kv("contributory_count", set.len().to_string());
            kv("interval", set.interval.to_string());
            if let Some(s) = set.stokes {
                kv("stokes_theta_over_pi", st.fixed(s.theta / PI));
            }
            if set.near_boundary {
                kv("warning", "mu is within 1e-3 of an interval boundary".into());
            }
        }
        Err(e) => kv("contributory", format!("unavailable: {e}")),
    }
    Ok(done(r, config))
}

pub fn cmd_saddles(config: &RunConfig) -> Result<Outcome> {
    let geom = config.geometry()?;
    let st = config.style();
    let (lo, hi) = config.k_window.unwrap_or((-3, 3));
    let set = contributory_saddles(&geom).ok();
    let mut r = Report::new(
        format!("saddles  mu = {}, theta/pi = {}", geom.mu, config.theta_over_pi),
        &["k", "t_re", "t_im", "guess_re", "guess_im", "residual", "re_psi", "contributory"],
    );
    let mut failed = false;
    for k in lo..=hi {
        let guess = if (geom.on_positive_axis() && k == 0) || geom.has_real_negative_pair() && (k == 0 || k == 1) {
            None
        } else {
            Some(saddle_initial_guess(&geom, k))
        };
        let (gr, gi) = match guess {
            Some(g) => (st.real(g.re), st.real(g.im)),
            None => ("-".into(), "-".into()),
        };
        match solve_saddle(&geom, k) {
            Ok(mut s) => {
                if let Some(set) = &set {
                    mark_contributory(set, std::slice::from_mut(&mut s));
                }
                let flag = match s.contributory {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "unknown",
                };
                r.push(vec![
                    k.to_string(),
                    st.real(s.t.re),
                    st.real(s.t.im),
                    gr,
                    gi,
                    st.real(s.residual(&geom)),
                    st.real(s.psi.re),
                    flag.into(),
                ]);
            }
            Err(e) => {
                failed = true;
                r.push(vec![
                    k.to_string(),
                    "-".into(),
                    "-".into(),
                    gr,
                    gi,
                    "-".into(),
                    "-".into(),
                    format!("error: {e}"),
                ]);
            }
        }
    }
    if let Some(set) = &set {
        if set.near_coalescence {
            r.note("mu is close to 1/e at theta = pi; saddles t_0 and t_1 nearly coalesce");
        }
    }
    Ok(Outcome {
        output: r.render(config.output_format),
        failed,
    })
}

pub fn cmd_stokes(config: &RunConfig) -> Result<Outcome> {
    let st = config.style();
    if config.boundaries {
        let mut r = Report::new("interval boundaries", &["k", "mu_k"]);
        for k in 1..=8 {
            r.push(vec![k.to_string(), st.fixed(mu_boundary(k)?)]);
        }
        return Ok(done(r, config));
    }
    let mu = config.geometry()?.mu;
    let interval = interval_index(mu)?;
    let mut r = Report::new(
        format!("Stokes angle  mu = {mu}"),
        &["mu", "interval", "switching", "partner", "theta_s_over_pi", "connection_distance"],
    );
    match stokes_crossing(mu, None)? {
        Some(c) => r.push(vec![
            st.fixed(mu),
            interval.to_string(),
            c.pair.switching.to_string(),
            c.pair.partner.to_string(),
            st.fixed(c.theta / PI),
            st.real(c.connection_distance),
        ]),
        None => {
            return Err(Error::RootFinding(format!(
                "no verified Stokes crossing in [0, pi] for mu = {mu}"
            )));
        }
    }
    Ok(done(r, config))
}

#[derive(Debug, Serialize)]
struct ManifestEntry {
    file: String,
    k: i64,
    direction: &'static str,
    branch: &'static str,
    terminal: String,
    contributory: bool,
    points: usize,
    max_level_drift: String,
}

#[derive(Debug, Serialize)]
struct Manifest {
    mu: String,
    theta_over_pi: String,
    contributory: Vec<i64>,
    paths: Vec<ManifestEntry>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        context: path.display().to_string(),
        message: e.to_string(),
    }
}

fn write_polyline(path: &Path, poly: &PathPolyline, config: &RunConfig) -> Result<()> {
    let st = super::NumberStyle {
        digits: config.precision_digits.max(12),
        format: super::OutputFormat::Csv,
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    w.write_record(["re", "im", "re_psi", "im_psi"]).map_err(|e| io_err(path, e))?;
    for (t, v) in poly.points.iter().zip(&poly.psi_values) {
        w.write_record([st.real(t.re), st.real(t.im), st.real(v.re), st.real(v.im)])
            .map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn cmd_paths(config: &RunConfig) -> Result<Outcome> {
    let geom: SaddleGeometry = config.geometry()?;
    let dir = config
        .out_dir
        .clone()
        .ok_or_else(|| Error::InvalidParameter("--out-dir is required for paths".into()))?;
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let set = contributory_saddles(&geom)?;
    let (lo, hi) = config
        .k_window
        .unwrap_or((-set.k_lower - 1, set.k_upper + 1));
    let json = super::NumberStyle {
        digits: config.precision_digits,
        format: super::OutputFormat::Json,
    };
    let mut entries = Vec::new();
    let mut r = Report::new(
        format!("paths  mu = {}, theta/pi = {}", geom.mu, config.theta_over_pi),
        &["file", "k", "direction", "branch", "terminal", "contributory", "points"],
    );
    for k in lo..=hi {
        let saddle = solve_saddle(&geom, k)?;
        for direction in [Direction::Descent, Direction::Ascent] {
            for branch in [Branch::Plus, Branch::Minus] {
                let poly = trace_path(&saddle, &geom, direction, branch, DEFAULT_STEP, DEFAULT_MAX_LEN)?;
                let name = format!("k{k}_{}_{}.csv", direction.label(), branch.label());
                write_polyline(&dir.join(&name), &poly, config)?;
                let contributory = set.contains(k);
                r.push(vec![
                    name.clone(),
                    k.to_string(),
                    direction.label().into(),
                    branch.label().into(),
                    poly.terminal.label(),
                    contributory.to_string(),
                    poly.points.len().to_string(),
                ]);
                entries.push(ManifestEntry {
                    file: name,
                    k,
                    direction: direction.label(),
                    branch: branch.label(),
                    terminal: poly.terminal.label(),
                    contributory,
                    points: poly.points.len(),
                    max_level_drift: json.real(poly.max_level_drift()),
                });
            }
        }
    }
    let manifest = Manifest {
        mu: json.fixed(geom.mu),
        theta_over_pi: json.fixed(config.theta_over_pi),
        contributory: set.indices.clone(),
        paths: entries,
    };
    let path = dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| io_err(&path, e))?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    r.note(format!("manifest: {}", path.display()));
    Ok(done(r, config))
}
