//! Printed reference values shipped with the crate (`data/reference.toml`).

use std::sync::OnceLock;

use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
pub struct SaddleRow {
    pub k: i64,
    pub solved: [f64; 2],
    pub approx: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
pub struct BoundaryRow {
    pub k: usize,
    pub mu: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct StokesRow {
    pub mu: f64,
    pub theta_over_pi: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AxisRow {
    pub n: u32,
    pub x: f64,
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PhaseRow {
    pub theta_over_pi: f64,
    pub exact: [f64; 2],
    pub approx: [f64; 2],
    pub ratio: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CoefficientRow {
    pub s: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct OptimalExample {
    pub n: u32,
    pub x: f64,
    pub s_max: usize,
    pub s_opt: usize,
    pub remainder: f64,
    pub subdominant: f64,
    pub t0: f64,
    pub t1: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
pub struct Reference {
    pub saddles: Vec<SaddleRow>,
    pub boundaries: Vec<BoundaryRow>,
    pub stokes: Vec<StokesRow>,
    pub positive_axis: Vec<AxisRow>,
    pub negative_axis: Vec<AxisRow>,
    pub phase_sweep: Vec<PhaseRow>,
    pub coefficients: Vec<CoefficientRow>,
    pub optimal: OptimalExample,
}

const SOURCE: &str = include_str!("../../data/reference.toml");

pub fn reference() -> &'static Reference {
    static DATA: OnceLock<Reference> = OnceLock::new();
    DATA.get_or_init(|| toml::from_str(SOURCE).expect("embedded reference data parses"))
}
