//! WebAssembly bindings behind `www/index.html`.
//!
//! Each export is a thin wrapper over a plain function that returns
//! `Result<_, String>`, so the logic is testable without a browser.

use wasm_bindgen::prelude::*;

use crosswise::ci_asymptotic::{ap_interval, wp_interval};
use crosswise::ci_exact::{cp_interval, ConfidenceLevel, Method};
use crosswise::evaluation::{curve, PiGrid};
use crosswise::model::{mle, ModelConfig, ObservedCount};

/// Largest sample size the page accepts; curves tabulate every count.
pub const MAX_N: u64 = 100_000;

#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalView {
    pub lower: f64,
    pub upper: f64,
    pub lower_degenerate: bool,
    pub upper_degenerate: bool,
    pub estimate: f64,
}

#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct CurveView {
    pi: Vec<f64>,
    coverage: Vec<f64>,
    expected_length: Vec<f64>,
    length_prob: Vec<f64>,
    assured_length_prob: Vec<f64>,
}

#[wasm_bindgen]
impl CurveView {
    #[wasm_bindgen(getter)]
    pub fn pi(&self) -> Vec<f64> {
        self.pi.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn coverage(&self) -> Vec<f64> {
        self.coverage.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn expected_length(&self) -> Vec<f64> {
        self.expected_length.clone()
    }

    /// Empty unless a length bound was given.
    #[wasm_bindgen(getter)]
    pub fn length_prob(&self) -> Vec<f64> {
        self.length_prob.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn assured_length_prob(&self) -> Vec<f64> {
        self.assured_length_prob.clone()
    }
}

fn config(n: u64, q: f64) -> Result<ModelConfig, String> {
    if n > MAX_N {
        return Err(format!("n must be at most {MAX_N} in the browser"));
    }
    ModelConfig::new(n, q).map_err(|e| e.to_string())
}

fn level(delta: f64) -> Result<ConfidenceLevel, String> {
    ConfidenceLevel::new(delta).map_err(|e| e.to_string())
}

pub fn compute_interval(
    n: u64,
    z: u64,
    q: f64,
    delta: f64,
    method: &str,
) -> Result<IntervalView, String> {
    let config = config(n, q)?;
    let level = level(delta)?;
    let z = ObservedCount::new(z, &config).map_err(|e| e.to_string())?;
    let method: Method = method
        .parse()
        .map_err(|e: crosswise::Error| e.to_string())?;
    let ci = match method {
        Method::Cp => cp_interval(&config, z, &level),
        Method::Wp => wp_interval(&config, z, &level),
        Method::Ap => ap_interval(&config, z, &level),
    }
    .map_err(|e| e.to_string())?;
    Ok(IntervalView {
        lower: ci.lower,
        upper: ci.upper,
        lower_degenerate: ci.lower_degenerate,
        upper_degenerate: ci.upper_degenerate,
        estimate: mle(&config, z).get(),
    })
}

pub fn compute_curve(
    n: u64,
    q: f64,
    delta: f64,
    method: &str,
    grid: (f64, f64, f64),
    d: Option<f64>,
) -> Result<CurveView, String> {
    let config = config(n, q)?;
    let level = level(delta)?;
    let method: Method = method
        .parse()
        .map_err(|e: crosswise::Error| e.to_string())?;
    let grid = PiGrid::new(grid.0, grid.1, grid.2).map_err(|e| e.to_string())?;
    let cv = curve(&config, &level, method, &grid, d).map_err(|e| e.to_string())?;
    let column = |f: fn(&crosswise::evaluation::EvaluationPoint) -> Option<f64>| -> Vec<f64> {
        cv.grid.iter().filter_map(f).collect()
    };
    Ok(CurveView {
        pi: column(|p| Some(p.pi)),
        coverage: column(|p| Some(p.coverage)),
        expected_length: column(|p| Some(p.expected_covering_length)),
        length_prob: column(|p| p.length_prob),
        assured_length_prob: column(|p| p.assured_length_prob),
    })
}

#[wasm_bindgen]
pub fn interval(n: u32, z: u32, q: f64, delta: f64, method: &str) -> Result<IntervalView, JsError> {
    compute_interval(n.into(), z.into(), q, delta, method).map_err(|e| JsError::new(&e))
}

/// Coverage and expected covering length along `start:stop:step`.
#[wasm_bindgen]
pub fn coverage_curve(
    n: u32,
    q: f64,
    delta: f64,
    method: &str,
    start: f64,
    stop: f64,
    step: f64,
) -> Result<CurveView, JsError> {
    compute_curve(n.into(), q, delta, method, (start, stop, step), None)
        .map_err(|e| JsError::new(&e))
}

/// Probability that the exact interval is no longer than `d`, along `start:stop:step`.
#[wasm_bindgen]
pub fn length_curve(
    n: u32,
    q: f64,
    delta: f64,
    d: f64,
    start: f64,
    stop: f64,
    step: f64,
) -> Result<CurveView, JsError> {
    compute_curve(n.into(), q, delta, "cp", (start, stop, step), Some(d))
        .map_err(|e| JsError::new(&e))
}
