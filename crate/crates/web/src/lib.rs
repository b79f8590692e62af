//! WebAssembly bindings for the static demo page in `www/`.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use qid_core::closedform::{pmax_discrimination, pmax_identification};
use qid_core::montecarlo::mc_mean_identification;
use qid_core::spectral::decompose_a;
use qid_core::symspace::CompressedSpace;

/// Largest compressed dimension the page will diagonalize.
pub const PAGE_MAX_DIM: usize = 5000;

#[derive(Debug, Serialize)]
pub struct Row {
    pub labels: String,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub weight: f64,
}

/// `p_identification` for `N = 1..=n_max`.
pub fn curve_values(d: usize, n_max: usize) -> Result<Vec<f64>, String> {
    (1..=n_max)
        .map(|n| pmax_identification(d, n).map_err(|e| e.to_string()))
        .collect()
}

/// Spectral blocks of `A` with each block's `(1 - |a|) m` contribution.
pub fn spectrum_rows(d: usize, n: usize) -> Result<Vec<Row>, String> {
    let space = CompressedSpace::new(d, n).map_err(|e| e.to_string())?;
    if space.dim() > PAGE_MAX_DIM {
        return Err(format!(
            "dimension {} is too large for the page (limit {PAGE_MAX_DIM})",
            space.dim()
        ));
    }
    let decomposition = decompose_a(&space).map_err(|e| e.to_string())?;
    Ok(decomposition
        .blocks()
        .iter()
        .map(|b| Row {
            labels: b.labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
            eigenvalue: b.eigenvalue,
            multiplicity: b.observed_multiplicity,
            weight: (1.0 - b.eigenvalue.abs()) * b.observed_multiplicity as f64,
        })
        .collect())
}

/// `[mean, stderr, closed form]`.
pub fn sample_values(d: usize, n: usize, samples: usize, seed: u64) -> Result<Vec<f64>, String> {
    let est = mc_mean_identification(d, n, samples, seed).map_err(|e| e.to_string())?;
    let target = pmax_identification(d, n).map_err(|e| e.to_string())?;
    Ok(vec![est.mean, est.stderr, target])
}

#[wasm_bindgen]
pub fn curve(d: usize, n_max: usize) -> Result<Vec<f64>, JsError> {
    curve_values(d, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn limit(d: usize) -> Result<f64, JsError> {
    pmax_discrimination(d).map_err(|e| JsError::new(&e.to_string()))
}

/// JSON array of `{labels, eigenvalue, multiplicity, weight}`.
#[wasm_bindgen]
pub fn spectrum(d: usize, n: usize) -> Result<String, JsError> {
    let rows = spectrum_rows(d, n).map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&rows).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn sample(d: usize, n: usize, samples: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    sample_values(d, n, samples, seed).map_err(|e| JsError::new(&e))
}
