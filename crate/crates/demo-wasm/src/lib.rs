//! Browser bindings for the interactive demo page in `www/`.
//!
//! Each export is a thin wrapper around a plain function that returns
//! `Result<_, String>`, so the logic is testable off the browser.

use obsclone::format::to_json;
use obsclone::jointmeas::{scan_t_machine, theta_grid, universal_clone};
use obsclone::linalg::QubitState;
use obsclone::machines::{
    cnot_machine, commuting_machine, one_param_machine, phase_covariant_machine, t_machine, verify,
    CloningMachine, DEFAULT_TOL,
};
use obsclone::pauli::Observable;
use wasm_bindgen::prelude::*;

fn state(s1: f64, s2: f64, s3: f64) -> Result<QubitState, String> {
    QubitState::new([s1, s2, s3]).map_err(|e| e.to_string())
}

fn machine(name: &str, theta: f64, obs: &str) -> Result<CloningMachine, String> {
    let observable = || -> Result<Observable, String> {
        let c: Vec<f64> = obs
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| format!("observable: {e}")))
            .collect::<Result<_, _>>()?;
        let c: [f64; 4] = c
            .try_into()
            .map_err(|_| "observable needs four coefficients a0,a1,a2,a3".to_string())?;
        Observable::new(c).map_err(|e| e.to_string())
    };
    match name {
        "cnot" => Ok(cnot_machine()),
        "one-param" => one_param_machine(&observable()?),
        "commuting" => commuting_machine(&observable()?, 1.0, 1.0),
        "t" => t_machine(theta),
        "phase-covariant" => phase_covariant_machine(theta),
        other => return Err(format!("unknown machine '{other}'")),
    }
    .map_err(|e| e.to_string())
}

/// Flattened `(θ, product, bound)` triples of the T machine over `steps`
/// angles in `[theta_min, theta_max]`; singular angles are left out.
pub fn uncertainty_curve(
    s: [f64; 3],
    theta_min: f64,
    theta_max: f64,
    steps: usize,
) -> Result<Vec<f64>, String> {
    let input = state(s[0], s[1], s[2])?;
    let thetas = theta_grid(theta_min, theta_max, steps.min(2000));
    Ok(scan_t_machine(&input, &thetas)
        .into_iter()
        .flatten()
        .flat_map(|r| [r.theta, r.product, r.lower_bound])
        .collect())
}

/// Bloch vectors of the input, signal clone, probe clone and universal clone,
/// concatenated (12 numbers).
pub fn clone_vectors(name: &str, theta: f64, s: [f64; 3]) -> Result<Vec<f64>, String> {
    let input = state(s[0], s[1], s[2])?;
    let m = machine(name, theta, "0,0,0,1")?;
    let [signal, probe] = m.clones(&input);
    Ok([input, signal, probe, universal_clone(&input)]
        .iter()
        .flat_map(|q| q.bloch())
        .collect())
}

/// Verification report of a named machine family as JSON.
pub fn verification_json(name: &str, theta: f64, obs: &str) -> Result<String, String> {
    let m = machine(name, theta, obs)?;
    to_json(&verify(&m, DEFAULT_TOL)).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn scan_uncertainty(
    s1: f64,
    s2: f64,
    s3: f64,
    theta_min: f64,
    theta_max: f64,
    steps: usize,
) -> Result<Vec<f64>, JsValue> {
    uncertainty_curve([s1, s2, s3], theta_min, theta_max, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn clone_bloch(machine: &str, theta: f64, s1: f64, s2: f64, s3: f64) -> Result<Vec<f64>, JsValue> {
    clone_vectors(machine, theta, [s1, s2, s3]).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn verify_family(machine: &str, theta: f64, obs: &str) -> Result<String, JsValue> {
    verification_json(machine, theta, obs).map_err(|e| JsValue::from_str(&e))
}
