//! Joint measurement of σ₁ and σ₂ through an approximate cloner.
//!
//! Measuring `G₁` on the signal output and `G₂` on the probe output, then
//! rescaling each outcome by the branch gain, gives unbiased estimates of the
//! input means. The "measured" variance is the variance of that rescaled
//! outcome, `g² Tr[ρ_out X²] − (g Tr[ρ_out X])²`, which for unit Pauli-type `X`
//! is `g² − ⟨X⟩²`, i.e. `tan²θ + Δ_iσ₁` and `cot²θ + Δ_iσ₂` for the T machine.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::classes::ClassKind;
use crate::error::{Error, Result};
use crate::linalg::{Branch, QubitState};
use crate::machines::{t_machine, CloningMachine};
use crate::pauli::Observable;

/// Bloch-vector shrink factor of the optimal symmetric universal qubit cloner.
pub const UNIVERSAL_SHRINK: f64 = 2.0 / 3.0;

/// Uncertainty product reported in the literature for a joint σ₁/σ₂
/// measurement through the universal cloner. Recorded for comparison only;
/// the estimator convention used here gives 81/16 on σ₃ eigenstates.
pub const UNIVERSAL_PRODUCT_REFERENCE: f64 = 4.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub delta_i1: f64,
    pub delta_i2: f64,
    pub delta_m1: f64,
    pub delta_m2: f64,
    pub product: f64,
    pub lower_bound: f64,
    pub theta: f64,
    pub optimal_theta: f64,
}

impl UncertaintyReport {
    fn new(delta_i: [f64; 2], delta_m: [f64; 2], theta: f64) -> Self {
        Self {
            delta_i1: delta_i[0],
            delta_i2: delta_i[1],
            delta_m1: delta_m[0],
            delta_m2: delta_m[1],
            product: delta_m[0] * delta_m[1],
            lower_bound: product_lower_bound(delta_i[0], delta_i[1]),
            theta,
            optimal_theta: optimal_theta(delta_i[0], delta_i[1]),
        }
    }
}

/// `Tr[ρX²] − Tr[ρX]²`.
pub fn intrinsic_variance(state: &QubitState, x: &Observable) -> f64 {
    let xm = x.matrix();
    let mean = state.expectation(&xm);
    state.expectation(&(xm * xm)) - mean * mean
}

/// Variance of the gain-rescaled outcome of `x` on the given output qubit.
pub fn measured_variance(
    m: &CloningMachine,
    state: &QubitState,
    x: &Observable,
    branch: Branch,
) -> Result<f64> {
    let gains = m
        .gains()
        .ok_or_else(|| Error::Contract("measured variance needs machine gains".into()))?;
    let g = gains[branch.number() as usize - 1];
    let out = m.clones(state)[branch.number() as usize - 1];
    Ok(rescaled_variance(&out, x, g))
}

fn rescaled_variance(out: &QubitState, x: &Observable, gain: f64) -> f64 {
    let xm = x.matrix();
    let mean = gain * out.expectation(&xm);
    gain * gain * out.expectation(&(xm * xm)) - mean * mean
}

/// `(√(Δ_i1 Δ_i2) + 1)²`.
pub fn product_lower_bound(delta_i1: f64, delta_i2: f64) -> f64 {
    ((delta_i1 * delta_i2).max(0.0).sqrt() + 1.0).powi(2)
}

/// Angle with `tan⁴θ = Δ_i1 / Δ_i2`, where the product meets its bound.
pub fn optimal_theta(delta_i1: f64, delta_i2: f64) -> f64 {
    let (d1, d2) = (delta_i1.max(0.0), delta_i2.max(0.0));
    if d2 == 0.0 {
        return if d1 == 0.0 { FRAC_PI_2 / 2.0 } else { FRAC_PI_2 };
    }
    (d1 / d2).powf(0.25).atan()
}

/// Measured uncertainty product for `G₁` on the signal output and `G₂` on the
/// probe output of an approximate machine over a noncommuting class whose
/// generators are unit-norm and traceless.
pub fn uncertainty_product(m: &CloningMachine, state: &QubitState) -> Result<UncertaintyReport> {
    let class = m.class();
    if class.kind() != ClassKind::TwoParamNoncommuting {
        return Err(Error::Contract(format!(
            "uncertainty product needs a two-parameter noncommuting class, got {}",
            class.kind().as_str()
        )));
    }
    let gains = m
        .gains()
        .ok_or_else(|| Error::Contract("uncertainty product needs machine gains".into()))?;
    for g in class.generators() {
        if g.identity_part().abs() > 1e-12 || (g.axis_length() - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(
                "generators must be unit-norm traceless observables".into(),
            ));
        }
    }
    let gens = [class.generators()[0], class.generators()[1]];
    let clones = m.clones(state);
    let delta_i = gens.map(|g| intrinsic_variance(state, &g));
    let delta_m = [
        rescaled_variance(&clones[0], &gens[0], gains[0]),
        rescaled_variance(&clones[1], &gens[1], gains[1]),
    ];
    let theta = (1.0 / gains[1]).atan2(1.0 / gains[0]);
    Ok(UncertaintyReport::new(delta_i, delta_m, theta))
}

/// Single-clone marginal of the symmetric universal cloner.
pub fn universal_clone(state: &QubitState) -> QubitState {
    QubitState::new(state.bloch().map(|s| UNIVERSAL_SHRINK * s))
        .expect("shrinking keeps the state inside the ball")
}

/// Same product for a joint measurement through the symmetric universal
/// cloner: each clone carries the Bloch vector `(2/3)s`, outcomes are
/// rescaled by `3/2`.
pub fn universal_clone_product(state: &QubitState) -> UncertaintyReport {
    let shrunk = universal_clone(state);
    let gain = 1.0 / UNIVERSAL_SHRINK;
    let gens = [Observable::pauli(1), Observable::pauli(2)];
    let delta_i = gens.map(|g| intrinsic_variance(state, &g));
    let delta_m = gens.map(|g| rescaled_variance(&shrunk, &g, gain));
    UncertaintyReport::new(delta_i, delta_m, gain.atan2(gain))
}

/// Diagonal of the Bloch transfer matrix on one branch: how much each input
/// Bloch component survives on that output qubit.
pub fn bloch_shrink(m: &CloningMachine, branch: Branch) -> [f64; 3] {
    [1, 2, 3].map(|k| m.lift(&Observable::pauli(k), branch).coeffs()[k])
}

/// `steps` evenly spaced angles from `min` to `max` inclusive; one step
/// yields `[min]`.
pub fn theta_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![min],
        n => (0..n)
            .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// T-machine uncertainty reports over a θ grid, each tagged with its exact
/// grid angle. Singular angles yield `Err` entries so callers can report them
/// in place.
pub fn scan_t_machine(state: &QubitState, thetas: &[f64]) -> Vec<Result<UncertaintyReport>> {
    thetas
        .iter()
        .map(|&theta| {
            let mut r = uncertainty_product(&t_machine(theta)?, state)?;
            r.theta = theta;
            Ok(r)
        })
        .collect()
}
