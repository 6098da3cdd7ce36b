//! Numerical search for cloning machines over two-qubit unitaries.
//!
//! Unitaries are parameterised by twelve angles,
//! `U = (L ⊗ L') · U_E(t₁, t₂, t₃) · (W ⊗ I)`, with single-qubit factors given
//! in axis-angle form and the probe fixed to `|0⟩`. A probe-side factor before
//! the kernel would only change the probe preparation, which is why it is
//! absent. Approximate mode adds the two gains as free variables clamped to
//! `[1, 100]`.
//!
//! The search minimises the sum of squared generator defects (same zero set
//! as the max-defect, but smooth) from seeded random starts, and reports the
//! max-defect of the best point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classes::ObservableClass;
use crate::linalg::{kron2, sigma, ComplexMatrix, QubitState, C64};
use crate::machines::{entangling_kernel, generator_defects, CloningMachine};
use crate::simplex::{self, Options};

pub const GAIN_MIN: f64 = 1.0;
pub const GAIN_MAX: f64 = 100.0;

/// Minimum exact-cloning defect found by [`no_cloning_scan`] at grid density
/// 12 for the class spanned by σ₁ and σ₂. It agrees with `√2 − 1`, the
/// defect of the symmetric 1/√2-shrinking cloner.
pub const SIGMA_XY_FLOOR: f64 = 0.41421356237309626;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    Approximate,
}

impl std::str::FromStr for Mode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "approximate" | "approx" => Ok(Mode::Approximate),
            other => Err(crate::Error::Input(format!(
                "mode must be 'exact' or 'approximate', got '{other}'"
            ))),
        }
    }
}

/// A point of the 12-angle parameterisation, plus gains in approximate mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpacePoint {
    pub local_pre: [f64; 3],
    pub entangling: [f64; 3],
    pub local_post_1: [f64; 3],
    pub local_post_2: [f64; 3],
    pub gains: Option<[f64; 2]>,
}

impl SearchSpacePoint {
    pub fn identity() -> Self {
        Self {
            local_pre: [0.0; 3],
            entangling: [0.0; 3],
            local_post_1: [0.0; 3],
            local_post_2: [0.0; 3],
            gains: None,
        }
    }

    fn from_vec(v: &[f64], mode: Mode) -> Self {
        let take = |i: usize| [v[i], v[i + 1], v[i + 2]];
        Self {
            local_pre: take(0),
            entangling: take(3),
            local_post_1: take(6),
            local_post_2: take(9),
            gains: match mode {
                Mode::Exact => None,
                Mode::Approximate => Some([clamp_gain(v[12]), clamp_gain(v[13])]),
            },
        }
    }

    #[cfg(test)]
    fn to_vec(&self) -> Vec<f64> {
        let mut v: Vec<f64> = [self.local_pre, self.entangling, self.local_post_1, self.local_post_2]
            .concat();
        if let Some(g) = self.gains {
            v.extend_from_slice(&g);
        }
        v
    }

    /// `(L ⊗ L') · U_E · (W ⊗ I)`.
    pub fn unitary(&self) -> ComplexMatrix {
        let [t1, t2, t3] = self.entangling;
        kron2(&su2(&self.local_post_1), &su2(&self.local_post_2))
            * entangling_kernel(t1, t2, t3)
            * kron2(&su2(&self.local_pre), &sigma(0))
    }
}

fn clamp_gain(g: f64) -> f64 {
    g.clamp(GAIN_MIN, GAIN_MAX)
}

/// `exp(i v·σ) = cos|v| I + i sin|v| v̂·σ`.
pub fn su2(v: &[f64; 3]) -> ComplexMatrix {
    let angle = crate::linalg::norm3(v);
    if angle == 0.0 {
        return sigma(0);
    }
    let (s, c) = angle.sin_cos();
    let axis = (1..=3).fold(ComplexMatrix::zeros(2).expect("2x2"), |acc, k| {
        acc + sigma(k).scale_re(v[k - 1] / angle)
    });
    sigma(0).scale_re(c) + axis.scale(C64::new(0.0, s))
}

/// Max generator defect of the machine assembled from `p` with a `|0⟩` probe.
/// In approximate mode a point without gains is scored with unit gains.
pub fn cloning_defect(p: &SearchSpacePoint, class: &ObservableClass, mode: Mode) -> f64 {
    cloning_defect_with_probe(p, class, mode, &QubitState::zero())
}

/// [`cloning_defect`] with an arbitrary probe state.
pub fn cloning_defect_with_probe(
    p: &SearchSpacePoint,
    class: &ObservableClass,
    mode: Mode,
    probe: &QubitState,
) -> f64 {
    defects(p, class, mode, &probe.density())
        .iter()
        .flatten()
        .fold(0.0, |m: f64, d| m.max(*d))
}

fn defects(p: &SearchSpacePoint, class: &ObservableClass, mode: Mode, probe: &ComplexMatrix) -> Vec<[f64; 2]> {
    let gains = match mode {
        Mode::Exact => None,
        Mode::Approximate => Some(p.gains.unwrap_or([1.0, 1.0])),
    };
    generator_defects(&p.unitary(), probe, class.generators(), gains)
}

fn sum_squares(p: &SearchSpacePoint, class: &ObservableClass, mode: Mode, probe: &ComplexMatrix) -> f64 {
    defects(p, class, mode, probe)
        .iter()
        .flatten()
        .map(|d| d * d)
        .sum()
}

/// The machine encoded by `p`, with gains in approximate mode.
pub fn assemble_machine(p: &SearchSpacePoint, class: &ObservableClass, mode: Mode) -> CloningMachine {
    let gains = match mode {
        Mode::Exact => None,
        Mode::Approximate => Some(p.gains.unwrap_or([1.0, 1.0])),
    };
    CloningMachine::new(p.unitary(), QubitState::zero(), class.clone(), gains)
        .expect("parameterised unitaries are unitary")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub max_evals: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_evals: 20_000,
            seed: 0,
            tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_point: SearchSpacePoint,
    pub best_defect: f64,
    pub restarts: usize,
    pub evaluations: usize,
    pub seed: u64,
    pub converged: bool,
}

struct RestartOutcome {
    point: SearchSpacePoint,
    defect: f64,
    evals: usize,
}

fn run_restart(class: &ObservableClass, mode: Mode, config: &SearchConfig, index: usize) -> RestartOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let pi = std::f64::consts::PI;
    let mut x0: Vec<f64> = (0..12).map(|_| rng.gen_range(-pi..pi)).collect();
    if mode == Mode::Approximate {
        x0.push(rng.gen_range(1.0..3.0));
        x0.push(rng.gen_range(1.0..3.0));
    }
    let probe = QubitState::zero().density();
    // max-defect < tol is implied by a sum of squares below tol².
    let target = (0.01 * config.tol).powi(2);
    let min = simplex::minimize(
        |x| sum_squares(&SearchSpacePoint::from_vec(x, mode), class, mode, &probe),
        &x0,
        Options {
            max_evals: config.max_evals,
            step: 0.5,
            target,
        },
    );
    let point = SearchSpacePoint::from_vec(&min.x, mode);
    RestartOutcome {
        defect: cloning_defect(&point, class, mode),
        point,
        evals: min.evals,
    }
}

/// Seeded multi-start simplex search for a machine cloning `class`.
///
/// Restart `r` draws its start from stream `r` of a ChaCha generator keyed by
/// the seed, so results do not depend on scheduling and adding restarts never
/// worsens the best defect.
pub fn search_machine(class: &ObservableClass, mode: Mode, config: &SearchConfig) -> SearchResult {
    let restarts = config.restarts.max(1);
    let run = |r: usize| run_restart(class, mode, config, r);

    #[cfg(feature = "parallel")]
    let outcomes: Vec<RestartOutcome> = {
        use rayon::prelude::*;
        (0..restarts).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<RestartOutcome> = (0..restarts).map(run).collect();

    let evaluations = outcomes.iter().map(|o| o.evals).sum();
    let best = outcomes
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.defect.total_cmp(&b.defect).then(i.cmp(j)))
        .map(|(_, o)| o)
        .expect("at least one restart");
    SearchResult {
        converged: best.defect < config.tol,
        best_point: best.point,
        best_defect: best.defect,
        restarts,
        evaluations,
        seed: config.seed,
    }
}

const HALTON_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const REFINE_CELLS: usize = 8;

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Empirical floor of the exact-cloning defect for `class`.
///
/// Scores `grid_density⁴` points of a 12-dimensional Halton design over
/// `[−π, π)¹²` (densities below 8 are raised to 8), then refines the eight best
/// cells with simplex descent, first on the sum of squared defects and then on
/// the max-defect itself. The returned minimum is numerical evidence of a
/// positive floor, not a bound.
pub fn no_cloning_scan(class: &ObservableClass, grid_density: usize) -> f64 {
    let density = grid_density.max(8) as u64;
    let count = density.pow(4);
    let pi = std::f64::consts::PI;
    let probe = QubitState::zero().density();
    let point_at = |i: u64| -> Vec<f64> {
        HALTON_PRIMES
            .iter()
            .map(|&b| -pi + 2.0 * pi * radical_inverse(i + 1, b))
            .collect()
    };
    let score = |x: &[f64]| cloning_defect(&SearchSpacePoint::from_vec(x, Mode::Exact), class, Mode::Exact);

    let mut scored: Vec<(f64, u64)> = (0..count).map(|i| (score(&point_at(i)), i)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let refine = |start: Vec<f64>| -> f64 {
        let smooth = simplex::minimize(
            |x| sum_squares(&SearchSpacePoint::from_vec(x, Mode::Exact), class, Mode::Exact, &probe),
            &start,
            Options {
                max_evals: 40_000,
                step: 0.5,
                target: 1e-24,
            },
        );
        let sharp = simplex::minimize(
            score,
            &smooth.x,
            Options {
                max_evals: 40_000,
                step: 1e-3,
                target: 1e-12,
            },
        );
        sharp.f.min(score(&smooth.x))
    };

    let starts: Vec<Vec<f64>> = scored
        .iter()
        .take(REFINE_CELLS)
        .map(|&(_, i)| point_at(i))
        .collect();
    #[cfg(feature = "parallel")]
    let refined: Vec<f64> = {
        use rayon::prelude::*;
        starts.into_par_iter().map(refine).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let refined: Vec<f64> = starts.into_iter().map(refine).collect();

    refined.into_iter().fold(scored[0].0, f64::min)
}
