//! Qubit observables in the Pauli basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm3, sigma, ComplexMatrix, C64};

/// Default tolerance for commutation checks.
pub const COMMUTE_TOL: f64 = 1e-10;

/// A Hermitian 2×2 operator `a₀σ₀ + a₁σ₁ + a₂σ₂ + a₃σ₃`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Observable {
    coeffs: [f64; 4],
}

impl Observable {
    pub fn new(coeffs: [f64; 4]) -> Result<Self> {
        if coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::Input("observable coefficients must be finite".into()));
        }
        Ok(Self { coeffs })
    }

    /// The Pauli matrix σ_k as an observable.
    pub fn pauli(k: usize) -> Self {
        assert!(k < 4, "Pauli index must be 0..=3");
        let mut coeffs = [0.0; 4];
        coeffs[k] = 1.0;
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: [0.0; 4] }
    }

    pub fn coeffs(&self) -> [f64; 4] {
        self.coeffs
    }

    pub fn identity_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Bloch part `(a₁, a₂, a₃)`.
    pub fn traceless(&self) -> [f64; 3] {
        [self.coeffs[1], self.coeffs[2], self.coeffs[3]]
    }

    /// The observable with its identity component removed.
    pub fn traceless_part(&self) -> Self {
        Self {
            coeffs: [0.0, self.coeffs[1], self.coeffs[2], self.coeffs[3]],
        }
    }

    pub fn axis_length(&self) -> f64 {
        norm3(&self.traceless())
    }

    /// Euclidean norm of the coefficient 4-vector; ‖X‖_F = √2 · this.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            coeffs: self.coeffs.map(|a| a * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs;
        coeffs.iter_mut().zip(other.coeffs).for_each(|(a, b)| *a += b);
        Self { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// `Σ a_k σ_k` as a matrix.
    pub fn matrix(&self) -> ComplexMatrix {
        let [a0, a1, a2, a3] = self.coeffs;
        ComplexMatrix::from_rows2([
            [C64::new(a0 + a3, 0.0), C64::new(a1, -a2)],
            [C64::new(a1, a2), C64::new(a0 - a3, 0.0)],
        ])
    }

    /// Frobenius distance between the two operators.
    pub fn distance(&self, other: &Self) -> f64 {
        std::f64::consts::SQRT_2 * self.sub(other).coeff_norm()
    }

    /// Eigenvalues `a₀ ∓ |(a₁,a₂,a₃)|`, ascending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.axis_length();
        (self.coeffs[0] - r, self.coeffs[0] + r)
    }

    /// `W† X W` for a single-qubit unitary `W`.
    pub fn conjugated(&self, w: &ComplexMatrix) -> Result<Self> {
        decompose(&(w.adjoint() * self.matrix() * *w))
    }
}

impl TryFrom<[f64; 4]> for Observable {
    type Error = Error;

    fn try_from(coeffs: [f64; 4]) -> Result<Self> {
        Self::new(coeffs)
    }
}

impl From<Observable> for [f64; 4] {
    fn from(x: Observable) -> Self {
        x.coeffs
    }
}

/// Eigenvalues and probabilities of a two-outcome measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoOutcomeStatistics {
    pub lambda0: f64,
    pub lambda1: f64,
    pub p0: f64,
    pub p1: f64,
}

/// Pauli coefficients `a_k = ½ Tr[m σ_k]` of a Hermitian 2×2 matrix.
pub fn decompose(m: &ComplexMatrix) -> Result<Observable> {
    if m.dim() != 2 {
        return Err(Error::Dimension("observables are 2x2 matrices".into()));
    }
    if m.hermitian_residual() > 1e-10 {
        return Err(Error::Input(format!(
            "matrix is not Hermitian (‖M − M†‖_F = {:e})",
            m.hermitian_residual()
        )));
    }
    let coeffs = [0, 1, 2, 3].map(|k| 0.5 * (*m * sigma(k)).trace().re);
    Observable::new(coeffs)
}

/// Whether two observables commute, judged on their Bloch parts: `[A, B] = 0`
/// iff `(a₁,a₂,a₃) × (b₁,b₂,b₃) = 0`. Identity components are irrelevant.
pub fn commutes(a: &Observable, b: &Observable, tol: f64) -> bool {
    norm3(&cross(&a.traceless(), &b.traceless())) < tol
}

/// Most general observable commuting with `a`, parameterised by its free
/// coefficients `b₀` and `b₃`: `(b₀, a₁b₃/a₃, a₂b₃/a₃, b₃)`.
pub fn commuting_partner(a: &Observable, b0: f64, b3: f64) -> Result<Observable> {
    let [_, a1, a2, a3] = a.coeffs;
    if a3.abs() <= 1e-12 {
        return Err(Error::DegenerateFrame(format!(
            "a₃ = {a3:e} vanishes; build the partner in the rotated frame via commuting_machine"
        )));
    }
    Observable::new([b0, a1 * b3 / a3, a2 * b3 / a3, b3])
}

/// Outcome statistics reconstructed from the mean value of `x`.
pub fn statistics_from_mean(x: &Observable, mean: f64) -> Result<TwoOutcomeStatistics> {
    let (lambda0, lambda1) = x.eigenvalues();
    if lambda1 - lambda0 <= 1e-12 {
        return Err(Error::DegenerateSpectrum(lambda0));
    }
    if !(mean >= lambda0 - 1e-12 && mean <= lambda1 + 1e-12) {
        return Err(Error::Input(format!(
            "mean {mean} outside the spectrum [{lambda0}, {lambda1}]"
        )));
    }
    let p1 = ((mean - lambda0) / (lambda1 - lambda0)).clamp(0.0, 1.0);
    Ok(TwoOutcomeStatistics {
        lambda0,
        lambda1,
        p0: 1.0 - p1,
        p1,
    })
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
