//! Dense complex linear algebra for one- and two-qubit operators.
//!
//! Everything here works on 2×2 and 4×4 matrices stored inline, row-major.
//! Two-qubit operators use the ordering `|q₁ q₂⟩ → 2·q₁ + q₂`, i.e. the signal
//! qubit is the left tensor factor and the probe qubit the right one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);
const NEG_I: C64 = C64::new(0.0, -1.0);
const NEG_ONE: C64 = C64::new(-1.0, 0.0);

/// Which output qubit of a two-qubit interaction is addressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// Qubit 1, the signal.
    Signal,
    /// Qubit 2, the probe.
    Probe,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Signal, Branch::Probe];

    pub fn number(self) -> u8 {
        match self {
            Branch::Signal => 1,
            Branch::Probe => 2,
        }
    }
}

impl TryFrom<u8> for Branch {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            1 => Ok(Branch::Signal),
            2 => Ok(Branch::Probe),
            other => Err(Error::Input(format!("branch must be 1 or 2, got {other}"))),
        }
    }
}

/// A square complex matrix of dimension 2 or 4.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: [C64; 16],
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: [ZERO; 16],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from `dim²` row-major entries.
    pub fn new(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Input("matrix entries must be finite".into()));
        }
        let mut m = Self::zeros(dim)?;
        m.entries[..dim * dim].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_rows2(rows: [[C64; 2]; 2]) -> Self {
        let mut entries = [ZERO; 16];
        for (r, row) in rows.iter().enumerate() {
            entries[r * 2..r * 2 + 2].copy_from_slice(row);
        }
        Self { dim: 2, entries }
    }

    pub fn from_rows4(rows: [[C64; 4]; 4]) -> Self {
        let mut entries = [ZERO; 16];
        for (r, row) in rows.iter().enumerate() {
            entries[r * 4..r * 4 + 4].copy_from_slice(row);
        }
        Self { dim: 4, entries }
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, v) in values.iter().enumerate() {
            m.entries[i * m.dim + i] = C64::new(*v, 0.0);
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Row-major entries, `dim²` long.
    pub fn entries(&self) -> &[C64] {
        &self.entries[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = *self;
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.entries[c * self.dim + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = *self;
        out.entries.iter_mut().for_each(|z| *z *= factor);
        out
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ‖A − B‖_F.
    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).frobenius_norm()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// ‖M − M†‖_F.
    pub fn hermitian_residual(&self) -> f64 {
        self.distance(&self.adjoint())
    }

    /// ‖M†M − I‖_F.
    pub fn unitarity_residual(&self) -> f64 {
        let id = Self::identity(self.dim).expect("dimension already validated");
        (self.adjoint() * *self).distance(&id)
    }

    pub fn is_finite(&self) -> bool {
        self.entries()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        let residual = self.unitarity_residual();
        if !self.is_finite() || !(residual < tol) {
            return Err(Error::Input(format!(
                "matrix is not unitary: ‖U†U − I‖_F = {residual:e}"
            )));
        }
        Ok(())
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} against {}x{} matrix",
                v.len(),
                self.dim,
                self.dim
            )));
        }
        Ok((0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect())
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        *u * *self * u.adjoint()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::Dimension(format!("only 2x2 and 4x4 matrices are supported, got {dim}")))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix {
            dim: n,
            entries: [ZERO; 16],
        };
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.entries[r * n + c] += a * rhs.entries[k * n + c];
                }
            }
        }
        out
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(mut self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        for (a, b) in self.entries.iter_mut().zip(rhs.entries.iter()) {
            *a += b;
        }
        self
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(mut self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        for (a, b) in self.entries.iter_mut().zip(rhs.entries.iter()) {
            *a -= b;
        }
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

// [[ [re, im], ... ], ...]
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim)
            .map(|r| (0..self.dim).map(|c| [self.get(r, c).re, self.get(r, c).im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(deserializer)?;
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(serde::de::Error::custom("matrix must be square"));
        }
        let entries: Vec<C64> = rows
            .iter()
            .flatten()
            .map(|[re, im]| C64::new(*re, *im))
            .collect();
        ComplexMatrix::new(dim, &entries).map_err(serde::de::Error::custom)
    }
}

/// Pauli matrix σ_k, with σ₀ the 2×2 identity.
pub fn sigma(k: usize) -> ComplexMatrix {
    match k {
        0 => ComplexMatrix::from_rows2([[ONE, ZERO], [ZERO, ONE]]),
        1 => ComplexMatrix::from_rows2([[ZERO, ONE], [ONE, ZERO]]),
        2 => ComplexMatrix::from_rows2([[ZERO, NEG_I], [I, ZERO]]),
        3 => ComplexMatrix::from_rows2([[ONE, ZERO], [ZERO, NEG_ONE]]),
        _ => panic!("Pauli index must be 0..=3, got {k}"),
    }
}

/// Kronecker product `a ⊗ b` of two single-qubit operators; `a` acts on the
/// signal qubit, `b` on the probe.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(Error::Dimension(format!(
            "tensor expects two 2x2 factors, got {}x{} and {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, a.get(i, j) * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Infallible tensor product for operands already known to be single-qubit.
pub(crate) fn kron2(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    tensor(a, b).expect("single-qubit factors")
}

/// Partial trace of a 4×4 operator, keeping the given qubit.
pub fn partial_trace_operator(m: &ComplexMatrix, keep: Branch) -> Result<ComplexMatrix> {
    if m.dim != 4 {
        return Err(Error::Dimension("partial trace needs a 4x4 operator".into()));
    }
    let mut out = ComplexMatrix::zeros(2)?;
    for i in 0..2 {
        for j in 0..2 {
            let value = match keep {
                Branch::Signal => m.get(2 * i, 2 * j) + m.get(2 * i + 1, 2 * j + 1),
                Branch::Probe => m.get(i, j) + m.get(2 + i, 2 + j),
            };
            out.set(i, j, value);
        }
    }
    Ok(out)
}

/// A single-qubit density matrix in Bloch form, ρ = ½(σ₀ + s·σ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct QubitState {
    bloch: [f64; 3],
}

impl QubitState {
    pub const BLOCH_TOL: f64 = 1e-12;

    pub fn new(bloch: [f64; 3]) -> Result<Self> {
        if bloch.iter().any(|s| !s.is_finite()) {
            return Err(Error::Input("Bloch vector must be finite".into()));
        }
        let norm = norm3(&bloch);
        if norm > 1.0 + Self::BLOCH_TOL {
            return Err(Error::Input(format!(
                "Bloch vector length {norm} exceeds 1: not a density matrix"
            )));
        }
        Ok(Self { bloch })
    }

    /// |0⟩⟨0|.
    pub fn zero() -> Self {
        Self { bloch: [0.0, 0.0, 1.0] }
    }

    /// |1⟩⟨1|.
    pub fn one() -> Self {
        Self { bloch: [0.0, 0.0, -1.0] }
    }

    /// |+⟩⟨+|.
    pub fn plus() -> Self {
        Self { bloch: [1.0, 0.0, 0.0] }
    }

    pub fn maximally_mixed() -> Self {
        Self { bloch: [0.0; 3] }
    }

    /// Reads a 2×2 density matrix. Hermiticity and unit trace are checked at
    /// `1e-10`; the Bloch vector is then validated as in [`QubitState::new`].
    pub fn from_density(m: &ComplexMatrix) -> Result<Self> {
        if m.dim != 2 {
            return Err(Error::Dimension("single-qubit state needs a 2x2 matrix".into()));
        }
        if m.hermitian_residual() > 1e-10 {
            return Err(Error::Input("density matrix is not Hermitian".into()));
        }
        if (m.trace() - ONE).norm() > 1e-10 {
            return Err(Error::Input("density matrix does not have unit trace".into()));
        }
        let bloch = [1, 2, 3].map(|k| (*m * sigma(k)).trace().re);
        Self::new(bloch)
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    pub fn purity_radius(&self) -> f64 {
        norm3(&self.bloch)
    }

    pub fn density(&self) -> ComplexMatrix {
        let [s1, s2, s3] = self.bloch;
        let half = 0.5;
        ComplexMatrix::from_rows2([
            [C64::new(half * (1.0 + s3), 0.0), C64::new(half * s1, -half * s2)],
            [C64::new(half * s1, half * s2), C64::new(half * (1.0 - s3), 0.0)],
        ])
    }

    /// Tr[ρ X].
    pub fn expectation(&self, x: &ComplexMatrix) -> f64 {
        (self.density() * *x).trace().re
    }
}

impl TryFrom<[f64; 3]> for QubitState {
    type Error = Error;

    fn try_from(bloch: [f64; 3]) -> Result<Self> {
        Self::new(bloch)
    }
}

impl From<QubitState> for [f64; 3] {
    fn from(state: QubitState) -> Self {
        state.bloch
    }
}

/// A two-qubit density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitState {
    matrix: ComplexMatrix,
}

impl TwoQubitState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim != 4 {
            return Err(Error::Dimension("two-qubit state needs a 4x4 matrix".into()));
        }
        if !matrix.is_finite() {
            return Err(Error::Input("state entries must be finite".into()));
        }
        if matrix.hermitian_residual() > 1e-12 {
            return Err(Error::Input("two-qubit state is not Hermitian".into()));
        }
        if (matrix.trace() - ONE).norm() > 1e-12 {
            return Err(Error::Input("two-qubit state does not have unit trace".into()));
        }
        let min_eig = hermitian_eigenvalues(&matrix)?[0];
        if min_eig < -1e-10 {
            return Err(Error::Input(format!(
                "two-qubit state has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// ρ_signal ⊗ ρ_probe.
    pub fn product(signal: &QubitState, probe: &QubitState) -> Self {
        Self {
            matrix: kron2(&signal.density(), &probe.density()),
        }
    }

    /// Projector onto a normalised pure state given as amplitudes.
    pub fn pure(amplitudes: [C64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::Input("zero state vector".into()));
        }
        let v = amplitudes.map(|a| a / norm);
        let mut m = ComplexMatrix::zeros(4)?;
        for r in 0..4 {
            for c in 0..4 {
                m.set(r, c, v[r] * v[c].conj());
            }
        }
        Self::new(m)
    }

    /// U R U†.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dim != 4 {
            return Err(Error::Dimension("two-qubit evolution needs a 4x4 unitary".into()));
        }
        u.ensure_unitary(1e-10)?;
        Ok(Self {
            matrix: self.matrix.conjugate_by(u),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Tr[R M].
    pub fn expectation(&self, m: &ComplexMatrix) -> f64 {
        (self.matrix * *m).trace().re
    }
}

/// Reduced state of the kept qubit.
pub fn partial_trace(state: &TwoQubitState, keep: Branch) -> QubitState {
    let reduced = partial_trace_operator(&state.matrix, keep).expect("4x4 state");
    let bloch = [1, 2, 3].map(|k| (reduced * sigma(k)).trace().re);
    // Positivity of R bounds the reduced Bloch vector; clip rounding overshoot.
    let norm = norm3(&bloch);
    let bloch = if norm > 1.0 { bloch.map(|s| s / norm) } else { bloch };
    QubitState { bloch }
}

/// Product of closed-form exponentials `exp(iαG) = cos α·I + i sin α·G`, in
/// input order. Every generator must square to the identity and all of them
/// must commute, so that the product equals `exp(i Σ α_j G_j)`.
pub fn pauli_exponential(terms: &[(f64, ComplexMatrix)]) -> Result<ComplexMatrix> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::Contract("pauli_exponential needs at least one term".into()));
    };
    let dim = first.dim;
    let id = ComplexMatrix::identity(dim)?;
    for (alpha, g) in terms {
        if g.dim != dim {
            return Err(Error::Dimension("generators of different dimension".into()));
        }
        if !alpha.is_finite() {
            return Err(Error::Input("exponent coefficient must be finite".into()));
        }
        if (*g * *g).distance(&id) > 1e-12 {
            return Err(Error::Contract("generator does not square to the identity".into()));
        }
    }
    for (i, (_, a)) in terms.iter().enumerate() {
        for (_, b) in &terms[i + 1..] {
            if a.commutator(b).frobenius_norm() > 1e-12 {
                return Err(Error::Contract(
                    "generators do not commute; split the exponential".into(),
                ));
            }
        }
    }
    Ok(terms.iter().fold(id, |acc, (alpha, g)| {
        acc * (id.scale_re(alpha.cos()) + g.scale(I * alpha.sin()))
    }))
}

/// Eigenvalues of a Hermitian 2×2 or 4×4 matrix, ascending.
///
/// 2×2 uses the closed form; 4×4 runs cyclic Jacobi on the real symmetric
/// 8×8 embedding `[[A, −B], [B, A]]` of `A + iB`, whose spectrum is that of the
/// input with every eigenvalue doubled.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.hermitian_residual() > 1e-10 * m.frobenius_norm().max(1.0) {
        return Err(Error::Input("matrix is not Hermitian".into()));
    }
    if m.dim == 2 {
        let mean = 0.5 * (m.get(0, 0).re + m.get(1, 1).re);
        let half_gap = (0.25 * (m.get(0, 0).re - m.get(1, 1).re).powi(2) + m.get(0, 1).norm_sqr()).sqrt();
        return Ok(vec![mean - half_gap, mean + half_gap]);
    }
    let n = 2 * m.dim;
    let mut a = vec![vec![0.0; n]; n];
    for r in 0..m.dim {
        for c in 0..m.dim {
            let z = m.get(r, c);
            a[r][c] = z.re;
            a[r + m.dim][c + m.dim] = z.re;
            a[r][c + m.dim] = -z.im;
            a[r + m.dim][c] = z.im;
        }
    }
    jacobi_symmetric(&mut a);
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    Ok(eig.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect())
}

fn jacobi_symmetric(a: &mut [Vec<f64>]) {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(index: usize) -> Vec<C64> {
        let mut v = vec![ZERO; 4];
        v[index] = ONE;
        v
    }

    fn cnot() -> ComplexMatrix {
        let p0 = ComplexMatrix::diag(&[1.0, 0.0]).unwrap();
        let p1 = ComplexMatrix::diag(&[0.0, 1.0]).unwrap();
        kron2(&p0, &sigma(0)) + kron2(&p1, &sigma(1))
    }

    #[test]
    fn tensor_identity_and_ordering() {
        let id4 = ComplexMatrix::identity(4).unwrap();
        assert_eq!(tensor(&sigma(0), &sigma(0)).unwrap(), id4);
        let z1 = tensor(&sigma(3), &sigma(0)).unwrap();
        assert_eq!(z1, ComplexMatrix::diag(&[1.0, 1.0, -1.0, -1.0]).unwrap());
    }

    #[test]
    fn tensor_xx_flips_both_qubits() {
        let xx = tensor(&sigma(1), &sigma(1)).unwrap();
        assert_eq!(xx.apply(&basis(0)).unwrap(), basis(3));
    }

    #[test]
    fn tensor_rejects_two_qubit_factor() {
        let id4 = ComplexMatrix::identity(4).unwrap();
        assert!(matches!(tensor(&id4, &sigma(1)), Err(Error::Dimension(_))));
    }

    #[test]
    fn unsupported_dimension() {
        assert!(ComplexMatrix::zeros(3).is_err());
        assert!(ComplexMatrix::new(2, &[ONE; 3]).is_err());
    }

    #[test]
    fn partial_trace_of_product_and_bell_states() {
        let r = TwoQubitState::product(&QubitState::zero(), &QubitState::zero());
        for b in Branch::BOTH {
            assert_eq!(partial_trace(&r, b).bloch(), [0.0, 0.0, 1.0]);
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = TwoQubitState::pure([C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)]).unwrap();
        for b in Branch::BOTH {
            let s = partial_trace(&bell, b).bloch();
            assert!(norm3(&s) < 1e-15);
        }
    }

    #[test]
    fn cnot_dephases_the_control() {
        let r = TwoQubitState::product(&QubitState::plus(), &QubitState::zero())
            .evolve(&cnot())
            .unwrap();
        let s = partial_trace(&r, Branch::Signal).bloch();
        assert!(norm3(&s) < 1e-15, "{s:?}");
    }

    #[test]
    fn invalid_branch_number() {
        assert!(Branch::try_from(3).is_err());
        assert_eq!(Branch::try_from(2).unwrap(), Branch::Probe);
    }

    #[test]
    fn exponential_zero_angle_is_identity() {
        let xx = kron2(&sigma(1), &sigma(1));
        let u = pauli_exponential(&[(0.0, xx)]).unwrap();
        assert_eq!(u, ComplexMatrix::identity(4).unwrap());
    }

    #[test]
    fn exponential_closed_form_single_qubit() {
        let a = std::f64::consts::FRAC_PI_4;
        let u = pauli_exponential(&[(a, sigma(2))]).unwrap();
        let expected = sigma(0).scale_re(a.cos()) + sigma(2).scale(I * a.sin());
        assert!(u.distance(&expected) < 1e-15);
    }

    #[test]
    fn exponential_rejects_bad_generators() {
        let not_involutory = sigma(1).scale_re(2.0);
        assert!(matches!(
            pauli_exponential(&[(0.3, not_involutory)]),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            pauli_exponential(&[(0.3, sigma(1)), (0.2, sigma(2))]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn eigenvalues_of_known_matrices() {
        let e = hermitian_eigenvalues(&sigma(1).scale_re(2.0)).unwrap();
        assert!((e[0] + 2.0).abs() < 1e-15 && (e[1] - 2.0).abs() < 1e-15);
        let d = ComplexMatrix::diag(&[0.4, -0.1, 0.3, 0.4]).unwrap();
        let u = pauli_exponential(&[(0.7, kron2(&sigma(1), &sigma(2)))]).unwrap();
        let e = hermitian_eigenvalues(&d.conjugate_by(&u)).unwrap();
        for (got, want) in e.iter().zip([-0.1, 0.3, 0.4, 0.4]) {
            assert!((got - want).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn two_qubit_state_validation() {
        let neg = ComplexMatrix::diag(&[1.1, -0.1, 0.0, 0.0]).unwrap();
        assert!(TwoQubitState::new(neg).is_err());
        let not_normalised = ComplexMatrix::diag(&[0.5, 0.0, 0.0, 0.0]).unwrap();
        assert!(TwoQubitState::new(not_normalised).is_err());
    }

    #[test]
    fn qubit_state_outside_ball() {
        assert!(QubitState::new([1.0, 0.1, 0.0]).is_err());
        assert!(QubitState::new([f64::NAN, 0.0, 0.0]).is_err());
        let s = QubitState::new([0.3, -0.2, 0.5]).unwrap();
        let back = QubitState::from_density(&s.density()).unwrap();
        assert!(norm3(&[
            back.bloch()[0] - 0.3,
            back.bloch()[1] + 0.2,
            back.bloch()[2] - 0.5
        ]) < 1e-15);
    }

    #[test]
    fn matrix_json_shape() {
        let json = serde_json::to_string(&sigma(2)).unwrap();
        assert_eq!(json, "[[[0.0,0.0],[0.0,-1.0]],[[0.0,1.0],[0.0,0.0]]]");
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sigma(2));
        assert!(serde_json::from_str::<ComplexMatrix>("[[[1,0]]]").is_err());
    }
}
