//! Cloning machines for observable classes and their verification.
//!
//! A machine is a two-qubit unitary `U`, a probe state `ρ_p` and a class of
//! observables. It clones the class when every member keeps its mean value on
//! both output qubits for every input state. By linearity of the trace this is
//! the operator identity
//!
//! ```text
//! Tr₂[(I ⊗ ρ_p) U† (X ⊗ I) U] = X      (signal branch)
//! Tr₂[(I ⊗ ρ_p) U† (I ⊗ X) U] = X      (probe branch)
//! ```
//!
//! so verification works on the Heisenberg-picture lift of each generator and
//! never samples input states. Approximate machines replace the right-hand
//! side by `X / g_b` for a state-independent gain `g_b` per branch.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::classes::{canonicalize, ClassKind, ObservableClass};
use crate::error::{Error, Result};
use crate::linalg::{
    kron2, partial_trace, pauli_exponential, sigma, Branch, ComplexMatrix, QubitState,
    TwoQubitState, C64,
};
use crate::pauli::Observable;

/// Unitarity tolerance for gates read from outside the crate.
pub const UNITARY_TOL: f64 = 1e-10;
/// Default verification tolerance for exact and approximate machines.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Angles closer than this (in |sin θ| or |cos θ|) to a node are singular.
pub const SINGULAR_EPS: f64 = 1e-6;

/// A triple `(U, ρ_p, class)` with optional gains `(g₁, g₂)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MachineDoc", into = "MachineDoc")]
pub struct CloningMachine {
    unitary: ComplexMatrix,
    probe: QubitState,
    class: ObservableClass,
    gains: Option<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct MachineDoc {
    unitary: ComplexMatrix,
    probe_bloch: QubitState,
    class: ObservableClass,
    gains: Option<[f64; 2]>,
}

impl TryFrom<MachineDoc> for CloningMachine {
    type Error = Error;

    fn try_from(doc: MachineDoc) -> Result<Self> {
        CloningMachine::new(doc.unitary, doc.probe_bloch, doc.class, doc.gains)
    }
}

impl From<CloningMachine> for MachineDoc {
    fn from(m: CloningMachine) -> Self {
        MachineDoc {
            unitary: m.unitary,
            probe_bloch: m.probe,
            class: m.class,
            gains: m.gains,
        }
    }
}

impl CloningMachine {
    pub fn new(
        unitary: ComplexMatrix,
        probe: QubitState,
        class: ObservableClass,
        gains: Option<[f64; 2]>,
    ) -> Result<Self> {
        if unitary.dim() != 4 {
            return Err(Error::Dimension("machine unitary must be 4x4".into()));
        }
        unitary.ensure_unitary(UNITARY_TOL)?;
        if let Some(g) = gains {
            if g.iter().any(|x| !x.is_finite() || *x == 0.0) {
                return Err(Error::Input(format!("gains must be finite and nonzero, got {g:?}")));
            }
        }
        Ok(Self {
            unitary,
            probe,
            class,
            gains,
        })
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn probe(&self) -> &QubitState {
        &self.probe
    }

    pub fn class(&self) -> &ObservableClass {
        &self.class
    }

    pub fn gains(&self) -> Option<[f64; 2]> {
        self.gains
    }

    pub fn with_gains(mut self, gains: Option<[f64; 2]>) -> Result<Self> {
        self.gains = gains;
        Self::new(self.unitary, self.probe, self.class, self.gains)
    }

    pub fn with_class(mut self, class: ObservableClass) -> Self {
        self.class = class;
        self
    }

    pub fn with_unitary(mut self, unitary: ComplexMatrix) -> Result<Self> {
        self.unitary = unitary;
        Self::new(self.unitary, self.probe, self.class, self.gains)
    }

    /// Joint output state `U (ρ ⊗ ρ_p) U†`.
    pub fn output(&self, input: &QubitState) -> TwoQubitState {
        TwoQubitState::product(input, &self.probe)
            .evolve(&self.unitary)
            .expect("machine unitary validated at construction")
    }

    /// Reduced states of the two output qubits.
    pub fn clones(&self, input: &QubitState) -> [QubitState; 2] {
        let out = self.output(input);
        Branch::BOTH.map(|b| partial_trace(&out, b))
    }

    /// Heisenberg-picture lift of `x` on the given branch.
    pub fn lift(&self, x: &Observable, branch: Branch) -> Observable {
        lift_unchecked(&self.unitary, &self.probe.density(), x, branch)
    }
}

/// Outcome of checking a machine on every generator of its class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// `[signal defect, probe defect]` for each generator, in class order.
    pub per_generator_defects: Vec<[f64; 2]>,
    pub max_defect: f64,
    pub gains_used: [f64; 2],
    pub passed: bool,
    pub tolerance: f64,
}

impl VerificationReport {
    fn from_defects(per_generator_defects: Vec<[f64; 2]>, gains_used: [f64; 2], tolerance: f64) -> Self {
        let max_defect = per_generator_defects
            .iter()
            .flatten()
            .fold(0.0_f64, |m, d| if d.is_nan() { f64::NAN } else { m.max(*d) });
        Self {
            per_generator_defects,
            max_defect,
            gains_used,
            passed: max_defect < tolerance,
            tolerance,
        }
    }
}

/// `Tr₂[(I ⊗ ρ_p) U† (X ⊗ I) U]` (signal) or with `I ⊗ X` (probe), decomposed
/// in the Pauli basis. For every input ρ, `Tr[ρ · lift]` is the mean of `X` on
/// that output qubit.
pub fn heisenberg_lift(
    u: &ComplexMatrix,
    probe: &QubitState,
    x: &Observable,
    branch: Branch,
) -> Result<Observable> {
    if u.dim() != 4 {
        return Err(Error::Dimension("lift needs a 4x4 unitary".into()));
    }
    u.ensure_unitary(UNITARY_TOL)?;
    Ok(lift_unchecked(u, &probe.density(), x, branch))
}

pub(crate) fn lift_unchecked(
    u: &ComplexMatrix,
    probe: &ComplexMatrix,
    x: &Observable,
    branch: Branch,
) -> Observable {
    let xm = x.matrix();
    let id = sigma(0);
    let embedded = match branch {
        Branch::Signal => kron2(&xm, &id),
        Branch::Probe => kron2(&id, &xm),
    };
    let heis = u.adjoint() * embedded * *u;
    // lift_ij = Σ_{k,m} ρ_p[k][m] · M[(i,m),(j,k)]
    let mut coeffs = [0.0; 4];
    let mut lift = [[C64::new(0.0, 0.0); 2]; 2];
    for (i, row) in lift.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            for k in 0..2 {
                for m in 0..2 {
                    *entry += probe.get(k, m) * heis.get(2 * i + m, 2 * j + k);
                }
            }
        }
    }
    // Pauli coefficients of the (Hermitian) 2×2 result.
    coeffs[0] = 0.5 * (lift[0][0].re + lift[1][1].re);
    coeffs[1] = 0.5 * (lift[0][1].re + lift[1][0].re);
    coeffs[2] = 0.5 * (lift[1][0].im - lift[0][1].im);
    coeffs[3] = 0.5 * (lift[0][0].re - lift[1][1].re);
    Observable::new(coeffs).expect("lift of a finite operator through a unitary is finite")
}

/// Per-generator defects. With `gains = None` the exact condition
/// `‖lift(G) − G‖_F` is used. With gains, the identity component of `G` is
/// compared unscaled (a unital channel always reproduces it) and the
/// traceless part as `‖g_b·lift(G − a₀σ₀) − (G − a₀σ₀)‖_F`.
pub(crate) fn generator_defects(
    u: &ComplexMatrix,
    probe: &ComplexMatrix,
    generators: &[Observable],
    gains: Option<[f64; 2]>,
) -> Vec<[f64; 2]> {
    generators
        .iter()
        .map(|g| {
            Branch::BOTH.map(|b| match gains {
                None => lift_unchecked(u, probe, g, b).distance(g),
                Some(gains) => {
                    let tl = g.traceless_part();
                    let gain = gains[b.number() as usize - 1];
                    lift_unchecked(u, probe, &tl, b).scale(gain).distance(&tl)
                }
            })
        })
        .collect()
}

/// Checks `lift_b(G) = G` on every generator and both branches.
pub fn verify_exact(m: &CloningMachine, tol: f64) -> VerificationReport {
    let defects = generator_defects(&m.unitary, &m.probe.density(), m.class.generators(), None);
    VerificationReport::from_defects(defects, [1.0, 1.0], tol)
}

/// Checks `g_b · lift_b(G) = G` on every generator and both branches.
pub fn verify_approximate(m: &CloningMachine, tol: f64) -> Result<VerificationReport> {
    let gains = m
        .gains
        .ok_or_else(|| Error::Contract("approximate verification needs gains".into()))?;
    let defects = generator_defects(
        &m.unitary,
        &m.probe.density(),
        m.class.generators(),
        Some(gains),
    );
    Ok(VerificationReport::from_defects(defects, gains, tol))
}

/// Approximate verification when gains are present, exact otherwise.
pub fn verify(m: &CloningMachine, tol: f64) -> VerificationReport {
    match verify_approximate(m, tol) {
        Ok(report) => report,
        Err(_) => verify_exact(m, tol),
    }
}

/// C-NOT with the signal qubit as control.
pub fn cnot_unitary() -> ComplexMatrix {
    let p0 = ComplexMatrix::diag(&[1.0, 0.0]).expect("2x2");
    let p1 = ComplexMatrix::diag(&[0.0, 1.0]).expect("2x2");
    kron2(&p0, &sigma(0)) + kron2(&p1, &sigma(1))
}

/// `(U_C, |0⟩⟨0|, {x σ₃})`: a non-demolition measurement of σ₃.
pub fn cnot_machine() -> CloningMachine {
    let class = canonicalize(&[Observable::pauli(3)]).expect("σ₃ is nonzero");
    CloningMachine::new(cnot_unitary(), QubitState::zero(), class, None)
        .expect("C-NOT is unitary")
}

/// Single-qubit unitary `W` with `W† σ₃ W = Â`, where `Â` is the normalised
/// traceless part of `a`.
///
/// `W = exp(iφ(n₁σ₁ + n₂σ₂))` with `φ = ½ arccos(â₃)` and
/// `n = (−a₂, a₁)/√(a₁² + a₂²)`: the rotation by `2φ` about `ẑ × â` carries
/// `ẑ` onto `â`. On the σ₃ axis `W = I` (a₃ > 0) or `W = iσ₁` (a₃ < 0).
pub fn axis_rotation(a: &Observable) -> Result<ComplexMatrix> {
    let r = a.axis_length();
    if !(r > 0.0) {
        return Err(Error::Input(
            "observable has no traceless part, so no axis to rotate onto".into(),
        ));
    }
    let [a1, a2, a3] = a.traceless();
    let rho = a1.hypot(a2);
    if rho <= 1e-15 * r {
        return Ok(if a3 > 0.0 {
            sigma(0)
        } else {
            sigma(1).scale(C64::new(0.0, 1.0))
        });
    }
    let phi = 0.5 * (a3 / r).clamp(-1.0, 1.0).acos();
    let (n1, n2) = (-a2 / rho, a1 / rho);
    let (s, c) = phi.sin_cos();
    Ok(sigma(0).scale_re(c) + (sigma(1).scale_re(n1) + sigma(2).scale_re(n2)).scale(C64::new(0.0, s)))
}

/// `(W_A† ⊗ W_A†) U_C (W_A ⊗ I)`.
fn rotated_cnot(w: &ComplexMatrix) -> ComplexMatrix {
    let wd = w.adjoint();
    kron2(&wd, &wd) * cnot_unitary() * kron2(w, &sigma(0))
}

/// Exact machine `(U_A, |0⟩⟨0|, {x A})` for an arbitrary observable `A`.
pub fn one_param_machine(a: &Observable) -> Result<CloningMachine> {
    let w = axis_rotation(a)?;
    let class = canonicalize(&[*a])?;
    CloningMachine::new(rotated_cnot(&w), QubitState::zero(), class, None)
}

/// Exact machine for `{xA + yB}` where `B = W_A† (b₀σ₀ + b₃σ₃) W_A` is the
/// rotated-frame commuting partner of `A`. In the Pauli basis
/// `B = b₀σ₀ + b₃Â`, which agrees with [`crate::pauli::commuting_partner`]
/// whenever `a₃ ≠ 0` and needs no division by `a₃`.
pub fn commuting_machine(a: &Observable, b0: f64, b3: f64) -> Result<CloningMachine> {
    let w = axis_rotation(a)?;
    let reduced = Observable::new([b0, 0.0, 0.0, b3])?;
    let partner = reduced.conjugated(&w)?;
    let class = canonicalize(&[*a, partner])?;
    if class.kind() != ClassKind::TwoParamCommuting {
        return Err(Error::Contract(format!(
            "partner (b₀={b0}, b₃={b3}) is proportional to A; the class has one parameter"
        )));
    }
    CloningMachine::new(rotated_cnot(&w), QubitState::zero(), class, None)
}

/// `exp[(i/2)(t₁σ₁⊗σ₁ + t₂σ₂⊗σ₂ + t₃σ₃⊗σ₃)]`.
pub fn entangling_kernel(t1: f64, t2: f64, t3: f64) -> ComplexMatrix {
    let terms: Vec<(f64, ComplexMatrix)> = [t1, t2, t3]
        .iter()
        .enumerate()
        .map(|(j, t)| (0.5 * t, kron2(&sigma(j + 1), &sigma(j + 1))))
        .collect();
    pauli_exponential(&terms).expect("σ_j⊗σ_j are commuting involutions")
}

/// `F = (i/√2)(σ₁ + σ₂)`, which swaps σ₁ and σ₂ under conjugation.
pub fn flip_unitary() -> ComplexMatrix {
    (sigma(1) + sigma(2)).scale(C64::new(0.0, FRAC_1_SQRT_2))
}

fn check_angle(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta.sin().abs() <= SINGULAR_EPS || theta.cos().abs() <= SINGULAR_EPS {
        return Err(Error::SingularAngle(theta));
    }
    Ok(())
}

/// Gains `(1/cos θ, 1/sin θ)`.
pub fn gains_for_angle(theta: f64) -> Result<[f64; 2]> {
    check_angle(theta)?;
    Ok([1.0 / theta.cos(), 1.0 / theta.sin()])
}

fn sigma_xy_class() -> ObservableClass {
    ObservableClass::sigma_xy()
}

/// Approximate machine `T = (I ⊗ F) U_nc` for `{x₁σ₁ + x₂σ₂}`, with
/// `U_nc = exp[iθ/2 (σ₁⊗σ₁ − σ₂⊗σ₂)]` and gains `(1/cos θ, 1/sin θ)`.
pub fn t_machine(theta: f64) -> Result<CloningMachine> {
    let gains = gains_for_angle(theta)?;
    let u = kron2(&sigma(0), &flip_unitary()) * entangling_kernel(theta, -theta, 0.0);
    CloningMachine::new(u, QubitState::zero(), sigma_xy_class(), Some(gains))
}

/// Sum of Frobenius residuals of the four operator equations that an
/// entangling kernel followed by the probe flip must satisfy to clone σ₁, σ₂
/// with gains `(g₁, g₂)` from a `|0⟩` probe.
///
/// The angles use the convention `U_E = exp[i Σ t_j σ_j⊗σ_j]` (no factor ½),
/// so `(θ/2, −θ/2, 0)` is the kernel of [`t_machine`]`(θ)`.
pub fn nccm_residual(t1: f64, t2: f64, t3: f64, g1: f64, g2: f64) -> f64 {
    let ue = entangling_kernel(2.0 * t1, 2.0 * t2, 2.0 * t3);
    let probe = QubitState::zero().density();
    let s1 = Observable::pauli(1);
    let s2 = Observable::pauli(2);
    let lift = |x: &Observable, b| lift_unchecked(&ue, &probe, x, b);
    lift(&s1, Branch::Signal).scale(g1).distance(&s1)
        + lift(&s2, Branch::Signal).scale(g1).distance(&s2)
        + lift(&s2, Branch::Probe).scale(g2).distance(&s1)
        + lift(&s1, Branch::Probe).scale(g2).distance(&s2)
}

/// Transports a machine by a single-qubit unitary `W`:
/// `V = (W† ⊗ W†) U (W ⊗ I)` clones `W† X W` whenever `U` clones `X`.
pub fn covariant_transport(m: &CloningMachine, w: &ComplexMatrix) -> Result<CloningMachine> {
    if w.dim() != 2 {
        return Err(Error::Dimension("transport needs a 2x2 unitary".into()));
    }
    w.ensure_unitary(UNITARY_TOL)?;
    let wd = w.adjoint();
    let v = kron2(&wd, &wd) * m.unitary * kron2(w, &sigma(0));
    let class = m.class.map_generators(|g| g.conjugated(w))?;
    CloningMachine::new(v, m.probe, class, m.gains)
}

/// Phase-covariant state cloner with a `|0⟩` probe:
/// `|00⟩ → |00⟩`, `|10⟩ → cos θ|10⟩ + sin θ|01⟩`, completed by
/// `|01⟩ → cos θ|01⟩ − sin θ|10⟩`, `|11⟩ → |11⟩`.
pub fn phase_covariant_machine(theta: f64) -> Result<CloningMachine> {
    let gains = gains_for_angle(theta)?;
    let (s, c) = theta.sin_cos();
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let (c, s) = (C64::new(c, 0.0), C64::new(s, 0.0));
    let u = ComplexMatrix::from_rows4([
        [one, z, z, z],
        [z, c, s, z],
        [z, -s, c, z],
        [z, z, z, one],
    ]);
    CloningMachine::new(u, QubitState::zero(), sigma_xy_class(), Some(gains))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, SQRT_2};

    fn obs(c: [f64; 4]) -> Observable {
        Observable::new(c).unwrap()
    }

    #[test]
    fn cnot_lifts_sigma3_on_both_branches() {
        let u = cnot_unitary();
        let p = QubitState::zero();
        for b in Branch::BOTH {
            let l = heisenberg_lift(&u, &p, &Observable::pauli(3), b).unwrap();
            assert_eq!(l, Observable::pauli(3));
        }
        let l = heisenberg_lift(&u, &p, &Observable::pauli(1), Branch::Signal).unwrap();
        assert_eq!(l.coeff_norm(), 0.0);
    }

    #[test]
    fn lift_rejects_non_unitary() {
        let u = cnot_unitary().scale_re(1.1);
        assert!(heisenberg_lift(&u, &QubitState::zero(), &Observable::pauli(3), Branch::Signal).is_err());
    }

    #[test]
    fn cnot_machine_clones_sigma3_not_sigma_xy() {
        let m = cnot_machine();
        let r = verify_exact(&m, 1e-12);
        assert!(r.passed);
        assert_eq!(r.max_defect, 0.0);
        let bad = m.with_class(ObservableClass::sigma_xy());
        let r = verify_exact(&bad, 1e-10);
        assert!(!r.passed);
        assert!((r.max_defect - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn cnot_truth_table_entry() {
        let out = cnot_unitary().apply(&[C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert_eq!(out[3], C64::new(1.0, 0.0));
        assert_eq!(out[2], C64::new(0.0, 0.0));
    }

    #[test]
    fn cnot_clones_identity_plus_sigma3() {
        let c1 = canonicalize(&[obs([1.0, 0.0, 0.0, 1.0]), Observable::pauli(3)]).unwrap();
        assert!(verify_exact(&cnot_machine().with_class(c1), 1e-12).passed);
    }

    #[test]
    fn axis_rotation_examples() {
        assert_eq!(axis_rotation(&Observable::pauli(3)).unwrap(), sigma(0));
        let w = axis_rotation(&Observable::pauli(1)).unwrap();
        let expected = sigma(0).scale_re(FRAC_PI_4.cos()) + sigma(2).scale(C64::new(0.0, FRAC_PI_4.sin()));
        assert!(w.distance(&expected) < 1e-15);
        assert!((w.adjoint() * sigma(3) * w).distance(&sigma(1)) < 1e-15);
        let w = axis_rotation(&obs([0.0, 0.0, 0.0, -2.0])).unwrap();
        assert!((w.adjoint() * sigma(3) * w).distance(&sigma(3).scale_re(-1.0)) < 1e-15);
        assert!(axis_rotation(&obs([1.0, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn one_param_examples() {
        assert_eq!(one_param_machine(&Observable::pauli(3)).unwrap(), cnot_machine());
        for a in [obs([0.0, 1.0, 1.0, 1.0]), obs([2.5, -0.3, 0.7, 0.1])] {
            let m = one_param_machine(&a).unwrap();
            assert!(verify_exact(&m, 1e-10).passed);
        }
    }

    #[test]
    fn commuting_examples() {
        let m = commuting_machine(&Observable::pauli(3), 1.0, 1.0).unwrap();
        assert_eq!(m.class().kind(), ClassKind::TwoParamCommuting);
        assert!(verify_exact(&m, 1e-10).passed);
        let a = obs([0.0, 1.0, 1.0, 1.0]);
        let m = commuting_machine(&a, 0.5, 2.0).unwrap();
        let b = m.class().generators()[1];
        assert!(crate::pauli::commutes(&a, &b, 1e-10));
        // agrees with the closed-form partner up to the b₃ normalisation
        let partner = crate::pauli::commuting_partner(&a, 0.5, b.coeffs()[3]).unwrap();
        assert!(partner.distance(&b) < 1e-12);
        assert!(verify_exact(&m, 1e-10).passed);
        assert!(commuting_machine(&Observable::pauli(3), 0.0, 1.0).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert!(entangling_kernel(0.0, 0.0, 0.0).distance(&ComplexMatrix::identity(4).unwrap()) < 1e-15);
        let theta = 0.37;
        let gen = kron2(&sigma(1), &sigma(1)) - kron2(&sigma(2), &sigma(2));
        // exp(iθ/2 G) with G = 2(|00⟩⟨11| + h.c.): cos θ on {00,11}, i sin θ off-diagonal
        let u = entangling_kernel(theta, -theta, 0.0);
        assert!((u.get(0, 0) - C64::new(theta.cos(), 0.0)).norm() < 1e-15);
        assert!((u.get(3, 0) - C64::new(0.0, theta.sin())).norm() < 1e-15);
        assert!((u.get(1, 1) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((gen.get(0, 3) - C64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn flip_swaps_sigma1_sigma2() {
        let f = flip_unitary();
        assert!((f.adjoint() * sigma(1) * f).distance(&sigma(2)) < 1e-15);
        assert!((f.adjoint() * sigma(2) * f).distance(&sigma(1)) < 1e-15);
    }

    #[test]
    fn t_machine_gains() {
        let m = t_machine(FRAC_PI_4).unwrap();
        let g = m.gains().unwrap();
        assert!((g[0] - SQRT_2).abs() < 1e-15 && (g[1] - SQRT_2).abs() < 1e-15);
        assert!(verify_approximate(&m, 1e-10).unwrap().passed);
        let m = t_machine(FRAC_PI_3).unwrap();
        let g = m.gains().unwrap();
        assert!((g[0] - 2.0).abs() < 1e-12 && (g[1] - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(verify_approximate(&m, 1e-10).unwrap().passed);
        assert!(matches!(t_machine(0.0), Err(Error::SingularAngle(_))));
        assert!(matches!(t_machine(std::f64::consts::FRAC_PI_2), Err(Error::SingularAngle(_))));
    }

    #[test]
    fn t_machine_lift_is_generator_over_gain() {
        let theta = 0.6;
        let m = t_machine(theta).unwrap();
        let l = m.lift(&Observable::pauli(1), Branch::Signal);
        assert!(l.distance(&Observable::pauli(1).scale(theta.cos())) < 1e-12);
        let l = m.lift(&Observable::pauli(2), Branch::Probe);
        assert!(l.distance(&Observable::pauli(2).scale(theta.sin())) < 1e-12);
    }

    #[test]
    fn exact_machine_under_unit_gains() {
        let m = one_param_machine(&obs([0.3, 0.2, -0.5, 0.8])).unwrap();
        let exact = verify_exact(&m, 1e-10);
        let approx = verify_approximate(&m.clone().with_gains(Some([1.0, 1.0])).unwrap(), 1e-10).unwrap();
        assert_eq!(exact.passed, approx.passed);
        assert!((exact.max_defect - approx.max_defect).abs() < 1e-14);
        assert!(matches!(verify_approximate(&m, 1e-10), Err(Error::Contract(_))));
    }

    #[test]
    fn nccm_examples() {
        let theta = FRAC_PI_4;
        let r = nccm_residual(theta / 2.0, -theta / 2.0, 0.0, 1.0 / theta.cos(), 1.0 / theta.sin());
        assert!(r < 1e-10, "{r}");
        assert!(nccm_residual(0.0, 0.0, 0.0, 1.0, 1.0) > 1.0);
    }

    #[test]
    fn transport_by_identity_is_noop() {
        let m = cnot_machine();
        assert_eq!(covariant_transport(&m, &sigma(0)).unwrap(), m);
        assert!(covariant_transport(&m, &sigma(1).scale_re(2.0)).is_err());
    }

    #[test]
    fn phase_covariant_examples() {
        let m = phase_covariant_machine(FRAC_PI_4).unwrap();
        assert!(verify_approximate(&m, 1e-10).unwrap().passed);
        let [c1, c2] = m.clones(&QubitState::zero());
        assert_eq!(c1.bloch(), [0.0, 0.0, 1.0]);
        assert_eq!(c2.bloch(), [0.0, 0.0, 1.0]);
        let [c1, _] = m.clones(&QubitState::plus());
        assert!((c1.bloch()[0] - FRAC_PI_4.cos()).abs() < 1e-15);
    }

    #[test]
    fn machine_json_round_trip() {
        let m = t_machine(0.7).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"probe_bloch\":[0.0,0.0,1.0]"));
        let back: CloningMachine = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        let exact = serde_json::to_string(&cnot_machine()).unwrap();
        assert!(exact.ends_with("\"gains\":null}"));
    }
}
