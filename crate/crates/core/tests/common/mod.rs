//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64 as C64;
use obsclone::linalg::{ComplexMatrix, QubitState};
use proptest::prelude::*;

/// Hermitian n×n matrix from n² reals: diagonal, then real/imaginary pairs
/// of the upper triangle.
pub fn hermitian(dim: usize, v: &[f64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim).unwrap();
    let mut it = v.iter().copied();
    for i in 0..dim {
        m.set(i, i, C64::new(it.next().unwrap(), 0.0));
    }
    for i in 0..dim {
        for j in i + 1..dim {
            let z = C64::new(it.next().unwrap(), it.next().unwrap());
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    m
}

/// exp(A) by scaling and squaring around a truncated Taylor series.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let mut squarings = 0;
    let mut scaled = *a;
    while scaled.frobenius_norm() > 0.25 {
        scaled = scaled.scale_re(0.5);
        squarings += 1;
    }
    let id = ComplexMatrix::identity(a.dim()).unwrap();
    let mut term = id;
    let mut sum = id;
    for k in 1..=20 {
        term = (term * scaled).scale_re(1.0 / k as f64);
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// exp(iH) for the Hermitian matrix built from `v`.
pub fn unitary(dim: usize, v: &[f64]) -> ComplexMatrix {
    expm(&hermitian(dim, v).scale(C64::new(0.0, 1.0)))
}

/// Plain triple-loop Kronecker product.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (n, m) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(n * m).unwrap();
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out.set(i * m + k, j * m + l, a.get(i, j) * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Mean of `x` on one output, computed in the Schrödinger picture:
/// Tr[(U (ρ⊗ρ_p) U†) · embed(x)].
pub fn output_mean(
    u: &ComplexMatrix,
    input: &ComplexMatrix,
    probe: &ComplexMatrix,
    x: &ComplexMatrix,
    signal: bool,
) -> f64 {
    let id = ComplexMatrix::identity(2).unwrap();
    let rho = *u * kron(input, probe) * u.adjoint();
    let obs = if signal { kron(x, &id) } else { kron(&id, x) };
    (rho * obs).trace().re
}

pub fn bloch_strategy() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-1.0f64..1.0).prop_map(|v| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1.0 {
            v.map(|x| x / n)
        } else {
            v
        }
    })
}

pub fn state_strategy() -> impl Strategy<Value = QubitState> {
    bloch_strategy().prop_map(|b| QubitState::new(b).unwrap())
}

pub fn coeff_strategy() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-2.0f64..2.0)
}

/// Nonzero traceless part, bounded away from the σ₃ plane-degenerate case.
pub fn observable_strategy() -> impl Strategy<Value = obsclone::pauli::Observable> {
    coeff_strategy()
        .prop_filter("needs a Bloch part", |c| {
            (c[1] * c[1] + c[2] * c[2] + c[3] * c[3]).sqrt() > 0.1
        })
        .prop_map(|c| obsclone::pauli::Observable::new(c).unwrap())
}

pub fn unitary4_strategy() -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.5f64..1.5, 16).prop_map(|v| unitary(4, &v))
}

pub fn unitary2_strategy() -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-2.0f64..2.0, 4).prop_map(|v| unitary(2, &v))
}
