//! Observable classes: real linear spans of a few generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{commutes, Observable, COMMUTE_TOL};

/// Relative threshold under which a Gram–Schmidt residual counts as zero.
const INDEPENDENCE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    OneParam,
    TwoParamCommuting,
    TwoParamNoncommuting,
    /// Three or more independent generators. Such a span always contains a
    /// noncommuting pair, so it is never clonable.
    General,
}

impl ClassKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassKind::OneParam => "one-param",
            ClassKind::TwoParamCommuting => "two-param-commuting",
            ClassKind::TwoParamNoncommuting => "two-param-noncommuting",
            ClassKind::General => "general",
        }
    }
}

/// Linearly independent generators together with the class kind they span.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ClassDoc")]
pub struct ObservableClass {
    kind: ClassKind,
    generators: Vec<Observable>,
}

/// Wire form of a class; `kind` may be omitted on input.
#[derive(Deserialize)]
struct ClassDoc {
    kind: Option<ClassKind>,
    generators: Vec<Observable>,
}

impl TryFrom<ClassDoc> for ObservableClass {
    type Error = Error;

    fn try_from(doc: ClassDoc) -> Result<Self> {
        let class = canonicalize(&doc.generators)?;
        if class.generators.len() != doc.generators.len() {
            return Err(Error::Input(
                "class generators are linearly dependent".into(),
            ));
        }
        match doc.kind {
            Some(kind) if kind != class.kind => Err(Error::Input(format!(
                "class declared as {} but its generators span a {} class",
                kind.as_str(),
                class.kind.as_str()
            ))),
            _ => Ok(class),
        }
    }
}

impl ObservableClass {
    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn generators(&self) -> &[Observable] {
        &self.generators
    }

    /// The noncommuting class spanned by σ₁ and σ₂.
    pub fn sigma_xy() -> Self {
        Self {
            kind: ClassKind::TwoParamNoncommuting,
            generators: vec![Observable::pauli(1), Observable::pauli(2)],
        }
    }

    /// All qubit observables, generated by σ₀..σ₃.
    pub fn all_observables() -> Self {
        Self {
            kind: ClassKind::General,
            generators: (0..4).map(Observable::pauli).collect(),
        }
    }

    /// Frobenius distance from `x` to the span of the generators.
    pub fn span_residual(&self, x: &Observable) -> f64 {
        let basis = orthonormal_basis(&self.generators);
        let v = x.coeffs();
        let mut r = v;
        for e in &basis {
            let c = dot(&v, e);
            for k in 0..4 {
                r[k] -= c * e[k];
            }
        }
        std::f64::consts::SQRT_2 * norm(&r)
    }

    /// Maps every generator through `f`, then re-derives the kind.
    pub(crate) fn map_generators(
        &self,
        f: impl Fn(&Observable) -> Result<Observable>,
    ) -> Result<Self> {
        let generators = self.generators.iter().map(f).collect::<Result<Vec<_>>>()?;
        canonicalize(&generators)
    }
}

/// Drops dependent generators (Gram–Schmidt on coefficient 4-vectors, first
/// occurrence kept verbatim) and classifies the span.
pub fn canonicalize(generators: &[Observable]) -> Result<ObservableClass> {
    if generators.is_empty() {
        return Err(Error::Input("a class needs at least one generator".into()));
    }
    let mut kept = Vec::new();
    let mut basis: Vec<[f64; 4]> = Vec::new();
    for g in generators {
        let scale = g.coeff_norm();
        if scale == 0.0 {
            continue;
        }
        let r = residual(&g.coeffs(), &basis);
        let rn = norm(&r);
        if rn > INDEPENDENCE_TOL * scale {
            basis.push(r.map(|x| x / rn));
            kept.push(*g);
        }
    }
    let kind = match kept.len() {
        0 => return Err(Error::Input("all generators are zero".into())),
        1 => ClassKind::OneParam,
        2 => {
            let a = kept[0].scale(1.0 / kept[0].coeff_norm());
            let b = kept[1].scale(1.0 / kept[1].coeff_norm());
            if commutes(&a, &b, COMMUTE_TOL) {
                ClassKind::TwoParamCommuting
            } else {
                ClassKind::TwoParamNoncommuting
            }
        }
        _ => ClassKind::General,
    };
    Ok(ObservableClass {
        kind,
        generators: kept,
    })
}

/// `n` members with coefficients uniform in [−1, 1], deterministic per seed.
pub fn sample_members(class: &ObservableClass, n: usize, seed: u64) -> Vec<Observable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            class.generators.iter().fold(Observable::zero(), |acc, g| {
                acc.add(&g.scale(rng.gen_range(-1.0..=1.0)))
            })
        })
        .collect()
}

fn orthonormal_basis(generators: &[Observable]) -> Vec<[f64; 4]> {
    let mut basis: Vec<[f64; 4]> = Vec::new();
    for g in generators {
        let r = residual(&g.coeffs(), &basis);
        let rn = norm(&r);
        if rn > INDEPENDENCE_TOL * g.coeff_norm() && rn > 0.0 {
            basis.push(r.map(|x| x / rn));
        }
    }
    basis
}

// Two passes of classical Gram–Schmidt.
fn residual(v: &[f64; 4], basis: &[[f64; 4]]) -> [f64; 4] {
    let mut r = *v;
    for _ in 0..2 {
        for e in basis {
            let c = dot(&r, e);
            for k in 0..4 {
                r[k] -= c * e[k];
            }
        }
    }
    r
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64; 4]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(c: [f64; 4]) -> Observable {
        Observable::new(c).unwrap()
    }

    #[test]
    fn dependent_generators_collapse() {
        let class = canonicalize(&[Observable::pauli(3), obs([0.0, 0.0, 0.0, 2.0])]).unwrap();
        assert_eq!(class.kind(), ClassKind::OneParam);
        assert_eq!(class.generators(), &[Observable::pauli(3)]);
    }

    #[test]
    fn named_two_parameter_classes() {
        let c1 = canonicalize(&[obs([1.0, 0.0, 0.0, 1.0]), Observable::pauli(3)]).unwrap();
        assert_eq!(c1.kind(), ClassKind::TwoParamCommuting);
        let nc = canonicalize(&[Observable::pauli(1), Observable::pauli(2)]).unwrap();
        assert_eq!(nc.kind(), ClassKind::TwoParamNoncommuting);
    }

    #[test]
    fn three_generators_are_general() {
        let c = canonicalize(&[
            Observable::pauli(1),
            Observable::pauli(2),
            Observable::pauli(3),
        ])
        .unwrap();
        assert_eq!(c.kind(), ClassKind::General);
    }

    #[test]
    fn zero_generators_rejected() {
        assert!(canonicalize(&[]).is_err());
        assert!(canonicalize(&[Observable::zero()]).is_err());
    }

    #[test]
    fn sampling_respects_span_and_seed() {
        let one = canonicalize(&[Observable::pauli(3)]).unwrap();
        for m in sample_members(&one, 3, 42) {
            let c = m.coeffs();
            assert_eq!([c[0], c[1], c[2]], [0.0, 0.0, 0.0]);
        }
        let comm = canonicalize(&[obs([0.5, 0.0, 0.0, 1.0]), obs([1.0, 0.0, 0.0, -0.3])]).unwrap();
        let members = sample_members(&comm, 10, 7);
        for a in &members {
            for b in &members {
                assert!(commutes(a, b, COMMUTE_TOL));
            }
        }
        assert_eq!(sample_members(&comm, 5, 9), sample_members(&comm, 5, 9));
        assert_ne!(sample_members(&comm, 5, 9), sample_members(&comm, 5, 10));
    }

    #[test]
    fn class_json_schema() {
        let json = serde_json::to_string(&ObservableClass::sigma_xy()).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"two-param-noncommuting","generators":[[0.0,1.0,0.0,0.0],[0.0,0.0,1.0,0.0]]}"#
        );
        let parsed: ObservableClass =
            serde_json::from_str(r#"{"generators":[[0,0,0,1]]}"#).unwrap();
        assert_eq!(parsed.kind(), ClassKind::OneParam);
        assert!(serde_json::from_str::<ObservableClass>(
            r#"{"kind":"one-param","generators":[[0,1,0,0],[0,0,1,0]]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<ObservableClass>(
            r#"{"generators":[[0,0,0,1],[0,0,0,2]]}"#
        )
        .is_err());
    }
}
