//! JSON documents.
//!
//! * Lie algebra: `{"dim": n, "brackets": [{"i": 0, "j": 1, "coeffs": [s, …]}]}`
//!   with 0-based indices; omitted brackets are zero and a listed `(i, j)`
//!   also fixes `(j, i)` by antisymmetry unless `(j, i)` is listed too.
//! * `{"type": "diagonal_semidirect", "n", "k", "eta": [[s…]…], "xi_rot": [[s…]…]}`.
//! * `{"type": "nilpotent_extension", "nil": <algebra>, "D": [[s…]…]}` where
//!   `D[i][j]` is row `i`, column `j`, so `D e_j` is column `j`.
//!
//! A scalar `s` is `{"num": ["p/q", …], "den": [...]}` listing coefficients
//! of `θ⁰, θ¹, …`; `den` may be omitted. Plain strings such as `"1/2"` or
//! `"theta"` are accepted on input.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::nilext::NilExtSpec;
use crate::scalar::Scalar;
use crate::semidirect::{DiagonalSemidirectSpec, ExactComplex};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
}

impl AlgebraDoc {
    pub fn from_algebra(alg: &LieAlgebra) -> Self {
        let n = alg.dim();
        let mut brackets = Vec::new();
        let mut push = |i: usize, j: usize| {
            brackets.push(BracketDoc { i, j, coeffs: alg.basis_bracket(i, j).to_vec() })
        };
        for i in 0..n {
            if alg.basis_bracket(i, i).iter().any(|s| !s.is_zero()) {
                push(i, i);
            }
            for j in i + 1..n {
                let fwd = alg.basis_bracket(i, j);
                let rev = alg.basis_bracket(j, i);
                let antisymmetric = fwd.iter().zip(rev).all(|(a, b)| (a + b).is_zero());
                if !antisymmetric {
                    push(i, j);
                    push(j, i);
                } else if fwd.iter().any(|s| !s.is_zero()) {
                    push(i, j);
                }
            }
        }
        AlgebraDoc { dim: n, brackets }
    }

    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        if self.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        let brackets: Vec<(usize, usize, Vec<Scalar>)> = self
            .brackets
            .iter()
            .map(|b| (b.i, b.j, b.coeffs.clone()))
            .collect();
        LieAlgebra::from_brackets(self.dim, &brackets)
    }
}

/// Any input file the tools understand.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Algebra(LieAlgebra),
    Semidirect(DiagonalSemidirectSpec),
    /// Kept unvalidated so that a bad derivation can be reported.
    Extension { nil: LieAlgebra, derivation: Matrix },
}

#[derive(Serialize, Deserialize)]
struct SemidirectDoc {
    n: usize,
    k: usize,
    eta: Vec<Vec<Scalar>>,
    xi_rot: Vec<Vec<Scalar>>,
}

#[derive(Serialize, Deserialize)]
struct ExtensionDoc {
    nil: AlgebraDoc,
    #[serde(rename = "D")]
    d: Vec<Vec<Scalar>>,
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Algebra(_) => "lie_algebra",
            Document::Semidirect(_) => "diagonal_semidirect",
            Document::Extension { .. } => "nilpotent_extension",
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_value(value)
    }

    pub fn from_value(mut value: Value) -> Result<Self> {
        let kind = match value.as_object_mut() {
            Some(obj) => obj.remove("type"),
            None => return Err(Error::Parse("expected a JSON object".into())),
        };
        let kind = match kind {
            None => "lie_algebra".to_string(),
            Some(Value::String(s)) => s,
            Some(other) => return Err(Error::Parse(format!("\"type\" must be a string, got {other}"))),
        };
        match kind.as_str() {
            "lie_algebra" => Ok(Document::Algebra(from_value::<AlgebraDoc>(value)?.to_algebra()?)),
            "diagonal_semidirect" => {
                let doc: SemidirectDoc = from_value(value)?;
                let spec = DiagonalSemidirectSpec::new(doc.eta, doc.xi_rot)?;
                if spec.n() != doc.n || spec.k() != doc.k {
                    return Err(Error::Dimension(format!(
                        "declared (n, k) = ({}, {}) but vectors give ({}, {})",
                        doc.n,
                        doc.k,
                        spec.n(),
                        spec.k()
                    )));
                }
                Ok(Document::Semidirect(spec))
            }
            "nilpotent_extension" => {
                let doc: ExtensionDoc = from_value(value)?;
                let nil = doc.nil.to_algebra()?;
                let n = nil.dim();
                let derivation = Matrix::from_rows(n, doc.d)?;
                if derivation.rows() != n {
                    return Err(Error::Dimension(format!(
                        "D has {} rows on an algebra of dimension {n}",
                        derivation.rows()
                    )));
                }
                Ok(Document::Extension { nil, derivation })
            }
            other => Err(Error::Parse(format!("unknown type \"{other}\""))),
        }
    }

    pub fn to_value(&self) -> Value {
        let mut v = match self {
            Document::Algebra(alg) => serde_json::to_value(AlgebraDoc::from_algebra(alg)),
            Document::Semidirect(s) => serde_json::to_value(SemidirectDoc {
                n: s.n(),
                k: s.k(),
                eta: s.growth().to_vec(),
                xi_rot: s.rotation().to_vec(),
            }),
            Document::Extension { nil, derivation } => serde_json::to_value(ExtensionDoc {
                nil: AlgebraDoc::from_algebra(nil),
                d: derivation.to_rows(),
            }),
        }
        .expect("documents serialize");
        if !matches!(self, Document::Algebra(_)) {
            v.as_object_mut()
                .unwrap()
                .insert("type".into(), Value::String(self.kind().into()));
        }
        v
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("documents serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn extension_spec(&self) -> Option<Result<NilExtSpec>> {
        match self {
            Document::Extension { nil, derivation } => {
                Some(NilExtSpec::new(nil.clone(), derivation.clone()))
            }
            _ => None,
        }
    }
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` where `a`, `b` are scalar literals
/// (rationals or `theta`). `i` alone is the imaginary unit.
pub fn parse_complex(text: &str) -> Result<ExactComplex> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return Ok(ExactComplex::real(s.parse()?));
    };
    let body = body.strip_suffix('*').unwrap_or(body);
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => Scalar::one(),
        "-" => -Scalar::one(),
        other => other.trim_start_matches('+').parse()?,
    };
    Ok(ExactComplex::new(re.parse()?, im))
}

/// Comma-separated list of [`parse_complex`] literals.
pub fn parse_complex_list(text: &str) -> Result<Vec<ExactComplex>> {
    text.split(',').map(parse_complex).collect()
}

pub fn parse_scalar_list(text: &str) -> Result<Vec<Scalar>> {
    text.split(',').map(|s| s.trim().parse()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::standard::{broken_heisenberg, filiform4, heisenberg};

    #[test]
    fn scalar_json_forms() {
        let s: Scalar = serde_json::from_str(r#"{"num": ["1/2", "-2"]}"#).unwrap();
        assert_eq!(s, Scalar::ratio(1, 2) - Scalar::int(2) * Scalar::theta());
        let s: Scalar = serde_json::from_str(r#"{"num": ["1"], "den": ["0", "1"]}"#).unwrap();
        assert_eq!(s, Scalar::one() / Scalar::theta());
        let s: Scalar = serde_json::from_str(r#""theta""#).unwrap();
        assert_eq!(s, Scalar::theta());
        assert!(serde_json::from_str::<Scalar>(r#"{"num": ["1"], "den": ["0"]}"#).is_err());
        let back: Scalar = serde_json::from_value(serde_json::to_value(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn algebra_round_trip() {
        for alg in [heisenberg(), filiform4(), broken_heisenberg(), LieAlgebra::abelian(2)] {
            let doc = Document::Algebra(alg);
            assert_eq!(Document::from_json(&doc.to_json_pretty()).unwrap(), doc);
        }
    }

    #[test]
    fn spec_round_trip() {
        let docs = [
            Document::Semidirect(DiagonalSemidirectSpec::codim3()),
            Document::Extension {
                nil: heisenberg(),
                derivation: Matrix::diagonal(&crate::scalar::int_vec(&[1, 1, 2])),
            },
        ];
        for doc in docs {
            let text = doc.to_json_pretty();
            assert_eq!(Document::from_json(&text).unwrap(), doc);
        }
    }

    #[test]
    fn unknown_type_is_rejected() {
        let err = Document::from_json(r#"{"type": "mystery"}"#).unwrap_err();
        assert!(err.to_string().contains("unknown type"));
    }

    #[test]
    fn complex_literals() {
        let c = |re: Scalar, im: Scalar| ExactComplex::new(re, im);
        assert_eq!(parse_complex("2+i").unwrap(), c(Scalar::int(2), Scalar::one()));
        assert_eq!(parse_complex("-1/2-3i").unwrap(), c(Scalar::ratio(-1, 2), Scalar::int(-3)));
        assert_eq!(parse_complex("-i").unwrap(), c(Scalar::zero(), -Scalar::one()));
        assert_eq!(parse_complex("theta").unwrap(), c(Scalar::theta(), Scalar::zero()));
        assert_eq!(parse_complex("1+theta*i").unwrap(), c(Scalar::one(), Scalar::theta()));
        assert_eq!(parse_complex_list("1, 0").unwrap().len(), 2);
    }
}
