//! JSON wire formats for algebras, tensors and functionals.
//!
//! Scalars travel as strings (`"3"`, `"-1/2"`, `"4 mod 5"`); indices are
//! 0-based; zero structure constants are omitted.

use serde::{Deserialize, Serialize};

use crate::algebra::{FinDimAlgebra, Functional};
use crate::error::{Error, Result};
use crate::families::Provenance;
use crate::scalar::{FieldSpec, Fp, GroundField, PrimeModulus, Rational};
use crate::tensor::Tensor2;

/// An algebra over one of the supported ground fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyAlgebra {
    Rational(FinDimAlgebra<Rational>),
    Prime(FinDimAlgebra<Fp>),
}

impl AnyAlgebra {
    pub fn dim(&self) -> usize {
        match self {
            AnyAlgebra::Rational(a) => a.dim(),
            AnyAlgebra::Prime(a) => a.dim(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            AnyAlgebra::Rational(_) => FieldSpec::Rationals,
            AnyAlgebra::Prime(a) => FieldSpec::PrimeField(a.ctx().get()),
        }
    }

    pub fn permute_basis(&self, perm: &[usize]) -> AnyAlgebra {
        match self {
            AnyAlgebra::Rational(a) => AnyAlgebra::Rational(a.permute_basis(perm)),
            AnyAlgebra::Prime(a) => AnyAlgebra::Prime(a.permute_basis(perm)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AnyAlgebra::Rational(a) => a.validate(),
            AnyAlgebra::Prime(a) => a.validate(),
        }
    }

    pub fn to_json(&self, provenance: Option<&Provenance>) -> AlgebraJson {
        match self {
            AnyAlgebra::Rational(a) => algebra_to_json(a, provenance),
            AnyAlgebra::Prime(a) => algebra_to_json(a, provenance),
        }
    }
}

/// `"rational"` or `{"prime": p}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldJson {
    Named(String),
    Prime { prime: u64 },
}

impl FieldJson {
    pub fn from_spec(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rationals => FieldJson::Named("rational".into()),
            FieldSpec::PrimeField(p) => FieldJson::Prime { prime: p },
        }
    }

    pub fn to_spec(&self) -> Result<FieldSpec> {
        match self {
            FieldJson::Named(s) if s == "rational" => Ok(FieldSpec::Rationals),
            FieldJson::Named(s) => Err(Error::InvalidAlgebra(format!("unknown field {s:?}"))),
            FieldJson::Prime { prime } => {
                FieldSpec::prime(*prime).map_err(|e| Error::InvalidAlgebra(e.to_string()))
            }
        }
    }
}

impl From<FieldSpec> for FieldJson {
    fn from(spec: FieldSpec) -> Self {
        FieldJson::from_spec(spec)
    }
}

impl TryFrom<FieldJson> for FieldSpec {
    type Error = Error;
    fn try_from(json: FieldJson) -> Result<Self> {
        json.to_spec()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub field: FieldJson,
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: Vec<String>,
    pub structure: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

pub fn algebra_to_json<F: GroundField>(alg: &FinDimAlgebra<F>, provenance: Option<&Provenance>) -> AlgebraJson {
    AlgebraJson {
        field: FieldJson::from_spec(F::spec(alg.ctx())),
        dim: alg.dim(),
        basis: alg.labels().to_vec(),
        unit: alg.one().to_dense(alg.ctx()).iter().map(|c| c.to_wire()).collect(),
        structure: alg.entries().map(|(i, j, k, c)| (i, j, k, c.to_wire())).collect(),
        provenance: provenance.cloned(),
    }
}

fn parse_scalar<F: GroundField>(ctx: &F::Ctx, s: &str) -> Result<F> {
    F::parse(ctx, s).map_err(|e| Error::InvalidAlgebra(e.to_string()))
}

fn typed_algebra<F: GroundField>(ctx: &F::Ctx, json: &AlgebraJson) -> Result<FinDimAlgebra<F>> {
    if json.basis.len() != json.dim {
        return Err(Error::InvalidAlgebra(format!(
            "dim is {} but {} basis labels were given",
            json.dim,
            json.basis.len()
        )));
    }
    let unit = json
        .unit
        .iter()
        .map(|s| parse_scalar(ctx, s))
        .collect::<Result<Vec<F>>>()?;
    let entries = json
        .structure
        .iter()
        .map(|(i, j, k, s)| Ok((*i, *j, *k, parse_scalar(ctx, s)?)))
        .collect::<Result<Vec<_>>>()?;
    FinDimAlgebra::from_entries(ctx, json.basis.clone(), entries, unit)
}

/// Decodes an algebra; associativity and the unit law are not checked here.
pub fn algebra_from_json(json: &AlgebraJson) -> Result<AnyAlgebra> {
    match json.field.to_spec()? {
        FieldSpec::Rationals => Ok(AnyAlgebra::Rational(typed_algebra(&(), json)?)),
        FieldSpec::PrimeField(p) => {
            let ctx = PrimeModulus::new(p).map_err(|e| Error::InvalidAlgebra(e.to_string()))?;
            Ok(AnyAlgebra::Prime(typed_algebra(&ctx, json)?))
        }
    }
}

pub fn parse_algebra(text: &str) -> Result<(AnyAlgebra, Option<Provenance>)> {
    let json: AlgebraJson =
        serde_json::from_str(text).map_err(|e| Error::InvalidAlgebra(format!("malformed JSON: {e}")))?;
    let alg = algebra_from_json(&json)?;
    Ok((alg, json.provenance))
}

pub type TensorJson = Vec<(usize, usize, String)>;

pub fn tensor_to_json<F: GroundField>(t: &Tensor2<F>) -> TensorJson {
    t.iter().map(|(a, b, c)| (a, b, c.to_wire())).collect()
}

pub fn tensor_from_json<F: GroundField>(ctx: &F::Ctx, dim: usize, json: &TensorJson) -> Result<Tensor2<F>> {
    let mut t = Tensor2::zero(dim);
    for (a, b, s) in json {
        for &index in [a, b] {
            if index >= dim {
                return Err(Error::IndexOutOfRange { index, bound: dim });
            }
        }
        t.add_term(*a, *b, &parse_scalar(ctx, s)?);
    }
    Ok(t)
}

pub fn functional_to_json<F: GroundField>(f: &Functional<F>) -> Vec<String> {
    f.values().iter().map(|c| c.to_wire()).collect()
}

pub fn functional_from_json<F: GroundField>(ctx: &F::Ctx, json: &[String]) -> Result<Functional<F>> {
    Ok(Functional::new(
        json.iter().map(|s| parse_scalar(ctx, s)).collect::<Result<Vec<F>>>()?,
    ))
}

/// `{"epsilon": [...], "y": [...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub epsilon: Vec<String>,
    pub y: TensorJson,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, matrix_algebra, Family};
    use crate::scalar::Field;

    #[test]
    fn algebra_round_trip() {
        let prov = Provenance {
            family: Family::Group { factors: vec![2] },
            field: FieldSpec::PrimeField(2),
        };
        let alg = generate(&prov).unwrap();
        let text = serde_json::to_string(&alg.to_json(Some(&prov))).unwrap();
        assert!(text.contains("\"field\":{\"prime\":2}"));
        assert!(text.contains("1 mod 2"));
        let (back, p) = parse_algebra(&text).unwrap();
        assert_eq!(back, alg);
        assert_eq!(p, Some(prov));

        let m2 = AnyAlgebra::Rational(matrix_algebra(&(), 2));
        let json = serde_json::to_value(m2.to_json(None)).unwrap();
        assert_eq!(json["field"], "rational");
        assert_eq!(json["structure"][0], serde_json::json!([0, 0, 0, "1"]));
        assert!(json.get("provenance").is_none());
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_algebra("{").is_err());
        let bad_index = r#"{"field":"rational","dim":1,"basis":["1"],"unit":["1"],"structure":[[0,0,1,"1"]]}"#;
        assert!(matches!(parse_algebra(bad_index), Err(Error::IndexOutOfRange { .. })));
        let bad_prime = r#"{"field":{"prime":4},"dim":1,"basis":["1"],"unit":["1"],"structure":[[0,0,0,"1"]]}"#;
        assert!(parse_algebra(bad_prime).is_err());
        let bad_scalar = r#"{"field":"rational","dim":1,"basis":["1"],"unit":["1/0"],"structure":[]}"#;
        assert!(parse_algebra(bad_scalar).is_err());
    }

    #[test]
    fn tensor_round_trip() {
        let t = Tensor2::from_terms(3, [(0, 2, Rational::from_i64(&(), -2)), (1, 1, Rational::new(1.into(), 3.into()))]);
        let json = tensor_to_json(&t);
        assert_eq!(json[0], (0, 2, "-2".to_string()));
        assert_eq!(tensor_from_json::<Rational>(&(), 3, &json).unwrap(), t);
        assert!(tensor_from_json::<Rational>(&(), 2, &json).is_err());
    }
}
