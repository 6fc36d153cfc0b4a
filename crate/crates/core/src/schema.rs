//! JSON interchange. Rationals travel as `"p/q"` strings; nothing is ever a
//! float. Input is checked against [`Limits`] at the boundary.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactlp::matrix::RatMatrix;
use crate::exactlp::rational::{format_rational, format_vector, parse_rational, RatVector, Rational};
use crate::minimax::{Check, Instance, MinimaxReport, Provenance, VerificationReport};
use crate::operators::Operator;
use crate::space::{NormedSpace, SpaceKind, SpaceSpec, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_dim: usize,
    pub max_denominator: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_dim: 4,
            max_denominator: 1_000_000,
        }
    }
}

impl Limits {
    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim == 0 || dim > self.max_dim {
            return Err(Error::InvalidInput(format!(
                "dimension {dim} outside 1..={}",
                self.max_dim
            )));
        }
        Ok(())
    }

    pub fn parse(&self, text: &str) -> Result<Rational> {
        let q = parse_rational(text)?;
        if *q.denom() > BigInt::from(self.max_denominator) {
            return Err(Error::InvalidInput(format!(
                "denominator of {text} exceeds {}",
                self.max_denominator
            )));
        }
        Ok(q)
    }

    pub fn parse_vector(&self, v: &[String]) -> Result<RatVector> {
        v.iter().map(|s| self.parse(s)).collect()
    }

    fn parse_rows(&self, rows: &[Vec<String>]) -> Result<Vec<RatVector>> {
        rows.iter().map(|r| self.parse_vector(r)).collect()
    }
}

pub type Rows = Vec<Vec<String>>;

fn format_rows(rows: &[RatVector]) -> Rows {
    rows.iter().map(|r| format_vector(r)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub kind: SpaceKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Rows>,
}

impl SpaceJson {
    pub fn from_space(space: &NormedSpace) -> Self {
        let facets = (space.kind() == SpaceKind::Polyhedral)
            .then(|| format_rows(space.dual_extreme_points()));
        Self {
            kind: space.kind(),
            dim: space.dim(),
            facets,
            vertices: None,
        }
    }

    pub fn to_space(&self, limits: &Limits) -> Result<NormedSpace> {
        limits.check_dim(self.dim)?;
        let spec = match (self.kind, &self.facets, &self.vertices) {
            (SpaceKind::L1, None, None) => SpaceSpec::L1(self.dim),
            (SpaceKind::Linf, None, None) => SpaceSpec::Linf(self.dim),
            (SpaceKind::Polyhedral, Some(f), None) => SpaceSpec::Facets {
                dim: self.dim,
                facets: limits.parse_rows(f)?,
            },
            (SpaceKind::Polyhedral, None, Some(v)) => SpaceSpec::Vertices {
                dim: self.dim,
                vertices: limits.parse_rows(v)?,
            },
            _ => {
                return Err(Error::InvalidInput(
                    "a polyhedral space needs exactly one of `facets` or `vertices`; l1 and linf take neither"
                        .into(),
                ))
            }
        };
        NormedSpace::new(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub basis: Rows,
}

impl SubspaceJson {
    pub fn from_subspace(z: &Subspace) -> Self {
        Self {
            basis: format_rows(z.basis()),
        }
    }

    pub fn to_subspace(&self, ambient_dim: usize, limits: &Limits) -> Result<Subspace> {
        Subspace::new(ambient_dim, limits.parse_rows(&self.basis)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub matrix: Rows,
}

impl OperatorJson {
    pub fn from_matrix(m: &RatMatrix) -> Self {
        Self {
            matrix: format_rows(&m.row_vectors()),
        }
    }

    pub fn to_matrix(&self, rows: usize, cols: usize, limits: &Limits) -> Result<RatMatrix> {
        let parsed = limits.parse_rows(&self.matrix)?;
        if parsed.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: parsed.len(),
            });
        }
        RatMatrix::from_rows_with_cols(parsed, cols)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub split_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceJson {
    pub seed: u64,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    #[serde(rename = "X")]
    pub x: SpaceJson,
    #[serde(rename = "Y")]
    pub y: SpaceJson,
    #[serde(rename = "Z")]
    pub z: SubspaceJson,
    #[serde(rename = "T")]
    pub t: OperatorJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_summand_certificate: Option<CertificateJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceJson>,
}

impl InstanceJson {
    pub fn from_instance(inst: &Instance) -> Self {
        Self {
            x: SpaceJson::from_space(inst.x()),
            y: SpaceJson::from_space(inst.y()),
            z: SubspaceJson::from_subspace(inst.z()),
            t: OperatorJson::from_matrix(inst.t().matrix()),
            m_summand_certificate: inst
                .m_summand_certificate
                .map(|split_dim| CertificateJson { split_dim }),
            provenance: inst.provenance.as_ref().map(|p| ProvenanceJson {
                seed: p.seed,
                kind: p.kind.clone(),
            }),
        }
    }

    pub fn to_instance(&self, limits: &Limits) -> Result<Instance> {
        let x = std::sync::Arc::new(self.x.to_space(limits)?);
        let y = std::sync::Arc::new(self.y.to_space(limits)?);
        let m = self.t.to_matrix(y.dim(), x.dim(), limits)?;
        let z = self.z.to_subspace(y.dim(), limits)?;
        let mut inst = Instance::new(Operator::new(m, x, y)?, z)?;
        inst.m_summand_certificate = self.m_summand_certificate.map(|c| c.split_dim);
        inst.provenance = self.provenance.as_ref().map(|p| Provenance {
            seed: p.seed,
            kind: p.kind.clone(),
        });
        Ok(inst)
    }
}

pub fn instance_to_json(inst: &Instance) -> Value {
    serde_json::to_value(InstanceJson::from_instance(inst)).expect("instance serialises")
}

pub fn instance_from_json(value: &Value, limits: &Limits) -> Result<Instance> {
    let raw: InstanceJson = serde_json::from_value(value.clone())
        .map_err(|e| Error::InvalidInput(format!("instance JSON: {e}")))?;
    raw.to_instance(limits)
}

pub fn space_from_json(value: &Value, limits: &Limits) -> Result<NormedSpace> {
    let raw: SpaceJson = serde_json::from_value(value.clone())
        .map_err(|e| Error::InvalidInput(format!("space JSON: {e}")))?;
    raw.to_space(limits)
}

pub fn rational_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn vector_json(v: &[Rational]) -> Value {
    json!(format_vector(v))
}

pub fn matrix_json(m: &RatMatrix) -> Value {
    json!(format_rows(&m.row_vectors()))
}

pub fn minimax_report_json(r: &MinimaxReport) -> Value {
    json!({
        "op_norm": rational_json(&r.op_norm),
        "d_global": rational_json(&r.d_global),
        "d_local": rational_json(&r.d_local),
        "gap": rational_json(&r.gap),
        "argmax_vertices": format_rows(&r.argmax_vertices),
        "is_T_orthogonal": r.is_t_orthogonal,
        "per_vertex_distances": r.per_vertex_distances.iter().map(|(v, d)| json!({
            "vertex": vector_json(v),
            "distance": rational_json(d),
        })).collect::<Vec<_>>(),
        "best_S": matrix_json(r.best_s.matrix()),
    })
}

fn checks_json(checks: &[Check]) -> Value {
    checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
        .collect()
}

pub fn verification_report_json(r: &VerificationReport) -> Value {
    let w = &r.witnesses;
    json!({
        "theorem": r.theorem.name(),
        "provenance": r.provenance.as_ref().map(|p| json!({"seed": p.seed, "kind": p.kind})),
        "status": r.status.name(),
        "hypothesis_checks": checks_json(&r.hypothesis_checks),
        "conclusion_checks": checks_json(&r.conclusion_checks),
        "witnesses": {
            "x0": w.x0.as_deref().map(vector_json),
            "y0_star": w.y0_star.as_deref().map(vector_json),
            "weights": w.weights.iter().map(rational_json).collect::<Vec<_>>(),
            "pairs": w.pairs.iter().map(|(x, y)| json!({
                "x": vector_json(x),
                "y_star": vector_json(y),
            })).collect::<Vec<_>>(),
        },
        "notes": r.notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_instance, InstanceKind};

    #[test]
    fn instances_round_trip() {
        let limits = Limits::default();
        for kind in InstanceKind::ALL {
            for seed in 1..=5 {
                let inst = generate_instance(kind, seed, 3).unwrap();
                let text = serde_json::to_string(&instance_to_json(&inst)).unwrap();
                let back = instance_from_json(&serde_json::from_str(&text).unwrap(), &limits).unwrap();
                assert_eq!(back, inst);
                assert_eq!(back.m_summand_certificate, inst.m_summand_certificate);
                assert_eq!(back.provenance, inst.provenance);
            }
        }
    }

    #[test]
    fn rationals_are_strings() {
        let v = serde_json::to_string(&SpaceJson {
            kind: SpaceKind::Polyhedral,
            dim: 2,
            facets: Some(vec![vec!["1/2".into(), "0".into()], vec!["0".into(), "1".into()]]),
            vertices: None,
        })
        .unwrap();
        assert_eq!(v, r#"{"kind":"polyhedral","dim":2,"facets":[["1/2","0"],["0","1"]]}"#);
    }

    #[test]
    fn limits_are_enforced() {
        let limits = Limits::default();
        assert!(limits.parse("1/1000000").is_ok());
        assert!(limits.parse("1/1000001").is_err());
        assert!(limits.parse("0.5").is_err());
        let big = json!({"kind": "l1", "dim": 5});
        assert!(space_from_json(&big, &limits).is_err());
        let both = json!({"kind": "polyhedral", "dim": 1, "facets": [["1"]], "vertices": [["1"]]});
        assert!(space_from_json(&both, &limits).is_err());
        let hexagon = json!({"kind": "polyhedral", "dim": 2, "facets": [["1","0"],["0","1"],["1","1"]]});
        assert_eq!(space_from_json(&hexagon, &limits).unwrap().extreme_points().len(), 3);
    }
}
