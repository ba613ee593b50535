//! Versioned JSON artifacts. Complex numbers are `[re, im]` pairs, keys are
//! emitted in sorted order and floats as shortest round-trip decimals.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hermitian::{c, ComplexMatrix, ComplexVector, HermitianOperator, OperatorBasis};
use crate::report::CheckReport;
use crate::sic::{Fiducial, Provenance};
use crate::structure::{Product, StructureTensor};
use crate::tol;

pub const FIDUCIAL_SCHEMA: &str = "sic-fiducial/1";
pub const BASIS_SCHEMA: &str = "hermitian-basis/1";
pub const LIE_SCHEMA: &str = "lie-structure/1";
pub const JORDAN_SCHEMA: &str = "jordan-structure/1";
pub const REPORT_SCHEMA: &str = "report/1";

/// Pretty JSON with keys sorted at every level and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v: Value = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn parse_with_schema<T: DeserializeOwned>(text: &str, schema: &str) -> Result<T> {
    let v: Value = serde_json::from_str(text)?;
    match v.get("schema").and_then(Value::as_str) {
        Some(s) if s == schema => Ok(serde_json::from_value(v)?),
        Some(s) => Err(Error::Schema(format!("expected {schema}, found {s}"))),
        None => Err(Error::Schema(format!("missing schema field, expected {schema}"))),
    }
}

fn pairs(v: impl Iterator<Item = num_complex::Complex64>) -> Vec<[f64; 2]> {
    v.map(|z| [z.re, z.im]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiducialFile {
    pub schema: String,
    pub dimension: usize,
    pub vector: Vec<[f64; 2]>,
    pub provenance: Provenance,
    pub frame_potential: f64,
    pub max_fidelity_error: f64,
}

impl FiducialFile {
    pub fn new(f: &Fiducial, frame_potential: f64, max_fidelity_error: f64) -> Self {
        FiducialFile {
            schema: FIDUCIAL_SCHEMA.into(),
            dimension: f.dim(),
            vector: pairs(f.vector.iter().copied()),
            provenance: f.provenance.clone(),
            frame_potential,
            max_fidelity_error,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: FiducialFile = parse_with_schema(text, FIDUCIAL_SCHEMA)?;
        if f.vector.len() != f.dimension {
            return Err(Error::DimensionMismatch { expected: f.dimension, found: f.vector.len() });
        }
        Ok(f)
    }

    pub fn fiducial(&self) -> Result<Fiducial> {
        let v = ComplexVector::from_iterator(self.dimension, self.vector.iter().map(|p| c(p[0], p[1])));
        Fiducial::new(v, self.provenance.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisFile {
    pub schema: String,
    pub dimension: usize,
    /// One row-major list of `d²` entries per operator.
    pub operators: Vec<Vec<[f64; 2]>>,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, Value>,
}

impl BasisFile {
    pub fn new(basis: &OperatorBasis, labels: Option<Vec<String>>) -> Self {
        let d = basis.dim();
        let operators = basis
            .operators()
            .iter()
            .map(|op| {
                let m = op.matrix();
                pairs((0..d).flat_map(|r| (0..d).map(move |k| m[(r, k)])))
            })
            .collect();
        let labels = labels.unwrap_or_else(|| (0..basis.len()).map(|j| format!("L{j}")).collect());
        BasisFile {
            schema: BASIS_SCHEMA.into(),
            dimension: d,
            operators,
            labels,
            construction: None,
            parameters: BTreeMap::new(),
        }
    }

    pub fn with_construction(mut self, name: &str, parameters: BTreeMap<String, Value>) -> Self {
        self.construction = Some(name.into());
        self.parameters = parameters;
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        let b: BasisFile = parse_with_schema(text, BASIS_SCHEMA)?;
        let d = b.dimension;
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        for op in &b.operators {
            if op.len() != d * d {
                return Err(Error::DimensionMismatch { expected: d * d, found: op.len() });
            }
        }
        if b.labels.len() != b.operators.len() {
            return Err(Error::WrongCount { expected: b.operators.len(), found: b.labels.len() });
        }
        Ok(b)
    }

    /// Operators, rejecting entries that are not Hermitian to [`tol::HERMITICITY`]
    /// (relative to the largest entry).
    pub fn operators(&self) -> Result<Vec<HermitianOperator>> {
        let d = self.dimension;
        self.operators
            .iter()
            .map(|flat| {
                let m = ComplexMatrix::from_fn(d, d, |r, k| c(flat[r * d + k][0], flat[r * d + k][1]));
                let scale = crate::hermitian::max_abs(&m).max(1.0);
                HermitianOperator::strict(m, tol::HERMITICITY * scale)
            })
            .collect()
    }

    pub fn basis(&self) -> Result<OperatorBasis> {
        OperatorBasis::new(self.operators()?)
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }
}

/// Sparse structure constants `(j, k, l, value)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureFile {
    pub schema: String,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag_constants: Option<Vec<(usize, usize, usize, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub real_constants: Option<Vec<(usize, usize, usize, f64)>>,
}

impl StructureFile {
    /// Imaginary parts for the commutator, real parts for the anticommutator.
    pub fn new(s: &StructureTensor) -> Self {
        match s.product {
            Product::Commutator => StructureFile {
                schema: LIE_SCHEMA.into(),
                dimension: s.dim,
                imag_constants: Some(s.sparse(tol::SPARSE_EXPORT, true)),
                real_constants: None,
            },
            Product::Anticommutator => StructureFile {
                schema: JORDAN_SCHEMA.into(),
                dimension: s.dim,
                imag_constants: None,
                real_constants: Some(s.sparse(tol::SPARSE_EXPORT, false)),
            },
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub schema: String,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub config: Value,
    pub reports: Vec<CheckReport>,
    /// AND of member passes.
    pub overall: bool,
}

impl ReportBundle {
    pub fn new(config: Value, reports: Vec<CheckReport>) -> Self {
        let overall = !reports.is_empty() && reports.iter().all(|r| r.pass);
        ReportBundle {
            schema: REPORT_SCHEMA.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            timestamp: None,
            config,
            reports,
            overall,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_with_schema(text, REPORT_SCHEMA)
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::gell_mann_basis;
    use crate::lie::lie_structure;
    use crate::sic::Fiducial;

    #[test]
    fn fiducial_round_trip() {
        let f = Fiducial::hesse_d3();
        let text = FiducialFile::new(&f, 1.5, 1e-16).to_json().unwrap();
        let parsed = FiducialFile::parse(&text).unwrap();
        assert_eq!(parsed.to_json().unwrap(), text);
        assert_eq!(parsed.fiducial().unwrap(), f);
        assert!(text.contains("\"schema\": \"sic-fiducial/1\""));
    }

    #[test]
    fn basis_round_trip_and_validation() {
        let b = gell_mann_basis(2);
        let mut params = BTreeMap::new();
        params.insert("epsilon".to_string(), Value::from(1));
        let file = BasisFile::new(&b, None).with_construction("gell-mann", params);
        let text = file.to_json().unwrap();
        let parsed = BasisFile::parse(&text).unwrap();
        assert_eq!(parsed.to_json().unwrap(), text);
        assert_eq!(parsed.basis().unwrap(), b);
        assert!(matches!(FiducialFile::parse(&text), Err(Error::Schema(_))));
        let mut bad = file.clone();
        bad.operators[1][1] = [0.5, 0.0];
        assert!(bad.basis().is_err());
    }

    #[test]
    fn keys_are_sorted() {
        let text = ReportBundle::new(Value::Null, vec![CheckReport::new("x").finish(true)]).to_json().unwrap();
        let top: Vec<&str> = text.lines().filter(|l| l.starts_with("  \"")).collect();
        let mut sorted = top.clone();
        sorted.sort();
        assert_eq!(top, sorted);
    }

    #[test]
    fn lie_export() {
        let file = StructureFile::new(&lie_structure(&gell_mann_basis(2)).unwrap());
        let consts = file.imag_constants.as_ref().unwrap();
        assert_eq!(consts.len(), 6);
        assert!(consts.iter().all(|t| (t.3.abs() - 2f64.sqrt()).abs() < 1e-12));
        let text = file.to_json().unwrap();
        assert!(text.contains("lie-structure/1") && !text.contains("real_constants"));
    }
}
