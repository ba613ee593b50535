use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Constants block attached to reports that fit a frame superoperator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRecord {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Named verification outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    #[serde(default)]
    pub residuals: BTreeMap<String, f64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantsRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub verdicts: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            pass: false,
            residuals: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            constants: None,
            verdicts: BTreeMap::new(),
            values: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    /// Records a residual with its tolerance and returns whether it is within it.
    pub fn residual(&mut self, key: &str, value: f64, tol: f64) -> bool {
        self.residuals.insert(key.to_string(), value);
        self.tolerances.insert(key.to_string(), tol);
        value <= tol
    }

    pub fn verdict(&mut self, key: &str, ok: bool) -> bool {
        self.verdicts.insert(key.to_string(), ok);
        ok
    }

    pub fn value(&mut self, key: &str, v: f64) {
        self.values.insert(key.to_string(), v);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn finish(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}
