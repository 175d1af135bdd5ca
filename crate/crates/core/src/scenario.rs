//! Scenario files (`wcalc.scenario/v1`).
//!
//! ```json
//! {
//!   "schema": "wcalc.scenario/v1",
//!   "id": "free-product-c1",
//!   "kind": "reducible",
//!   "synthetic": true,
//!   "presentation": { "factor_orders": [0, 0] },
//!   "alpha1": [[0, 1]],
//!   "alpha2": [[1, 1]],
//!   "coefficients": ["1"]
//! }
//! ```
//!
//! Class vectors are lists of `{"a": [..], "b": [..], "coeff": "p/q"}` terms.
//! Parse failures carry the JSON path together with line and column.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{
    antisymmetry_check, independence_certificate, irreducible_certificate, reducible_certificate, Certificate,
    CurveDatum, IrreducibleInput,
};
use crate::error::Error;
use crate::groupword::{GroupPresentation, Word};
use crate::lattice::Window;
use crate::wspace::WVector;

pub const SCENARIO_SCHEMA: &str = "wcalc.scenario/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Independence,
    Antisymmetry,
    Irreducible,
    Reducible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSpec {
    pub factor_orders: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub id: String,
    pub kind: ScenarioKind,
    /// Marks hand-made class vectors that do not come from an external
    /// computation.
    #[serde(default)]
    pub synthetic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<WVector>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<CurveDatum>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "crate::rational::int_string_vec")]
    pub coefficients: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<Vec<(usize, i64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<Vec<(usize, i64)>>,
}

#[derive(Debug)]
pub enum ScenarioError {
    Io { path: String, message: String },
    Syntax { path: String, line: usize, column: usize, message: String },
    Invalid(Error),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Io { path, message } => write!(f, "cannot read {path}: {message}"),
            ScenarioError::Syntax { path, line, column, message } => {
                write!(f, "line {line}, column {column}, field `{path}`: {message}")
            }
            ScenarioError::Invalid(e) => write!(f, "invalid scenario: {e}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

impl From<Error> for ScenarioError {
    fn from(e: Error) -> Self {
        ScenarioError::Invalid(e)
    }
}

fn invalid(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid(Error::Precondition(msg.into()))
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let s: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ScenarioError::Syntax { path, line: inner.line(), column: inner.column(), message: inner.to_string() }
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScenarioError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Scenario::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Shape checks that do not need any computation.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.schema != SCENARIO_SCHEMA {
            return Err(invalid(format!("schema is {:?}, expected {SCENARIO_SCHEMA:?}", self.schema)));
        }
        match self.kind {
            ScenarioKind::Independence | ScenarioKind::Antisymmetry | ScenarioKind::Irreducible => {
                let w = self.window.ok_or_else(|| invalid("`window` is required for this kind"))?;
                if w.rank == 0 || w.bound < 1 {
                    return Err(invalid("window needs rank >= 1 and bound >= 1"));
                }
                for (i, v) in self.classes.iter().enumerate() {
                    if let Some(p) = v.keys().find(|p| p.rank() != w.rank) {
                        return Err(invalid(format!(
                            "classes[{i}] has rank {} but the window has rank {}",
                            p.rank(),
                            w.rank
                        )));
                    }
                }
            }
            ScenarioKind::Reducible => {
                if self.presentation.is_none() || self.alpha1.is_none() || self.alpha2.is_none() {
                    return Err(invalid("`presentation`, `alpha1` and `alpha2` are required for reducible scenarios"));
                }
            }
        }
        if matches!(self.kind, ScenarioKind::Irreducible | ScenarioKind::Reducible)
            && self.coefficients.iter().all(|&c| c == 0)
        {
            return Err(invalid("at least one nonzero coefficient is required"));
        }
        Ok(())
    }

    /// The window actually used, after an optional bound override.
    pub fn effective_window(&self, bound_override: Option<i64>) -> Option<Window> {
        self.window.map(|w| match bound_override {
            Some(n) => Window::new(w.rank, n),
            None => w,
        })
    }

    pub fn run(&self, bound_override: Option<i64>) -> Result<Certificate, ScenarioError> {
        self.validate()?;
        if bound_override.is_some_and(|n| n < 1) {
            return Err(invalid("window bound must be at least 1"));
        }
        let window = self.effective_window(bound_override);
        let cert = match self.kind {
            ScenarioKind::Independence => independence_certificate(&self.classes, window.unwrap())?,
            ScenarioKind::Antisymmetry => antisymmetry_check(&self.classes, window.unwrap())?,
            ScenarioKind::Irreducible => irreducible_certificate(&IrreducibleInput {
                classes: self.classes.clone(),
                coefficients: self.coefficients.clone(),
                curves: self.curves.clone(),
                window: window.unwrap(),
            })?,
            ScenarioKind::Reducible => {
                let p = GroupPresentation::new(self.presentation.as_ref().unwrap().factor_orders.clone())?;
                let a1: Word = p.word(self.alpha1.as_deref().unwrap())?;
                let a2: Word = p.word(self.alpha2.as_deref().unwrap())?;
                reducible_certificate(&p, &a1, &a2, &self.coefficients)?
            }
        };
        Ok(cert)
    }
}

/// Runs independent scenarios in parallel; results keep the input order.
pub fn run_batch(scenarios: &[Scenario], bound_override: Option<i64>) -> Vec<Result<Certificate, ScenarioError>> {
    scenarios.par_iter().map(|s| s.run(bound_override)).collect()
}
