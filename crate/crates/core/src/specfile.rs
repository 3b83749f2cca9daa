//! JSON scheme files.
//!
//! ```json
//! {
//!   "label": "fat point",
//!   "variables": ["x", "y"],
//!   "ideal": ["x^2", "x*y", "y^2"],
//!   "sections": ["x^2", "x*y", "y^2"],
//!   "point": ["0", 0],
//!   "claimed_embedding_dim": 2,
//!   "expected": { "fulton": [3, 1] }
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{AmbientRing, Rational};
use crate::error::{Error, Result};
use crate::fulton::SchemeSpec;
use crate::groebner::{Ideal, DEFAULT_SPAIR_BUDGET};
use crate::parse::parse_polynomial;
use crate::virtual_sheaf::ObstructionData;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Integer(i64),
    Text(String),
}

/// Values the file asserts, checked by the suite runner.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fulton: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub virtual_chi: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lci: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSpecFile {
    #[serde(default)]
    pub label: Option<String>,
    pub variables: Vec<String>,
    pub ideal: Vec<String>,
    #[serde(default)]
    pub sections: Option<Vec<String>>,
    #[serde(default)]
    pub point: Option<Vec<Coordinate>>,
    #[serde(default)]
    pub claimed_embedding_dim: Option<usize>,
    #[serde(default)]
    pub expected: Option<Expected>,
}

/// A validated scheme file.
#[derive(Debug, Clone)]
pub struct LoadedSpec {
    pub spec: SchemeSpec,
    pub obstruction: Option<ObstructionData>,
    pub expected: Expected,
    pub file: SchemeSpecFile,
}

fn field_error(field: impl Into<String>, err: impl std::fmt::Display) -> Error {
    Error::Validation { field: field.into(), message: err.to_string() }
}

fn parse_coordinate(c: &Coordinate, field: String) -> Result<Rational> {
    match c {
        Coordinate::Integer(n) => Ok(Rational::from_integer((*n).into())),
        Coordinate::Text(s) => s.trim().parse::<Rational>().map_err(|e| field_error(field, e)),
    }
}

/// Parses the JSON text of a scheme file.
pub fn parse_scheme_spec(text: &str, default_label: &str, spair_budget: usize) -> Result<LoadedSpec> {
    let file: SchemeSpecFile = serde_json::from_str(text).map_err(|e| field_error("json", e))?;
    build(file, default_label, spair_budget)
}

/// Reads and validates a scheme file. The label defaults to the file stem.
pub fn load_scheme_spec(path: &Path, spair_budget: usize) -> Result<LoadedSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scheme");
    parse_scheme_spec(&text, stem, spair_budget)
}

pub fn build(file: SchemeSpecFile, default_label: &str, spair_budget: usize) -> Result<LoadedSpec> {
    let ring = AmbientRing::new(file.variables.iter().cloned())
        .map_err(|e| field_error("variables", e))?;
    if file.ideal.is_empty() {
        return Err(field_error("ideal", "at least one generator is required"));
    }
    let gens = file
        .ideal
        .iter()
        .enumerate()
        .map(|(i, g)| parse_polynomial(g, &ring).map_err(|e| field_error(format!("ideal[{i}]"), e)))
        .collect::<Result<Vec<_>>>()?;
    let ideal = Ideal::new(&ring, gens)?.with_spair_budget(spair_budget);
    let label = file.label.clone().unwrap_or_else(|| default_label.to_string());
    let mut spec = SchemeSpec::new(label, ideal);
    if let Some(e) = file.claimed_embedding_dim {
        if e == 0 {
            return Err(field_error("claimed_embedding_dim", "must be positive"));
        }
        spec.claimed_embedding_dim = Some(e);
    }
    if let Some(point) = &file.point {
        let coords = point
            .iter()
            .enumerate()
            .map(|(i, c)| parse_coordinate(c, format!("point[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        spec = spec.with_point(coords).map_err(|e| match e {
            Error::PointArity { .. } | Error::PointNotOnScheme(_) => field_error("point", e),
            other => other,
        })?;
    }
    let obstruction = match &file.sections {
        None => None,
        Some(sections) => {
            let polys = sections
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    parse_polynomial(s, &ring).map_err(|e| field_error(format!("sections[{i}]"), e))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(ObstructionData::new(spec.clone(), polys)?)
        }
    };
    Ok(LoadedSpec { spec, obstruction, expected: file.expected.clone().unwrap_or_default(), file })
}

impl LoadedSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        parse_scheme_spec(text, "scheme", DEFAULT_SPAIR_BUDGET)
    }
}
