use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The affine ambient space: an ordered list of distinct variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmbientRing {
    variables: Vec<String>,
}

impl AmbientRing {
    pub fn new<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        if variables.is_empty() {
            return Err(Error::InvalidRing("at least one variable is required".into()));
        }
        let mut seen = HashSet::new();
        for v in &variables {
            if !is_identifier(v) {
                return Err(Error::InvalidRing(format!("bad variable name `{v}`")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(AmbientRing { variables }))
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// A name not yet used in this ring, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        if self.index_of(base).is_none() {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|n| self.index_of(n).is_none())
            .unwrap()
    }

    /// This ring with extra variables appended.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Arc<Self>> {
        AmbientRing::new(
            self.variables
                .iter()
                .cloned()
                .chain(extra.iter().map(|s| s.as_ref().to_string())),
        )
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
