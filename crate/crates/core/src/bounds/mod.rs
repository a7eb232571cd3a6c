//! Explicit total-variation bounds for ties at the maximum.

use std::collections::BTreeMap;

use serde::Serialize;

pub mod continuous;
pub mod discrete;

pub use continuous::*;
pub use discrete::*;

/// A bound together with the parameters and moments it was built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound: f64,
    pub params: BTreeMap<String, f64>,
    pub moments: BTreeMap<String, f64>,
    pub truncation_error: f64,
    pub informative: bool,
}

impl BoundReport {
    pub(crate) fn new(bound: f64) -> Self {
        BoundReport {
            bound,
            params: BTreeMap::new(),
            moments: BTreeMap::new(),
            truncation_error: 0.0,
            informative: bound < 1.0,
        }
    }

    pub(crate) fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_owned(), value);
        self
    }

    pub(crate) fn moment(mut self, name: &str, value: f64) -> Self {
        self.moments.insert(name.to_owned(), value);
        self
    }

    pub(crate) fn with_error(mut self, error: f64) -> Self {
        self.truncation_error = error;
        self
    }

    /// Parameter by name (`alpha`, `beta`, `lambda`, `ell`, ...).
    pub fn get(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }
}

pub(crate) fn check_finite(name: &str, value: f64) -> crate::Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(crate::Error::numeric(format!("{name} evaluated to {value}")))
    }
}
