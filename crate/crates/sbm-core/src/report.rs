//! Structured pass/fail records tying numerical experiments to the
//! statements they exercise.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Outcome of one verification experiment. `constants` holds the fitted or
/// measured quantities standing in for the nonconstructive constants of the
/// statement being tested; `pass` is a pure function of those constants, the
/// tolerances and the recorded standard errors.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct VerificationReport {
    pub theorem_tag: String,
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub domain: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub r_grid: Vec<f64>,
    #[serde(rename = "C_emp", skip_serializing_if = "Vec::is_empty", default)]
    pub c_emp: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub slope: Option<f64>,
    pub constants: BTreeMap<String, f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mc_se: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl VerificationReport {
    pub fn new(theorem_tag: &str, family: String) -> VerificationReport {
        VerificationReport {
            theorem_tag: theorem_tag.to_string(),
            family,
            domain: None,
            r_grid: Vec::new(),
            c_emp: Vec::new(),
            slope: None,
            constants: BTreeMap::new(),
            pass: false,
            mc_se: None,
            warnings: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: f64) -> &mut Self {
        self.constants.insert(key.to_string(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.constants.get(key).copied()
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }
}

/// Per-assumption numerical check on a subordinator model.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct AssumptionReport {
    pub assumption: String,
    pub grid: String,
    pub constant: f64,
    pub pass: bool,
}
