use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Achieved error or measured quantity.
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), pass: value <= tolerance, value, tolerance }
    }

    pub fn flag(name: impl Into<String>, pass: bool, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), pass, value, tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub params: Value,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}
