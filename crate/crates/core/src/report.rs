//! Pass/fail reports for identity suites. Each checked identity appears
//! exactly once, in a fixed order, with the first failing basis witness.

use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a check; `witness` is `None` on pass.
    pub fn record(&mut self, id: &str, witness: Option<String>) {
        self.checks.push(Check {
            id: id.to_string(),
            passed: witness.is_none(),
            witness,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.passed {
                writeln!(f, "{}: PASS", c.id)?;
            } else {
                writeln!(
                    f,
                    "{}: FAIL ({})",
                    c.id,
                    c.witness.as_deref().unwrap_or("no witness")
                )?;
            }
        }
        Ok(())
    }
}
