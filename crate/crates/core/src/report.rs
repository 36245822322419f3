//! Pass/fail reports shared by the gauge checks, samplers and probes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::h1::H1Point;

/// Inputs that reproduce the worst measured value of a check.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<H1Point>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scalars: Vec<f64>,
}

impl Witness {
    pub fn points(points: Vec<H1Point>) -> Self {
        Witness { points, scalars: Vec::new() }
    }

    pub fn scalars(scalars: Vec<f64>) -> Self {
        Witness { points: Vec::new(), scalars }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.scalars.is_empty()
    }
}

/// One verified property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    /// Worst measured violation, in the units the tolerance is stated in.
    pub worst: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Witness::is_empty")]
    pub witness: Witness,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Check {
    /// A check that passes iff `worst <= tolerance`.
    pub fn bounded(name: impl Into<String>, samples: usize, worst: f64, tolerance: f64, witness: Witness) -> Self {
        Check {
            name: name.into(),
            passed: worst <= tolerance,
            samples,
            worst,
            tolerance,
            witness,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport { subject: subject.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    /// CSV rendering with one row per check.
    pub fn to_table(&self) -> String {
        let mut out = String::from("check,passed,samples,worst,tolerance,witness\n");
        for c in &self.checks {
            let mut witness: Vec<String> = c.witness.points.iter().map(|p| format!("{} {} {}", p.x[0], p.x[1], p.xbar)).collect();
            witness.extend(c.witness.scalars.iter().map(|s| s.to_string()));
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.name,
                c.passed,
                c.samples,
                c.worst,
                c.tolerance,
                witness.join(";")
            ));
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            write!(
                f,
                "  [{}] {:<48} worst={:e} tol={:e} n={}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.worst,
                c.tolerance,
                c.samples
            )?;
            if !c.passed && !c.witness.is_empty() {
                write!(f, " witness={:?}", c.witness)?;
            }
            if !c.note.is_empty() {
                write!(f, " ({})", c.note)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
