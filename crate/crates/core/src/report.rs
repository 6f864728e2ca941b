//! Machine-readable verification results.

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::rational::{self, Q};

/// A measured deviation: exact, or a float from an approximate check.
#[derive(Clone, Debug, PartialEq)]
pub enum Deviation {
    Exact(Q),
    Float(f64),
}

impl Deviation {
    pub fn as_f64(&self) -> f64 {
        match self {
            Deviation::Exact(q) => rational::to_f64(q),
            Deviation::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Deviation::Exact(q) => q.is_zero(),
            Deviation::Float(x) => *x == 0.0,
        }
    }
}

impl Serialize for Deviation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Deviation::Exact(q) => s.serialize_str(&rational::format(q)),
            Deviation::Float(x) => s.serialize_f64(*x),
        }
    }
}

/// One line of a verification report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    /// Short name of the statement the check exercises.
    pub anchor: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    pub deviation: Deviation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub passed: bool,
}

impl CheckReport {
    /// An exact check passes iff its deviation is zero.
    pub fn exact(check: impl Into<String>, anchor: &'static str, level: Option<usize>, deviation: Q) -> Self {
        let passed = deviation.is_zero();
        CheckReport { check: check.into(), anchor, level, deviation: Deviation::Exact(deviation), witness: None, passed }
    }

    /// A float check passes iff its deviation is at most `tol`.
    pub fn within(check: impl Into<String>, anchor: &'static str, level: Option<usize>, deviation: f64, tol: f64) -> Self {
        CheckReport {
            check: check.into(),
            anchor,
            level,
            deviation: Deviation::Float(deviation),
            witness: None,
            passed: deviation <= tol,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
