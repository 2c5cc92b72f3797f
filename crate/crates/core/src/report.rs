//! Check records and per-suite verification reports.

use serde::{Deserialize, Serialize};

/// How `measured` is compared against `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// passes iff `measured ≤ tolerance`
    AtMost,
    /// passes iff `measured ≥ tolerance`
    AtLeast,
    /// passes iff `measured > tolerance`
    Above,
    /// recorded only; never fails the run
    ReportOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// Which statement the check exercises, in words.
    pub anchor: String,
    pub measured: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub passed: bool,
    pub asserting: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

impl CheckRecord {
    fn new(name: &str, anchor: &str, measured: f64, tolerance: f64, relation: Relation) -> Self {
        let finite = measured.is_finite();
        let passed = finite
            && match relation {
            Relation::AtMost => measured <= tolerance,
            Relation::AtLeast => measured >= tolerance,
            Relation::Above => measured > tolerance,
                Relation::ReportOnly => true,
            };
        CheckRecord {
            name: name.to_string(),
            anchor: anchor.to_string(),
            // JSON has no NaN or infinity
            measured: if finite { measured } else { f64::MAX },
            tolerance,
            relation,
            passed,
            asserting: relation != Relation::ReportOnly,
            notes: if finite { String::new() } else { format!("non-finite measurement {measured}") },
        }
    }

    pub fn at_most(name: &str, anchor: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(name, anchor, measured, tolerance, Relation::AtMost)
    }

    pub fn at_least(name: &str, anchor: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(name, anchor, measured, tolerance, Relation::AtLeast)
    }

    pub fn above(name: &str, anchor: &str, measured: f64, tolerance: f64) -> Self {
        Self::new(name, anchor, measured, tolerance, Relation::Above)
    }

    /// A boolean outcome stored as measured 1 (true) or 0 (false), required to be 1.
    pub fn holds(name: &str, anchor: &str, ok: bool) -> Self {
        Self::new(name, anchor, if ok { 1.0 } else { 0.0 }, 1.0, Relation::AtLeast)
    }

    pub fn report_only(name: &str, anchor: &str, measured: f64) -> Self {
        Self::new(name, anchor, measured, 0.0, Relation::ReportOnly)
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: serde_json::Value,
    pub checks: Vec<CheckRecord>,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn new(suite: &str, params: serde_json::Value) -> Self {
        VerificationReport { suite: suite.to_string(), params, checks: Vec::new(), wall_time_ms: 0 }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.checks.push(check);
    }

    /// Appends another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for mut check in other.checks {
            check.name = format!("{prefix}{}", check.name);
            self.checks.push(check);
        }
    }

    /// Merges another report into this one by check name, keeping the
    /// least favourable measurement; unseen names are appended in order.
    pub fn fold_worst(&mut self, other: VerificationReport) {
        for check in other.checks {
            match self.checks.iter_mut().find(|c| c.name == check.name) {
                None => self.checks.push(check),
                Some(existing) => {
                    let worse = match check.relation {
                        Relation::AtMost | Relation::ReportOnly => check.measured > existing.measured,
                        Relation::AtLeast | Relation::Above => check.measured < existing.measured,
                    };
                    if worse || (!check.passed && existing.passed) {
                        *existing = check;
                    }
                }
            }
        }
    }

    /// Conjunction of all asserting checks.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.asserting || c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.asserting && !c.passed)
    }

    pub fn find(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Largest measured value over asserting checks whose name contains `pattern`.
    pub fn max_measured(&self, pattern: &str) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.name.contains(pattern))
            .map(|c| c.measured)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_measured(&self, pattern: &str) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.name.contains(pattern))
            .map(|c| c.measured)
            .fold(f64::INFINITY, f64::min)
    }
}
