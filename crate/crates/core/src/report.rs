//! Machine-readable records of checked inequalities.

use alloc::string::String;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// How `lhs` is compared with `rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs <= rhs + tolerance`
    Le,
    /// `lhs >= rhs - tolerance`
    Ge,
    /// `|lhs - rhs| <= tolerance`
    Eq,
    /// `|lhs - rhs| <= tolerance·|rhs|`
    RelEq,
}

/// A named correction term that was allowed for in the comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slack {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    /// The statement being checked, in words.
    pub anchor: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    /// Signed distance to violation; negative means violated.
    pub margin: f64,
    pub tolerance: f64,
    pub status: Status,
    pub slack: Vec<Slack>,
    pub samples: u64,
    pub note: String,
}

impl VerificationReport {
    pub fn compare(
        check: impl Into<String>,
        anchor: impl Into<String>,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        tolerance: f64,
    ) -> Self {
        let margin = match relation {
            Relation::Le => rhs - lhs,
            Relation::Ge => lhs - rhs,
            Relation::Eq => tolerance - (lhs - rhs).abs(),
            Relation::RelEq => tolerance * rhs.abs() - (lhs - rhs).abs(),
        };
        let status = if margin.is_nan() {
            Status::Inconclusive
        } else {
            let ok = match relation {
                Relation::Le | Relation::Ge => margin >= -tolerance,
                Relation::Eq | Relation::RelEq => margin >= 0.0,
            };
            if ok {
                Status::Pass
            } else {
                Status::Fail
            }
        };
        Self {
            check: check.into(),
            anchor: anchor.into(),
            relation,
            lhs,
            rhs,
            margin,
            tolerance,
            status,
            slack: Vec::new(),
            samples: 0,
            note: String::new(),
        }
    }

    /// Record for a check that could not be decided.
    pub fn inconclusive(
        check: impl Into<String>,
        anchor: impl Into<String>,
        note: impl Into<String>,
    ) -> Self {
        Self {
            check: check.into(),
            anchor: anchor.into(),
            relation: Relation::Eq,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            tolerance: 0.0,
            status: Status::Inconclusive,
            slack: Vec::new(),
            samples: 0,
            note: note.into(),
        }
    }

    /// Boolean check without a numeric comparison.
    pub fn flag(
        check: impl Into<String>,
        anchor: impl Into<String>,
        ok: bool,
        note: impl Into<String>,
    ) -> Self {
        let mut r = Self::compare(
            check,
            anchor,
            if ok { 1.0 } else { 0.0 },
            Relation::Eq,
            1.0,
            0.0,
        );
        r.note = note.into();
        r
    }

    pub fn with_slack(mut self, name: impl Into<String>, value: f64) -> Self {
        self.slack.push(Slack {
            name: name.into(),
            value,
        });
        self
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Downgrade a pass to inconclusive (never upgrades, never merges with fail).
    pub fn mark_inconclusive(mut self, note: impl Into<String>) -> Self {
        if self.status == Status::Pass {
            self.status = Status::Inconclusive;
        }
        self.note = note.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl Tally {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut t = Tally::default();
        for r in reports {
            t.add(r.status);
        }
        t
    }

    pub fn add(&mut self, s: Status) {
        match s {
            Status::Pass => self.pass += 1,
            Status::Fail => self.fail += 1,
            Status::Inconclusive => self.inconclusive += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparison_semantics() {
        assert_eq!(
            VerificationReport::compare("a", "", 1.0, Relation::Le, 2.0, 0.0).status,
            Status::Pass
        );
        assert_eq!(
            VerificationReport::compare("a", "", 2.0, Relation::Le, 1.0, 0.0).status,
            Status::Fail
        );
        assert_eq!(
            VerificationReport::compare("a", "", 1.0 - 1e-9, Relation::Ge, 1.0, 1e-6).status,
            Status::Pass
        );
        assert_eq!(
            VerificationReport::compare("a", "", f64::NAN, Relation::Ge, 1.0, 1e-6).status,
            Status::Inconclusive
        );
        assert_eq!(
            VerificationReport::compare("a", "", 1.0, Relation::RelEq, 1.0 + 1e-10, 1e-9).status,
            Status::Pass
        );
        let f = VerificationReport::compare("a", "", 2.0, Relation::Le, 1.0, 0.0)
            .mark_inconclusive("x");
        assert_eq!(f.status, Status::Fail);
    }
}
