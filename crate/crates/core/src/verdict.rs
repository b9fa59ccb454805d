//! Shared verdict vocabulary for every checking tool.
//!
//! A verdict is only ever produced by a tool that can stand behind it:
//! `Valid` names the tool and carries an evidence artifact, `Invalid` carries
//! a human-readable reason and, when one can be replayed through exact
//! evaluation, a structured counterexample. Anything a tool cannot decide is
//! `Unknown` with the reason it gave up.

use std::collections::BTreeMap;

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::ast::format_rational;

/// A concrete assignment under which all premises hold and the conclusion
/// fails. Values are exact rationals rendered as `num/den` strings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub assignment: BTreeMap<String, String>,
    /// Evaluated values of interesting subterms, e.g. both sides of the
    /// refuted equation, keyed by their printed form.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observed: BTreeMap<String, String>,
}

impl Counterexample {
    pub fn from_assignment(assignment: &BTreeMap<String, BigRational>) -> Counterexample {
        Counterexample {
            assignment: assignment
                .iter()
                .map(|(k, v)| (k.clone(), format_rational(v)))
                .collect(),
            observed: BTreeMap::new(),
        }
    }

    pub fn observe(&mut self, what: impl Into<String>, value: &BigRational) {
        self.observed.insert(what.into(), format_rational(value));
    }

    /// Parse the assignment back into exact rationals (for replay).
    pub fn rational_assignment(&self) -> Option<BTreeMap<String, BigRational>> {
        self.assignment
            .iter()
            .map(|(k, v)| crate::ast::parse_rational(v).ok().map(|r| (k.clone(), r)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Valid {
        /// Which tool established validity (`cas`, `eval`, `smt`, ...).
        tool: String,
        /// Evidence artifact: a normal form, a computed value, a script hash.
        evidence: String,
    },
    Invalid {
        reason: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        counterexample: Option<Counterexample>,
    },
    Unknown {
        reason: String,
    },
}

impl Verdict {
    pub fn valid(tool: impl Into<String>, evidence: impl Into<String>) -> Verdict {
        Verdict::Valid { tool: tool.into(), evidence: evidence.into() }
    }

    pub fn invalid(reason: impl Into<String>, counterexample: Option<Counterexample>) -> Verdict {
        Verdict::Invalid { reason: reason.into(), counterexample }
    }

    pub fn unknown(reason: impl Into<String>) -> Verdict {
        Verdict::Unknown { reason: reason.into() }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }
}
