//! The context-level verification report: one verdict per CONCLUSION
//! statement plus the aggregate status, cost echo, and corollaries.
//!
//! JSON schema, version 1:
//!   schema_version                 integer, this format's version
//!   overall.status                 "all_valid" | "has_invalid" | "inconclusive"
//!   overall.first_failing_id       present only for has_invalid
//!   verdicts[]                     per-judgment entries, ascending statement id
//!     .id                          conclusion statement id
//!     .source_text                 the informal step text, when recorded
//!     .formula                     the formal claim, printed
//!     .premises[]                  cited statement ids
//!     .route                       "arithmetic" | "algebraic" | "logical"
//!     .verdict.status              "valid" | "invalid" | "unknown"
//!     .verdict.tool / .evidence    for valid
//!     .verdict.reason / .counterexample   for invalid (counterexample optional)
//!     .verdict.reason              for unknown
//!   cost                           statement count, dense/sparse premise totals, max in-degree
//!   premise_statements_submitted   premise statements handed to tools (= cost.sparse_cost)
//!   corollaries[]                  conclusions restated over foundational premises only
//!   trusted_theorems[]             THEOREM statement ids accepted without verification

use mathstep_core::{Corollary, CostMetrics, Verdict};
use serde::{Deserialize, Serialize};

use crate::route::Route;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Overall {
    AllValid,
    HasInvalid { first_failing_id: usize },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepVerdict {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_text: Option<String>,
    pub formula: String,
    pub premises: Vec<usize>,
    pub route: Route,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub overall: Overall,
    pub verdicts: Vec<StepVerdict>,
    pub cost: CostMetrics,
    pub premise_statements_submitted: u64,
    pub corollaries: Vec<Corollary>,
    pub trusted_theorems: Vec<usize>,
}

impl Overall {
    /// Derive the aggregate from per-step verdicts (assumed id-ordered):
    /// any Invalid wins (earliest id reported), then any Unknown, else all
    /// valid.
    pub fn of(steps: &[StepVerdict]) -> Overall {
        if let Some(step) = steps.iter().find(|s| s.verdict.is_invalid()) {
            return Overall::HasInvalid { first_failing_id: step.id };
        }
        if steps.iter().any(|s| s.verdict.is_unknown()) {
            return Overall::Inconclusive;
        }
        Overall::AllValid
    }
}

impl Report {
    pub fn is_all_valid(&self) -> bool {
        self.overall == Overall::AllValid
    }

    pub fn first_failing_id(&self) -> Option<usize> {
        match self.overall {
            Overall::HasInvalid { first_failing_id } => Some(first_failing_id),
            _ => None,
        }
    }

    /// Exit-status contract for command-line consumers.
    pub fn exit_code(&self) -> i32 {
        match self.overall {
            Overall::AllValid => 0,
            Overall::HasInvalid { .. } => 1,
            Overall::Inconclusive => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(id: usize, verdict: Verdict) -> StepVerdict {
        StepVerdict {
            id,
            source_text: None,
            formula: "x = x".to_string(),
            premises: Vec::new(),
            route: Route::Algebraic,
            verdict,
        }
    }

    #[test]
    fn overall_prefers_the_earliest_invalid() {
        let steps = [
            step(2, Verdict::valid("cas", "ok")),
            step(3, Verdict::invalid("wrong", None)),
            step(5, Verdict::unknown("gave up")),
            step(7, Verdict::invalid("also wrong", None)),
        ];
        assert_eq!(Overall::of(&steps), Overall::HasInvalid { first_failing_id: 3 });
    }

    #[test]
    fn unknown_without_invalid_is_inconclusive_and_exit_2() {
        let steps = [step(0, Verdict::valid("eval", "ok")), step(1, Verdict::unknown("timeout"))];
        let overall = Overall::of(&steps);
        assert_eq!(overall, Overall::Inconclusive);
        let report = Report {
            schema_version: REPORT_SCHEMA_VERSION,
            overall,
            verdicts: steps.to_vec(),
            cost: mathstep_core::CostMetrics {
                statements: 2,
                dense_cost: 3,
                sparse_cost: 0,
                max_in_degree: 0,
            },
            premise_statements_submitted: 0,
            corollaries: Vec::new(),
            trusted_theorems: Vec::new(),
        };
        assert_eq!(report.exit_code(), 2);
    }

    #[test]
    fn empty_step_list_is_all_valid() {
        assert_eq!(Overall::of(&[]), Overall::AllValid);
    }

    #[test]
    fn report_json_round_trips() {
        let report = Report {
            schema_version: REPORT_SCHEMA_VERSION,
            overall: Overall::HasInvalid { first_failing_id: 4 },
            verdicts: vec![step(4, Verdict::invalid("off by one", None))],
            cost: mathstep_core::CostMetrics {
                statements: 5,
                dense_cost: 15,
                sparse_cost: 4,
                max_in_degree: 2,
            },
            premise_statements_submitted: 4,
            corollaries: Vec::new(),
            trusted_theorems: vec![1],
        };
        let json = report.to_json();
        assert!(json.contains("\"status\": \"has_invalid\""), "{json}");
        assert!(json.contains("\"first_failing_id\": 4"), "{json}");
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
