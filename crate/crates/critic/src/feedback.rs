//! Corrective feedback: one entry per invalid step, rendered from a fixed
//! template so a solution generator can be re-prompted with concrete reasons.

use std::fmt;

use mathstep_core::{Counterexample, Verdict};
use serde::{Deserialize, Serialize};

use crate::report::{Report, StepVerdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Feedback {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_text: Option<String>,
    pub formula: String,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub suggestion: String,
}

/// One feedback entry per Invalid verdict, in statement-id order.
pub fn make_feedback(report: &Report) -> Vec<Feedback> {
    report
        .verdicts
        .iter()
        .filter_map(|step| {
            let Verdict::Invalid { reason, counterexample } = &step.verdict else {
                return None;
            };
            Some(Feedback {
                id: step.id,
                source_text: step.source_text.clone(),
                formula: step.formula.clone(),
                reason: reason.clone(),
                counterexample: counterexample.clone(),
                suggestion: suggestion_for(step, counterexample.as_ref()),
            })
        })
        .collect()
}

fn suggestion_for(step: &StepVerdict, counterexample: Option<&Counterexample>) -> String {
    let cited = if step.premises.is_empty() {
        "it cites no earlier statements, so the claim must hold on its own".to_string()
    } else {
        let ids =
            step.premises.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
        format!("make sure it actually follows from the cited statements ({ids})")
    };
    let mut suggestion =
        format!("Redo this step; {cited}. Fix the computation or adjust what it relies on.");
    if let Some(cex) = counterexample {
        if !cex.assignment.is_empty() {
            suggestion.push_str(&format!(" Check the values at {}.", pairs(&cex.assignment)));
        }
    }
    suggestion
}

fn pairs(map: &std::collections::BTreeMap<String, String>) -> String {
    map.iter().map(|(k, v)| format!("{k} = {v}")).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Feedback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source_text {
            Some(text) => writeln!(f, "Step {} (\"{}\") is wrong.", self.id, text)?,
            None => writeln!(f, "Step {} is wrong.", self.id)?,
        }
        writeln!(f, "  Formalized claim: {}", self.formula)?;
        writeln!(f, "  Why it fails: {}", self.reason)?;
        if let Some(cex) = &self.counterexample {
            if !cex.assignment.is_empty() {
                writeln!(f, "  Counterexample: {}", pairs(&cex.assignment))?;
            }
            if !cex.observed.is_empty() {
                writeln!(f, "  Observed values: {}", pairs(&cex.observed))?;
            }
        }
        write!(f, "  Suggestion: {}", self.suggestion)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{Overall, REPORT_SCHEMA_VERSION};
    use crate::route::Route;
    use mathstep_core::CostMetrics;

    fn report_with(steps: Vec<StepVerdict>) -> Report {
        let overall = Overall::of(&steps);
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            overall,
            verdicts: steps,
            cost: CostMetrics { statements: 0, dense_cost: 0, sparse_cost: 0, max_in_degree: 0 },
            premise_statements_submitted: 0,
            corollaries: Vec::new(),
            trusted_theorems: Vec::new(),
        }
    }

    fn step(id: usize, verdict: Verdict) -> StepVerdict {
        StepVerdict {
            id,
            source_text: Some(format!("step {id}")),
            formula: format!("claim_{id}"),
            premises: vec![0, 1],
            route: Route::Arithmetic,
            verdict,
        }
    }

    #[test]
    fn all_valid_report_yields_no_feedback() {
        let report = report_with(vec![step(2, Verdict::valid("eval", "checked"))]);
        assert!(make_feedback(&report).is_empty());
    }

    #[test]
    fn two_invalids_come_back_in_id_order() {
        let report = report_with(vec![
            step(2, Verdict::invalid("first wrong", None)),
            step(3, Verdict::valid("cas", "fine")),
            step(5, Verdict::invalid("second wrong", None)),
        ]);
        let feedback = make_feedback(&report);
        assert_eq!(feedback.len(), 2);
        assert_eq!(feedback[0].id, 2);
        assert_eq!(feedback[1].id, 5);
        assert_eq!(feedback[0].reason, "first wrong");
    }

    #[test]
    fn rendered_feedback_embeds_source_text_reason_and_witness() {
        let mut cex = Counterexample::default();
        cex.assignment.insert("x".into(), "3/2".into());
        cex.observed.insert("x^2".into(), "9/4".into());
        let report = report_with(vec![step(4, Verdict::invalid("does not follow", Some(cex)))]);
        let feedback = make_feedback(&report);
        let text = feedback[0].to_string();
        assert!(text.contains("step 4"), "{text}");
        assert!(text.contains("claim_4"), "{text}");
        assert!(text.contains("does not follow"), "{text}");
        assert!(text.contains("x = 3/2"), "{text}");
        assert!(text.contains("x^2 = 9/4"), "{text}");
        assert!(feedback[0].suggestion.contains("0, 1"), "{}", feedback[0].suggestion);
    }
}
