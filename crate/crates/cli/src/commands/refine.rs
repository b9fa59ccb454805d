//! The generate → formalize → verify → feedback loop.
//!
//! Each iteration asks the generator for a solution, formalizes it, and
//! verifies every step. On a clean report the loop stops; otherwise the
//! verifier's feedback is folded into the next prompt. A solution the
//! formalizer cannot translate still consumes an iteration and draws a
//! generic "write checkable steps" prompt, so the loop always terminates
//! after at most `max_iter` generator calls.

use std::path::Path;

use serde::{Deserialize, Serialize};

use mathstep_critic::{make_feedback, Critic, Report};
use mathstep_llm::{
    formalize, ChatEndpoint, FormalizationRequest, FormalizeError, LlmEndpointConfig,
};

use crate::config::{build_critic, Settings};
use crate::error::CliError;
use crate::io::{emit, read_text};
use crate::mock::refine_endpoints;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefineIteration {
    /// Solution text the generator produced this round.
    pub solution: String,
    /// Verification report; `None` when formalization failed.
    pub report: Option<Report>,
    /// Prompt sent back to the generator afterwards; `None` on the round
    /// the loop stopped.
    pub feedback: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefineOutcome {
    /// Rounds actually run; always `trace.len()` and at most `max_iter`.
    pub iterations: u32,
    /// Solution text from the final round.
    pub solution: String,
    /// Report from the final round, absent only if its formalization failed.
    pub report: Option<Report>,
    pub trace: Vec<RefineIteration>,
}

pub fn initial_prompt(problem: &str) -> String {
    format!("Solve the following problem step by step. Use exact arithmetic.\n\nProblem:\n{problem}\n")
}

/// Feedback prompt layout: the original problem, the prior solution
/// verbatim, then a numbered list of the verifier's complaints.
pub fn feedback_prompt(problem: &str, solution: &str, report: &Report) -> String {
    let entries = make_feedback(report);
    let mut out = format!(
        "Solve the following problem step by step. Use exact arithmetic.\n\n\
         Problem:\n{problem}\n\n\
         Your previous solution:\n{solution}\n\n\
         Feedback:\n"
    );
    if entries.is_empty() {
        // inconclusive rather than wrong: no step to point at
        out.push_str(
            "Some steps could not be checked mechanically. Break the reasoning into smaller, \
             fully explicit steps using exact arithmetic.\n",
        );
    } else {
        for (index, entry) in entries.iter().enumerate() {
            out.push_str(&format!("{}. {entry}\n", index + 1));
        }
    }
    out.push_str("\nWrite a corrected, complete solution.\n");
    out
}

fn untranslatable_prompt(problem: &str, solution: &str) -> String {
    format!(
        "Solve the following problem step by step. Use exact arithmetic.\n\n\
         Problem:\n{problem}\n\n\
         Your previous solution:\n{solution}\n\n\
         Feedback:\n\
         The solution could not be translated into checkable steps. Keep each step a single \
         equation or comparison over exact numbers.\n\n\
         Write a corrected, complete solution.\n"
    )
}

pub fn refine(
    problem: &str,
    generator: &dyn ChatEndpoint,
    formalizer: &dyn ChatEndpoint,
    formalizer_config: &LlmEndpointConfig,
    critic: &Critic,
    max_iter: u32,
) -> Result<RefineOutcome, CliError> {
    if max_iter == 0 {
        return Err(CliError::Config("max-iter must be at least 1".into()));
    }
    let mut trace: Vec<RefineIteration> = Vec::new();
    let mut prompt = initial_prompt(problem);
    for iteration in 1..=max_iter {
        let solution = generator
            .complete(&prompt)
            .map_err(|e| CliError::Config(format!("generator: {e}")))?;
        let request = FormalizationRequest::new(problem, solution.as_str());
        let report = match formalize(&request, formalizer, formalizer_config) {
            Ok(result) => Some(
                critic
                    .verify_context(&result.context)
                    .map_err(|e| CliError::Input(format!("formalized context: {e}")))?,
            ),
            Err(FormalizeError::FormalizationFailed { .. }) => None,
            Err(e) => return Err(CliError::Config(e.to_string())),
        };
        let solved = report.as_ref().is_some_and(|r| r.is_all_valid());
        let feedback = if solved || iteration == max_iter {
            None
        } else {
            Some(match &report {
                Some(report) => feedback_prompt(problem, &solution, report),
                None => untranslatable_prompt(problem, &solution),
            })
        };
        trace.push(RefineIteration { solution, report, feedback: feedback.clone() });
        match feedback {
            Some(next) => prompt = next,
            None => break,
        }
    }
    let last = trace.last().expect("max_iter >= 1 guarantees an iteration");
    Ok(RefineOutcome {
        iterations: trace.len() as u32,
        solution: last.solution.clone(),
        report: last.report.clone(),
        trace,
    })
}

/// Drive the loop from files. Outcome JSON goes to `--report-out` or stdout;
/// the final solution text goes to `--out` when given. Exit status follows
/// the final report, or 4 when the last round could not even be formalized.
pub fn run(settings: &Settings, problem_path: &Path, out: Option<&Path>) -> Result<i32, CliError> {
    let problem = read_text(problem_path)?;
    let critic = build_critic(settings)?;
    let (generator, formalizer) = refine_endpoints(settings)?;
    let outcome = refine(
        problem.trim_end(),
        generator.as_ref(),
        formalizer.as_ref(),
        &settings.formalizer,
        &critic,
        settings.max_iter,
    )?;

    let mut json = serde_json::to_string_pretty(&outcome)
        .map_err(|e| CliError::Config(format!("cannot encode outcome: {e}")))?;
    json.push('\n');
    emit(settings.report_out.as_deref(), &json)?;
    if let Some(path) = out {
        let mut text = outcome.solution.clone();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        crate::io::atomic_write(path, &text)?;
    }
    eprintln!("stopped after {} iteration(s)", outcome.iterations);
    match &outcome.report {
        Some(report) => Ok(report.exit_code()),
        None => Err(CliError::Config(
            "final solution could not be formalized".into(),
        )),
    }
}
