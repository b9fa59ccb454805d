//! The formalization loop: prompt, parse, re-prompt on failure.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use mathstep_core::{parse_context, validate_context, Context, Severity};

use crate::config::LlmEndpointConfig;
use crate::endpoint::ChatEndpoint;
use crate::error::FormalizeError;
use crate::prompt::{render_prompt, DEFAULT_TEMPLATE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormalizationRequest {
    pub problem: String,
    pub solution: String,
    pub template: String,
}

impl FormalizationRequest {
    pub fn new(problem: impl Into<String>, solution: impl Into<String>) -> FormalizationRequest {
        FormalizationRequest {
            problem: problem.into(),
            solution: solution.into(),
            template: DEFAULT_TEMPLATE.to_string(),
        }
    }
}

/// One round trip to the endpoint, as recorded in the transcript.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub prompt: String,
    pub response: String,
    /// Why this attempt's reply was rejected; `None` on the winning attempt.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug)]
pub struct FormalizationResult {
    /// Validates with no error-severity diagnostics, by construction.
    pub context: Context,
    pub transcript: Vec<AttemptRecord>,
    pub attempts: u32,
    /// Diagnostics from the failed attempts that preceded success.
    pub diagnostics: Vec<String>,
}

pub fn formalize(
    request: &FormalizationRequest,
    endpoint: &dyn ChatEndpoint,
    config: &LlmEndpointConfig,
) -> Result<FormalizationResult, FormalizeError> {
    config.validate()?;
    let base_prompt = render_prompt(&request.template, &request.problem, &request.solution)?;
    let mut transcript: Vec<AttemptRecord> = Vec::new();
    let mut diagnostics: Vec<String> = Vec::new();
    let max_attempts = 1 + config.retries;
    for attempt in 1..=max_attempts {
        let prompt = match diagnostics.last() {
            None => base_prompt.clone(),
            Some(diagnostic) => format!(
                "{base_prompt}\n\nYour previous reply was not a valid context file.\n\
                 Diagnostic: {diagnostic}\n\
                 Reply again with a corrected context file only.\n"
            ),
        };
        // Transport failures abort outright: retrying the same dead endpoint
        // is not a formalization problem.
        let response = endpoint.complete(&prompt)?;
        match parse_reply(&response) {
            Ok(context) => {
                transcript.push(AttemptRecord { prompt, response, diagnostic: None });
                return Ok(FormalizationResult { context, transcript, attempts: attempt, diagnostics });
            }
            Err(diagnostic) => {
                transcript.push(AttemptRecord {
                    prompt,
                    response,
                    diagnostic: Some(diagnostic.clone()),
                });
                diagnostics.push(diagnostic);
            }
        }
    }
    Err(FormalizeError::FormalizationFailed {
        attempts: max_attempts,
        diagnostics: diagnostics.join("\n"),
    })
}

fn parse_reply(response: &str) -> Result<Context, String> {
    let cleaned = strip_code_fences(response);
    let context = parse_context(cleaned).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validate_context(&context)
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .map(|d| d.to_string())
        .collect();
    if errors.is_empty() {
        Ok(context)
    } else {
        Err(errors.join("; "))
    }
}

/// Models often wrap output in a fenced block despite instructions; accept
/// the contents of the first fence when one is present.
pub fn strip_code_fences(text: &str) -> &str {
    let trimmed = text.trim();
    let Some(rest) = trimmed.strip_prefix("```") else {
        return trimmed;
    };
    // Skip an optional language tag on the opening fence line.
    let body = match rest.split_once('\n') {
        Some((_tag, body)) => body,
        None => return trimmed,
    };
    match body.rfind("```") {
        Some(end) => body[..end].trim(),
        None => body.trim(),
    }
}

/// Append transcript records to a JSON-lines file, one record per attempt.
pub fn append_transcript(path: &Path, records: &[AttemptRecord]) -> std::io::Result<()> {
    let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    for record in records {
        let line = serde_json::to_string(record)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        writeln!(file, "{line}")?;
    }
    Ok(())
}
