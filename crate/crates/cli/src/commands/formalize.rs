use std::path::Path;

use mathstep_core::print_context;
use mathstep_llm::{append_transcript, formalize, FormalizationRequest, FormalizeError};

use crate::config::Settings;
use crate::error::CliError;
use crate::io::{emit, read_text};
use crate::mock::formalizer_endpoint;

/// Translate a problem/solution pair into a checkable context. The context
/// text goes to `--out` or stdout; with `--report-out` the full
/// prompt/response transcript is appended there as JSON lines.
pub fn run(
    settings: &Settings,
    problem_path: &Path,
    solution_path: &Path,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    let problem = read_text(problem_path)?;
    let solution = read_text(solution_path)?;
    let endpoint = formalizer_endpoint(settings)?;
    let request = FormalizationRequest::new(problem.trim_end(), solution.trim_end());

    match formalize(&request, endpoint.as_ref(), &settings.formalizer) {
        Ok(result) => {
            if let Some(path) = &settings.report_out {
                append_transcript(path, &result.transcript).map_err(|e| {
                    CliError::Input(format!("cannot write {}: {e}", path.display()))
                })?;
            }
            emit(out, &print_context(&result.context))?;
            eprintln!("formalized in {} attempt(s)", result.attempts);
            Ok(0)
        }
        Err(FormalizeError::FormalizationFailed { attempts, diagnostics }) => {
            Err(CliError::Config(format!(
                "formalization failed after {attempts} attempt(s):\n{diagnostics}"
            )))
        }
        Err(e) => Err(CliError::Config(e.to_string())),
    }
}
