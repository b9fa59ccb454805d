use std::path::Path;

use mathstep_critic::{Overall, Report};

use crate::config::{build_critic, load_context, Settings};
use crate::error::CliError;
use crate::io::emit;

/// Check every step of a context file. The report JSON goes to
/// `--report-out` or stdout; a one-line summary goes to stderr; the exit
/// status encodes the overall verdict.
pub fn run(settings: &Settings, context_path: &Path) -> Result<i32, CliError> {
    let ctx = load_context(context_path)?;
    let critic = build_critic(settings)?;
    let report = critic
        .verify_context(&ctx)
        .map_err(|e| CliError::Input(format!("{}: {e}", context_path.display())))?;

    let mut json = report.to_json();
    json.push('\n');
    emit(settings.report_out.as_deref(), &json)?;
    eprintln!("{}", summary_line(&report));
    Ok(report.exit_code())
}

pub fn summary_line(report: &Report) -> String {
    match &report.overall {
        Overall::AllValid => format!("all {} step(s) valid", report.verdicts.len()),
        Overall::HasInvalid { first_failing_id } => {
            format!("invalid: first failing step is {first_failing_id}")
        }
        Overall::Inconclusive => {
            let unknown = report
                .verdicts
                .iter()
                .filter(|v| v.verdict.is_unknown())
                .count();
            format!("inconclusive: {unknown} step(s) could not be decided")
        }
    }
}
