use std::path::{Path, PathBuf};

use serde::Serialize;

use mathstep_core::Context;
use mathstep_critic::{select_solution, Critic, Overall, Report};

use crate::config::{build_critic, load_context, Settings};
use crate::error::CliError;
use crate::io::atomic_write;

#[derive(Debug, Serialize)]
struct CandidateOutcome {
    path: String,
    status: String,
    statements: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Serialize)]
struct SelectOutcome {
    /// Index into the candidate list as given on the command line.
    selected: Option<usize>,
    candidates: Vec<CandidateOutcome>,
}

fn verify_candidate(critic: &Critic, path: &Path) -> Result<(Context, Report), CliError> {
    let ctx = load_context(path)?;
    let report = critic
        .verify_context(&ctx)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok((ctx, report))
}

fn status_name(overall: &Overall) -> String {
    match overall {
        Overall::AllValid => "all_valid".into(),
        Overall::HasInvalid { .. } => "has_invalid".into(),
        Overall::Inconclusive => "inconclusive".into(),
    }
}

/// Pick the best candidate: fully valid with the fewest statements, earliest
/// on ties. A candidate that fails to load or verify is demoted with a
/// warning, never fatal — one broken file must not sink the rest. Prints the
/// winning path (or `none`) on stdout; exit 0 when selected, 2 when nothing
/// fully valid survives.
pub fn run(settings: &Settings, candidates: &[PathBuf]) -> Result<i32, CliError> {
    if candidates.is_empty() {
        return Err(CliError::Input("no candidate files given".into()));
    }
    let critic = build_critic(settings)?;
    let mut verified: Vec<(Context, Report)> = Vec::new();
    // maps indices in `verified` back to positions in the original list
    let mut origin: Vec<usize> = Vec::new();
    let mut outcomes: Vec<CandidateOutcome> = Vec::new();
    for (index, path) in candidates.iter().enumerate() {
        match verify_candidate(&critic, path) {
            Ok((ctx, report)) => {
                outcomes.push(CandidateOutcome {
                    path: path.display().to_string(),
                    status: status_name(&report.overall),
                    statements: Some(ctx.statements.len()),
                    note: None,
                });
                verified.push((ctx, report));
                origin.push(index);
            }
            Err(e) => {
                eprintln!("warning: candidate {} demoted: {e}", path.display());
                outcomes.push(CandidateOutcome {
                    path: path.display().to_string(),
                    status: "rejected".into(),
                    statements: None,
                    note: Some(e.to_string()),
                });
            }
        }
    }
    let selected = select_solution(&verified).map(|i| origin[i]);
    let selected_len = selected.and_then(|i| outcomes[i].statements);

    if let Some(path) = &settings.report_out {
        let outcome = SelectOutcome { selected, candidates: outcomes };
        let mut json = serde_json::to_string_pretty(&outcome)
            .map_err(|e| CliError::Config(format!("cannot encode outcome: {e}")))?;
        json.push('\n');
        atomic_write(path, &json)?;
    }

    match selected {
        Some(index) => {
            println!("{}", candidates[index].display());
            let len = selected_len.expect("selected candidates always loaded");
            eprintln!("selected candidate {index} ({len} statement(s))");
            Ok(0)
        }
        None => {
            println!("none");
            eprintln!("no fully valid candidate");
            Ok(2)
        }
    }
}
