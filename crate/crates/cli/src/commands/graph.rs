use std::path::Path;

use mathstep_core::{build_graph, to_dot};

use crate::config::{load_context, Settings};
use crate::error::CliError;
use crate::io::emit;

/// Emit the solution graph of a context as DOT.
pub fn run(settings: &Settings, context_path: &Path, out: Option<&Path>) -> Result<i32, CliError> {
    let ctx = load_context(context_path)?;
    let graph = build_graph(&ctx)
        .map_err(|e| CliError::Input(format!("{}: {e}", context_path.display())))?;
    let target = out.or(settings.report_out.as_deref());
    emit(target, &to_dot(&graph))?;
    Ok(0)
}
