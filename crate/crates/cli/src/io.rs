use std::io::Write;
use std::path::Path;

use crate::error::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// Write via a temporary file in the same directory plus an atomic rename,
/// so a crash or concurrent reader never sees a half-written file.
pub fn atomic_write(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let attempt = || -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(contents.as_bytes())?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    };
    attempt().map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

/// Send `contents` to the given path, or to stdout when no path is set.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => atomic_write(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
