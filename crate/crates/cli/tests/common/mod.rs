// Shared by several integration test binaries; not all of them use every
// helper.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

/// Locate the bundled solver binary, building it on demand.
///
/// A workspace-wide test run has already produced `target/debug/tinysmt`; a
/// package-scoped run builds it into a scratch target directory so the nested
/// cargo invocation cannot contend for the outer build lock.
pub fn tinysmt_path() -> PathBuf {
    static PATH: OnceLock<PathBuf> = OnceLock::new();
    PATH.get_or_init(|| {
        let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
        if let Some(target) = tmp.parent() {
            let prebuilt = target.join("debug").join("tinysmt");
            if prebuilt.is_file() {
                return prebuilt;
            }
        }
        let scratch = tmp.join("solver-build");
        let workspace = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .parent()
            .and_then(|p| p.parent())
            .expect("crate lives two levels below the workspace root")
            .to_path_buf();
        let status = Command::new(env!("CARGO"))
            .args(["build", "-p", "tinysmt", "--target-dir"])
            .arg(&scratch)
            .current_dir(&workspace)
            .status()
            .expect("failed to invoke cargo to build the bundled solver");
        assert!(status.success(), "building the bundled solver failed");
        scratch.join("debug").join("tinysmt")
    })
    .clone()
}

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

/// The binary under test, with ambient MATHSTEP_* variables scrubbed so a
/// developer's environment cannot leak into assertions.
pub fn mathstep() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mathstep"));
    for (key, _) in std::env::vars_os() {
        if key.to_string_lossy().starts_with("MATHSTEP_") {
            cmd.env_remove(&key);
        }
    }
    cmd
}

/// Same, but already pointed at the bundled solver.
pub fn mathstep_with_solver() -> Command {
    let mut cmd = mathstep();
    cmd.arg("--solver-path").arg(tinysmt_path());
    cmd
}

pub fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process was killed by a signal")
}

pub fn stdout_str(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

pub fn stderr_str(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}
