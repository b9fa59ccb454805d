// Shared by several integration test binaries; not all of them use every
// helper.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;

use mathstep_core::{judgments, parse_context, Judgment};
use mathstep_smt::SolverConfig;

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

pub fn solver_config(timeout_ms: u64) -> SolverConfig {
    SolverConfig {
        path: Some(tinysmt_path()),
        timeout_ms,
        ..SolverConfig::default()
    }
}

pub fn first_judgment(src: &str) -> Judgment {
    let ctx = parse_context(src).expect("fixture context parses");
    judgments(&ctx).expect("fixture context is well-formed").remove(0)
}

pub fn last_judgment(src: &str) -> Judgment {
    let ctx = parse_context(src).expect("fixture context parses");
    judgments(&ctx)
        .expect("fixture context is well-formed")
        .pop()
        .expect("context has a conclusion")
}
