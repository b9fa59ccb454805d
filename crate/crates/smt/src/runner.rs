//! External solver process management.
//!
//! Scripts are content-addressed by SHA-256: each distinct script runs at
//! most once per runner, results are cached in memory, and the script text
//! can be persisted for offline inspection. A small slot pool bounds how
//! many solver processes run concurrently; callers on other threads block
//! until a slot frees up.

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use num::BigRational;

use crate::error::SmtError;
use crate::model::parse_model;
use crate::script::{SmtScript, DEFAULT_TIMEOUT_MS};

/// Extra time a process gets past its deadline before being killed, to let
/// solvers with native timeout support exit cleanly.
const KILL_GRACE_MS: u64 = 500;
const POLL_INTERVAL: Duration = Duration::from_millis(10);
const STDERR_EXCERPT: usize = 400;

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Explicit solver binary; when absent, discovery looks for a bundled
    /// `tinysmt` next to the running executable, then `tinysmt` and `z3` on
    /// the PATH.
    pub path: Option<PathBuf>,
    pub extra_args: Vec<String>,
    pub timeout_ms: u64,
    /// Maximum concurrently running solver processes.
    pub pool_size: usize,
    /// When set, every script is written here as `<sha256>.smt2`.
    pub artifact_dir: Option<PathBuf>,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            path: None,
            extra_args: Vec::new(),
            timeout_ms: DEFAULT_TIMEOUT_MS,
            pool_size: 4,
            artifact_dir: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolverOutcome {
    Unsat,
    /// Satisfying assignment over solver-side symbol names. Symbols whose
    /// model values are not exact rationals are absent.
    Sat(BTreeMap<String, BigRational>),
    Unknown(String),
    SolverError { code: Option<i32>, stderr: String },
}

pub fn discover_solver(explicit: Option<&Path>) -> Result<PathBuf, SmtError> {
    if let Some(path) = explicit {
        if path.is_file() {
            return Ok(path.to_path_buf());
        }
        return Err(SmtError::SolverNotFound(format!(
            "configured solver `{}` does not exist",
            path.display()
        )));
    }
    if let Ok(exe) = std::env::current_exe() {
        // The bundled solver sits next to installed binaries; under a build
        // tree, test executables live one directory deeper.
        let candidates = exe
            .parent()
            .into_iter()
            .flat_map(|dir| [dir.join("tinysmt"), dir.join("../tinysmt")]);
        for candidate in candidates {
            if candidate.is_file() {
                return Ok(candidate);
            }
        }
    }
    for name in ["tinysmt", "z3"] {
        if let Some(found) = find_in_path(name) {
            return Ok(found);
        }
    }
    Err(SmtError::SolverNotFound(
        "no solver configured and neither `tinysmt` nor `z3` was found on the PATH".into(),
    ))
}

fn find_in_path(name: &str) -> Option<PathBuf> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path)
        .map(|dir| dir.join(name))
        .find(|candidate| candidate.is_file())
}

/// Counting semaphore over OS processes; `std::sync` has no async story to
/// worry about here, a mutex and condvar suffice.
struct Slots {
    free: Mutex<usize>,
    cv: Condvar,
}

struct SlotGuard<'a>(&'a Slots);

impl Slots {
    fn new(count: usize) -> Slots {
        Slots { free: Mutex::new(count.max(1)), cv: Condvar::new() }
    }

    fn acquire(&self) -> SlotGuard<'_> {
        let mut free = self.free.lock().unwrap();
        while *free == 0 {
            free = self.cv.wait(free).unwrap();
        }
        *free -= 1;
        SlotGuard(self)
    }
}

impl Drop for SlotGuard<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap() += 1;
        self.0.cv.notify_one();
    }
}

pub struct Runner {
    solver: PathBuf,
    config: SolverConfig,
    cache: Mutex<HashMap<String, SolverOutcome>>,
    slots: Slots,
}

impl Runner {
    pub fn new(config: SolverConfig) -> Result<Runner, SmtError> {
        let solver = discover_solver(config.path.as_deref())?;
        let slots = Slots::new(config.pool_size);
        Ok(Runner { solver, config, cache: Mutex::new(HashMap::new()), slots })
    }

    pub fn solver_path(&self) -> &Path {
        &self.solver
    }

    pub fn run(&self, script: &SmtScript) -> SolverOutcome {
        let text = script.render();
        let key = script.content_hash();
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        if let Some(dir) = &self.config.artifact_dir {
            // Best-effort; a failed artifact write must not fail the check.
            let _ = std::fs::create_dir_all(dir);
            let _ = std::fs::write(dir.join(format!("{key}.smt2")), &text);
        }
        let outcome = {
            let _slot = self.slots.acquire();
            self.spawn_and_wait(&text, script.timeout_ms)
        };
        self.cache.lock().unwrap().insert(key, outcome.clone());
        outcome
    }

    fn spawn_and_wait(&self, input: &str, timeout_ms: u64) -> SolverOutcome {
        let mut cmd = Command::new(&self.solver);
        let stem = self
            .solver
            .file_stem()
            .map(|s| s.to_string_lossy().to_lowercase())
            .unwrap_or_default();
        if stem.contains("z3") {
            // z3 does not read scripts from stdin unless told to, and its
            // soft timeout lets it answer `unknown` instead of being killed.
            cmd.args(["-in", "-smt2", &format!("-t:{timeout_ms}")]);
        }
        cmd.args(&self.config.extra_args);
        cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
        let mut child = match cmd.spawn() {
            Ok(child) => child,
            Err(e) => {
                return SolverOutcome::SolverError {
                    code: None,
                    stderr: format!("failed to launch `{}`: {e}", self.solver.display()),
                }
            }
        };

        let mut stdin = child.stdin.take().expect("stdin was piped");
        let script = input.to_string();
        let writer = std::thread::spawn(move || {
            // The solver may exit (or be killed) before consuming the whole
            // script; a broken pipe here is expected.
            let _ = stdin.write_all(script.as_bytes());
        });
        let mut stdout_pipe = child.stdout.take().expect("stdout was piped");
        let stdout_reader = std::thread::spawn(move || {
            let mut buf = String::new();
            let _ = stdout_pipe.read_to_string(&mut buf);
            buf
        });
        let mut stderr_pipe = child.stderr.take().expect("stderr was piped");
        let stderr_reader = std::thread::spawn(move || {
            let mut buf = String::new();
            let _ = stderr_pipe.read_to_string(&mut buf);
            buf
        });

        let status = match wait_with_deadline(&mut child, timeout_ms) {
            Some(status) => status,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                let _ = writer.join();
                let _ = stdout_reader.join();
                let _ = stderr_reader.join();
                return SolverOutcome::Unknown(format!(
                    "solver timeout after {timeout_ms} ms"
                ));
            }
        };
        let _ = writer.join();
        let stdout = stdout_reader.join().unwrap_or_default();
        let stderr = stderr_reader.join().unwrap_or_default();

        let mut lines = stdout.lines().map(str::trim).filter(|l| !l.is_empty());
        match lines.next() {
            Some("unsat") => SolverOutcome::Unsat,
            Some("sat") => {
                let rest: String =
                    lines.map(|l| format!("{l}\n")).collect();
                SolverOutcome::Sat(parse_model(&rest))
            }
            Some("unknown") => SolverOutcome::Unknown("solver answered unknown".into()),
            first => {
                let mut detail = String::new();
                if let Some(line) = first {
                    detail.push_str(line);
                }
                if !stderr.trim().is_empty() {
                    if !detail.is_empty() {
                        detail.push_str("; ");
                    }
                    detail.push_str(stderr.trim());
                }
                detail.truncate(STDERR_EXCERPT);
                SolverOutcome::SolverError { code: status, stderr: detail }
            }
        }
    }
}

fn wait_with_deadline(child: &mut Child, timeout_ms: u64) -> Option<Option<i32>> {
    let deadline = Instant::now() + Duration::from_millis(timeout_ms + KILL_GRACE_MS);
    loop {
        match child.try_wait() {
            Ok(Some(status)) => return Some(status.code()),
            Ok(None) => {
                if Instant::now() >= deadline {
                    return None;
                }
                std::thread::sleep(POLL_INTERVAL);
            }
            Err(_) => return None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_missing_path_is_reported() {
        let err = discover_solver(Some(Path::new("/nonexistent/solver"))).unwrap_err();
        match err {
            SmtError::SolverNotFound(msg) => assert!(msg.contains("/nonexistent/solver")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn slot_pool_never_admits_more_than_capacity() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        use std::sync::Arc;

        let slots = Arc::new(Slots::new(2));
        let running = Arc::new(AtomicUsize::new(0));
        let peak = Arc::new(AtomicUsize::new(0));
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let slots = Arc::clone(&slots);
                let running = Arc::clone(&running);
                let peak = Arc::clone(&peak);
                std::thread::spawn(move || {
                    let _guard = slots.acquire();
                    let now = running.fetch_add(1, Ordering::SeqCst) + 1;
                    peak.fetch_max(now, Ordering::SeqCst);
                    std::thread::sleep(Duration::from_millis(20));
                    running.fetch_sub(1, Ordering::SeqCst);
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
        assert!(peak.load(Ordering::SeqCst) <= 2);
    }
}
