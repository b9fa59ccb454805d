//! Layered configuration. Every knob resolves through the same chain:
//! command-line flag, then `MATHSTEP_*` environment variable, then the TOML
//! config file, then the built-in default. Later layers never override
//! earlier ones.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use mathstep_critic::{Critic, CriticOptions, EquivOptions, SolverConfig};
use mathstep_llm::LlmEndpointConfig;

use crate::error::CliError;
use crate::io::read_text;

/// On-disk config file shape. All fields are optional; a missing file is the
/// same as an empty one.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    /// Refinement iteration cap.
    pub max_iter: u32,
    /// Seed for sampling-based equivalence checks and anything else random.
    pub seed: u64,
    pub solver: SolverSection,
    pub formalizer: LlmEndpointConfig,
    pub generator: LlmEndpointConfig,
}

impl Default for FileConfig {
    fn default() -> FileConfig {
        FileConfig {
            max_iter: 3,
            seed: 0,
            solver: SolverSection::default(),
            formalizer: LlmEndpointConfig::default(),
            generator: LlmEndpointConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub path: Option<PathBuf>,
    pub timeout_ms: u64,
    pub pool_size: usize,
    pub artifact_dir: Option<PathBuf>,
}

impl Default for SolverSection {
    fn default() -> SolverSection {
        let base = SolverConfig::default();
        SolverSection {
            path: base.path,
            timeout_ms: base.timeout_ms,
            pool_size: base.pool_size,
            artifact_dir: base.artifact_dir,
        }
    }
}

/// The global flags, decoupled from the argument parser so settings can be
/// resolved in tests without spawning a process.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub solver_path: Option<PathBuf>,
    pub timeout_ms: Option<u64>,
    pub max_iter: Option<u32>,
    pub seed: Option<u64>,
    pub report_out: Option<PathBuf>,
    pub mock: bool,
    pub mock_script: Option<PathBuf>,
}

/// Fully resolved settings every command runs against.
#[derive(Debug, Clone)]
pub struct Settings {
    pub solver: SolverConfig,
    pub formalizer: LlmEndpointConfig,
    pub generator: LlmEndpointConfig,
    pub max_iter: u32,
    pub seed: u64,
    pub mock: bool,
    pub mock_script: Option<PathBuf>,
    pub report_out: Option<PathBuf>,
}

fn env_parsed<T: FromStr>(name: &str) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    match std::env::var(name) {
        Ok(raw) => raw
            .parse()
            .map(Some)
            .map_err(|e| CliError::Config(format!("bad {name}={raw}: {e}"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Config(format!("bad {name}: {e}"))),
    }
}

pub fn resolve(overrides: &Overrides) -> Result<Settings, CliError> {
    let file = match &overrides.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
            toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    let solver_path = overrides
        .solver_path
        .clone()
        .or(env_parsed::<PathBuf>("MATHSTEP_SOLVER_PATH")?)
        .or(file.solver.path);
    let timeout_ms = overrides
        .timeout_ms
        .or(env_parsed("MATHSTEP_TIMEOUT_MS")?)
        .unwrap_or(file.solver.timeout_ms);
    let max_iter = overrides
        .max_iter
        .or(env_parsed("MATHSTEP_MAX_ITER")?)
        .unwrap_or(file.max_iter);
    let seed = overrides
        .seed
        .or(env_parsed("MATHSTEP_SEED")?)
        .unwrap_or(file.seed);

    Ok(Settings {
        solver: SolverConfig {
            path: solver_path,
            extra_args: Vec::new(),
            timeout_ms,
            pool_size: file.solver.pool_size,
            artifact_dir: file.solver.artifact_dir,
        },
        formalizer: file.formalizer,
        generator: file.generator,
        max_iter,
        seed,
        mock: overrides.mock,
        mock_script: overrides.mock_script.clone(),
        report_out: overrides.report_out.clone(),
    })
}

/// Build the verifier. An explicitly configured solver must exist; without
/// one, discovery may still find a solver, and if it does not the SMT leg
/// degrades to Unknown with a warning rather than refusing to run.
pub fn build_critic(settings: &Settings) -> Result<Critic, CliError> {
    if let Some(path) = &settings.solver.path {
        if !path.is_file() {
            return Err(CliError::Config(format!(
                "solver `{}` does not exist",
                path.display()
            )));
        }
    }
    let critic = Critic::new(CriticOptions {
        solver: settings.solver.clone(),
        equiv: EquivOptions { seed: settings.seed, ..EquivOptions::default() },
    });
    if let Err(reason) = critic.solver() {
        eprintln!("warning: SMT checks disabled: {reason}");
    }
    Ok(critic)
}

/// Read a context file: exit-status-3 territory on any failure.
pub fn load_context(path: &Path) -> Result<mathstep_core::Context, CliError> {
    let text = read_text(path)?;
    mathstep_core::parse_context(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
