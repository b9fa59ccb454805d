//! Command-line front end for the mathstep toolchain: verify a context,
//! formalize a solution, run the refinement loop, pick the best of several
//! candidate solutions, score the verifier on a labeled corpus, or dump the
//! solution graph.
//!
//! Exit statuses: 0 all steps valid, 1 an invalid step was found, 2
//! inconclusive (or nothing selectable), 3 bad input, 4 bad configuration or
//! a broken solver/endpoint.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod mock;

pub use commands::bench::{BenchSummary, ExpectedStatus, FixtureOutcome};
pub use commands::refine::{refine, RefineIteration, RefineOutcome};
pub use config::{build_critic, resolve, FileConfig, Overrides, Settings};
pub use error::CliError;
pub use mock::MockScript;
