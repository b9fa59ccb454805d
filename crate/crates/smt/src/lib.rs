//! SMT-based entailment checking for SimpleMath judgments.
//!
//! Judgments are translated into SMT-LIB 2 refutation scripts (premises plus
//! negated conclusion), handed to an external solver process, and the answer
//! is mapped back to a verdict. `unsat` certifies the step; `sat` yields a
//! candidate counterexample that is replayed with exact rational arithmetic
//! before the step is called invalid.

mod entail;
mod error;
mod model;
mod runner;
mod script;
mod sorts;

pub use entail::SmtBackend;
pub use error::SmtError;
pub use runner::{discover_solver, Runner, SolverConfig, SolverOutcome};
pub use script::{to_smtlib, SmtScript, DEFAULT_TIMEOUT_MS};
pub use sorts::{infer_sorts, FunSig, SymbolSorts};
