//! Step-level verification of formalized solutions.
//!
//! A context's CONCLUSION statements become judgments (`premises ⊢ claim`);
//! each judgment is routed to a chain of tools — symbolic engine, exact
//! evaluator, SMT solver — and the first tool that commits decides the step.
//! The per-step verdicts roll up into a report with corrective feedback for
//! the invalid steps, plus best-of-n candidate selection.

mod agents;
mod feedback;
mod report;
mod route;
mod select;
#[cfg(test)]
mod testutil;
mod verify;

pub use feedback::{make_feedback, Feedback};
pub use report::{Overall, Report, StepVerdict, REPORT_SCHEMA_VERSION};
pub use route::{classify_judgment, Route};
pub use select::select_solution;
pub use verify::{Critic, CriticOptions};

// Re-exported so downstream callers can build options without naming the
// tool crates themselves.
pub use mathstep_cas::EquivOptions;
pub use mathstep_smt::SolverConfig;
