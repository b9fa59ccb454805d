//! Core data model for mathstep: the SimpleMath language (terms, formulas,
//! guarded definitions), proof contexts in the line-oriented format, the
//! solution graph with its judgments and cost metrics, and the shared verdict
//! vocabulary used by every checking tool.

pub mod ast;
pub mod context;
pub mod desugar;
pub mod graph;
pub mod parser;
pub mod printer;
pub mod verdict;

pub use ast::{
    format_rational, parse_rational, Branch, CaptureError, Definition, Formula, Relation, Sort,
    Term,
};
pub use context::{
    parse_context, print_context, validate_context, Context, ContextError, Diagnostic, Severity,
    Statement, StatementBody, StatementKind,
};
pub use desugar::desugar_definition;
pub use graph::{
    build_graph, cost_metrics, dense_cost, foundational_premises, judgments,
    strengthened_corollaries, to_dot, Corollary, CostMetrics, GraphError, Judgment, SolutionGraph,
};
pub use parser::{parse_definition, parse_formula, parse_term, ArityError, SyntaxError};
pub use printer::{print_definition, print_formula, print_term};
pub use verdict::{Counterexample, Verdict};
