use thiserror::Error;

#[derive(Debug, Error)]
pub enum SmtError {
    /// A symbol is used with conflicting shapes (different arities, or both
    /// as a variable and as a function). Membership constraints never clash:
    /// they combine by taking the most specific sort.
    #[error("sort clash for `{symbol}`: {detail}")]
    SortClash { symbol: String, detail: String },

    /// The judgment needs something the solver encoding cannot express.
    /// Reported rather than silently dropped, so the caller can route the
    /// judgment to a different tool.
    #[error("unsupported for the solver backend: {0}")]
    UnsupportedFeature(String),

    #[error("no SMT solver found: {0}")]
    SolverNotFound(String),
}
