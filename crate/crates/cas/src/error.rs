use thiserror::Error;

/// Errors from exact evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("division by zero while evaluating {0}")]
    DivisionByZero(String),
    #[error("exponent of {0} is not an integer")]
    NonIntegerExponent(String),
    #[error("no definition for function `{0}`")]
    UndefinedFunction(String),
    #[error("no branch of `{function}` applies to ({args})")]
    NoBranchApplies { function: String, args: String },
    #[error("evaluation fuel exhausted (runaway recursion?)")]
    FuelExhausted,
    #[error("cannot evaluate: {0}")]
    Unsupported(String),
}

/// Errors from the algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CasError {
    #[error("term is not algebraic: {0}")]
    UnsupportedTerm(String),
    #[error("division by an identically zero denominator in {0}")]
    DivisionByZero(String),
    #[error("equation is not univariate: it involves {0:?}")]
    NotUnivariate(Vec<String>),
    #[error("cannot produce a complete root list at degree {0}")]
    DegreeTooHigh(u32),
    #[error("equation holds identically; every value is a solution")]
    DegenerateEquation,
    #[error(transparent)]
    Eval(#[from] EvalError),
}
