//! Exact algebra kernel: polynomial arithmetic, rational-function normal
//! forms, equivalence checking with replayable counterexamples, equation
//! solving, evaluation with definition unfolding, and differentiation.
//! Everything is over arbitrary-precision rationals; no floats anywhere.

mod diff;
mod equiv;
mod error;
mod eval;
mod gcd;
mod poly;
mod ratfunc;
mod solve;

pub use diff::differentiate;
pub use equiv::{check_equiv, EquivOptions, Equivalence};
pub use error::{CasError, EvalError};
pub use eval::{eval_closed, eval_term, sort_admits, Env, Evaluator};
pub use gcd::gcd;
pub use poly::Polynomial;
pub use ratfunc::{normal_form, normalize, RatFunc, MAX_EXPONENT};
pub use solve::{root_satisfies, roots_of, solve_for, Root};
