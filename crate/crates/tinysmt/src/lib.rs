//! A small SMT solver for quantifier-free linear arithmetic over integers
//! and reals, with ground uninterpreted functions handled by flattening.
//!
//! The decision core is Fourier-Motzkin elimination over exact rationals,
//! integer tightening, and branch-and-bound. Everything it cannot decide
//! within budget comes back `unknown`; `unsat` and `sat` answers are sound
//! by construction (see the module docs in `solver` and `fm`).

mod fm;
mod ir;
mod sexp;
mod solver;

pub use solver::run_script;
