//! Routing: pick the tool chain a judgment should be tried against.
//!
//! The split mirrors what each tool is good at. Variable-free claims are a
//! job for the exact evaluator, equational claims for the symbolic engine,
//! and everything with genuine logical structure goes to the solver first.

use mathstep_core::{Formula, Judgment, Relation};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Every formula is quantifier-free and variable-free.
    Arithmetic,
    /// Equations (plus sort annotations) over terms with variables.
    Algebraic,
    /// Anything else: inequalities with variables, implications, quantifiers.
    Logical,
}

pub fn classify_judgment(judgment: &Judgment) -> Route {
    let formulas = || {
        judgment
            .premise_formulas
            .iter()
            .chain(std::iter::once(&judgment.conclusion_formula))
    };
    if formulas().all(|f| quantifier_free(f) && f.is_ground()) {
        return Route::Arithmetic;
    }
    if formulas().all(equational) {
        return Route::Algebraic;
    }
    Route::Logical
}

pub(crate) fn quantifier_free(formula: &Formula) -> bool {
    match formula {
        Formula::Atom(..) | Formula::Member(..) => true,
        Formula::Not(inner) => quantifier_free(inner),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            quantifier_free(a) && quantifier_free(b)
        }
        Formula::Forall(..) | Formula::Exists(..) => false,
    }
}

/// Equations and sort memberships, possibly joined by `/\` or `\/`.
/// Memberships count because `x in RR` is bookkeeping, not logical content.
pub(crate) fn equational(formula: &Formula) -> bool {
    match formula {
        Formula::Atom(Relation::Eq, _, _) => true,
        Formula::Member(..) => true,
        Formula::And(a, b) | Formula::Or(a, b) => equational(a) && equational(b),
        _ => false,
    }
}
