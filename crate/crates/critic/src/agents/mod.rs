//! Tool agents. Each one inspects a judgment and returns a verdict, abstaining
//! with `Unknown` whenever the judgment is outside its competence.
//!
//! Shared here: witness replay. No agent reports `Invalid` from a candidate
//! point without first re-checking, by exact evaluation, that every premise
//! holds there and the conclusion fails.

pub mod cas;
pub mod eval;

use std::collections::{BTreeMap, BTreeSet};

use mathstep_cas::{Env, Evaluator};
use mathstep_core::{format_rational, print_term, Counterexample, Formula, Judgment, Term};
use num::BigRational;

pub(crate) enum Replay {
    /// Every premise holds and the conclusion fails: a genuine counterexample.
    Confirmed,
    /// The candidate point violates the premise at this position.
    PremiseFails(usize),
    /// The conclusion holds at the candidate point after all.
    ConclusionHolds,
    Error(String),
}

pub(crate) fn replay_witness(judgment: &Judgment, env: &Env) -> Replay {
    let mut evaluator = Evaluator::new(judgment.definitions.iter().map(|(_, d)| d.clone()));
    for (i, premise) in judgment.premise_formulas.iter().enumerate() {
        match evaluator.eval_formula(premise, env) {
            Ok(true) => {}
            Ok(false) => return Replay::PremiseFails(i),
            Err(e) => return Replay::Error(e.to_string()),
        }
    }
    match evaluator.eval_formula(&judgment.conclusion_formula, env) {
        Ok(false) => Replay::Confirmed,
        Ok(true) => Replay::ConclusionHolds,
        Err(e) => Replay::Error(e.to_string()),
    }
}

/// All variables mentioned anywhere in the judgment's formulas.
pub(crate) fn judgment_vars(judgment: &Judgment) -> BTreeSet<String> {
    let mut vars = judgment.conclusion_formula.free_vars();
    for premise in &judgment.premise_formulas {
        vars.extend(premise.free_vars());
    }
    vars
}

/// Counterexample at `env`, restricted to the judgment's own variables, with
/// the conclusion's subterm values recorded for the reader.
pub(crate) fn counterexample_at(judgment: &Judgment, env: &Env) -> Counterexample {
    let vars = judgment_vars(judgment);
    let restricted: BTreeMap<String, BigRational> = env
        .iter()
        .filter(|(name, _)| vars.contains(*name))
        .map(|(name, value)| (name.clone(), value.clone()))
        .collect();
    let mut cex = Counterexample::from_assignment(&restricted);
    let mut evaluator = Evaluator::new(judgment.definitions.iter().map(|(_, d)| d.clone()));
    observe_formula(&mut evaluator, &judgment.conclusion_formula, env, &mut cex);
    cex
}

/// Record the exact value of every interesting atom side, best effort.
/// Literals and bare variables are skipped — they add nothing over the
/// assignment itself.
pub(crate) fn observe_formula(
    evaluator: &mut Evaluator,
    formula: &Formula,
    env: &Env,
    out: &mut Counterexample,
) {
    match formula {
        Formula::Atom(_, lhs, rhs) => {
            observe_term(evaluator, lhs, env, out);
            observe_term(evaluator, rhs, env, out);
        }
        Formula::Member(term, _) => observe_term(evaluator, term, env, out),
        Formula::Not(inner) => observe_formula(evaluator, inner, env, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            observe_formula(evaluator, a, env, out);
            observe_formula(evaluator, b, env, out);
        }
        Formula::Forall(..) | Formula::Exists(..) => {}
    }
}

fn observe_term(evaluator: &mut Evaluator, term: &Term, env: &Env, out: &mut Counterexample) {
    if matches!(term, Term::Rational(_) | Term::Var(_)) {
        return;
    }
    if let Ok(value) = evaluator.eval(term, env) {
        out.observe(print_term(term), &value);
    }
}

/// `x = 3/2, y = 2` — for reason strings.
pub(crate) fn format_assignment(env: &BTreeMap<String, BigRational>) -> String {
    env.iter()
        .map(|(name, value)| format!("{name} = {}", format_rational(value)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// ` (f(4) = 3, 17 + 26 = 43)` — appended to reasons when values were observed.
pub(crate) fn observed_suffix(cex: &Counterexample) -> String {
    if cex.observed.is_empty() {
        return String::new();
    }
    let pairs = cex
        .observed
        .iter()
        .map(|(what, value)| format!("{what} = {value}"))
        .collect::<Vec<_>>()
        .join(", ");
    format!(" ({pairs})")
}
