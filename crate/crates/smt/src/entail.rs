//! The entailment checker: translate, solve, and interpret.
//!
//! `unsat` is trusted as-is — the encoding only ever weakens what the solver
//! must refute, so an impossible negation certifies the step. `sat` is never
//! trusted directly: solver models are replayed through exact rational
//! evaluation, and only a model that demonstrably satisfies every premise
//! while refuting the conclusion produces `Invalid`. Everything else is an
//! honest `Unknown`.

use std::collections::BTreeMap;

use num::BigRational;
use num::Zero;

use mathstep_cas::{Env, Evaluator};
use mathstep_core::{format_rational, print_term, Counterexample, Formula, Judgment, Verdict};

use crate::runner::{Runner, SolverConfig, SolverOutcome};
use crate::script::{to_smtlib, SmtScript};
use crate::SmtError;

pub struct SmtBackend {
    runner: Runner,
    timeout_ms: u64,
}

impl SmtBackend {
    pub fn new(config: SolverConfig) -> Result<SmtBackend, SmtError> {
        let timeout_ms = config.timeout_ms;
        Ok(SmtBackend { runner: Runner::new(config)?, timeout_ms })
    }

    pub fn solver_path(&self) -> &std::path::Path {
        self.runner.solver_path()
    }

    pub fn check_entailment(&self, judgment: &Judgment) -> Verdict {
        let mut script = match to_smtlib(judgment) {
            Ok(script) => script,
            Err(e) => return Verdict::unknown(format!("smt: {e}")),
        };
        script.timeout_ms = self.timeout_ms;
        match self.runner.run(&script) {
            SolverOutcome::Unsat => Verdict::valid(
                "smt",
                format!("negated conclusion is unsat (script {})", short_hash(&script)),
            ),
            SolverOutcome::Sat(model) => replay(judgment, &script, model),
            SolverOutcome::Unknown(reason) => Verdict::unknown(format!("smt: {reason}")),
            SolverOutcome::SolverError { code, stderr } => {
                let code = code.map_or("?".to_string(), |c| c.to_string());
                Verdict::unknown(format!("smt: solver error (exit {code}): {stderr}"))
            }
        }
    }
}

fn short_hash(script: &SmtScript) -> String {
    script.content_hash()[..12].to_string()
}

/// Check a solver model with exact arithmetic before believing it.
fn replay(
    judgment: &Judgment,
    script: &SmtScript,
    model: BTreeMap<String, BigRational>,
) -> Verdict {
    let mut assignment: Env = model
        .into_iter()
        .map(|(safe, value)| {
            let original = script.renames.get(&safe).cloned().unwrap_or(safe);
            (original, value)
        })
        .collect();

    let mut free: std::collections::BTreeSet<String> = judgment.conclusion_formula.free_vars();
    for premise in &judgment.premise_formulas {
        free.extend(premise.free_vars());
    }
    // A solver may omit symbols it never constrained; any concrete value
    // works for those, and the replay below still vouches for the result.
    for var in &free {
        assignment.entry(var.clone()).or_insert_with(BigRational::zero);
    }

    let mut evaluator =
        Evaluator::new(judgment.definitions.iter().map(|(_, d)| d.clone()));
    for premise in &judgment.premise_formulas {
        match evaluator.eval_formula(premise, &assignment) {
            Ok(true) => {}
            Ok(false) => {
                return Verdict::unknown(
                    "smt: solver model fails a premise under exact replay",
                )
            }
            Err(e) => {
                return Verdict::unknown(format!("smt: cannot replay solver model: {e}"))
            }
        }
    }
    match evaluator.eval_formula(&judgment.conclusion_formula, &assignment) {
        Ok(false) => {
            let shown: BTreeMap<String, BigRational> = assignment
                .iter()
                .filter(|(k, _)| free.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            let mut counterexample = Counterexample::from_assignment(&shown);
            observe_conclusion(&judgment.conclusion_formula, &mut evaluator, &assignment, &mut counterexample);
            let detail = shown
                .iter()
                .map(|(k, v)| format!("{k} = {}", format_rational(v)))
                .collect::<Vec<_>>()
                .join(", ");
            let reason = if detail.is_empty() {
                "premises hold but the conclusion fails under exact evaluation".to_string()
            } else {
                format!("premises hold but the conclusion fails at {detail}")
            };
            Verdict::invalid(reason, Some(counterexample))
        }
        Ok(true) => Verdict::unknown(
            "smt: solver model does not refute the conclusion under exact replay",
        ),
        Err(e) => Verdict::unknown(format!("smt: cannot replay solver model: {e}")),
    }
}

/// Record the exact values of the refuted conclusion's sides.
fn observe_conclusion(
    conclusion: &Formula,
    evaluator: &mut Evaluator,
    assignment: &Env,
    counterexample: &mut Counterexample,
) {
    let sides = match conclusion {
        Formula::Atom(_, lhs, rhs) => vec![lhs, rhs],
        Formula::Member(t, _) => vec![t],
        Formula::Not(inner) => return observe_conclusion(inner, evaluator, assignment, counterexample),
        _ => return,
    };
    for side in sides {
        if let Ok(value) = evaluator.eval(side, assignment) {
            counterexample.observe(print_term(side), &value);
        }
    }
}
