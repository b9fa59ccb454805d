//! Exact-arithmetic agent: decides variable-free judgments outright by
//! evaluating every formula over the rationals, definitions included.

use mathstep_cas::{Env, Evaluator};
use mathstep_core::{print_formula, Counterexample, Judgment, Verdict};

use super::{observe_formula, observed_suffix};
use crate::route::quantifier_free;

pub fn check(judgment: &Judgment) -> Verdict {
    let closed = judgment
        .premise_formulas
        .iter()
        .chain(std::iter::once(&judgment.conclusion_formula))
        .all(|f| quantifier_free(f) && f.is_ground());
    if !closed {
        return Verdict::unknown("eval: the judgment is not variable-free");
    }

    let mut evaluator = Evaluator::new(judgment.definitions.iter().map(|(_, d)| d.clone()));
    let env = Env::new();
    for (i, premise) in judgment.premise_formulas.iter().enumerate() {
        match evaluator.eval_formula(premise, &env) {
            Ok(true) => {}
            Ok(false) => {
                // A false premise entails anything; the error lives at the
                // step that stated the premise, not here.
                let id = judgment.premises.get(i).map(|s| s.id);
                return Verdict::valid(
                    "eval",
                    match id {
                        Some(id) => format!(
                            "cited premise {id} (`{}`) is false under exact evaluation, so this step holds vacuously",
                            print_formula(premise)
                        ),
                        None => format!(
                            "premise `{}` is false under exact evaluation, so this step holds vacuously",
                            print_formula(premise)
                        ),
                    },
                );
            }
            Err(e) => {
                return Verdict::unknown(format!(
                    "eval: cannot evaluate premise `{}`: {e}",
                    print_formula(premise)
                ))
            }
        }
    }

    match evaluator.eval_formula(&judgment.conclusion_formula, &env) {
        Ok(true) => {
            let mut observed = Counterexample::default();
            observe_formula(&mut evaluator, &judgment.conclusion_formula, &env, &mut observed);
            Verdict::valid(
                "eval",
                format!(
                    "`{}` holds under exact evaluation{}",
                    print_formula(&judgment.conclusion_formula),
                    observed_suffix(&observed)
                ),
            )
        }
        Ok(false) => {
            let mut cex = Counterexample::default();
            observe_formula(&mut evaluator, &judgment.conclusion_formula, &env, &mut cex);
            let reason = format!(
                "the claim `{}` is false under exact evaluation{}",
                print_formula(&judgment.conclusion_formula),
                observed_suffix(&cex)
            );
            Verdict::invalid(reason, Some(cex))
        }
        Err(e) => Verdict::unknown(format!("eval: {e}")),
    }
}
