//! Symbolic agent. Three moves, tried in order of strength:
//!
//! 1. substitute premise equations of the form `v = t` into the claim; if the
//!    claim becomes variable-free, exact evaluation settles it;
//! 2. for an equational claim, check the two sides for identity by normal
//!    forms (with a sampled separating point when they differ);
//! 3. when a premise equation pins one variable down to finitely many values,
//!    compare that complete solution set against the claim (catches missing
//!    and invented roots).
//!
//! Any separating point is replayed through exact evaluation against every
//! premise before it is allowed to justify `Invalid`.

use std::collections::BTreeMap;

use mathstep_cas::{check_equiv, solve_for, Env, Equivalence, EquivOptions, Evaluator, Root};
use mathstep_core::{
    format_rational, print_formula, print_term, CaptureError, Definition, Formula, Judgment,
    Relation, Sort, Term, Verdict,
};
use num::{BigRational, Zero};

use super::{counterexample_at, format_assignment, observed_suffix, replay_witness, Replay};
use crate::route::quantifier_free;

pub fn check(judgment: &Judgment, options: &EquivOptions) -> Verdict {
    match check_inner(judgment, options) {
        Verdict::Unknown { reason } => Verdict::unknown(format!("cas: {reason}")),
        decided => decided,
    }
}

fn check_inner(judgment: &Judgment, options: &EquivOptions) -> Verdict {
    if !quantifier_free(&judgment.conclusion_formula) {
        return Verdict::unknown("quantified claims are out of scope for the symbolic engine");
    }
    let all_ground = judgment.conclusion_formula.is_ground()
        && judgment.premise_formulas.iter().all(|f| f.is_ground());
    if all_ground {
        return Verdict::unknown("variable-free judgment, deferring to the exact evaluator");
    }

    let defs: Vec<Definition> = judgment.definitions.iter().map(|(_, d)| d.clone()).collect();
    let bindings = collect_bindings(&judgment.premise_formulas);
    let substituted = match apply_bindings(&judgment.conclusion_formula, &bindings) {
        Ok(f) => f,
        Err(e) => return Verdict::unknown(e.to_string()),
    };

    if substituted.is_ground() {
        return check_ground(judgment, &defs, &bindings, &substituted);
    }

    match shape(&substituted) {
        Shape::Equation(lhs, rhs) => {
            check_equation(judgment, &defs, &bindings, &substituted, lhs, rhs, options)
        }
        Shape::Conjunction(leaves) => {
            check_conjunction(judgment, &defs, &bindings, &substituted, &leaves, options)
        }
        Shape::Disjunction(leaves) => {
            root_analysis(judgment, &defs, &bindings, &substituted, &leaves)
        }
        Shape::Other => Verdict::unknown(
            "the claim's shape is outside the symbolic engine (it handles equations and \
             conjunctions or disjunctions of equations)",
        ),
    }
}

enum Shape<'a> {
    Equation(&'a Term, &'a Term),
    Conjunction(Vec<(&'a Term, &'a Term)>),
    Disjunction(Vec<(&'a Term, &'a Term)>),
    Other,
}

fn shape(formula: &Formula) -> Shape<'_> {
    match formula {
        Formula::Atom(Relation::Eq, lhs, rhs) => Shape::Equation(lhs, rhs),
        Formula::And(..) => {
            let mut leaves = Vec::new();
            if eq_leaves(formula, false, &mut leaves) {
                Shape::Conjunction(leaves)
            } else {
                Shape::Other
            }
        }
        Formula::Or(..) => {
            let mut leaves = Vec::new();
            if eq_leaves(formula, true, &mut leaves) {
                Shape::Disjunction(leaves)
            } else {
                Shape::Other
            }
        }
        _ => Shape::Other,
    }
}

fn eq_leaves<'a>(formula: &'a Formula, or_mode: bool, out: &mut Vec<(&'a Term, &'a Term)>) -> bool {
    match formula {
        Formula::Atom(Relation::Eq, lhs, rhs) => {
            out.push((lhs, rhs));
            true
        }
        Formula::Or(a, b) if or_mode => eq_leaves(a, or_mode, out) && eq_leaves(b, or_mode, out),
        Formula::And(a, b) if !or_mode => eq_leaves(a, or_mode, out) && eq_leaves(b, or_mode, out),
        _ => false,
    }
}

/// Premise equations `v = t` (or `t = v`) with `v` not occurring in `t`.
/// First equation per variable wins; later ones stay around as constraints.
fn collect_bindings(premises: &[Formula]) -> Vec<(String, Term)> {
    let mut out: Vec<(String, Term)> = Vec::new();
    for premise in premises {
        let Formula::Atom(Relation::Eq, lhs, rhs) = premise else { continue };
        let candidate = match (lhs, rhs) {
            (Term::Var(v), t) if !t.free_vars().contains(v) => Some((v.clone(), t.clone())),
            (t, Term::Var(v)) if !t.free_vars().contains(v) => Some((v.clone(), t.clone())),
            _ => None,
        };
        if let Some((var, term)) = candidate {
            if !out.iter().any(|(bound, _)| *bound == var) {
                out.push((var, term));
            }
        }
    }
    out
}

/// Apply every binding repeatedly until the formula stops changing, so chains
/// like `z = y * y`, `y = x + 1` collapse fully. The pass count is capped; a
/// cyclic binding set simply leaves residual variables, which later stages
/// handle soundly.
fn apply_bindings(
    formula: &Formula,
    bindings: &[(String, Term)],
) -> Result<Formula, CaptureError> {
    let mut current = formula.clone();
    for _ in 0..=bindings.len() {
        let mut next = current.clone();
        for (var, term) in bindings {
            next = next.substitute(var, term)?;
        }
        if next == current {
            break;
        }
        current = next;
    }
    Ok(current)
}

/// A concrete point for replay: zero-default every variable, then pin the
/// bound ones down by evaluating their defining terms. `seed` (a sampled
/// separating point) takes precedence.
fn witness_env(
    judgment: &Judgment,
    defs: &[Definition],
    bindings: &[(String, Term)],
    seed: &BTreeMap<String, BigRational>,
) -> Env {
    let mut env = Env::new();
    for var in super::judgment_vars(judgment) {
        env.insert(var, BigRational::zero());
    }
    for (var, value) in seed {
        env.insert(var.clone(), value.clone());
    }
    let mut evaluator = Evaluator::new(defs.iter().cloned());
    for _ in 0..=bindings.len() {
        let mut changed = false;
        for (var, term) in bindings {
            if seed.contains_key(var) {
                continue;
            }
            if let Ok(value) = evaluator.eval(term, &env) {
                if env.get(var) != Some(&value) {
                    env.insert(var.clone(), value);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    env
}

fn check_ground(
    judgment: &Judgment,
    defs: &[Definition],
    bindings: &[(String, Term)],
    substituted: &Formula,
) -> Verdict {
    let mut evaluator = Evaluator::new(defs.iter().cloned());
    match evaluator.eval_formula(substituted, &Env::new()) {
        Ok(true) => Verdict::valid(
            "cas",
            format!(
                "substituting the cited premises reduces the claim to `{}`, which holds by exact evaluation",
                print_formula(substituted)
            ),
        ),
        Ok(false) => {
            let env = witness_env(judgment, defs, bindings, &BTreeMap::new());
            match replay_witness(judgment, &env) {
                Replay::Confirmed => {
                    let cex = counterexample_at(judgment, &env);
                    let reason = format!(
                        "substituting the cited premises reduces the claim to `{}`, which is false{}",
                        print_formula(substituted),
                        observed_suffix(&cex)
                    );
                    Verdict::invalid(reason, Some(cex))
                }
                _ => Verdict::unknown(
                    "the substituted claim is false, but the premises could not be replayed exactly",
                ),
            }
        }
        Err(e) => Verdict::unknown(format!("cannot evaluate the substituted claim: {e}")),
    }
}

fn check_equation(
    judgment: &Judgment,
    defs: &[Definition],
    bindings: &[(String, Term)],
    substituted: &Formula,
    lhs: &Term,
    rhs: &Term,
    options: &EquivOptions,
) -> Verdict {
    let mut reasons: Vec<String> = Vec::new();
    match check_equiv(lhs, rhs, defs, options) {
        Equivalence::Equal { normal_form } => {
            return Verdict::valid(
                "cas",
                format!("both sides normalize to `{}`", print_term(&normal_form)),
            )
        }
        Equivalence::NotEqual { assignment, lhs_value, rhs_value } => {
            let env = witness_env(judgment, defs, bindings, &assignment);
            match replay_witness(judgment, &env) {
                Replay::Confirmed => {
                    let mut cex = counterexample_at(judgment, &env);
                    cex.observe(print_term(lhs), &lhs_value);
                    cex.observe(print_term(rhs), &rhs_value);
                    let reason = format!(
                        "the sides of `{}` differ at {}: `{}` = {} but `{}` = {}",
                        print_formula(substituted),
                        format_assignment(&assignment),
                        print_term(lhs),
                        format_rational(&lhs_value),
                        print_term(rhs),
                        format_rational(&rhs_value)
                    );
                    return Verdict::invalid(reason, Some(cex));
                }
                Replay::PremiseFails(i) => reasons.push(format!(
                    "the sides differ at {}, but premise `{}` fails there",
                    format_assignment(&assignment),
                    print_formula(&judgment.premise_formulas[i])
                )),
                Replay::ConclusionHolds => reasons
                    .push("a sampled separating point did not survive exact replay".to_string()),
                Replay::Error(e) => {
                    reasons.push(format!("cannot replay the separating point: {e}"))
                }
            }
        }
        Equivalence::Unknown { reason } => reasons.push(reason),
    }

    // Not an identity (or undecided) — but a premise equation may still pin
    // the variable down to finitely many values.
    match root_analysis(judgment, defs, bindings, substituted, &[(lhs, rhs)]) {
        Verdict::Unknown { reason } => {
            reasons.push(reason);
            Verdict::unknown(reasons.join("; "))
        }
        decided => decided,
    }
}

fn check_conjunction(
    judgment: &Judgment,
    defs: &[Definition],
    bindings: &[(String, Term)],
    substituted: &Formula,
    leaves: &[(&Term, &Term)],
    options: &EquivOptions,
) -> Verdict {
    let mut reasons: Vec<String> = Vec::new();
    let mut normal_forms: Vec<String> = Vec::new();
    for &(lhs, rhs) in leaves {
        match check_equiv(lhs, rhs, defs, options) {
            Equivalence::Equal { normal_form } => {
                normal_forms.push(print_term(&normal_form));
            }
            Equivalence::NotEqual { assignment, lhs_value, rhs_value } => {
                // One false conjunct falsifies the whole claim.
                let env = witness_env(judgment, defs, bindings, &assignment);
                if let Replay::Confirmed = replay_witness(judgment, &env) {
                    let mut cex = counterexample_at(judgment, &env);
                    cex.observe(print_term(lhs), &lhs_value);
                    cex.observe(print_term(rhs), &rhs_value);
                    let at = if assignment.is_empty() {
                        String::new()
                    } else {
                        format!(" at {}", format_assignment(&assignment))
                    };
                    let reason = format!(
                        "the conjunct `{} = {}` of `{}` fails{at}: `{}` = {} but `{}` = {}",
                        print_term(lhs),
                        print_term(rhs),
                        print_formula(substituted),
                        print_term(lhs),
                        format_rational(&lhs_value),
                        print_term(rhs),
                        format_rational(&rhs_value)
                    );
                    return Verdict::invalid(reason, Some(cex));
                }
                reasons.push(format!(
                    "conjunct `{} = {}` has a separating point that violates the premises",
                    print_term(lhs),
                    print_term(rhs)
                ));
            }
            Equivalence::Unknown { reason } => reasons.push(reason),
        }
    }
    if reasons.is_empty() {
        return Verdict::valid(
            "cas",
            format!("every conjunct is an identity (normal forms: {})", normal_forms.join(", ")),
        );
    }
    Verdict::unknown(reasons.join("; "))
}

/// When one premise equation completely determines the claim's variable,
/// compare its full solution set against the claim's disjuncts.
fn root_analysis(
    judgment: &Judgment,
    defs: &[Definition],
    bindings: &[(String, Term)],
    substituted: &Formula,
    leaves: &[(&Term, &Term)],
) -> Verdict {
    let vars = substituted.free_vars();
    if vars.len() != 1 {
        return Verdict::unknown("root analysis needs a single-variable claim");
    }
    let var = vars.into_iter().next().unwrap();

    let mut solved: Option<(Formula, Vec<Root>)> = None;
    for premise in &judgment.premise_formulas {
        let Ok(reduced) = apply_bindings(premise, bindings) else { continue };
        let Formula::Atom(Relation::Eq, lhs, rhs) = &reduced else { continue };
        if let Ok((solved_var, roots)) = solve_for(lhs, rhs) {
            if solved_var == var {
                solved = Some((reduced.clone(), roots));
                break;
            }
        }
    }
    let Some((premise, roots)) = solved else {
        return Verdict::unknown("no premise equation determines the claim's variable");
    };
    if roots.is_empty() {
        return Verdict::valid(
            "cas",
            format!(
                "the premise `{}` has no real solutions, so this step holds vacuously",
                print_formula(&premise)
            ),
        );
    }

    let unmatched: Vec<&Root> = roots
        .iter()
        .filter(|&root| !leaves.iter().any(|&(lhs, rhs)| leaf_admits(defs, lhs, rhs, &var, root)))
        .collect();
    if unmatched.is_empty() {
        let listed = roots.iter().map(Root::to_string).collect::<Vec<_>>().join(", ");
        return Verdict::valid(
            "cas",
            format!(
                "`{}` determines {var} completely (solutions: {listed}), and each solution satisfies the claim",
                print_formula(&premise)
            ),
        );
    }

    // Certify one uncovered solution as a counterexample.
    for &root in &unmatched {
        match root.as_rational() {
            Some(value) => {
                let mut seed = BTreeMap::new();
                seed.insert(var.clone(), value.clone());
                let env = witness_env(judgment, defs, bindings, &seed);
                if let Replay::Confirmed = replay_witness(judgment, &env) {
                    let cex = counterexample_at(judgment, &env);
                    let reason = format!(
                        "`{}` also admits {var} = {}, which satisfies every premise but falsifies the claim `{}`",
                        print_formula(&premise),
                        format_rational(value),
                        print_formula(substituted)
                    );
                    return Verdict::invalid(reason, Some(cex));
                }
            }
            None => {
                if radical_admissible(judgment, bindings, &var, root, &premise) {
                    // No exact rational witness exists to replay, so the
                    // counterexample stays textual: the root is irrational but
                    // certified symbolically against every premise.
                    let reason = format!(
                        "`{}` also admits the irrational solution {var} = {root}, which satisfies every premise but falsifies the claim `{}`",
                        print_formula(&premise),
                        print_formula(substituted)
                    );
                    return Verdict::invalid(reason, None);
                }
            }
        }
    }
    Verdict::unknown(
        "the claim does not cover every solution of the premise equation, but no uncovered \
         solution could be certified as a counterexample",
    )
}

/// Can a rational point satisfy this equation leaf at `var = root`? For
/// irrational roots the leaf must itself be solvable with the root in its
/// solution set.
fn leaf_admits(defs: &[Definition], lhs: &Term, rhs: &Term, var: &str, root: &Root) -> bool {
    match root.as_rational() {
        Some(value) => {
            let mut env = Env::new();
            env.insert(var.to_string(), value.clone());
            let formula = Formula::eq(lhs.clone(), rhs.clone());
            matches!(
                Evaluator::new(defs.iter().cloned()).eval_formula(&formula, &env),
                Ok(true)
            )
        }
        None => matches!(
            solve_for(lhs, rhs),
            Ok((solved_var, roots)) if solved_var == var && roots.contains(root)
        ),
    }
}

/// An irrational root is a usable witness only if every premise can be
/// verified to hold there symbolically: the solved premise itself, sort
/// annotations (`RR` admits it, the rational sorts exclude it), and other
/// equations solvable to a set containing the root. Anything else means we
/// cannot certify the point and must abstain.
fn radical_admissible(
    judgment: &Judgment,
    bindings: &[(String, Term)],
    var: &str,
    root: &Root,
    solved_premise: &Formula,
) -> bool {
    for premise in &judgment.premise_formulas {
        let Ok(reduced) = apply_bindings(premise, bindings) else { return false };
        if reduced == *solved_premise {
            continue;
        }
        match &reduced {
            Formula::Member(Term::Var(v), sort) if v == var => {
                if *sort != Sort::Real {
                    return false;
                }
            }
            Formula::Atom(Relation::Eq, lhs, rhs) => match solve_for(lhs, rhs) {
                Ok((solved_var, roots)) if solved_var == var && roots.contains(root) => {}
                _ => return false,
            },
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::jdg;
    use mathstep_core::Counterexample;

    fn opts() -> EquivOptions {
        EquivOptions::default()
    }

    #[test]
    fn binomial_expansion_is_an_identity_after_substitution() {
        let j = jdg(&["y = (x + 1)^2"], "y = x^2 + 2 * x + 1", &[]);
        let verdict = check(&j, &opts());
        let Verdict::Valid { tool, evidence } = verdict else {
            panic!("expected valid, got {verdict:?}")
        };
        assert_eq!(tool, "cas");
        assert!(evidence.contains("normalize"), "{evidence}");
    }

    #[test]
    fn wrong_expansion_gets_a_replayed_counterexample() {
        let j = jdg(&["y = (x + 1)^2"], "y = x^2 + 1", &[]);
        let Verdict::Invalid { reason, counterexample } = check(&j, &opts()) else {
            panic!("expected invalid")
        };
        let cex = counterexample.expect("separating point is replayable");
        let assignment = cex.rational_assignment().expect("rational assignment");
        // the witness must genuinely satisfy the premise and refute the claim
        let x = assignment.get("x").expect("x assigned").clone();
        let y = assignment.get("y").expect("y assigned").clone();
        let one = BigRational::from_integer(1.into());
        assert_eq!(y, (x.clone() + one.clone()) * (x.clone() + one.clone()));
        assert_ne!(y, x.clone() * x + one);
        assert!(reason.contains("differ"), "{reason}");
    }

    #[test]
    fn chained_bindings_collapse() {
        let j = jdg(&["y = x + 1", "z = y * y"], "z = x^2 + 2 * x + 1", &[]);
        assert!(check(&j, &opts()).is_valid());
    }

    #[test]
    fn substitution_to_ground_decides_exactly() {
        let j = jdg(&["x = 3"], "2 * x = 5", &[]);
        let Verdict::Invalid { reason, counterexample } = check(&j, &opts()) else {
            panic!("expected invalid")
        };
        assert!(reason.contains("2 * 3 = 5") || reason.contains("6"), "{reason}");
        let cex = counterexample.unwrap();
        assert_eq!(cex.assignment.get("x").map(String::as_str), Some("3"));
    }

    #[test]
    fn complete_root_set_validates_a_disjunction() {
        let j = jdg(&["x in RR", "x^2 - 4 * x + 3 = 0"], "x = 1 \\/ x = 3", &[]);
        let Verdict::Valid { evidence, .. } = check(&j, &opts()) else {
            panic!("expected valid")
        };
        assert!(evidence.contains("1") && evidence.contains("3"), "{evidence}");
    }

    #[test]
    fn missing_root_is_invalid_with_the_dropped_solution() {
        let j = jdg(&["x in RR", "x^2 - 4 * x + 3 = 0"], "x = 1", &[]);
        let Verdict::Invalid { reason, counterexample } = check(&j, &opts()) else {
            panic!("expected invalid")
        };
        assert!(reason.contains("x = 3"), "{reason}");
        let cex = counterexample.expect("rational root replays");
        assert_eq!(cex.assignment.get("x").map(String::as_str), Some("3"));
    }

    #[test]
    fn dropped_negative_root_is_caught() {
        // x^2 = 4 admits -2 as well; claiming only x = 2 drops it.
        let j = jdg(&["x^2 = 4"], "x = 2", &[]);
        let Verdict::Invalid { counterexample, .. } = check(&j, &opts()) else {
            panic!("expected invalid")
        };
        assert_eq!(
            counterexample.unwrap().assignment.get("x").map(String::as_str),
            Some("-2")
        );
    }

    #[test]
    fn irrational_missing_root_is_reported_textually() {
        let j = jdg(&["x in RR", "x^2 = 2"], "x = 0", &[]);
        let Verdict::Invalid { reason, counterexample } = check(&j, &opts()) else {
            panic!("expected invalid")
        };
        assert!(reason.contains("sqrt(2)"), "{reason}");
        assert_eq!(counterexample, None::<Counterexample>);
    }

    #[test]
    fn rational_sort_premise_blocks_the_irrational_witness() {
        // Every solution of x^2 = 2 is irrational, so under `x in QQ` the
        // premises are unsatisfiable and no counterexample exists.
        let j = jdg(&["x in QQ", "x^2 = 2"], "x = 0", &[]);
        assert!(check(&j, &opts()).is_unknown());
    }

    #[test]
    fn inequality_claims_are_out_of_scope() {
        let j = jdg(&["x > 2"], "x > 1", &[]);
        let Verdict::Unknown { reason } = check(&j, &opts()) else {
            panic!("expected unknown")
        };
        assert!(reason.starts_with("cas:"), "{reason}");
    }

    #[test]
    fn ground_judgments_are_deferred_to_the_evaluator() {
        let verdict = check(&jdg(&[], "2 + 2 = 4", &[]), &opts());
        let Verdict::Unknown { reason } = verdict else { panic!("expected unknown") };
        assert!(reason.contains("deferring"), "{reason}");
    }

    #[test]
    fn conjunction_of_identities_is_valid() {
        let j = jdg(
            &["y = x + 1"],
            "y^2 = x^2 + 2 * x + 1 /\\ 2 * y = 2 * x + 2",
            &[],
        );
        assert!(check(&j, &opts()).is_valid());
    }

    #[test]
    fn false_conjunct_sinks_the_conjunction() {
        let j = jdg(&["y = x + 1"], "y^2 = x^2 + 2 * x + 1 /\\ y = x + 2", &[]);
        assert!(check(&j, &opts()).is_invalid());
    }

    #[test]
    fn contradictory_premises_do_not_yield_a_counterexample() {
        // x = 1 and x = 2 cannot hold together; the replay gate must refuse
        // to certify any point, leaving the verdict undecided here.
        let j = jdg(&["x = 1", "x = 2"], "x = 5", &[]);
        assert!(!check(&j, &opts()).is_invalid());
    }
}
