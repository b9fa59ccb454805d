//! Sort inference for the solver encoding: assign every free variable and
//! function a SimpleMath sort before translation picks solver sorts.
//!
//! Memberships never clash — they combine with [`Sort::meet`] toward the
//! most specific sort — so the only fatal outcome is a shape conflict: one
//! name used with two arities, or both as a variable and as a function.

use std::collections::BTreeMap;

use mathstep_core::{Formula, Judgment, Sort, Term};

use crate::error::SmtError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunSig {
    pub arg_sorts: Vec<Sort>,
    pub result_sort: Sort,
    /// Whether a definition exists; undefined functions stay uninterpreted.
    pub defined: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SymbolSorts {
    /// Free variables with their inferred sorts.
    pub vars: BTreeMap<String, Sort>,
    pub funs: BTreeMap<String, FunSig>,
}

/// Infer sorts for every symbol a judgment mentions, including inside the
/// desugared definition formulas that will be asserted alongside it.
///
/// Membership premises refine variable sorts only from top-level conjunctive
/// position, where the premise set genuinely implies them; a membership
/// under a negation or disjunction still translates as a predicate but must
/// not narrow the declared sort, or the encoding would exclude
/// counterexamples.
pub fn infer_sorts(judgment: &Judgment) -> Result<SymbolSorts, SmtError> {
    let mut table = SymbolSorts::default();

    for (_, def) in &judgment.definitions {
        let sig = FunSig {
            arg_sorts: def.arg_sorts.clone(),
            result_sort: def.result_sort,
            defined: true,
        };
        if let Some(existing) = table.funs.get(&def.name) {
            if existing.arg_sorts.len() != sig.arg_sorts.len() {
                return Err(SmtError::SortClash {
                    symbol: def.name.clone(),
                    detail: format!(
                        "defined with {} and {} parameters",
                        existing.arg_sorts.len(),
                        sig.arg_sorts.len()
                    ),
                });
            }
        }
        table.funs.insert(def.name.clone(), sig);
    }

    let mut scope = Vec::new();
    for formula in judgment
        .premise_formulas
        .iter()
        .chain(std::iter::once(&judgment.conclusion_formula))
    {
        scan_formula(formula, &mut scope, &mut table)?;
    }
    for (_, def) in &judgment.definitions {
        let desugared = mathstep_core::desugar_definition(def);
        scan_formula(&desugared, &mut scope, &mut table)?;
    }

    for premise in &judgment.premise_formulas {
        collect_memberships(premise, &mut table.vars);
    }

    Ok(table)
}

/// Walk a formula recording free variables and function shapes.
fn scan_formula(
    f: &Formula,
    scope: &mut Vec<String>,
    table: &mut SymbolSorts,
) -> Result<(), SmtError> {
    match f {
        Formula::Atom(_, lhs, rhs) => {
            scan_term(lhs, scope, table)?;
            scan_term(rhs, scope, table)
        }
        Formula::Member(t, _) => scan_term(t, scope, table),
        Formula::Not(inner) => scan_formula(inner, scope, table),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            scan_formula(a, scope, table)?;
            scan_formula(b, scope, table)
        }
        Formula::Forall(v, _, body) | Formula::Exists(v, _, body) => {
            scope.push(v.clone());
            let result = scan_formula(body, scope, table);
            scope.pop();
            result
        }
    }
}

fn scan_term(t: &Term, scope: &mut Vec<String>, table: &mut SymbolSorts) -> Result<(), SmtError> {
    match t {
        Term::Rational(_) => Ok(()),
        Term::Var(v) => {
            if scope.contains(v) {
                return Ok(());
            }
            if table.funs.contains_key(v) {
                return Err(SmtError::SortClash {
                    symbol: v.clone(),
                    detail: "used both as a variable and as a function".into(),
                });
            }
            // Unconstrained variables default to Real; memberships collected
            // afterwards refine this via meet.
            table.vars.entry(v.clone()).or_insert(Sort::Real);
            Ok(())
        }
        Term::App(name, args) => {
            if table.vars.contains_key(name) || scope.contains(name) {
                return Err(SmtError::SortClash {
                    symbol: name.clone(),
                    detail: "used both as a variable and as a function".into(),
                });
            }
            match table.funs.get(name) {
                Some(sig) if sig.arg_sorts.len() != args.len() => {
                    return Err(SmtError::SortClash {
                        symbol: name.clone(),
                        detail: format!(
                            "used with {} arguments but has {}",
                            args.len(),
                            sig.arg_sorts.len()
                        ),
                    });
                }
                Some(_) => {}
                None => {
                    table.funs.insert(
                        name.clone(),
                        FunSig {
                            arg_sorts: vec![Sort::Real; args.len()],
                            result_sort: Sort::Real,
                            defined: false,
                        },
                    );
                }
            }
            for arg in args {
                scan_term(arg, scope, table)?;
            }
            Ok(())
        }
        Term::Neg(a) => scan_term(a, scope, table),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) | Term::Div(a, b)
        | Term::Pow(a, b) => {
            scan_term(a, scope, table)?;
            scan_term(b, scope, table)
        }
    }
}

/// Memberships in top-level conjunctive position of a premise.
fn collect_memberships(f: &Formula, vars: &mut BTreeMap<String, Sort>) {
    match f {
        Formula::Member(Term::Var(v), sort) => {
            if let Some(current) = vars.get_mut(v) {
                *current = current.meet(*sort);
            }
        }
        Formula::And(a, b) => {
            collect_memberships(a, vars);
            collect_memberships(b, vars);
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mathstep_core::{judgments, parse_context};

    fn first_judgment(src: &str) -> Judgment {
        let ctx = parse_context(src).unwrap();
        judgments(&ctx).unwrap().remove(0)
    }

    #[test]
    fn membership_premises_refine_variable_sorts() {
        let j = first_judgment(
            "problem: Given a natural x > 0, conclude x + 1 > 1.\n\
             goal: x + 1 > 1\n\
             0 | FACT: x in NN\n\
             1 | FACT: x > 0\n\
             2 | CONCLUSION[0, 1]: x + 1 > 1 // add one\n",
        );
        let table = infer_sorts(&j).unwrap();
        assert_eq!(table.vars.get("x"), Some(&Sort::Nat));
    }

    #[test]
    fn unconstrained_variables_default_to_real() {
        let j = first_judgment(
            "problem: Reflexivity.\n\
             goal: x = x\n\
             0 | CONCLUSION[]: x = x // reflexive\n",
        );
        let table = infer_sorts(&j).unwrap();
        assert_eq!(table.vars.get("x"), Some(&Sort::Real));
    }

    #[test]
    fn negated_membership_does_not_narrow_the_sort() {
        let j = first_judgment(
            "problem: x is not a natural.\n\
             goal: x = x\n\
             0 | FACT: ~(x in NN)\n\
             1 | CONCLUSION[0]: x = x // trivial\n",
        );
        let table = infer_sorts(&j).unwrap();
        assert_eq!(table.vars.get("x"), Some(&Sort::Real));
    }

    #[test]
    fn defined_function_keeps_declared_signature() {
        let j = first_judgment(
            "problem: Compute f(4) for the Fibonacci-style recurrence.\n\
             goal: f(4) = 3\n\
             0 | DEFINITION: definition(f): NN -> NN f(n) := f(n-1) + f(n-2), if n >= 3; | 1, if n = 2; | 1, if n = 1\n\
             1 | CONCLUSION[0]: f(4) = 3 // unfold\n",
        );
        let table = infer_sorts(&j).unwrap();
        let sig = table.funs.get("f").unwrap();
        assert_eq!(sig.arg_sorts, vec![Sort::Nat]);
        assert_eq!(sig.result_sort, Sort::Nat);
        assert!(sig.defined);
    }

    #[test]
    fn arity_conflict_is_a_sort_clash() {
        let j = first_judgment(
            "problem: Inconsistent use of g.\n\
             goal: g(1) = 1\n\
             0 | FACT: g(1) = 1\n\
             1 | FACT: g(1, 2) = 3\n\
             2 | CONCLUSION[0, 1]: g(1) = 1 // restate\n",
        );
        match infer_sorts(&j) {
            Err(SmtError::SortClash { symbol, .. }) => assert_eq!(symbol, "g"),
            other => panic!("expected SortClash, got {other:?}"),
        }
    }

    #[test]
    fn variable_and_function_use_is_a_sort_clash() {
        let j = first_judgment(
            "problem: Inconsistent use of h.\n\
             goal: h = 1\n\
             0 | FACT: h = 1\n\
             1 | FACT: h(2) = 3\n\
             2 | CONCLUSION[0, 1]: h = 1 // restate\n",
        );
        assert!(matches!(infer_sorts(&j), Err(SmtError::SortClash { .. })));
    }
}
