//! Desugaring of guarded definitions into quantified formulas.
//!
//! `definition(f): NN -> NN f(n) := f(n-1) + f(n-2), if n >= 3; | 1, if n = 2; | 1, if n = 1`
//! becomes
//! `forall n, n in NN -> ((n = 2 \/ n = 1 -> f(n) = 1) /\ (n >= 3 -> f(n) = f(n-1) + f(n-2)))`
//! up to conjunct/disjunct order: branches with structurally identical bodies
//! are merged by disjoining their guards, each merged branch yields one
//! implication conjunct, and the whole is closed under sorted quantifiers with
//! a membership antecedent per parameter.

use crate::ast::{Definition, Formula, Term};

/// Branch groups after merging identical bodies: guards in first-occurrence
/// order, `None` when any branch in the group was unconditional.
fn merge_branches(def: &Definition) -> Vec<(Term, Option<Vec<&Formula>>)> {
    let mut groups: Vec<(Term, Option<Vec<&Formula>>)> = Vec::new();
    for branch in &def.branches {
        if let Some((_, guards)) = groups.iter_mut().find(|(body, _)| *body == branch.body) {
            match (&branch.guard, guards.as_mut()) {
                // An unconditional branch subsumes every guard for this body.
                (None, _) => *guards = None,
                (Some(_), None) => {}
                (Some(g), Some(list)) => list.push(g),
            }
        } else {
            groups.push((branch.body.clone(), branch.guard.as_ref().map(|g| vec![g])));
        }
    }
    groups
}

fn or_all(guards: Vec<&Formula>) -> Formula {
    let mut iter = guards.into_iter().rev();
    let mut acc = iter.next().expect("merged guard group is nonempty").clone();
    for g in iter {
        acc = Formula::or(g.clone(), acc);
    }
    acc
}

fn and_all(mut conjuncts: Vec<Formula>) -> Formula {
    let mut acc = conjuncts.pop().expect("at least one conjunct");
    while let Some(c) = conjuncts.pop() {
        acc = Formula::and(c, acc);
    }
    acc
}

/// Rewrite a definition as a single quantified formula (see module docs).
pub fn desugar_definition(def: &Definition) -> Formula {
    let head = Term::App(
        def.name.clone(),
        def.params.iter().map(|p| Term::Var(p.clone())).collect(),
    );

    let conjuncts: Vec<Formula> = merge_branches(def)
        .into_iter()
        .map(|(body, guards)| {
            let eq = Formula::eq(head.clone(), body);
            match guards {
                None => eq,
                Some(gs) => Formula::implies(or_all(gs), eq),
            }
        })
        .collect();
    let branch_part = and_all(conjuncts);

    let memberships: Vec<Formula> = def
        .params
        .iter()
        .zip(&def.arg_sorts)
        .map(|(p, sort)| Formula::Member(Term::Var(p.clone()), *sort))
        .collect();
    let mut body = Formula::implies(and_all(memberships), branch_part);

    for (p, sort) in def.params.iter().zip(&def.arg_sorts).rev() {
        body = Formula::Forall(p.clone(), *sort, Box::new(body));
    }
    body
}
