//! Property tests: printing any parser-producible AST and re-parsing it gives
//! back the identical AST, and JSON serialization round-trips exactly.
//!
//! The generators stay inside the parser's image: literal divisions and
//! negated literals fold to rational literals at parse time, so they are never
//! generated as explicit `Div`/`Neg` nodes, and `Pow` exponents are only
//! nonnegative integer literals or variables.

use num::BigRational;
use proptest::prelude::*;

use mathstep_core::{
    parse_formula, parse_term, print_formula, print_term, Formula, Relation, Sort, Term,
};

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| {
        BigRational::new(num::BigInt::from(n), num::BigInt::from(d))
    })
}

fn var_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["x", "y", "z", "a", "b", "n"]).prop_map(str::to_string)
}

fn fun_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["f", "g", "h"]).prop_map(str::to_string)
}

fn is_literal(t: &Term) -> bool {
    matches!(t, Term::Rational(_))
}

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        rational().prop_map(Term::Rational),
        var_name().prop_map(Term::Var),
    ];
    leaf.prop_recursive(3, 24, 4, |inner| {
        prop_oneof![
            (fun_name(), prop::collection::vec(inner.clone(), 1..3))
                .prop_map(|(name, args)| Term::App(name, args)),
            inner.clone().prop_filter_map("negated literals fold", |t| {
                if is_literal(&t) {
                    None
                } else {
                    Some(Term::Neg(Box::new(t)))
                }
            }),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_filter_map("literal divisions fold", |(a, b)| {
                if is_literal(&a) && is_literal(&b) {
                    None
                } else {
                    Some(Term::Div(Box::new(a), Box::new(b)))
                }
            }),
            (inner, prop_oneof![
                (0i64..10).prop_map(Term::int),
                var_name().prop_map(Term::Var),
            ])
                .prop_map(|(base, exp)| Term::Pow(Box::new(base), Box::new(exp))),
        ]
    })
}

fn sort_strategy() -> impl Strategy<Value = Sort> {
    prop::sample::select(vec![Sort::Nat, Sort::Int, Sort::Rat, Sort::Real])
}

fn relation_strategy() -> impl Strategy<Value = Relation> {
    prop::sample::select(vec![
        Relation::Eq,
        Relation::Ne,
        Relation::Lt,
        Relation::Le,
        Relation::Gt,
        Relation::Ge,
    ])
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (relation_strategy(), term_strategy(), term_strategy())
            .prop_map(|(rel, lhs, rhs)| Formula::Atom(rel, lhs, rhs)),
        (term_strategy(), sort_strategy()).prop_map(|(t, s)| Formula::Member(t, s)),
    ];
    atom.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
            (var_name(), sort_strategy(), inner.clone())
                .prop_map(|(v, s, body)| Formula::Forall(v, s, Box::new(body))),
            (var_name(), sort_strategy(), inner)
                .prop_map(|(v, s, body)| Formula::Exists(v, s, Box::new(body))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_then_parse_is_identity_on_terms(t in term_strategy()) {
        let printed = print_term(&t);
        let back = parse_term(&printed)
            .unwrap_or_else(|e| panic!("printed term failed to parse: {printed:?}: {e}"));
        prop_assert_eq!(back, t, "via {}", printed);
    }

    #[test]
    fn print_then_parse_is_identity_on_formulas(f in formula_strategy()) {
        let printed = print_formula(&f);
        let back = parse_formula(&printed)
            .unwrap_or_else(|e| panic!("printed formula failed to parse: {printed:?}: {e}"));
        prop_assert_eq!(back, f, "via {}", printed);
    }

    #[test]
    fn json_round_trip_is_exact(f in formula_strategy()) {
        let json = serde_json::to_string(&f).unwrap();
        let back: Formula = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn parser_never_panics_on_arbitrary_ascii(s in "[ -~]{0,60}") {
        let _ = parse_formula(&s);
        let _ = parse_term(&s);
    }
}
