//! Hand-rolled judgments for unit tests, bypassing the context layer.

use mathstep_core::{
    parse_definition, parse_formula, Judgment, Statement, StatementBody, StatementKind,
};

/// Build a judgment from formula source strings. Premises become FACT
/// statements with ids 0.., the conclusion cites all of them.
pub fn jdg(premises: &[&str], conclusion: &str, defs: &[&str]) -> Judgment {
    let definitions: Vec<_> = defs
        .iter()
        .enumerate()
        .map(|(i, d)| (i, parse_definition(d).expect("test definition parses")))
        .collect();
    let base = definitions.len();
    let premise_statements: Vec<Statement> = premises
        .iter()
        .enumerate()
        .map(|(i, p)| Statement {
            id: base + i,
            depth: 0,
            kind: StatementKind::Fact,
            premises: Vec::new(),
            body: StatementBody::Formula {
                formula: parse_formula(p).expect("test premise parses"),
            },
            source_text: Some((*p).to_string()),
        })
        .collect();
    let premise_formulas = premise_statements
        .iter()
        .map(|s| s.body.as_formula().unwrap().clone())
        .collect();
    let conclusion_formula = parse_formula(conclusion).expect("test conclusion parses");
    let conclusion = Statement {
        id: base + premises.len(),
        depth: 0,
        kind: StatementKind::Conclusion,
        premises: (base..base + premises.len()).collect(),
        body: StatementBody::Formula { formula: conclusion_formula.clone() },
        source_text: Some(conclusion.to_string()),
    };
    Judgment { premises: premise_statements, premise_formulas, conclusion, conclusion_formula, definitions }
}

pub const FIB: &str = "definition(f): NN -> NN f(n) := f(n - 1) + f(n - 2), if n >= 3; | 1, if n = 2; | 1, if n = 1";
