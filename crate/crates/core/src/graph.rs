//! The solution graph: statements as vertices, declared premise citations as
//! edges, plus the per-step judgments and cost metrics derived from it.
//!
//! Each CONCLUSION yields a judgment `premises ⊢ conclusion`. Cited
//! DEFINITION statements ride along as definitions-in-scope rather than as
//! logical premises. A premise inside a closed subproof is wrapped under the
//! assumptions that were open there but are no longer open at the citing
//! statement, so the judgment only ever sees formulas that hold at its own
//! position.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::{Definition, Formula};
use crate::context::{validate_context, Context, Severity, Statement, StatementKind};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("context fails structural validation: {0}")]
    InvalidContext(String),
    #[error("statement {0} cited as a premise has no usable formula")]
    UnusablePremise(usize),
}

/// Vertices are statement ids; a directed edge `(p, c)` records that `c`
/// cites `p` as a premise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionGraph {
    pub node_count: usize,
    pub kinds: Vec<StatementKind>,
    /// Sorted, deduplicated `(premise, conclusion)` pairs.
    pub edges: Vec<(usize, usize)>,
}

impl SolutionGraph {
    pub fn in_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|(_, c)| *c == node).count()
    }

    /// Ids of the direct premises of `node`, ascending.
    pub fn parents(&self, node: usize) -> Vec<usize> {
        self.edges.iter().filter(|(_, c)| *c == node).map(|(p, _)| *p).collect()
    }
}

fn ensure_valid(ctx: &Context) -> Result<(), GraphError> {
    let errors: Vec<String> = validate_context(ctx)
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .map(|d| d.message)
        .collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(GraphError::InvalidContext(errors.join("; ")))
    }
}

/// Build the premise graph of a structurally valid context.
pub fn build_graph(ctx: &Context) -> Result<SolutionGraph, GraphError> {
    ensure_valid(ctx)?;
    let mut edges = BTreeSet::new();
    for s in &ctx.statements {
        for &p in &s.premises {
            edges.insert((p, s.id));
        }
    }
    Ok(SolutionGraph {
        node_count: ctx.statements.len(),
        kinds: ctx.statements.iter().map(|s| s.kind).collect(),
        edges: edges.into_iter().collect(),
    })
}

/// One verification task: everything the checker may assume, and the claim.
#[derive(Clone, Debug, PartialEq)]
pub struct Judgment {
    /// The cited statements (definitions excluded), in citation order.
    pub premises: Vec<Statement>,
    /// The premises as formulas usable at the conclusion's position:
    /// statements from closed subproofs arrive wrapped under their closed
    /// assumptions (`assumption -> formula`).
    pub premise_formulas: Vec<Formula>,
    pub conclusion: Statement,
    pub conclusion_formula: Formula,
    /// Every definition in the context, with its statement id. Definitions
    /// are globally scoped.
    pub definitions: Vec<(usize, Definition)>,
}

/// Derive the judgment for each CONCLUSION statement, in id order.
pub fn judgments(ctx: &Context) -> Result<Vec<Judgment>, GraphError> {
    ensure_valid(ctx)?;
    let chains = ctx.assumption_chains();
    let definitions: Vec<(usize, Definition)> = ctx
        .definitions()
        .into_iter()
        .map(|(id, d)| (id, d.clone()))
        .collect();

    let mut out = Vec::new();
    for s in &ctx.statements {
        if s.kind != StatementKind::Conclusion {
            continue;
        }
        let conclusion_formula = s
            .body
            .as_formula()
            .ok_or(GraphError::UnusablePremise(s.id))?
            .clone();
        let mut premises = Vec::new();
        let mut premise_formulas = Vec::new();
        for &p in &s.premises {
            let cited = &ctx.statements[p];
            if cited.kind == StatementKind::Definition {
                continue; // rides along via `definitions`
            }
            let base = cited
                .body
                .as_formula()
                .ok_or(GraphError::UnusablePremise(p))?
                .clone();
            // Assumptions open at the premise but closed at the conclusion
            // must be reintroduced as hypotheses, innermost closest to the
            // formula.
            let here: BTreeSet<usize> = chains[s.id].iter().copied().collect();
            let mut wrapped = base;
            for &a in chains[p].iter().rev() {
                if !here.contains(&a) {
                    let assumption = ctx.statements[a]
                        .body
                        .as_formula()
                        .ok_or(GraphError::UnusablePremise(a))?
                        .clone();
                    wrapped = Formula::implies(assumption, wrapped);
                }
            }
            premises.push(cited.clone());
            premise_formulas.push(wrapped);
        }
        out.push(Judgment {
            premises,
            premise_formulas,
            conclusion: s.clone(),
            conclusion_formula,
            definitions: definitions.clone(),
        });
    }
    Ok(out)
}

/// Non-CONCLUSION ancestors of `node` in the premise graph: the facts,
/// assumptions, theorems, and definitions the statement ultimately rests on.
pub fn foundational_premises(graph: &SolutionGraph, node: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![node];
    let mut out = BTreeSet::new();
    while let Some(current) = stack.pop() {
        for p in graph.parents(current) {
            if seen.insert(p) {
                if graph.kinds[p] == StatementKind::Conclusion {
                    stack.push(p);
                } else {
                    out.insert(p);
                }
            }
        }
    }
    out
}

/// A conclusion that cites other conclusions also holds directly from its
/// foundational premises; chaining judgments yields this stronger statement
/// without re-verifying anything.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corollary {
    pub conclusion: usize,
    pub foundational: Vec<usize>,
}

/// Corollaries for every conclusion with at least one CONCLUSION premise.
pub fn strengthened_corollaries(graph: &SolutionGraph) -> Vec<Corollary> {
    let mut out = Vec::new();
    for node in 0..graph.node_count {
        if graph.kinds[node] != StatementKind::Conclusion {
            continue;
        }
        let has_conclusion_parent = graph
            .parents(node)
            .iter()
            .any(|&p| graph.kinds[p] == StatementKind::Conclusion);
        if has_conclusion_parent {
            out.push(Corollary {
                conclusion: node,
                foundational: foundational_premises(graph, node).into_iter().collect(),
            });
        }
    }
    out
}

/// Cost accounting for feeding context to a checker.
///
/// `dense_cost` models re-sending the whole growing context at every step:
/// `1 + 2 + ... + n = n(n+1)/2`. `sparse_cost` counts only the premises each
/// judgment actually receives (definitions excluded). With `max_in_degree` M,
/// `sparse_cost <= n * M` always holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostMetrics {
    pub statements: usize,
    pub dense_cost: u64,
    pub sparse_cost: u64,
    pub max_in_degree: usize,
}

/// `n(n+1)/2`: total statements fed when every step resends the whole prefix.
pub fn dense_cost(n: u64) -> u64 {
    n * (n + 1) / 2
}

pub fn cost_metrics(ctx: &Context) -> Result<CostMetrics, GraphError> {
    let graph = build_graph(ctx)?;
    let js = judgments(ctx)?;
    let sparse: u64 = js.iter().map(|j| j.premises.len() as u64).sum();
    let max_in = (0..graph.node_count).map(|v| graph.in_degree(v)).max().unwrap_or(0);
    Ok(CostMetrics {
        statements: graph.node_count,
        dense_cost: dense_cost(graph.node_count as u64),
        sparse_cost: sparse,
        max_in_degree: max_in,
    })
}

/// Render the premise graph in DOT. Output is stable: nodes ascending, then
/// edges in lexicographic order.
pub fn to_dot(graph: &SolutionGraph) -> String {
    let mut out = String::from("digraph {\n");
    for node in 0..graph.node_count {
        out.push_str(&format!(
            "  {} [label=\"{}: {}\"];\n",
            node,
            node,
            graph.kinds[node].keyword()
        ));
    }
    for (p, c) in &graph.edges {
        out.push_str(&format!("  {p} -> {c};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::parse_context;
    use crate::printer::print_formula;

    const CHAIN: &str = "\
0 | FACT: x > 2
1 | CONCLUSION[0]: x > 1
2 | CONCLUSION[0, 1]: x > 0
";

    #[test]
    fn edges_follow_declared_premises() {
        let ctx = parse_context(CHAIN).unwrap();
        let g = build_graph(&ctx).unwrap();
        assert_eq!(g.node_count, 3);
        assert_eq!(g.edges, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.in_degree(2), 2);
        assert_eq!(g.parents(2), vec![0, 1]);
    }

    #[test]
    fn foundational_premises_skip_conclusions() {
        let ctx = parse_context(CHAIN).unwrap();
        let g = build_graph(&ctx).unwrap();
        assert_eq!(foundational_premises(&g, 2).into_iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(foundational_premises(&g, 1).into_iter().collect::<Vec<_>>(), vec![0]);
        assert!(foundational_premises(&g, 0).is_empty());
    }

    #[test]
    fn corollaries_list_chained_conclusions() {
        let ctx = parse_context(CHAIN).unwrap();
        let g = build_graph(&ctx).unwrap();
        let cs = strengthened_corollaries(&g);
        assert_eq!(cs, vec![Corollary { conclusion: 2, foundational: vec![0] }]);
    }

    #[test]
    fn judgments_exclude_definitions_from_premises() {
        let ctx = parse_context(
            "0 | DEFINITION: definition(f): NN -> NN f(n) := f(n-1) + f(n-2), if n >= 3; | 1, if n = 2; | 1, if n = 1\n\
             1 | CONCLUSION[0]: f(3) = 2\n\
             2 | CONCLUSION[0, 1]: f(4) = 3\n",
        )
        .unwrap();
        let js = judgments(&ctx).unwrap();
        assert_eq!(js.len(), 2);
        assert!(js[0].premises.is_empty());
        assert_eq!(js[0].definitions.len(), 1);
        assert_eq!(js[1].premises.len(), 1);
        assert_eq!(js[1].premises[0].id, 1);
    }

    #[test]
    fn premises_from_closed_subproofs_arrive_wrapped() {
        let ctx = parse_context(
            "0 | FACT: x in ZZ\n\
             1 | | ASSUMPTION: x > 3\n\
             2 | | CONCLUSION[1]: x > 1\n\
             3 | CONCLUSION[2]: x > 3 -> x > 1\n",
        )
        .unwrap();
        let js = judgments(&ctx).unwrap();
        // Inside the subproof the assumption is usable as-is.
        assert_eq!(print_formula(&js[0].premise_formulas[0]), "x > 3");
        // Outside, the cited conclusion is wrapped under its assumption.
        assert_eq!(print_formula(&js[1].premise_formulas[0]), "x > 3 -> x > 1");
    }

    #[test]
    fn cost_metrics_match_hand_counts() {
        let ctx = parse_context(CHAIN).unwrap();
        let m = cost_metrics(&ctx).unwrap();
        assert_eq!(m.statements, 3);
        assert_eq!(m.dense_cost, 6); // 1 + 2 + 3
        assert_eq!(m.sparse_cost, 3); // |{0}| + |{0,1}|
        assert_eq!(m.max_in_degree, 2);
        assert!(m.sparse_cost <= m.statements as u64 * m.max_in_degree as u64);
        assert_eq!(dense_cost(50), 1275);
    }

    #[test]
    fn dot_output_is_stable_and_anonymous() {
        let ctx = parse_context(CHAIN).unwrap();
        let g = build_graph(&ctx).unwrap();
        let dot = to_dot(&g);
        assert_eq!(
            dot,
            "digraph {\n  0 [label=\"0: FACT\"];\n  1 [label=\"1: CONCLUSION\"];\n  2 [label=\"2: CONCLUSION\"];\n  0 -> 1;\n  0 -> 2;\n  1 -> 2;\n}\n"
        );
        let empty = build_graph(&parse_context("").unwrap()).unwrap();
        // Whitespace aside, an empty graph is just `digraph {}`.
        assert_eq!(to_dot(&empty), "digraph {\n}\n");
    }

    #[test]
    fn invalid_context_is_rejected() {
        use crate::context::{Statement, StatementBody, StatementKind};
        let ctx = Context {
            problem: None,
            goal: None,
            statements: vec![Statement {
                id: 5, // wrong: ids must start at 0
                depth: 0,
                kind: StatementKind::Fact,
                premises: vec![],
                body: StatementBody::Formula {
                    formula: crate::parser::parse_formula("x = 1").unwrap(),
                },
                source_text: None,
            }],
        };
        assert!(matches!(build_graph(&ctx), Err(GraphError::InvalidContext(_))));
    }
}
