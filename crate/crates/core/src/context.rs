//! Ordered proof contexts: statements with kinds, premises, and subproof
//! nesting, plus the line-oriented file format.
//!
//! ```text
//! # optional comment
//! problem: free-text restatement of the problem
//! goal: f(4) = 3
//! 0 | DEFINITION: definition(f): NN -> NN f(n) := ...
//! 1 | CONCLUSION[0]: f(3) = 2 // f(3) = f(2) + f(1)
//! 2 | | ASSUMPTION: x > 0
//! 3 | | CONCLUSION[2]: x >= 0
//! ```
//!
//! One statement per line: id, one bar per nesting level plus one, the kind,
//! an optional bracketed premise list, a colon, the payload, and an optional
//! `// source text` echo of the informal step. Depth may only grow by one and
//! only at an `ASSUMPTION`; dropping to a shallower depth closes subproofs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::{Definition, Formula, Sort, Term};
use crate::parser::{parse_definition, parse_formula, DefinitionError, SyntaxError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatementKind {
    Fact,
    Assumption,
    Theorem,
    Definition,
    Conclusion,
}

impl StatementKind {
    pub fn keyword(self) -> &'static str {
        match self {
            StatementKind::Fact => "FACT",
            StatementKind::Assumption => "ASSUMPTION",
            StatementKind::Theorem => "THEOREM",
            StatementKind::Definition => "DEFINITION",
            StatementKind::Conclusion => "CONCLUSION",
        }
    }

    fn from_keyword(word: &str) -> Option<StatementKind> {
        Some(match word {
            "FACT" => StatementKind::Fact,
            "ASSUMPTION" => StatementKind::Assumption,
            "THEOREM" => StatementKind::Theorem,
            "DEFINITION" => StatementKind::Definition,
            "CONCLUSION" => StatementKind::Conclusion,
            _ => return None,
        })
    }
}

/// Statement payload: a formula for most kinds, a guarded definition for
/// `DEFINITION` statements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "payload", rename_all = "snake_case")]
pub enum StatementBody {
    Formula { formula: Formula },
    Definition { definition: Definition },
}

impl StatementBody {
    pub fn as_formula(&self) -> Option<&Formula> {
        match self {
            StatementBody::Formula { formula } => Some(formula),
            StatementBody::Definition { .. } => None,
        }
    }

    pub fn as_definition(&self) -> Option<&Definition> {
        match self {
            StatementBody::Definition { definition } => Some(definition),
            StatementBody::Formula { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Statement {
    pub id: usize,
    pub depth: usize,
    pub kind: StatementKind,
    pub premises: Vec<usize>,
    #[serde(flatten)]
    pub body: StatementBody,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_text: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Context {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<Formula>,
    pub statements: Vec<Statement>,
}

impl Context {
    /// All definitions in the context, paired with their statement ids, in
    /// statement order. Definitions are globally scoped.
    pub fn definitions(&self) -> Vec<(usize, &Definition)> {
        self.statements
            .iter()
            .filter_map(|s| s.body.as_definition().map(|d| (s.id, d)))
            .collect()
    }

    /// For each statement, the stack of assumption ids whose subproofs are
    /// open at that statement (outermost first, including the statement itself
    /// when it is an assumption).
    pub fn assumption_chains(&self) -> Vec<Vec<usize>> {
        let mut stack: Vec<(usize, usize)> = Vec::new(); // (depth, id)
        let mut chains = Vec::with_capacity(self.statements.len());
        for s in &self.statements {
            if s.kind == StatementKind::Assumption {
                // A sibling assumption at the same depth closes the previous
                // subproof at that depth before opening its own.
                while stack.last().is_some_and(|(d, _)| *d >= s.depth) {
                    stack.pop();
                }
                stack.push((s.depth, s.id));
            } else {
                while stack.last().is_some_and(|(d, _)| *d > s.depth) {
                    stack.pop();
                }
            }
            chains.push(stack.iter().map(|(_, id)| *id).collect());
        }
        chains
    }
}

#[derive(Debug, Error)]
pub enum ContextError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: in formula: {source}")]
    BadFormula { line: usize, source: SyntaxError },
    #[error("line {line}: in definition: {source}")]
    BadDefinition { line: usize, source: DefinitionError },
    #[error("line {line}: statement id {found} out of sequence (expected {expected})")]
    IdSequence { line: usize, found: usize, expected: usize },
    #[error("line {line}: premise {premise} of statement {id} does not reference an earlier statement")]
    Reference { line: usize, id: usize, premise: usize },
    #[error("line {line}: duplicate premise {premise} on statement {id}")]
    DuplicatePremise { line: usize, id: usize, premise: usize },
    #[error("line {line}: {message}")]
    Nesting { line: usize, message: String },
    #[error("line {line}: {kind} statements cannot carry premises")]
    KindPremises { line: usize, kind: &'static str },
    #[error("line {line}: {message}")]
    KindBody { line: usize, message: String },
}

/// Split a statement line into its code part and the optional `// source` echo.
fn split_source(line: &str) -> (&str, Option<String>) {
    match line.find("//") {
        Some(idx) => {
            let src = line[idx + 2..].trim();
            let src = if src.is_empty() { None } else { Some(src.to_string()) };
            (&line[..idx], src)
        }
        None => (line, None),
    }
}

/// Parse the line-oriented context format. Empty input is a valid empty context.
pub fn parse_context(text: &str) -> Result<Context, ContextError> {
    let mut ctx = Context::default();
    let mut prev_depth = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("problem:") {
            if ctx.problem.is_some() {
                return Err(ContextError::Malformed {
                    line: lineno,
                    message: "duplicate `problem:` header".into(),
                });
            }
            ctx.problem = Some(rest.trim().to_string());
            continue;
        }
        if let Some(rest) = line.strip_prefix("goal:") {
            if ctx.goal.is_some() {
                return Err(ContextError::Malformed {
                    line: lineno,
                    message: "duplicate `goal:` header".into(),
                });
            }
            ctx.goal = Some(
                parse_formula(rest.trim())
                    .map_err(|source| ContextError::BadFormula { line: lineno, source })?,
            );
            continue;
        }

        let (code, source_text) = split_source(line);
        let mut rest = code.trim();

        // id
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(ContextError::Malformed {
                line: lineno,
                message: format!("expected statement id at start of line, found {rest:?}"),
            });
        }
        let id: usize = digits.parse().map_err(|_| ContextError::Malformed {
            line: lineno,
            message: format!("statement id {digits:?} out of range"),
        })?;
        if id != ctx.statements.len() {
            return Err(ContextError::IdSequence {
                line: lineno,
                found: id,
                expected: ctx.statements.len(),
            });
        }
        rest = rest[digits.len()..].trim_start();

        // bars: one per nesting level, plus one
        let mut bars = 0usize;
        while let Some(tail) = rest.strip_prefix('|') {
            bars += 1;
            rest = tail.trim_start();
        }
        if bars == 0 {
            return Err(ContextError::Malformed {
                line: lineno,
                message: "expected at least one `|` after the statement id".into(),
            });
        }
        let depth = bars - 1;

        // kind keyword
        let word: String = rest
            .chars()
            .take_while(|c| c.is_ascii_alphabetic())
            .collect();
        let kind = StatementKind::from_keyword(&word).ok_or_else(|| ContextError::Malformed {
            line: lineno,
            message: format!(
                "unknown statement kind {word:?} (expected FACT, ASSUMPTION, THEOREM, DEFINITION, or CONCLUSION)"
            ),
        })?;
        rest = rest[word.len()..].trim_start();

        // nesting discipline
        if kind == StatementKind::Assumption {
            if depth == 0 || depth > prev_depth + 1 {
                return Err(ContextError::Nesting {
                    line: lineno,
                    message: format!(
                        "assumption at depth {depth} must open a subproof one level below an open level (previous depth {prev_depth})"
                    ),
                });
            }
        } else if depth > prev_depth {
            return Err(ContextError::Nesting {
                line: lineno,
                message: format!(
                    "depth {depth} exceeds previous depth {prev_depth}; only an ASSUMPTION may deepen nesting"
                ),
            });
        }

        // optional premise list
        let mut premises = Vec::new();
        if let Some(tail) = rest.strip_prefix('[') {
            let close = tail.find(']').ok_or_else(|| ContextError::Malformed {
                line: lineno,
                message: "unclosed premise list `[`".into(),
            })?;
            let inner = &tail[..close];
            if !inner.trim().is_empty() {
                for part in inner.split(',') {
                    let p: usize = part.trim().parse().map_err(|_| ContextError::Malformed {
                        line: lineno,
                        message: format!("bad premise id {:?}", part.trim()),
                    })?;
                    if p >= id {
                        return Err(ContextError::Reference { line: lineno, id, premise: p });
                    }
                    if premises.contains(&p) {
                        return Err(ContextError::DuplicatePremise { line: lineno, id, premise: p });
                    }
                    premises.push(p);
                }
            }
            rest = tail[close + 1..].trim_start();
        }
        if kind != StatementKind::Conclusion && !premises.is_empty() {
            return Err(ContextError::KindPremises { line: lineno, kind: kind.keyword() });
        }

        // payload
        let payload = rest.strip_prefix(':').ok_or_else(|| ContextError::Malformed {
            line: lineno,
            message: "expected `:` before the statement payload".into(),
        })?;
        let payload = payload.trim();
        let body = if kind == StatementKind::Definition {
            StatementBody::Definition {
                definition: parse_definition(payload)
                    .map_err(|source| ContextError::BadDefinition { line: lineno, source })?,
            }
        } else {
            let formula = parse_formula(payload)
                .map_err(|source| ContextError::BadFormula { line: lineno, source })?;
            StatementBody::Formula { formula }
        };

        ctx.statements.push(Statement { id, depth, kind, premises, body, source_text });
        prev_depth = depth;
    }
    Ok(ctx)
}

/// Render a context in the canonical line format; `parse_context` of the
/// output reproduces the same ids, kinds, premises, depths, and payload ASTs.
pub fn print_context(ctx: &Context) -> String {
    let mut out = String::new();
    if let Some(problem) = &ctx.problem {
        out.push_str("problem: ");
        out.push_str(problem);
        out.push('\n');
    }
    if let Some(goal) = &ctx.goal {
        out.push_str("goal: ");
        out.push_str(&crate::printer::print_formula(goal));
        out.push('\n');
    }
    for s in &ctx.statements {
        out.push_str(&s.id.to_string());
        for _ in 0..=s.depth {
            out.push_str(" |");
        }
        out.push(' ');
        out.push_str(s.kind.keyword());
        if !s.premises.is_empty() {
            out.push('[');
            out.push_str(
                &s.premises.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "),
            );
            out.push(']');
        }
        out.push_str(": ");
        match &s.body {
            StatementBody::Formula { formula } => {
                out.push_str(&crate::printer::print_formula(formula))
            }
            StatementBody::Definition { definition } => {
                out.push_str(&crate::printer::print_definition(definition))
            }
        }
        if let Some(src) = &s.source_text {
            out.push_str(" // ");
            out.push_str(src);
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Lint,
}

/// A validation finding. `Error` findings make the context unusable for
/// verification; `Lint` findings are advisory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub rule: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statement: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.statement {
            Some(id) => write!(f, "[{}] statement {id}: {}", self.rule, self.message),
            None => write!(f, "[{}] {}", self.rule, self.message),
        }
    }
}

impl Diagnostic {
    fn error(rule: &'static str, statement: Option<usize>, message: String) -> Diagnostic {
        Diagnostic { severity: Severity::Error, rule, statement, message }
    }

    fn lint(rule: &'static str, statement: Option<usize>, message: String) -> Diagnostic {
        Diagnostic { severity: Severity::Lint, rule, statement, message }
    }
}

/// Premise lists wider than this draw a lint: solutions naturally cite few
/// statements per step, and wide lists usually mean the formalizer dumped the
/// whole context instead of the actual dependencies.
pub const PREMISE_WIDTH_LINT: usize = 4;

/// Structural validation. `parse_context` enforces most of these rules during
/// parsing; this pass re-checks them for contexts built programmatically (or
/// loaded from JSON) and adds the advisory lints.
pub fn validate_context(ctx: &Context) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut prev_depth = 0usize;
    for (i, s) in ctx.statements.iter().enumerate() {
        if s.id != i {
            out.push(Diagnostic::error(
                "id-sequence",
                Some(s.id),
                format!("statement at position {i} has id {}; ids must be 0,1,2,...", s.id),
            ));
        }
        let mut seen = Vec::new();
        for &p in &s.premises {
            if p >= s.id {
                out.push(Diagnostic::error(
                    "premise-order",
                    Some(s.id),
                    format!("premise {p} does not reference an earlier statement"),
                ));
            }
            if seen.contains(&p) {
                out.push(Diagnostic::error(
                    "premise-order",
                    Some(s.id),
                    format!("premise {p} listed twice"),
                ));
            }
            seen.push(p);
        }
        if s.kind != StatementKind::Conclusion && !s.premises.is_empty() {
            out.push(Diagnostic::error(
                "kind-premise-mismatch",
                Some(s.id),
                format!("{} statements cannot carry premises", s.kind.keyword()),
            ));
        }
        match (&s.kind, &s.body) {
            (StatementKind::Definition, StatementBody::Formula { .. }) => {
                out.push(Diagnostic::error(
                    "definition-body",
                    Some(s.id),
                    "DEFINITION statement carries a formula payload".into(),
                ));
            }
            (kind, StatementBody::Definition { .. }) if *kind != StatementKind::Definition => {
                out.push(Diagnostic::error(
                    "definition-body",
                    Some(s.id),
                    format!("{} statement carries a definition payload", kind.keyword()),
                ));
            }
            _ => {}
        }
        if s.kind == StatementKind::Assumption {
            if s.depth == 0 || s.depth > prev_depth + 1 {
                out.push(Diagnostic::error(
                    "nesting",
                    Some(s.id),
                    format!(
                        "assumption at depth {} after depth {} breaks subproof bracketing",
                        s.depth, prev_depth
                    ),
                ));
            }
        } else if s.depth > prev_depth {
            out.push(Diagnostic::error(
                "nesting",
                Some(s.id),
                format!(
                    "depth {} exceeds previous depth {}; only an ASSUMPTION may deepen nesting",
                    s.depth, prev_depth
                ),
            ));
        }
        prev_depth = s.depth;

        if s.premises.len() > PREMISE_WIDTH_LINT {
            out.push(Diagnostic::lint(
                "premise-width",
                Some(s.id),
                format!(
                    "statement cites {} premises (more than {PREMISE_WIDTH_LINT}); are all of them really used?",
                    s.premises.len()
                ),
            ));
        }
        if let StatementBody::Definition { definition } = &s.body {
            guard_lints(s.id, definition, &mut out);
        }
    }

    if let Some(goal) = &ctx.goal {
        let matches_goal = ctx.statements.last().is_some_and(|s| {
            s.kind == StatementKind::Conclusion && s.body.as_formula() == Some(goal)
        });
        if !matches_goal {
            out.push(Diagnostic::lint(
                "goal-mismatch",
                None,
                "final statement is not a CONCLUSION matching the stated goal".into(),
            ));
        }
    }
    out
}

/// Best-effort ground evaluation of a term over exact rationals, with no
/// definition unfolding. Used only for the guard lints below.
fn eval_ground_term(t: &Term) -> Option<num::BigRational> {
    use num::Zero;
    Some(match t {
        Term::Rational(r) => r.clone(),
        Term::Var(_) | Term::App(..) => return None,
        Term::Neg(a) => -eval_ground_term(a)?,
        Term::Add(a, b) => eval_ground_term(a)? + eval_ground_term(b)?,
        Term::Sub(a, b) => eval_ground_term(a)? - eval_ground_term(b)?,
        Term::Mul(a, b) => eval_ground_term(a)? * eval_ground_term(b)?,
        Term::Div(a, b) => {
            let d = eval_ground_term(b)?;
            if d.is_zero() {
                return None;
            }
            eval_ground_term(a)? / d
        }
        Term::Pow(a, e) => {
            let base = eval_ground_term(a)?;
            let exp = eval_ground_term(e)?;
            if !exp.is_integer() {
                return None;
            }
            let k: i32 = exp.numer().try_into().ok()?;
            if !(0..=64).contains(&k) {
                return None;
            }
            num::pow::pow(base, k as usize)
        }
    })
}

fn member_holds(value: &num::BigRational, sort: Sort) -> bool {
    use num::Zero;
    match sort {
        Sort::Nat => value.is_integer() && value >= &num::BigRational::zero(),
        Sort::Int => value.is_integer(),
        Sort::Rat | Sort::Real => true,
    }
}

fn eval_ground_formula(f: &Formula) -> Option<bool> {
    match f {
        Formula::Atom(rel, lhs, rhs) => {
            Some(rel.holds(&eval_ground_term(lhs)?, &eval_ground_term(rhs)?))
        }
        Formula::Member(t, sort) => Some(member_holds(&eval_ground_term(t)?, *sort)),
        Formula::Not(f) => Some(!eval_ground_formula(f)?),
        Formula::And(a, b) => Some(eval_ground_formula(a)? && eval_ground_formula(b)?),
        Formula::Or(a, b) => Some(eval_ground_formula(a)? || eval_ground_formula(b)?),
        Formula::Implies(a, b) => Some(!eval_ground_formula(a)? || eval_ground_formula(b)?),
        Formula::Forall(..) | Formula::Exists(..) => None,
    }
}

/// Whether branch guards overlap or leave gaps is checked only by sampling
/// small argument tuples; both findings are advisory lints, never errors.
fn guard_lints(id: usize, def: &Definition, out: &mut Vec<Diagnostic>) {
    if def.params.is_empty() || def.params.len() > 2 {
        return;
    }
    let sample_range = |sort: Sort| -> Vec<i64> {
        match sort {
            Sort::Nat => (0..=6).collect(),
            _ => (-3..=6).collect(),
        }
    };
    let tuples: Vec<Vec<i64>> = if def.params.len() == 1 {
        sample_range(def.arg_sorts[0]).into_iter().map(|v| vec![v]).collect()
    } else {
        let xs = sample_range(def.arg_sorts[0]);
        let ys = sample_range(def.arg_sorts[1]);
        xs.iter().flat_map(|&x| ys.iter().map(move |&y| vec![x, y])).collect()
    };

    let mut overlap: Option<String> = None;
    let mut gap: Option<String> = None;
    'samples: for tuple in tuples {
        let mut truths = Vec::with_capacity(def.branches.len());
        for branch in &def.branches {
            let truth = match &branch.guard {
                None => true,
                Some(guard) => {
                    let mut g = guard.clone();
                    for (p, v) in def.params.iter().zip(&tuple) {
                        match g.substitute(p, &Term::int(*v)) {
                            Ok(next) => g = next,
                            Err(_) => continue 'samples,
                        }
                    }
                    match eval_ground_formula(&g) {
                        Some(t) => t,
                        None => continue 'samples,
                    }
                }
            };
            truths.push(truth);
        }
        let describe = || {
            def.params
                .iter()
                .zip(&tuple)
                .map(|(p, v)| format!("{p} = {v}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        if overlap.is_none() && truths.iter().filter(|t| **t).count() > 1 {
            overlap = Some(describe());
        }
        if gap.is_none() && !truths.iter().any(|t| *t) {
            gap = Some(describe());
        }
        if overlap.is_some() && gap.is_some() {
            break;
        }
    }
    if let Some(at) = overlap {
        out.push(Diagnostic::lint(
            "guard-overlap",
            Some(id),
            format!("more than one branch guard of `{}` holds at {at}", def.name),
        ));
    }
    if let Some(at) = gap {
        out.push(Diagnostic::lint(
            "guard-gap",
            Some(id),
            format!("no branch guard of `{}` holds at {at}", def.name),
        ));
    }
}

/// Convenience for tests and tools: `true` when validation found no `Error`.
pub fn is_structurally_valid(ctx: &Context) -> bool {
    validate_context(ctx).iter().all(|d| d.severity != Severity::Error)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# mini example
problem: Given x > 2, conclude x > 0.
goal: x > 0
0 | FACT: x > 2
1 | CONCLUSION[0]: x > 1 // weaken once
2 | CONCLUSION[0, 1]: x > 0 // weaken again
";

    #[test]
    fn parses_ids_kinds_premises_and_source() {
        let ctx = parse_context(SAMPLE).unwrap();
        assert_eq!(ctx.problem.as_deref(), Some("Given x > 2, conclude x > 0."));
        assert!(ctx.goal.is_some());
        assert_eq!(ctx.statements.len(), 3);
        assert_eq!(ctx.statements[1].kind, StatementKind::Conclusion);
        assert_eq!(ctx.statements[2].premises, vec![0, 1]);
        assert_eq!(ctx.statements[1].source_text.as_deref(), Some("weaken once"));
        assert!(validate_context(&ctx).iter().all(|d| d.severity == Severity::Lint));
    }

    #[test]
    fn round_trips_through_print() {
        let ctx = parse_context(SAMPLE).unwrap();
        let printed = print_context(&ctx);
        let back = parse_context(&printed).unwrap();
        assert_eq!(back, ctx);
    }

    #[test]
    fn empty_input_is_an_empty_context() {
        let ctx = parse_context("").unwrap();
        assert!(ctx.statements.is_empty());
        assert!(validate_context(&ctx).is_empty());
        assert_eq!(print_context(&ctx), "");
    }

    #[test]
    fn id_sequence_enforced() {
        let err = parse_context("0 | FACT: x = 1\n2 | FACT: y = 1\n").unwrap_err();
        assert!(matches!(err, ContextError::IdSequence { found: 2, expected: 1, .. }), "{err}");
    }

    #[test]
    fn forward_premise_rejected() {
        let err = parse_context("0 | CONCLUSION[0]: x = 1\n").unwrap_err();
        assert!(matches!(err, ContextError::Reference { premise: 0, .. }), "{err}");
    }

    #[test]
    fn fact_with_premises_rejected() {
        let err = parse_context("0 | FACT: x = 1\n1 | FACT[0]: y = 1\n").unwrap_err();
        assert!(matches!(err, ContextError::KindPremises { .. }), "{err}");
    }

    #[test]
    fn assumption_nesting_rules() {
        // Assumption must open exactly one level deeper than an open level.
        let ok = parse_context(
            "0 | FACT: x in ZZ\n1 | | ASSUMPTION: x > 3\n2 | | CONCLUSION[1]: x > 1\n3 | CONCLUSION[2]: x > 3 -> x > 1\n",
        )
        .unwrap();
        assert_eq!(ok.statements[1].depth, 1);
        assert_eq!(ok.statements[3].depth, 0);

        let err = parse_context("0 | | | ASSUMPTION: x > 0\n").unwrap_err();
        assert!(matches!(err, ContextError::Nesting { .. }), "{err}");
        let err2 = parse_context("0 | FACT: x = 1\n1 | | FACT: y = 1\n").unwrap_err();
        assert!(matches!(err2, ContextError::Nesting { .. }), "{err2}");
        let err3 = parse_context("0 | ASSUMPTION: x > 0\n").unwrap_err();
        assert!(matches!(err3, ContextError::Nesting { .. }), "{err3}");
    }

    #[test]
    fn assumption_chains_track_subproofs() {
        let ctx = parse_context(
            "0 | FACT: x in ZZ\n\
             1 | | ASSUMPTION: x > 3\n\
             2 | | CONCLUSION[1]: x > 1\n\
             3 | CONCLUSION[2]: x > 3 -> x > 1\n\
             4 | | ASSUMPTION: x < 0\n\
             5 | | | ASSUMPTION: x = 0 - 1\n\
             6 | | | CONCLUSION[5]: x <= 0 - 1\n\
             7 | CONCLUSION[6]: x = 0 - 1 -> x <= 0 - 1\n",
        )
        .unwrap();
        let chains = ctx.assumption_chains();
        assert_eq!(chains[0], Vec::<usize>::new());
        assert_eq!(chains[1], vec![1]);
        assert_eq!(chains[2], vec![1]);
        assert_eq!(chains[3], Vec::<usize>::new());
        assert_eq!(chains[5], vec![4, 5]);
        assert_eq!(chains[6], vec![4, 5]);
        assert_eq!(chains[7], Vec::<usize>::new());
    }

    #[test]
    fn definition_statement_payload() {
        let ctx = parse_context(
            "0 | DEFINITION: definition(f): NN -> NN f(n) := f(n-1) + f(n-2), if n >= 3; | 1, if n = 2; | 1, if n = 1\n1 | CONCLUSION[0]: f(3) = 2\n",
        )
        .unwrap();
        let defs = ctx.definitions();
        assert_eq!(defs.len(), 1);
        assert_eq!(defs[0].1.name, "f");
        // FACT with a definition payload is a parse error (formula expected).
        assert!(parse_context("0 | FACT: definition(f): NN -> NN f(n) := 1\n").is_err());
    }

    #[test]
    fn validate_flags_programmatic_violations() {
        // Built by hand, not via the parser: a FACT with premises.
        let ctx = Context {
            problem: None,
            goal: None,
            statements: vec![
                Statement {
                    id: 0,
                    depth: 0,
                    kind: StatementKind::Fact,
                    premises: vec![],
                    body: StatementBody::Formula { formula: parse_formula("x = 1").unwrap() },
                    source_text: None,
                },
                Statement {
                    id: 1,
                    depth: 0,
                    kind: StatementKind::Fact,
                    premises: vec![0],
                    body: StatementBody::Formula { formula: parse_formula("y = 1").unwrap() },
                    source_text: None,
                },
            ],
        };
        let diags = validate_context(&ctx);
        assert!(diags.iter().any(|d| d.rule == "kind-premise-mismatch" && d.statement == Some(1)));
        assert!(!is_structurally_valid(&ctx));
    }

    #[test]
    fn premise_width_lint() {
        let mut text = String::new();
        for i in 0..5 {
            text.push_str(&format!("{i} | FACT: x{i} = {i}\n"));
        }
        text.push_str("5 | CONCLUSION[0, 1, 2, 3, 4]: x0 = 0\n");
        let ctx = parse_context(&text).unwrap();
        let diags = validate_context(&ctx);
        assert!(diags.iter().any(|d| d.rule == "premise-width" && d.severity == Severity::Lint));
    }

    #[test]
    fn guard_lints_fire_on_overlap_and_gap() {
        let ctx = parse_context(
            "0 | DEFINITION: definition(g): ZZ -> ZZ g(n) := 1, if n >= 0; | 2, if n >= 1\n",
        )
        .unwrap();
        let diags = validate_context(&ctx);
        assert!(diags.iter().any(|d| d.rule == "guard-overlap"), "{diags:?}");
        assert!(diags.iter().any(|d| d.rule == "guard-gap"), "{diags:?}");
        assert!(diags.iter().all(|d| d.severity == Severity::Lint));
    }

    #[test]
    fn goal_mismatch_is_a_lint() {
        let ctx = parse_context("goal: x > 0\n0 | FACT: x > 2\n1 | CONCLUSION[0]: x > 1\n").unwrap();
        let diags = validate_context(&ctx);
        assert!(diags.iter().any(|d| d.rule == "goal-mismatch" && d.severity == Severity::Lint));
    }

    #[test]
    fn context_serializes_to_json_and_back() {
        let ctx = parse_context(SAMPLE).unwrap();
        let json = serde_json::to_string_pretty(&ctx).unwrap();
        let back: Context = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ctx);
        // Spot-check the shape: statements carry tagged payloads.
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["statements"][0]["kind"], "fact");
        assert_eq!(value["statements"][0]["payload"], "formula");
    }
}
