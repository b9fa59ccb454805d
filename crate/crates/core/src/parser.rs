//! Lexer and recursive-descent parser for SimpleMath terms, formulas, and
//! guarded definitions.
//!
//! Precedence, tightest first: `^` (right-assoc), unary `-`, `* /`, `+ -`,
//! relations and `in`, `~`, `/\`, `\/`, `->` (right-assoc). Quantifiers scope
//! as far right as possible. Parse errors report line, column, the offending
//! token, and the set of tokens that would have been accepted there.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigRational, Zero};
use thiserror::Error;

use crate::ast::{parse_rational, Branch, Definition, Formula, Relation, Sort, Term};

/// A lexical or syntactic error with source position and, when produced by the
/// parser proper, the set of tokens that were acceptable at that position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SyntaxError {
    pub line: u32,
    pub col: u32,
    pub found: String,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: found {}", self.line, self.col, self.found)?;
        if !self.expected.is_empty() {
            write!(f, "; expected {}", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

/// A definition whose parameter list disagrees with its signature, or whose
/// branch heads disagree with each other.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("function `{name}` declares {expected} argument(s) but {found} were given")]
pub struct ArityError {
    pub name: String,
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Number(BigRational),
    Ident(String),
    Forall,
    Exists,
    In,
    If,
    DefinitionKw,
    SortKw(Sort),
    LParen,
    RParen,
    Comma,
    Colon,
    Semi,
    Bar,
    Assign,
    Arrow,
    AndOp,
    OrOp,
    Tilde,
    Rel(Relation),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(r) => format!("number `{}`", crate::ast::format_rational(r)),
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::In => "`in`".into(),
            Tok::If => "`if`".into(),
            Tok::DefinitionKw => "`definition`".into(),
            Tok::SortKw(s) => format!("sort `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::AndOp => "`/\\`".into(),
            Tok::OrOp => "`\\/`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Rel(r) => format!("`{}`", r.symbol()),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

fn lex(input: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0usize;
    let mut line = 1u32;
    let mut col = 1u32;
    let err = |line: u32, col: u32, what: String| SyntaxError {
        line,
        col,
        found: what,
        expected: vec![],
    };
    while i < bytes.len() {
        let c = bytes[i] as char;
        let (tline, tcol) = (line, col);
        let mut push = |tok: Tok| out.push(Spanned { tok, line: tline, col: tcol });
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            ' ' | '\t' | '\r' => {
                i += 1;
                col += 1;
                continue;
            }
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            ',' => push(Tok::Comma),
            ';' => push(Tok::Semi),
            '|' => push(Tok::Bar),
            '+' => push(Tok::Plus),
            '*' => push(Tok::Star),
            '^' => push(Tok::Caret),
            '~' => push(Tok::Tilde),
            '=' => push(Tok::Rel(Relation::Eq)),
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    push(Tok::Arrow);
                    i += 1;
                    col += 1;
                } else {
                    push(Tok::Minus);
                }
            }
            ':' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    push(Tok::Assign);
                    i += 1;
                    col += 1;
                } else {
                    push(Tok::Colon);
                }
            }
            '/' => {
                if bytes.get(i + 1) == Some(&b'\\') {
                    push(Tok::AndOp);
                    i += 1;
                    col += 1;
                } else {
                    push(Tok::Slash);
                }
            }
            '\\' => {
                if bytes.get(i + 1) == Some(&b'/') {
                    push(Tok::OrOp);
                    i += 1;
                    col += 1;
                } else {
                    return Err(err(line, col, "stray `\\`".into()));
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    push(Tok::Rel(Relation::Le));
                    i += 1;
                    col += 1;
                } else {
                    push(Tok::Rel(Relation::Lt));
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    push(Tok::Rel(Relation::Ge));
                    i += 1;
                    col += 1;
                } else {
                    push(Tok::Rel(Relation::Gt));
                }
            }
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    push(Tok::Rel(Relation::Ne));
                    i += 1;
                    col += 1;
                } else {
                    return Err(err(line, col, "stray `!` (did you mean `!=`?)".into()));
                }
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len()
                    && bytes[i] == b'.'
                    && i + 1 < bytes.len()
                    && (bytes[i + 1] as char).is_ascii_digit()
                {
                    i += 1;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &input[start..i];
                let value = parse_rational(text)
                    .map_err(|m| err(tline, tcol, format!("bad number {text:?}: {m}")))?;
                col += (i - start) as u32;
                out.push(Spanned { tok: Tok::Number(value), line: tline, col: tcol });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() {
                    let ch = bytes[i] as char;
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let word = &input[start..i];
                let tok = match word {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "in" => Tok::In,
                    "if" => Tok::If,
                    "definition" => Tok::DefinitionKw,
                    "NN" => Tok::SortKw(Sort::Nat),
                    "ZZ" => Tok::SortKw(Sort::Int),
                    "QQ" => Tok::SortKw(Sort::Rat),
                    "RR" => Tok::SortKw(Sort::Real),
                    _ => Tok::Ident(word.to_string()),
                };
                col += (i - start) as u32;
                out.push(Spanned { tok, line: tline, col: tcol });
                continue;
            }
            other => return Err(err(line, col, format!("unexpected character {other:?}"))),
        }
        i += 1;
        col += 1;
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    // Furthest failure position plus every token that was acceptable there.
    far: usize,
    expected: BTreeSet<&'static str>,
}

impl Parser {
    fn new(input: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser { toks: lex(input)?, pos: 0, far: 0, expected: BTreeSet::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn note(&mut self, desc: &'static str) {
        if self.pos > self.far {
            self.far = self.pos;
            self.expected.clear();
        }
        if self.pos >= self.far {
            self.expected.insert(desc);
        }
    }

    fn fail<T>(&mut self, desc: &'static str) -> Result<T, ()> {
        self.note(desc);
        Err(())
    }

    fn eat(&mut self, tok: Tok, desc: &'static str) -> Result<(), ()> {
        if *self.peek() == tok {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(desc)
        }
    }

    fn error(&self) -> SyntaxError {
        let at = &self.toks[self.far.min(self.toks.len() - 1)];
        SyntaxError {
            line: at.line,
            col: at.col,
            found: at.tok.describe(),
            expected: self.expected.iter().copied().collect(),
        }
    }

    fn ident(&mut self) -> Result<String, ()> {
        match self.peek() {
            Tok::Ident(name) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ => self.fail("identifier"),
        }
    }

    fn sort(&mut self) -> Result<Sort, ()> {
        match self.peek() {
            Tok::SortKw(s) => {
                let s = *s;
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("sort (NN, ZZ, QQ, RR)"),
        }
    }

    // ---- terms ----

    fn term(&mut self) -> Result<Term, ()> {
        self.addsub()
    }

    fn addsub(&mut self) -> Result<Term, ()> {
        let mut lhs = self.muldiv()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.pos += 1;
                    let rhs = self.muldiv()?;
                    lhs = Term::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.pos += 1;
                    let rhs = self.muldiv()?;
                    lhs = Term::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => {
                    // Register the continuations so "1 +" style errors list them.
                    self.note("`+`");
                    self.note("`-`");
                    return Ok(lhs);
                }
            }
        }
    }

    fn muldiv(&mut self) -> Result<Term, ()> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Term::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Slash => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = fold_div(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Term, ()> {
        if *self.peek() == Tok::Minus {
            self.pos += 1;
            let inner = self.unary()?;
            Ok(fold_neg(inner))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Term, ()> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.pos += 1;
            let exp = self.exponent()?;
            Ok(Term::Pow(Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    /// Exponents are restricted to nonnegative integer literals or variables.
    fn exponent(&mut self) -> Result<Term, ()> {
        match self.peek().clone() {
            Tok::Number(r) if r.is_integer() => {
                self.pos += 1;
                Ok(Term::Rational(r))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                Ok(Term::Var(name))
            }
            _ => self.fail("exponent (nonnegative integer literal or variable)"),
        }
    }

    fn primary(&mut self) -> Result<Term, ()> {
        match self.peek().clone() {
            Tok::Number(r) => {
                self.pos += 1;
                Ok(Term::Rational(r))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if *self.peek() == Tok::LParen {
                    self.pos += 1;
                    let mut args = vec![self.term()?];
                    while *self.peek() == Tok::Comma {
                        self.pos += 1;
                        args.push(self.term()?);
                    }
                    self.eat(Tok::RParen, "`)`")?;
                    Ok(Term::App(name, args))
                } else {
                    Ok(Term::Var(name))
                }
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.term()?;
                self.eat(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.fail("term"),
        }
    }

    // ---- formulas ----

    fn formula(&mut self) -> Result<Formula, ()> {
        match self.peek() {
            Tok::Forall | Tok::Exists => self.quantified(),
            _ => self.implication(),
        }
    }

    fn quantified(&mut self) -> Result<Formula, ()> {
        let is_forall = matches!(self.peek(), Tok::Forall);
        self.pos += 1;
        let var = self.ident()?;
        let annotated = if *self.peek() == Tok::In {
            self.pos += 1;
            Some(self.sort()?)
        } else {
            None
        };
        self.eat(Tok::Comma, "`,`")?;
        let body = self.formula()?;
        let sort = annotated
            .or_else(|| infer_quantifier_sort(&body, &var, is_forall))
            .unwrap_or(Sort::Real);
        Ok(if is_forall {
            Formula::Forall(var, sort, Box::new(body))
        } else {
            Formula::Exists(var, sort, Box::new(body))
        })
    }

    fn implication(&mut self) -> Result<Formula, ()> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.pos += 1;
            // Right-associative; the consequent may itself be quantified.
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            self.note("`->`");
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ()> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::OrOp {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        self.note("`\\/`");
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ()> {
        let mut lhs = self.negation()?;
        while *self.peek() == Tok::AndOp {
            self.pos += 1;
            let rhs = self.negation()?;
            lhs = Formula::and(lhs, rhs);
        }
        self.note("`/\\`");
        Ok(lhs)
    }

    fn negation(&mut self) -> Result<Formula, ()> {
        if *self.peek() == Tok::Tilde {
            self.pos += 1;
            let inner = self.negation()?;
            Ok(Formula::Not(Box::new(inner)))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Formula, ()> {
        // A `(` may open either a parenthesized term or a parenthesized
        // formula; try the relational reading first and backtrack.
        let start = self.pos;
        match self.relational() {
            Ok(f) => return Ok(f),
            Err(()) => self.pos = start,
        }
        if *self.peek() == Tok::LParen {
            self.pos += 1;
            let inner = self.formula()?;
            self.eat(Tok::RParen, "`)`")?;
            Ok(inner)
        } else {
            self.fail("formula")
        }
    }

    fn relational(&mut self) -> Result<Formula, ()> {
        let lhs = self.term()?;
        match self.peek().clone() {
            Tok::Rel(rel) => {
                self.pos += 1;
                let rhs = self.term()?;
                Ok(Formula::Atom(rel, lhs, rhs))
            }
            Tok::In => {
                self.pos += 1;
                let sort = self.sort()?;
                Ok(Formula::Member(lhs, sort))
            }
            _ => self.fail("relation (`=`, `!=`, `<`, `<=`, `>`, `>=`) or `in`"),
        }
    }

    // ---- definitions ----

    fn definition(&mut self) -> Result<Result<Definition, ArityError>, ()> {
        self.eat(Tok::DefinitionKw, "`definition`")?;
        self.eat(Tok::LParen, "`(`")?;
        let name = self.ident()?;
        self.eat(Tok::RParen, "`)`")?;
        self.eat(Tok::Colon, "`:`")?;
        let mut sorts = vec![self.sort()?];
        self.eat(Tok::Arrow, "`->` (signature needs at least one arrow)")?;
        sorts.push(self.sort()?);
        while *self.peek() == Tok::Arrow {
            self.pos += 1;
            sorts.push(self.sort()?);
        }
        let result_sort = sorts.pop().expect("at least two sorts parsed");
        let arg_sorts = sorts;

        // First branch must carry the head `f(params) :=` to bind parameters.
        let head = self.branch_head()?;
        let (head_name, params) = match head {
            Some(h) => h,
            None => return self.fail("branch head `name(params) :=`"),
        };
        if head_name != name {
            return self.fail("branch head naming the defined function");
        }
        if params.len() != arg_sorts.len() {
            return Ok(Err(ArityError {
                name,
                expected: arg_sorts.len(),
                found: params.len(),
            }));
        }
        let mut branches = vec![self.branch_tail()?];
        while *self.peek() == Tok::Bar {
            self.pos += 1;
            if let Some((bname, bparams)) = self.branch_head()? {
                if bname != name {
                    return self.fail("branch head naming the defined function");
                }
                if bparams.len() != params.len() {
                    return Ok(Err(ArityError {
                        name,
                        expected: params.len(),
                        found: bparams.len(),
                    }));
                }
            }
            branches.push(self.branch_tail()?);
        }
        Ok(Ok(Definition { name, params, arg_sorts, result_sort, branches }))
    }

    /// Try to consume `name(p1, ..., pk) :=`; backtracks and returns `None`
    /// when the branch starts directly with its body term.
    fn branch_head(&mut self) -> Result<Option<(String, Vec<String>)>, ()> {
        let start = self.pos;
        let attempt = (|| -> Result<(String, Vec<String>), ()> {
            let name = self.ident()?;
            self.eat(Tok::LParen, "`(`")?;
            let mut params = vec![self.ident()?];
            while *self.peek() == Tok::Comma {
                self.pos += 1;
                params.push(self.ident()?);
            }
            self.eat(Tok::RParen, "`)`")?;
            self.eat(Tok::Assign, "`:=`")?;
            Ok((name, params))
        })();
        match attempt {
            Ok(h) => Ok(Some(h)),
            Err(()) => {
                self.pos = start;
                Ok(None)
            }
        }
    }

    /// Body term, optional `, if guard`, optional trailing `;`.
    fn branch_tail(&mut self) -> Result<Branch, ()> {
        let body = self.term()?;
        let guard = if *self.peek() == Tok::Comma {
            self.pos += 1;
            self.eat(Tok::If, "`if`")?;
            Some(self.formula()?)
        } else {
            self.note("`, if <guard>`");
            None
        };
        if *self.peek() == Tok::Semi {
            self.pos += 1;
        }
        Ok(Branch { body, guard })
    }

    fn finish<T>(mut self, parsed: Result<T, ()>) -> Result<T, SyntaxError> {
        match parsed {
            Ok(value) if *self.peek() == Tok::Eof => Ok(value),
            Ok(_) => {
                self.note("end of input");
                Err(self.error())
            }
            Err(()) => Err(self.error()),
        }
    }
}

/// Constant-fold a parsed division when both sides are literals, so `3/4`
/// becomes the exact rational three-quarters rather than a `Div` node.
fn fold_div(lhs: Term, rhs: Term) -> Term {
    if let (Term::Rational(a), Term::Rational(b)) = (&lhs, &rhs) {
        if !b.is_zero() {
            return Term::Rational(a / b);
        }
    }
    Term::Div(Box::new(lhs), Box::new(rhs))
}

/// Fold unary minus on a literal into the literal itself, so printing a
/// negative rational round-trips to the same AST.
fn fold_neg(inner: Term) -> Term {
    match inner {
        Term::Rational(r) => Term::Rational(-r),
        other => Term::Neg(Box::new(other)),
    }
}

/// Recover a quantifier's sort from the conventional membership shape:
/// `forall n, n in NN -> ...` or `exists n, n in NN /\ ...`. Nested
/// quantifiers are looked through (so `forall a, forall b, a in ZZ /\ ... -> ...`
/// infers `a`'s sort), and multiple memberships combine to the strongest
/// constraint.
pub fn infer_quantifier_sort(body: &Formula, var: &str, is_forall: bool) -> Option<Sort> {
    let mut body = body;
    while let Formula::Forall(v, _, inner) | Formula::Exists(v, _, inner) = body {
        if v == var {
            // Shadowed: occurrences below belong to the inner binder.
            return None;
        }
        body = inner;
    }
    let region: Vec<&Formula> = if is_forall {
        match body {
            Formula::Implies(ante, _) => ante.conjuncts(),
            _ => return None,
        }
    } else {
        body.conjuncts()
    };
    let mut found: Option<Sort> = None;
    for leaf in region {
        if let Formula::Member(Term::Var(v), sort) = leaf {
            if v == var {
                found = Some(found.map_or(*sort, |s| s.meet(*sort)));
            }
        }
    }
    found
}

/// Parse a complete term; the whole input must be consumed.
pub fn parse_term(input: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(input)?;
    let parsed = p.term();
    p.finish(parsed)
}

/// Parse a complete formula; the whole input must be consumed.
pub fn parse_formula(input: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(input)?;
    let parsed = p.formula();
    p.finish(parsed)
}

/// Errors from [`parse_definition`]: either malformed syntax or an arity
/// disagreement between signature and branch heads.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefinitionError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Arity(#[from] ArityError),
}

/// Parse a guarded definition of the form
/// `definition(f): NN -> NN f(n) := body, if guard; | body2, if guard2`.
pub fn parse_definition(input: &str) -> Result<Definition, DefinitionError> {
    let mut p = Parser::new(input)?;
    match p.definition() {
        // An arity mismatch aborts the parse mid-input; report it rather than
        // the spurious "expected end of input" it would otherwise cause.
        Ok(Err(arity)) => Err(DefinitionError::Arity(arity)),
        parsed => match p.finish(parsed)? {
            Ok(def) => Ok(def),
            Err(arity) => Err(DefinitionError::Arity(arity)),
        },
    }
}
