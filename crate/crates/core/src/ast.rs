//! Abstract syntax for the SimpleMath language: terms, formulas, sorts, and
//! guarded function definitions.
//!
//! Numeric literals are exact rationals (`BigRational`); nothing in this crate
//! ever touches floating point. Terms and formulas serialize to JSON as tagged
//! nodes so reports can embed them verbatim.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigRational, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The four numeric sorts, ordered by set inclusion: `Nat ⊂ Int ⊂ Rat ⊂ Real`.
///
/// `Ord` follows inclusion, so `min` of two sorts is the stronger constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sort {
    #[serde(rename = "NN")]
    Nat,
    #[serde(rename = "ZZ")]
    Int,
    #[serde(rename = "QQ")]
    Rat,
    #[serde(rename = "RR")]
    Real,
}

impl Sort {
    /// Surface keyword for this sort.
    pub fn keyword(self) -> &'static str {
        match self {
            Sort::Nat => "NN",
            Sort::Int => "ZZ",
            Sort::Rat => "QQ",
            Sort::Real => "RR",
        }
    }

    /// Combine two constraints on the same variable: the stronger (smaller) set wins.
    pub fn meet(self, other: Sort) -> Sort {
        self.min(other)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Binary comparison relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }

    /// The relation with both sides swapped (`<` ↔ `>`, `<=` ↔ `>=`).
    pub fn flip(self) -> Relation {
        match self {
            Relation::Lt => Relation::Gt,
            Relation::Le => Relation::Ge,
            Relation::Gt => Relation::Lt,
            Relation::Ge => Relation::Le,
            other => other,
        }
    }

    /// Truth of the relation on two exact rationals.
    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Ne => lhs != rhs,
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

/// Render a rational canonically: integer when the denominator is 1, else `num/den`.
pub fn format_rational(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parse `"3"`, `"-3"`, `"3/4"`, or a decimal like `"2.5"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    use num::BigInt;
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d: BigInt = den.trim().parse().map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d == BigInt::from(0) {
            return Err(format!("zero denominator in {text:?}"));
        }
        Ok(BigRational::new(n, d))
    } else if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let w: BigInt = whole.parse().map_err(|e| format!("bad number {text:?}: {e}"))?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal part in {text:?}"));
        }
        let f: BigInt = frac.parse().map_err(|e| format!("bad number {text:?}: {e}"))?;
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let magnitude = BigRational::new(w.clone(), BigInt::from(1)).abs()
            + BigRational::new(f, scale);
        Ok(if negative { -magnitude } else { magnitude })
    } else {
        let n: BigInt = text.parse().map_err(|e| format!("bad number {text:?}: {e}"))?;
        Ok(BigRational::from(n))
    }
}

/// Arithmetic terms.
///
/// `Pow` exponents are restricted by the grammar to nonnegative integer
/// literals or plain variables; the parser rejects anything else.
///
/// JSON form: tagged nodes, with rationals as exact `"num/den"` strings
/// (JSON numbers cannot carry arbitrary precision).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TermRepr", into = "TermRepr")]
pub enum Term {
    Rational(BigRational),
    Var(String),
    App(String, Vec<Term>),
    Neg(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Div(Box<Term>, Box<Term>),
    Pow(Box<Term>, Box<Term>),
}

/// Serde mirror of [`Term`]: identical shape except rationals become strings.
/// Children recurse through `Term`'s own serde impl, so only the literal leaf
/// differs.
#[derive(Serialize, Deserialize)]
#[serde(tag = "node", content = "args", rename_all = "snake_case")]
enum TermRepr {
    Rational(String),
    Var(String),
    App(String, Vec<Term>),
    Neg(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Div(Box<Term>, Box<Term>),
    Pow(Box<Term>, Box<Term>),
}

impl From<Term> for TermRepr {
    fn from(t: Term) -> TermRepr {
        match t {
            Term::Rational(r) => TermRepr::Rational(format_rational(&r)),
            Term::Var(v) => TermRepr::Var(v),
            Term::App(name, args) => TermRepr::App(name, args),
            Term::Neg(a) => TermRepr::Neg(a),
            Term::Add(a, b) => TermRepr::Add(a, b),
            Term::Sub(a, b) => TermRepr::Sub(a, b),
            Term::Mul(a, b) => TermRepr::Mul(a, b),
            Term::Div(a, b) => TermRepr::Div(a, b),
            Term::Pow(a, b) => TermRepr::Pow(a, b),
        }
    }
}

impl TryFrom<TermRepr> for Term {
    type Error = String;

    fn try_from(r: TermRepr) -> Result<Term, String> {
        Ok(match r {
            TermRepr::Rational(s) => Term::Rational(parse_rational(&s)?),
            TermRepr::Var(v) => Term::Var(v),
            TermRepr::App(name, args) => Term::App(name, args),
            TermRepr::Neg(a) => Term::Neg(a),
            TermRepr::Add(a, b) => Term::Add(a, b),
            TermRepr::Sub(a, b) => Term::Sub(a, b),
            TermRepr::Mul(a, b) => Term::Mul(a, b),
            TermRepr::Div(a, b) => Term::Div(a, b),
            TermRepr::Pow(a, b) => Term::Pow(a, b),
        })
    }
}

impl Term {
    /// Integer literal helper.
    pub fn int(value: i64) -> Term {
        Term::Rational(BigRational::from(num::BigInt::from(value)))
    }

    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// If the term is a literal whose value is a nonnegative integer, return it.
    pub fn as_nonneg_integer(&self) -> Option<&num::BigInt> {
        match self {
            Term::Rational(r) if r.is_integer() && !r.numer().sign().eq(&num::bigint::Sign::Minus) => {
                Some(r.numer())
            }
            _ => None,
        }
    }

    /// Collect free variables into `out`. Terms have no binders, so every
    /// variable occurrence is free.
    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Rational(_) => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
            Term::Neg(t) => t.collect_vars(out),
            Term::Add(a, b)
            | Term::Sub(a, b)
            | Term::Mul(a, b)
            | Term::Div(a, b)
            | Term::Pow(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Rational(_) => true,
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
            Term::Neg(t) => t.is_ground(),
            Term::Add(a, b)
            | Term::Sub(a, b)
            | Term::Mul(a, b)
            | Term::Div(a, b)
            | Term::Pow(a, b) => a.is_ground() && b.is_ground(),
        }
    }

    /// Replace every occurrence of variable `var` by `replacement`.
    pub fn substitute(&self, var: &str, replacement: &Term) -> Term {
        match self {
            Term::Rational(_) => self.clone(),
            Term::Var(v) => {
                if v == var {
                    replacement.clone()
                } else {
                    self.clone()
                }
            }
            Term::App(name, args) => Term::App(
                name.clone(),
                args.iter().map(|a| a.substitute(var, replacement)).collect(),
            ),
            Term::Neg(t) => Term::Neg(Box::new(t.substitute(var, replacement))),
            Term::Add(a, b) => Term::Add(
                Box::new(a.substitute(var, replacement)),
                Box::new(b.substitute(var, replacement)),
            ),
            Term::Sub(a, b) => Term::Sub(
                Box::new(a.substitute(var, replacement)),
                Box::new(b.substitute(var, replacement)),
            ),
            Term::Mul(a, b) => Term::Mul(
                Box::new(a.substitute(var, replacement)),
                Box::new(b.substitute(var, replacement)),
            ),
            Term::Div(a, b) => Term::Div(
                Box::new(a.substitute(var, replacement)),
                Box::new(b.substitute(var, replacement)),
            ),
            Term::Pow(a, b) => Term::Pow(
                Box::new(a.substitute(var, replacement)),
                Box::new(b.substitute(var, replacement)),
            ),
        }
    }

    /// Every function application in the term, with name and argument list.
    pub fn collect_apps<'a>(&'a self, out: &mut Vec<(&'a str, &'a [Term])>) {
        match self {
            Term::Rational(_) | Term::Var(_) => {}
            Term::App(name, args) => {
                out.push((name, args));
                for a in args {
                    a.collect_apps(out);
                }
            }
            Term::Neg(t) => t.collect_apps(out),
            Term::Add(a, b)
            | Term::Sub(a, b)
            | Term::Mul(a, b)
            | Term::Div(a, b)
            | Term::Pow(a, b) => {
                a.collect_apps(out);
                b.collect_apps(out);
            }
        }
    }
}

/// Substituting under a binder would capture a free variable of the replacement.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("substituting for `{var}` under binder `{binder}` would capture a free variable of the replacement")]
pub struct CaptureError {
    pub binder: String,
    pub var: String,
}

/// First-order formulas over terms, with sorted quantifiers and membership atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "node", content = "args", rename_all = "snake_case")]
pub enum Formula {
    Atom(Relation, Term, Term),
    Member(Term, Sort),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Sort, Box<Formula>),
    Exists(String, Sort, Box<Formula>),
}

impl Formula {
    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Atom(Relation::Eq, lhs, rhs)
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, lhs, rhs) => {
                let mut vars = BTreeSet::new();
                lhs.collect_vars(&mut vars);
                rhs.collect_vars(&mut vars);
                out.extend(vars.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Member(t, _) => {
                let mut vars = BTreeSet::new();
                t.collect_vars(&mut vars);
                out.extend(vars.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, _, body) | Formula::Exists(v, _, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_ground(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Capture-avoiding substitution of `replacement` for free occurrences of `var`.
    ///
    /// No automatic alpha-renaming: if a binder would capture a free variable
    /// of the replacement, the substitution is rejected with [`CaptureError`].
    pub fn substitute(&self, var: &str, replacement: &Term) -> Result<Formula, CaptureError> {
        match self {
            Formula::Atom(rel, lhs, rhs) => Ok(Formula::Atom(
                *rel,
                lhs.substitute(var, replacement),
                rhs.substitute(var, replacement),
            )),
            Formula::Member(t, sort) => Ok(Formula::Member(t.substitute(var, replacement), *sort)),
            Formula::Not(f) => Ok(Formula::Not(Box::new(f.substitute(var, replacement)?))),
            Formula::And(a, b) => Ok(Formula::And(
                Box::new(a.substitute(var, replacement)?),
                Box::new(b.substitute(var, replacement)?),
            )),
            Formula::Or(a, b) => Ok(Formula::Or(
                Box::new(a.substitute(var, replacement)?),
                Box::new(b.substitute(var, replacement)?),
            )),
            Formula::Implies(a, b) => Ok(Formula::Implies(
                Box::new(a.substitute(var, replacement)?),
                Box::new(b.substitute(var, replacement)?),
            )),
            Formula::Forall(v, sort, body) | Formula::Exists(v, sort, body) => {
                let rebuild = |inner: Formula| match self {
                    Formula::Forall(..) => Formula::Forall(v.clone(), *sort, Box::new(inner)),
                    _ => Formula::Exists(v.clone(), *sort, Box::new(inner)),
                };
                if v == var {
                    // The binder shadows the substituted variable: nothing to do.
                    return Ok(self.clone());
                }
                if body.free_vars().contains(var) && replacement.free_vars().contains(v) {
                    return Err(CaptureError { binder: v.clone(), var: var.to_string() });
                }
                Ok(rebuild(body.substitute(var, replacement)?))
            }
        }
    }

    /// Flatten a conjunction tree into its leaves, left to right.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Flatten a disjunction tree into its leaves, left to right.
    pub fn disjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Every function application occurring anywhere in the formula.
    pub fn collect_apps<'a>(&'a self, out: &mut Vec<(&'a str, &'a [Term])>) {
        match self {
            Formula::Atom(_, lhs, rhs) => {
                lhs.collect_apps(out);
                rhs.collect_apps(out);
            }
            Formula::Member(t, _) => t.collect_apps(out),
            Formula::Not(f) => f.collect_apps(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_apps(out);
                b.collect_apps(out);
            }
            Formula::Forall(_, _, body) | Formula::Exists(_, _, body) => body.collect_apps(out),
        }
    }
}

/// One branch of a guarded definition: the body applies when the guard holds.
/// `guard: None` means the branch is unconditional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub body: Term,
    pub guard: Option<Formula>,
}

/// A guarded, possibly recursive function definition such as
/// `definition(f): NN -> NN  f(n) := f(n-1) + f(n-2), if n >= 3; | 1, if n = 2; | 1, if n = 1`.
///
/// Branches are ordered; evaluation dispatches on the first guard that holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Definition {
    pub name: String,
    pub params: Vec<String>,
    pub arg_sorts: Vec<Sort>,
    pub result_sort: Sort,
    pub branches: Vec<Branch>,
}

impl Definition {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(num::BigInt::from(n), num::BigInt::from(d))
    }

    #[test]
    fn rational_round_trip_strings() {
        for (text, num, den) in [("3", 3, 1), ("-3", -3, 1), ("3/4", 3, 4), ("-6/8", -3, 4)] {
            let parsed = parse_rational(text).unwrap();
            assert_eq!(parsed, rat(num, den));
        }
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(format_rational(&rat(-3, 4)), "-3/4");
        assert_eq!(format_rational(&rat(8, 4)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.x").is_err());
    }

    #[test]
    fn free_vars_respect_binders() {
        // forall x, x + y > 0  — only y is free.
        let body = Formula::Atom(
            Relation::Gt,
            Term::Add(Box::new(Term::var("x")), Box::new(Term::var("y"))),
            Term::int(0),
        );
        let f = Formula::Forall("x".into(), Sort::Real, Box::new(body));
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
    }

    #[test]
    fn substitution_detects_capture() {
        // substituting y := x into (forall x, y > x) would capture x
        let body = Formula::Atom(Relation::Gt, Term::var("y"), Term::var("x"));
        let f = Formula::Forall("x".into(), Sort::Real, Box::new(body));
        let err = f.substitute("y", &Term::var("x")).unwrap_err();
        assert_eq!(err.binder, "x");
        assert_eq!(err.var, "y");
        // substituting a closed term is fine
        let ok = f.substitute("y", &Term::int(2)).unwrap();
        assert!(ok.free_vars().is_empty());
    }

    #[test]
    fn substitution_respects_shadowing() {
        // (forall y, y > z) with y := 5 is untouched: the binder shadows y.
        let body = Formula::Atom(Relation::Gt, Term::var("y"), Term::var("z"));
        let f = Formula::Forall("y".into(), Sort::Real, Box::new(body));
        assert_eq!(f.substitute("y", &Term::int(5)).unwrap(), f);
    }

    #[test]
    fn term_json_uses_tagged_nodes_and_exact_rationals() {
        let t = Term::Add(
            Box::new(Term::Rational(rat(1, 3))),
            Box::new(Term::var("x")),
        );
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["node"], "add");
        assert_eq!(json["args"][0]["args"], "1/3");
        let back: Term = serde_json::from_value(json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn sort_meet_is_strongest_constraint() {
        assert_eq!(Sort::Nat.meet(Sort::Real), Sort::Nat);
        assert_eq!(Sort::Rat.meet(Sort::Int), Sort::Int);
        assert!(Sort::Nat < Sort::Int && Sort::Int < Sort::Rat && Sort::Rat < Sort::Real);
    }
}
