//! Canonical text rendering for terms, formulas, and definitions.
//!
//! Printing inserts the minimal parentheses that keep the parse tree intact
//! under the grammar's precedence and associativity, so `parse(print(x)) == x`
//! structurally for any AST the parser can produce.

use num::BigRational;

use crate::ast::{format_rational, Branch, Definition, Formula, Term};
use crate::parser::infer_quantifier_sort;

// Term precedence levels, loosest first. Atomic leaves sit above everything.
const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_NEG: u8 = 3;
const P_POW: u8 = 4;
const P_LEAF: u8 = 5;

fn rational_prec(r: &BigRational) -> u8 {
    // Literals are only textually atomic when they are nonnegative integers.
    // `3/4` prints with a `/` and re-parses like a division (the literal fold
    // restores it, but only if the slash groups with the literal), and `-3`
    // prints with a leading `-` that binds like unary minus.
    if !r.is_integer() {
        P_MUL
    } else if r < &BigRational::from(num::BigInt::from(0)) {
        P_NEG
    } else {
        P_LEAF
    }
}

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Rational(r) => rational_prec(r),
        Term::Var(_) | Term::App(..) => P_LEAF,
        Term::Neg(_) => P_NEG,
        Term::Add(..) | Term::Sub(..) => P_ADD,
        Term::Mul(..) | Term::Div(..) => P_MUL,
        Term::Pow(..) => P_POW,
    }
}

fn term_at(t: &Term, min: u8, out: &mut String) {
    let prec = term_prec(t);
    let parens = prec < min;
    if parens {
        out.push('(');
    }
    match t {
        Term::Rational(r) => out.push_str(&format_rational(r)),
        Term::Var(v) => out.push_str(v),
        Term::App(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                term_at(a, 0, out);
            }
            out.push(')');
        }
        Term::Neg(inner) => {
            out.push('-');
            term_at(inner, P_POW, out);
        }
        Term::Add(a, b) => {
            term_at(a, P_ADD, out);
            out.push_str(" + ");
            term_at(b, P_ADD + 1, out);
        }
        Term::Sub(a, b) => {
            term_at(a, P_ADD, out);
            out.push_str(" - ");
            term_at(b, P_ADD + 1, out);
        }
        Term::Mul(a, b) => {
            term_at(a, P_MUL, out);
            out.push_str(" * ");
            term_at(b, P_MUL + 1, out);
        }
        Term::Div(a, b) => {
            term_at(a, P_MUL, out);
            out.push_str(" / ");
            term_at(b, P_MUL + 1, out);
        }
        Term::Pow(base, exp) => {
            term_at(base, P_LEAF, out);
            out.push('^');
            // Grammar restricts exponents to nonnegative integer literals or
            // variables; both are atomic.
            term_at(exp, P_LEAF, out);
        }
    }
    if parens {
        out.push(')');
    }
}

// Formula precedence levels. Quantifiers share the implication level: the
// grammar admits them bare at top level and as an implication's consequent,
// and requires parentheses everywhere else.
const F_IMPL: u8 = 1;
const F_OR: u8 = 2;
const F_AND: u8 = 3;
const F_NOT: u8 = 4;
const F_ATOM: u8 = 5;

fn formula_prec(f: &Formula) -> u8 {
    match f {
        Formula::Atom(..) | Formula::Member(..) => F_ATOM,
        Formula::Not(_) => F_NOT,
        Formula::And(..) => F_AND,
        Formula::Or(..) => F_OR,
        Formula::Implies(..) | Formula::Forall(..) | Formula::Exists(..) => F_IMPL,
    }
}

fn formula_at(f: &Formula, min: u8, out: &mut String) {
    let prec = formula_prec(f);
    let parens = prec < min;
    if parens {
        out.push('(');
    }
    match f {
        Formula::Atom(rel, lhs, rhs) => {
            term_at(lhs, 0, out);
            out.push(' ');
            out.push_str(rel.symbol());
            out.push(' ');
            term_at(rhs, 0, out);
        }
        Formula::Member(t, sort) => {
            term_at(t, 0, out);
            out.push_str(" in ");
            out.push_str(sort.keyword());
        }
        Formula::Not(inner) => {
            out.push('~');
            formula_at(inner, F_NOT, out);
        }
        Formula::And(a, b) => {
            formula_at(a, F_AND, out);
            out.push_str(" /\\ ");
            formula_at(b, F_AND + 1, out);
        }
        Formula::Or(a, b) => {
            formula_at(a, F_OR, out);
            out.push_str(" \\/ ");
            formula_at(b, F_OR + 1, out);
        }
        Formula::Implies(a, b) => {
            formula_at(a, F_OR, out);
            out.push_str(" -> ");
            // Right-associative: the consequent reuses the implication level,
            // which also admits a bare quantifier.
            formula_at(b, F_IMPL, out);
        }
        Formula::Forall(var, sort, body) | Formula::Exists(var, sort, body) => {
            let is_forall = matches!(f, Formula::Forall(..));
            out.push_str(if is_forall { "forall " } else { "exists " });
            out.push_str(var);
            // Omit the sort annotation when the parser would recover the same
            // sort from the body (membership antecedent, or the RR default).
            let inferred = infer_quantifier_sort(body, var, is_forall);
            let omit = match inferred {
                Some(s) => s == *sort,
                None => *sort == crate::ast::Sort::Real,
            };
            if !omit {
                out.push_str(" in ");
                out.push_str(sort.keyword());
            }
            out.push_str(", ");
            formula_at(body, F_IMPL, out);
        }
    }
    if parens {
        out.push(')');
    }
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    term_at(t, 0, &mut out);
    out
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    formula_at(f, 0, &mut out);
    out
}

fn print_branch(head: Option<(&str, &[String])>, branch: &Branch, out: &mut String) {
    if let Some((name, params)) = head {
        out.push_str(name);
        out.push('(');
        out.push_str(&params.join(", "));
        out.push_str(") := ");
    }
    term_at(&branch.body, 0, out);
    if let Some(guard) = &branch.guard {
        out.push_str(", if ");
        formula_at(guard, 0, out);
    }
}

pub fn print_definition(def: &Definition) -> String {
    let mut out = String::new();
    out.push_str("definition(");
    out.push_str(&def.name);
    out.push_str("): ");
    for sort in &def.arg_sorts {
        out.push_str(sort.keyword());
        out.push_str(" -> ");
    }
    out.push_str(def.result_sort.keyword());
    out.push(' ');
    for (i, branch) in def.branches.iter().enumerate() {
        if i == 0 {
            print_branch(Some((&def.name, &def.params)), branch, &mut out);
        } else {
            out.push_str("; | ");
            print_branch(None, branch, &mut out);
        }
    }
    out
}
