//! Parsing of solver models into exact rational assignments.
//!
//! Handles both `(model (define-fun ...))` and the bare `((define-fun ...))`
//! shape newer solvers print. Only zero-argument define-funs are read —
//! function graphs and algebraic numbers are skipped, which at worst turns a
//! would-be counterexample into an honest "couldn't replay".

use std::collections::BTreeMap;

use num::BigRational;

use mathstep_core::parse_rational;

#[derive(Clone, Debug, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize(input: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut chars = input.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '(' | ')' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                tokens.push(c.to_string());
            }
            ';' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                for n in chars.by_ref() {
                    if n == '\n' {
                        break;
                    }
                }
            }
            '"' => {
                // String literals only appear in error messages; swallow them
                // so they cannot unbalance the parse.
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                let mut lit = String::from("\"");
                for n in chars.by_ref() {
                    lit.push(n);
                    if n == '"' {
                        break;
                    }
                }
                tokens.push(lit);
            }
            c if c.is_whitespace() => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn parse_all(input: &str) -> Vec<Sexp> {
    let tokens = tokenize(input);
    let mut pos = 0;
    let mut out = Vec::new();
    while pos < tokens.len() {
        match parse_one(&tokens, &mut pos) {
            Some(s) => out.push(s),
            None => break,
        }
    }
    out
}

fn parse_one(tokens: &[String], pos: &mut usize) -> Option<Sexp> {
    match tokens.get(*pos)?.as_str() {
        "(" => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Some(Sexp::List(items));
                    }
                    Some(_) => items.push(parse_one(tokens, pos)?),
                    None => return None, // truncated output; drop the tail
                }
            }
        }
        ")" => {
            *pos += 1;
            None
        }
        atom => {
            let s = Sexp::Atom(atom.to_string());
            *pos += 1;
            Some(s)
        }
    }
}

/// Extract `name → value` bindings from solver model output. Symbols whose
/// values are not exact rationals are omitted.
pub fn parse_model(output: &str) -> BTreeMap<String, BigRational> {
    let mut bindings = BTreeMap::new();
    for top in parse_all(output) {
        let Sexp::List(items) = top else { continue };
        let entries: &[Sexp] = match items.first() {
            Some(Sexp::Atom(head)) if head == "model" => &items[1..],
            _ => &items[..],
        };
        for entry in entries {
            let Sexp::List(parts) = entry else { continue };
            let [Sexp::Atom(kw), Sexp::Atom(name), Sexp::List(args), _sort, value] =
                parts.as_slice()
            else {
                continue;
            };
            if kw != "define-fun" || !args.is_empty() {
                continue;
            }
            if let Some(v) = decode_value(value) {
                bindings.insert(name.clone(), v);
            }
        }
    }
    bindings
}

fn decode_value(value: &Sexp) -> Option<BigRational> {
    match value {
        Sexp::Atom(a) => parse_rational(a).ok(),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(op), inner] if op == "-" => Some(-decode_value(inner)?),
            [Sexp::Atom(op), inner] if op == "to_real" => decode_value(inner),
            [Sexp::Atom(op), num, den] if op == "/" => {
                let d = decode_value(den)?;
                if d == BigRational::from_integer(0.into()) {
                    return None;
                }
                Some(decode_value(num)? / d)
            }
            _ => None, // root-obj and friends: not exactly representable
        },
    }
}
