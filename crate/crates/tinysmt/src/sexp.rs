//! Minimal S-expression reader for SMT-LIB 2 scripts.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s) => Some(s),
            Sexp::List(_) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::Atom(_) => None,
            Sexp::List(items) => Some(items),
        }
    }

    /// Head symbol of a list form, e.g. `assert` in `(assert ...)`.
    pub fn head(&self) -> Option<&str> {
        self.list()?.first()?.atom()
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(s) => f.write_str(s),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parse a whole script; `;` comments run to end of line, `|...|` quotes
/// symbols, `"..."` quotes string literals (kept with their quotes).
pub fn parse_all(input: &str) -> Result<Vec<Sexp>, String> {
    let mut chars = input.chars().peekable();
    let mut out = Vec::new();
    skip_trivia(&mut chars);
    while chars.peek().is_some() {
        out.push(parse_one(&mut chars)?);
        skip_trivia(&mut chars);
    }
    Ok(out)
}

type Chars<'a> = std::iter::Peekable<std::str::Chars<'a>>;

fn skip_trivia(chars: &mut Chars) {
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == ';' {
            for c in chars.by_ref() {
                if c == '\n' {
                    break;
                }
            }
        } else {
            break;
        }
    }
}

fn parse_one(chars: &mut Chars) -> Result<Sexp, String> {
    skip_trivia(chars);
    match chars.peek() {
        None => Err("unexpected end of input".to_string()),
        Some('(') => {
            chars.next();
            let mut items = Vec::new();
            loop {
                skip_trivia(chars);
                match chars.peek() {
                    None => return Err("unclosed parenthesis".to_string()),
                    Some(')') => {
                        chars.next();
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(parse_one(chars)?),
                }
            }
        }
        Some(')') => Err("unexpected `)`".to_string()),
        Some('|') => {
            chars.next();
            let mut s = String::new();
            for c in chars.by_ref() {
                if c == '|' {
                    return Ok(Sexp::Atom(s));
                }
                s.push(c);
            }
            Err("unclosed `|` symbol".to_string())
        }
        Some('"') => {
            chars.next();
            let mut s = String::from('"');
            while let Some(c) = chars.next() {
                s.push(c);
                if c == '"' {
                    // SMT-LIB escapes a quote by doubling it.
                    if chars.peek() == Some(&'"') {
                        s.push(chars.next().expect("peeked"));
                    } else {
                        return Ok(Sexp::Atom(s));
                    }
                }
            }
            Err("unclosed string literal".to_string())
        }
        Some(_) => {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                    break;
                }
                s.push(c);
                chars.next();
            }
            Ok(Sexp::Atom(s))
        }
    }
}
