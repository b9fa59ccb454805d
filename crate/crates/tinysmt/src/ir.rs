//! Conversion from SMT-LIB syntax to an internal quantifier-free fragment:
//! boolean structure over arithmetic atoms, with ground uninterpreted
//! applications flattened to fresh variables.
//!
//! Anything outside the fragment (quantifiers, boolean variables, calls
//! whose arguments do not fold to constants) raises [`Unhandled`]; the
//! driver drops such assertions, which keeps `unsat` answers sound and
//! downgrades would-be `sat` answers to `unknown`.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, Zero};

use crate::sexp::Sexp;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Bool,
    Int,
    Real,
}

impl Sort {
    pub fn parse(s: &Sexp) -> Option<Sort> {
        match s.atom()? {
            "Bool" => Some(Sort::Bool),
            "Int" => Some(Sort::Int),
            "Real" => Some(Sort::Real),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sort::Bool => "Bool",
            Sort::Int => "Int",
            Sort::Real => "Real",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FunDecl {
    pub args: Vec<Sort>,
    pub ret: Sort,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Var(String),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Formula {
    True,
    False,
    Atom(Rel, Expr, Expr),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

/// Why an assertion fell outside the supported fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unhandled {
    Quantifier,
    Unsupported(String),
}

fn unsupported<T>(what: impl Into<String>) -> Result<T, Unhandled> {
    Err(Unhandled::Unsupported(what.into()))
}

/// Evaluate a variable-free expression exactly; `None` on free variables or
/// division by zero.
pub fn const_fold(e: &Expr) -> Option<BigRational> {
    match e {
        Expr::Num(r) => Some(r.clone()),
        Expr::Var(_) => None,
        Expr::Add(items) => {
            let mut acc = BigRational::zero();
            for item in items {
                acc += const_fold(item)?;
            }
            Some(acc)
        }
        Expr::Mul(items) => {
            let mut acc = BigRational::from(BigInt::from(1));
            for item in items {
                acc *= const_fold(item)?;
            }
            Some(acc)
        }
        Expr::Neg(a) => Some(-const_fold(a)?),
        Expr::Div(a, b) => {
            let d = const_fold(b)?;
            if d.is_zero() {
                return None;
            }
            Some(const_fold(a)? / d)
        }
    }
}

/// Evaluate an expression under a variable assignment (total over the
/// expression's variables); `None` on missing variables or division by zero.
pub fn eval_expr(e: &Expr, model: &BTreeMap<String, BigRational>) -> Option<BigRational> {
    match e {
        Expr::Num(r) => Some(r.clone()),
        Expr::Var(v) => model.get(v).cloned(),
        Expr::Add(items) => {
            let mut acc = BigRational::zero();
            for item in items {
                acc += eval_expr(item, model)?;
            }
            Some(acc)
        }
        Expr::Mul(items) => {
            let mut acc = BigRational::from(BigInt::from(1));
            for item in items {
                acc *= eval_expr(item, model)?;
            }
            Some(acc)
        }
        Expr::Neg(a) => Some(-eval_expr(a, model)?),
        Expr::Div(a, b) => {
            let d = eval_expr(b, model)?;
            if d.is_zero() {
                return None;
            }
            Some(eval_expr(a, model)? / d)
        }
    }
}

pub fn rel_holds(rel: Rel, lhs: &BigRational, rhs: &BigRational) -> bool {
    match rel {
        Rel::Eq => lhs == rhs,
        Rel::Ne => lhs != rhs,
        Rel::Le => lhs <= rhs,
        Rel::Lt => lhs < rhs,
        Rel::Ge => lhs >= rhs,
        Rel::Gt => lhs > rhs,
    }
}

/// Collect every variable mentioned by an expression.
pub fn expr_vars(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Num(_) => {}
        Expr::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        Expr::Add(items) | Expr::Mul(items) => {
            for item in items {
                expr_vars(item, out);
            }
        }
        Expr::Neg(a) => expr_vars(a, out),
        Expr::Div(a, b) => {
            expr_vars(a, out);
            expr_vars(b, out);
        }
    }
}

/// Translates assertions, allocating one internal variable per distinct
/// ground application. Internal names start with `@`, which cannot appear
/// in the simple symbols our callers emit.
pub struct Flattener<'d> {
    decls: &'d BTreeMap<String, FunDecl>,
    pub app_vars: BTreeMap<(String, Vec<BigRational>), String>,
    pub var_sorts: BTreeMap<String, Sort>,
}

impl<'d> Flattener<'d> {
    pub fn new(decls: &'d BTreeMap<String, FunDecl>) -> Flattener<'d> {
        let var_sorts = decls
            .iter()
            .filter(|(_, d)| d.args.is_empty())
            .map(|(n, d)| (n.clone(), d.ret))
            .collect();
        Flattener { decls, app_vars: BTreeMap::new(), var_sorts }
    }

    pub fn formula(&mut self, s: &Sexp) -> Result<Formula, Unhandled> {
        if let Some(atom) = s.atom() {
            return match atom {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                other => unsupported(format!("boolean symbol `{other}`")),
            };
        }
        let items = s.list().expect("atom handled above");
        let head = match s.head() {
            Some(h) => h,
            None => return unsupported("empty or non-symbol application"),
        };
        let args = &items[1..];
        match head {
            "and" => Ok(Formula::And(
                args.iter().map(|a| self.formula(a)).collect::<Result<_, _>>()?,
            )),
            "or" => Ok(Formula::Or(
                args.iter().map(|a| self.formula(a)).collect::<Result<_, _>>()?,
            )),
            "not" => {
                if args.len() != 1 {
                    return unsupported("`not` arity");
                }
                Ok(Formula::Not(Box::new(self.formula(&args[0])?)))
            }
            "=>" => {
                if args.len() < 2 {
                    return unsupported("`=>` arity");
                }
                // (=> a b c) is a -> (b -> c), i.e. ~a \/ ~b \/ c.
                let mut parts = Vec::new();
                for a in &args[..args.len() - 1] {
                    parts.push(Formula::Not(Box::new(self.formula(a)?)));
                }
                parts.push(self.formula(&args[args.len() - 1])?);
                Ok(Formula::Or(parts))
            }
            "=" | "<=" | "<" | ">=" | ">" => {
                if args.len() < 2 {
                    return unsupported(format!("`{head}` arity"));
                }
                let rel = match head {
                    "=" => Rel::Eq,
                    "<=" => Rel::Le,
                    "<" => Rel::Lt,
                    ">=" => Rel::Ge,
                    _ => Rel::Gt,
                };
                let exprs: Vec<Expr> =
                    args.iter().map(|a| self.expr(a)).collect::<Result<_, _>>()?;
                Ok(chain(rel, exprs))
            }
            "distinct" => {
                let exprs: Vec<Expr> =
                    args.iter().map(|a| self.expr(a)).collect::<Result<_, _>>()?;
                let mut pairs = Vec::new();
                for i in 0..exprs.len() {
                    for j in i + 1..exprs.len() {
                        pairs.push(Formula::Atom(
                            Rel::Ne,
                            exprs[i].clone(),
                            exprs[j].clone(),
                        ));
                    }
                }
                Ok(Formula::And(pairs))
            }
            "forall" | "exists" => Err(Unhandled::Quantifier),
            other => unsupported(format!("operator `{other}`")),
        }
    }

    fn expr(&mut self, s: &Sexp) -> Result<Expr, Unhandled> {
        if let Some(atom) = s.atom() {
            if let Some(n) = parse_numeral(atom) {
                return Ok(Expr::Num(n));
            }
            return match self.decls.get(atom) {
                Some(d) if d.args.is_empty() && d.ret != Sort::Bool => {
                    Ok(Expr::Var(atom.to_string()))
                }
                Some(_) => unsupported(format!("symbol `{atom}` is not arithmetic here")),
                None => unsupported(format!("undeclared symbol `{atom}`")),
            };
        }
        let items = s.list().expect("atom handled above");
        let head = match s.head() {
            Some(h) => h,
            None => return unsupported("empty or non-symbol term"),
        };
        let args = &items[1..];
        match head {
            "+" => Ok(Expr::Add(
                args.iter().map(|a| self.expr(a)).collect::<Result<_, _>>()?,
            )),
            "*" => Ok(Expr::Mul(
                args.iter().map(|a| self.expr(a)).collect::<Result<_, _>>()?,
            )),
            "-" => match args.len() {
                0 => unsupported("`-` arity"),
                1 => Ok(Expr::Neg(Box::new(self.expr(&args[0])?))),
                _ => {
                    let mut parts = vec![self.expr(&args[0])?];
                    for a in &args[1..] {
                        parts.push(Expr::Neg(Box::new(self.expr(a)?)));
                    }
                    Ok(Expr::Add(parts))
                }
            },
            "/" => {
                if args.len() < 2 {
                    return unsupported("`/` arity");
                }
                let mut acc = self.expr(&args[0])?;
                for a in &args[1..] {
                    acc = Expr::Div(Box::new(acc), Box::new(self.expr(a)?));
                }
                Ok(acc)
            }
            "to_real" => {
                if args.len() != 1 {
                    return unsupported("`to_real` arity");
                }
                // Ints embed in the rationals; numerically the identity.
                self.expr(&args[0])
            }
            name => match self.decls.get(name) {
                Some(decl) => {
                    if decl.args.len() != args.len() || decl.ret == Sort::Bool {
                        return unsupported(format!("application of `{name}`"));
                    }
                    let mut values = Vec::new();
                    for a in args {
                        let e = self.expr(a)?;
                        match const_fold(&e) {
                            Some(v) => values.push(v),
                            None => {
                                return unsupported(format!(
                                    "call of `{name}` with non-constant argument"
                                ))
                            }
                        }
                    }
                    Ok(Expr::Var(self.app_var(name, values, decl.ret)))
                }
                None => unsupported(format!("operator `{name}`")),
            },
        }
    }

    fn app_var(&mut self, name: &str, values: Vec<BigRational>, ret: Sort) -> String {
        let key = (name.to_string(), values);
        if let Some(v) = self.app_vars.get(&key) {
            return v.clone();
        }
        let rendered: Vec<String> = key.1.iter().map(|v| v.to_string()).collect();
        let var = format!("@{}({})", name, rendered.join(","));
        self.var_sorts.insert(var.clone(), ret);
        self.app_vars.insert(key, var.clone());
        var
    }
}

/// Chained relation `(<= a b c)` becomes `a <= b /\ b <= c`.
fn chain(rel: Rel, exprs: Vec<Expr>) -> Formula {
    let mut parts = Vec::new();
    for pair in exprs.windows(2) {
        parts.push(Formula::Atom(rel, pair[0].clone(), pair[1].clone()));
    }
    if parts.len() == 1 {
        parts.pop().expect("one element")
    } else {
        Formula::And(parts)
    }
}

fn parse_numeral(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    if body.is_empty() {
        return None;
    }
    let value = if let Some((int_part, frac_part)) = body.split_once('.') {
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || int_part.is_empty()
            || frac_part.is_empty()
        {
            return None;
        }
        let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
        let scale = BigInt::from(10).pow(frac_part.len() as u32);
        BigRational::new(digits, scale)
    } else {
        if !body.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        BigRational::from(body.parse::<BigInt>().ok()?)
    };
    Some(if neg { -value } else { value })
}

/// Negation normal form. Output uses only `And`, `Or`, `True`, `False` and
/// atoms with relations `Eq`, `Le`, `Lt` (disequalities expand into the two
/// strict orders).
pub fn nnf(f: &Formula, negate: bool) -> Formula {
    match f {
        Formula::True => {
            if negate {
                Formula::False
            } else {
                Formula::True
            }
        }
        Formula::False => {
            if negate {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Not(inner) => nnf(inner, !negate),
        Formula::And(items) => {
            let parts = items.iter().map(|i| nnf(i, negate)).collect();
            if negate {
                Formula::Or(parts)
            } else {
                Formula::And(parts)
            }
        }
        Formula::Or(items) => {
            let parts = items.iter().map(|i| nnf(i, negate)).collect();
            if negate {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        Formula::Atom(rel, a, b) => {
            let effective = if negate { complement(*rel) } else { *rel };
            match effective {
                Rel::Eq => Formula::Atom(Rel::Eq, a.clone(), b.clone()),
                Rel::Le => Formula::Atom(Rel::Le, a.clone(), b.clone()),
                Rel::Lt => Formula::Atom(Rel::Lt, a.clone(), b.clone()),
                Rel::Ge => Formula::Atom(Rel::Le, b.clone(), a.clone()),
                Rel::Gt => Formula::Atom(Rel::Lt, b.clone(), a.clone()),
                Rel::Ne => Formula::Or(vec![
                    Formula::Atom(Rel::Lt, a.clone(), b.clone()),
                    Formula::Atom(Rel::Lt, b.clone(), a.clone()),
                ]),
            }
        }
    }
}

fn complement(rel: Rel) -> Rel {
    match rel {
        Rel::Eq => Rel::Ne,
        Rel::Ne => Rel::Eq,
        Rel::Le => Rel::Gt,
        Rel::Lt => Rel::Ge,
        Rel::Ge => Rel::Lt,
        Rel::Gt => Rel::Le,
    }
}

pub type Cube = Vec<(Rel, Expr, Expr)>;

/// Disjunctive normal form of an NNF formula; `None` when the cube count
/// exceeds the cap.
pub fn dnf(f: &Formula, cap: usize) -> Option<Vec<Cube>> {
    match f {
        Formula::True => Some(vec![Vec::new()]),
        Formula::False => Some(Vec::new()),
        Formula::Atom(rel, a, b) => Some(vec![vec![(*rel, a.clone(), b.clone())]]),
        Formula::And(items) => {
            let mut cubes: Vec<Cube> = vec![Vec::new()];
            for item in items {
                let parts = dnf(item, cap)?;
                let mut next = Vec::new();
                for cube in &cubes {
                    for part in &parts {
                        let mut merged = cube.clone();
                        merged.extend(part.iter().cloned());
                        next.push(merged);
                        if next.len() > cap {
                            return None;
                        }
                    }
                }
                cubes = next;
            }
            Some(cubes)
        }
        Formula::Or(items) => {
            let mut cubes = Vec::new();
            for item in items {
                cubes.extend(dnf(item, cap)?);
                if cubes.len() > cap {
                    return None;
                }
            }
            Some(cubes)
        }
        // NNF output never contains Not; refuse rather than mis-handle.
        Formula::Not(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::parse_all;

    fn decls() -> BTreeMap<String, FunDecl> {
        let mut m = BTreeMap::new();
        m.insert("x".to_string(), FunDecl { args: vec![], ret: Sort::Int });
        m.insert("y".to_string(), FunDecl { args: vec![], ret: Sort::Real });
        m.insert(
            "f".to_string(),
            FunDecl { args: vec![Sort::Int], ret: Sort::Int },
        );
        m
    }

    fn convert(src: &str) -> Result<Formula, Unhandled> {
        let d = decls();
        let mut fl = Flattener::new(&d);
        let sexp = parse_all(src).unwrap().remove(0);
        fl.formula(&sexp)
    }

    #[test]
    fn numerals() {
        assert_eq!(parse_numeral("3"), Some(BigRational::from(BigInt::from(3))));
        assert_eq!(
            parse_numeral("2.5"),
            Some(BigRational::new(5.into(), 2.into()))
        );
        assert_eq!(parse_numeral("x1"), None);
        assert_eq!(parse_numeral("-4"), Some(BigRational::from(BigInt::from(-4))));
    }

    #[test]
    fn flattens_ground_applications() {
        let d = decls();
        let mut fl = Flattener::new(&d);
        let sexp = parse_all("(= (f 3) (f (+ 1 2)))").unwrap().remove(0);
        let f = fl.formula(&sexp).unwrap();
        // Both calls fold to f(3), so a single internal variable appears
        // and the atom is trivially reflexive.
        assert_eq!(fl.app_vars.len(), 1);
        match f {
            Formula::Atom(Rel::Eq, Expr::Var(a), Expr::Var(b)) => assert_eq!(a, b),
            other => panic!("unexpected shape: {other:?}"),
        }
    }

    #[test]
    fn non_constant_call_arguments_are_rejected() {
        assert!(matches!(
            convert("(= (f x) 1)"),
            Err(Unhandled::Unsupported(_))
        ));
    }

    #[test]
    fn quantifiers_are_flagged() {
        assert_eq!(
            convert("(forall ((n Int)) (<= n n))"),
            Err(Unhandled::Quantifier)
        );
    }

    #[test]
    fn nnf_pushes_negation_to_atoms() {
        let f = convert("(not (and (<= x 3) (< 1 x)))").unwrap();
        let n = nnf(&f, false);
        // ~(x <= 3 /\ 1 < x) -> (3 < x \/ x <= 1)
        match n {
            Formula::Or(items) => {
                assert_eq!(items.len(), 2);
                assert!(matches!(items[0], Formula::Atom(Rel::Lt, ..)));
                assert!(matches!(items[1], Formula::Atom(Rel::Le, ..)));
            }
            other => panic!("unexpected shape: {other:?}"),
        }
    }

    #[test]
    fn dnf_respects_the_cap() {
        // (a \/ b) /\ (c \/ d) -> 4 cubes.
        let f = convert(
            "(and (or (<= x 1) (<= x 2)) (or (<= x 3) (<= x 4)))",
        )
        .unwrap();
        let cubes = dnf(&nnf(&f, false), 4096).unwrap();
        assert_eq!(cubes.len(), 4);
        assert!(dnf(&nnf(&f, false), 3).is_none());
    }

    #[test]
    fn chained_relations_expand() {
        let f = convert("(<= 1 x 3)").unwrap();
        match f {
            Formula::And(items) => assert_eq!(items.len(), 2),
            other => panic!("unexpected shape: {other:?}"),
        }
    }
}
