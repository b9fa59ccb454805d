//! Deterministic translation of judgments into SMT-LIB 2 scripts.
//!
//! The encoding refutes entailment: assert every premise, every naturals
//! guard, every definition (quantified as-is plus ground instantiations at
//! small literal arguments), then the negated conclusion. `unsat` means the
//! conclusion follows.
//!
//! Identical judgments yield byte-identical scripts: symbol tables iterate
//! in sorted order and the instantiation worklist is seeded from an ordered
//! set, so the rendered text doubles as a cache key.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{BigRational, One, Signed, ToPrimitive, Zero};

use mathstep_core::{desugar_definition, Formula, Judgment, Relation, Sort, Term};
use sha2::{Digest, Sha256};

use crate::error::SmtError;
use crate::sorts::{infer_sorts, SymbolSorts};

/// Largest |k| for which a definition is instantiated at the literal k.
const INSTANTIATION_SPAN: i64 = 32;
/// Cap on total instantiation points per script.
const INSTANTIATION_CAP: usize = 128;
/// Exponents are unrolled into repeated multiplication up to this bound.
const POW_EXPANSION_CAP: i64 = 16;
pub const DEFAULT_TIMEOUT_MS: u64 = 5_000;

#[derive(Clone, Debug)]
pub struct SmtScript {
    pub logic: String,
    pub declarations: Vec<String>,
    pub assertions: Vec<String>,
    pub produce_models: bool,
    pub timeout_ms: u64,
    /// Solver-safe symbol → original SimpleMath symbol, for decoding models.
    pub renames: BTreeMap<String, String>,
}

impl SmtScript {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("(set-logic {})\n", self.logic));
        if self.produce_models {
            out.push_str("(set-option :produce-models true)\n");
        }
        for d in &self.declarations {
            out.push_str(d);
            out.push('\n');
        }
        for a in &self.assertions {
            out.push_str(a);
            out.push('\n');
        }
        out.push_str("(check-sat)\n");
        if self.produce_models {
            out.push_str("(get-model)\n");
        }
        out
    }

    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.render().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Solver-side sorts. SimpleMath ℕ/ℤ map to Int (ℕ with a guard), ℚ/ℝ to
/// Real.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SolverSort {
    Int,
    Real,
}

fn solver_sort(s: Sort) -> SolverSort {
    match s {
        Sort::Nat | Sort::Int => SolverSort::Int,
        Sort::Rat | Sort::Real => SolverSort::Real,
    }
}

fn sort_name(s: SolverSort) -> &'static str {
    match s {
        SolverSort::Int => "Int",
        SolverSort::Real => "Real",
    }
}

/// Reserved words and theory symbols that SimpleMath identifiers must not
/// shadow in the emitted script.
const RESERVED: &[&str] = &[
    "abs", "and", "as", "assert", "check-sat", "declare-const", "declare-fun",
    "distinct", "div", "exists", "exit", "false", "forall", "get-model", "is_int",
    "ite", "let", "mod", "model", "not", "or", "par", "rem", "select", "set-info",
    "set-logic", "set-option", "store", "to_int", "to_real", "true", "xor",
];

fn build_renames(table: &SymbolSorts) -> BTreeMap<String, String> {
    let mut taken: BTreeSet<String> = table
        .vars
        .keys()
        .chain(table.funs.keys())
        .filter(|n| !RESERVED.contains(&n.as_str()))
        .cloned()
        .collect();
    let all_names: BTreeSet<&String> = table.vars.keys().chain(table.funs.keys()).collect();
    let mut renames = BTreeMap::new();
    for name in all_names {
        if !RESERVED.contains(&name.as_str()) {
            continue;
        }
        let mut candidate = format!("sm_{name}");
        while taken.contains(&candidate) {
            candidate.push('_');
        }
        taken.insert(candidate.clone());
        renames.insert(name.clone(), candidate);
    }
    renames
}

/// How numeric literals print: `5` in integer or mixed scripts, `5.0` when
/// every symbol is real-sorted and the script should stay in a pure real
/// logic.
#[derive(Clone, Copy, PartialEq, Eq)]
enum LiteralStyle {
    Int,
    Real,
}

struct Emitter<'a> {
    table: &'a SymbolSorts,
    renames: &'a BTreeMap<String, String>,
    /// Every global solver-side name, for binder collision avoidance.
    taken: BTreeSet<String>,
    literal_style: LiteralStyle,
    saw_quantifier: bool,
    saw_nonlinear: bool,
    saw_real: bool,
    saw_int: bool,
}

/// An emitted term with its solver sort.
struct Emitted {
    text: String,
    sort: SolverSort,
}

type Scope = Vec<(String, String, Sort)>; // original, solver-safe, sort

impl<'a> Emitter<'a> {
    fn new(
        table: &'a SymbolSorts,
        renames: &'a BTreeMap<String, String>,
        literal_style: LiteralStyle,
    ) -> Emitter<'a> {
        let taken = table
            .vars
            .keys()
            .chain(table.funs.keys())
            .map(|n| renames.get(n).unwrap_or(n).clone())
            .collect();
        Emitter {
            table,
            renames,
            taken,
            literal_style,
            saw_quantifier: false,
            saw_nonlinear: false,
            saw_real: false,
            saw_int: false,
        }
    }

    fn safe(&self, name: &str) -> String {
        self.renames.get(name).cloned().unwrap_or_else(|| name.to_string())
    }

    fn literal(&mut self, r: &BigRational) -> Emitted {
        if r.is_integer() {
            match self.literal_style {
                LiteralStyle::Int => {
                    self.saw_int = true;
                    Emitted { text: render_integer(r), sort: SolverSort::Int }
                }
                LiteralStyle::Real => {
                    self.saw_real = true;
                    Emitted { text: render_decimal(r), sort: SolverSort::Real }
                }
            }
        } else {
            self.saw_real = true;
            Emitted { text: render_fraction(r), sort: SolverSort::Real }
        }
    }

    fn zero_like(&self, sort: SolverSort) -> &'static str {
        match sort {
            SolverSort::Int => "0",
            SolverSort::Real => "0.0",
        }
    }

    /// Coerce to Real when needed; Int-from-Real has no sound coercion.
    fn coerce_real(&mut self, e: Emitted) -> Emitted {
        match e.sort {
            SolverSort::Real => e,
            SolverSort::Int => {
                self.saw_real = true;
                Emitted { text: format!("(to_real {})", e.text), sort: SolverSort::Real }
            }
        }
    }

    fn term(&mut self, t: &Term, scope: &mut Scope) -> Result<Emitted, SmtError> {
        match t {
            Term::Rational(r) => Ok(self.literal(r)),
            Term::Var(v) => {
                let (text, sort) = match scope.iter().rev().find(|(orig, _, _)| orig == v) {
                    Some((_, safe, s)) => (safe.clone(), solver_sort(*s)),
                    None => {
                        let s = *self
                            .table
                            .vars
                            .get(v)
                            .expect("sort inference covered every free variable");
                        (self.safe(v), solver_sort(s))
                    }
                };
                self.note_sort(sort);
                Ok(Emitted { text, sort })
            }
            Term::App(name, args) => {
                let sig = self
                    .table
                    .funs
                    .get(name)
                    .expect("sort inference covered every function")
                    .clone();
                let mut parts = vec![self.safe(name)];
                for (arg, declared) in args.iter().zip(&sig.arg_sorts) {
                    let emitted = self.term(arg, scope)?;
                    let want = solver_sort(*declared);
                    let coerced = match (emitted.sort, want) {
                        (SolverSort::Real, SolverSort::Int) => {
                            return Err(SmtError::UnsupportedFeature(format!(
                                "real-valued argument to integer-sorted parameter of `{name}`"
                            )))
                        }
                        (SolverSort::Int, SolverSort::Real) => self.coerce_real(emitted),
                        _ => emitted,
                    };
                    parts.push(coerced.text);
                }
                let sort = solver_sort(sig.result_sort);
                self.note_sort(sort);
                Ok(Emitted { text: format!("({})", parts.join(" ")), sort })
            }
            Term::Neg(a) => {
                let e = self.term(a, scope)?;
                Ok(Emitted { text: format!("(- {})", e.text), sort: e.sort })
            }
            Term::Add(a, b) => self.binary("+", a, b, scope),
            Term::Sub(a, b) => self.binary("-", a, b, scope),
            Term::Mul(a, b) => {
                if !is_constantish(a) && !is_constantish(b) {
                    self.saw_nonlinear = true;
                }
                self.binary("*", a, b, scope)
            }
            Term::Div(a, b) => {
                if !is_constantish(b) {
                    self.saw_nonlinear = true;
                }
                // SimpleMath division is exact rational division, so the
                // result is always real-sorted.
                let ea = self.term(a, scope)?;
                let eb = self.term(b, scope)?;
                let ea = self.coerce_real(ea);
                let eb = self.coerce_real(eb);
                Ok(Emitted {
                    text: format!("(/ {} {})", ea.text, eb.text),
                    sort: SolverSort::Real,
                })
            }
            Term::Pow(base, exponent) => self.pow(base, exponent, scope),
        }
    }

    fn binary(
        &mut self,
        op: &str,
        a: &Term,
        b: &Term,
        scope: &mut Scope,
    ) -> Result<Emitted, SmtError> {
        let ea = self.term(a, scope)?;
        let eb = self.term(b, scope)?;
        let (ea, eb) = self.unify(ea, eb);
        let sort = ea.sort;
        Ok(Emitted { text: format!("({op} {} {})", ea.text, eb.text), sort })
    }

    fn unify(&mut self, a: Emitted, b: Emitted) -> (Emitted, Emitted) {
        if a.sort == b.sort {
            (a, b)
        } else {
            (self.coerce_real(a), self.coerce_real(b))
        }
    }

    fn pow(
        &mut self,
        base: &Term,
        exponent: &Term,
        scope: &mut Scope,
    ) -> Result<Emitted, SmtError> {
        let folded = const_fold_term(exponent).ok_or_else(|| {
            SmtError::UnsupportedFeature(
                "exponent does not reduce to a literal for the solver encoding".into(),
            )
        })?;
        if !folded.is_integer() || folded.is_negative() {
            return Err(SmtError::UnsupportedFeature(format!(
                "exponent {folded} is not a nonnegative integer"
            )));
        }
        let k = folded
            .to_integer()
            .to_i64()
            .filter(|k| *k <= POW_EXPANSION_CAP)
            .ok_or_else(|| {
                SmtError::UnsupportedFeature(format!(
                    "exponent {folded} exceeds the unrolling bound {POW_EXPANSION_CAP}"
                ))
            })?;
        if k == 0 {
            return Ok(self.literal(&BigRational::one()));
        }
        let e = self.term(base, scope)?;
        if k == 1 {
            return Ok(e);
        }
        if !is_constantish(base) {
            self.saw_nonlinear = true;
        }
        let mut parts = vec!["(*".to_string()];
        for _ in 0..k {
            parts.push(e.text.clone());
        }
        Ok(Emitted { text: format!("{})", parts.join(" ")), sort: e.sort })
    }

    fn formula(&mut self, f: &Formula, scope: &mut Scope) -> Result<String, SmtError> {
        match f {
            Formula::Atom(rel, lhs, rhs) => {
                let ea = self.term(lhs, scope)?;
                let eb = self.term(rhs, scope)?;
                let (ea, eb) = self.unify(ea, eb);
                Ok(match rel {
                    Relation::Eq => format!("(= {} {})", ea.text, eb.text),
                    Relation::Ne => format!("(not (= {} {}))", ea.text, eb.text),
                    Relation::Lt => format!("(< {} {})", ea.text, eb.text),
                    Relation::Le => format!("(<= {} {})", ea.text, eb.text),
                    Relation::Gt => format!("(> {} {})", ea.text, eb.text),
                    Relation::Ge => format!("(>= {} {})", ea.text, eb.text),
                })
            }
            Formula::Member(t, target) => {
                let e = self.term(t, scope)?;
                match (e.sort, target) {
                    (SolverSort::Int, Sort::Nat) => {
                        Ok(format!("(>= {} {})", e.text, self.zero_like(SolverSort::Int)))
                    }
                    (SolverSort::Int, _) => Ok("true".to_string()),
                    (SolverSort::Real, Sort::Real) => Ok("true".to_string()),
                    (SolverSort::Real, Sort::Rat) => Err(SmtError::UnsupportedFeature(
                        "rationality of a real-sorted term is not expressible".into(),
                    )),
                    (SolverSort::Real, _) => Err(SmtError::UnsupportedFeature(
                        "integrality of a real-sorted term is not expressible".into(),
                    )),
                }
            }
            Formula::Not(inner) => Ok(format!("(not {})", self.formula(inner, scope)?)),
            Formula::And(a, b) => Ok(format!(
                "(and {} {})",
                self.formula(a, scope)?,
                self.formula(b, scope)?
            )),
            Formula::Or(a, b) => Ok(format!(
                "(or {} {})",
                self.formula(a, scope)?,
                self.formula(b, scope)?
            )),
            Formula::Implies(a, b) => Ok(format!(
                "(=> {} {})",
                self.formula(a, scope)?,
                self.formula(b, scope)?
            )),
            Formula::Forall(v, s, body) => self.quantifier(true, v, *s, body, scope),
            Formula::Exists(v, s, body) => self.quantifier(false, v, *s, body, scope),
        }
    }

    fn quantifier(
        &mut self,
        universal: bool,
        var: &str,
        sort: Sort,
        body: &Formula,
        scope: &mut Scope,
    ) -> Result<String, SmtError> {
        if sort == Sort::Rat {
            // Quantifying over ℚ as Real strengthens premises unsoundly in
            // nonlinear settings; refuse rather than risk a wrong Valid.
            return Err(SmtError::UnsupportedFeature(
                "quantification over QQ is not expressible".into(),
            ));
        }
        self.saw_quantifier = true;
        let mut safe = if RESERVED.contains(&var) {
            format!("sm_{var}")
        } else {
            var.to_string()
        };
        while self.taken.contains(&safe) && scope.iter().all(|(orig, _, _)| orig != var)
            || scope.iter().any(|(_, s, _)| *s == safe)
        {
            safe.push('_');
        }
        let ssort = solver_sort(sort);
        self.note_sort(ssort);
        scope.push((var.to_string(), safe.clone(), sort));
        let inner = self.formula(body, scope);
        scope.pop();
        let inner = inner?;
        let head = if universal { "forall" } else { "exists" };
        let binder = format!("(({safe} {}))", sort_name(ssort));
        Ok(if sort == Sort::Nat {
            let guard = format!("(>= {safe} 0)");
            if universal {
                format!("({head} {binder} (=> {guard} {inner}))")
            } else {
                format!("({head} {binder} (and {guard} {inner}))")
            }
        } else {
            format!("({head} {binder} {inner})")
        })
    }

    fn note_sort(&mut self, sort: SolverSort) {
        match sort {
            SolverSort::Int => self.saw_int = true,
            SolverSort::Real => self.saw_real = true,
        }
    }
}

fn render_integer(r: &BigRational) -> String {
    let n = r.to_integer();
    if n.is_negative() {
        format!("(- {})", -n)
    } else {
        n.to_string()
    }
}

fn render_decimal(r: &BigRational) -> String {
    let n = r.to_integer();
    if n.is_negative() {
        format!("(- {}.0)", -n)
    } else {
        format!("{n}.0")
    }
}

fn render_fraction(r: &BigRational) -> String {
    let core = format!("(/ {}.0 {}.0)", r.numer().abs(), r.denom());
    if r.is_negative() {
        format!("(- {core})")
    } else {
        core
    }
}

/// True when the term contains no variables or applications — its value is
/// fixed, so multiplying by it keeps a formula linear.
fn is_constantish(t: &Term) -> bool {
    match t {
        Term::Rational(_) => true,
        Term::Var(_) | Term::App(..) => false,
        Term::Neg(a) => is_constantish(a),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) | Term::Div(a, b)
        | Term::Pow(a, b) => is_constantish(a) && is_constantish(b),
    }
}

fn const_fold_term(t: &Term) -> Option<BigRational> {
    match t {
        Term::Rational(r) => Some(r.clone()),
        Term::Var(_) | Term::App(..) => None,
        Term::Neg(a) => Some(-const_fold_term(a)?),
        Term::Add(a, b) => Some(const_fold_term(a)? + const_fold_term(b)?),
        Term::Sub(a, b) => Some(const_fold_term(a)? - const_fold_term(b)?),
        Term::Mul(a, b) => Some(const_fold_term(a)? * const_fold_term(b)?),
        Term::Div(a, b) => {
            let d = const_fold_term(b)?;
            if d.is_zero() {
                return None;
            }
            Some(const_fold_term(a)? / d)
        }
        Term::Pow(a, b) => {
            let base = const_fold_term(a)?;
            let exp = const_fold_term(b)?;
            if !exp.is_integer() || exp.is_negative() {
                return None;
            }
            let k = exp.to_integer().to_i64().filter(|k| *k <= 64)?;
            let mut acc = BigRational::one();
            for _ in 0..k {
                acc *= &base;
            }
            Some(acc)
        }
    }
}

/// Translate a judgment into a complete refutation script.
pub fn to_smtlib(judgment: &Judgment) -> Result<SmtScript, SmtError> {
    let table = infer_sorts(judgment)?;
    let renames = build_renames(&table);
    let desugared: Vec<Formula> = judgment
        .definitions
        .iter()
        .map(|(_, d)| desugar_definition(d))
        .collect();

    // Literal style: plain integers unless the symbol table is purely
    // real-sorted, in which case decimals keep the script in a real logic.
    let any_int_symbol = table
        .vars
        .values()
        .any(|s| solver_sort(*s) == SolverSort::Int)
        || table.funs.values().any(|sig| {
            solver_sort(sig.result_sort) == SolverSort::Int
                || sig.arg_sorts.iter().any(|s| solver_sort(*s) == SolverSort::Int)
        });
    let any_real_symbol = table
        .vars
        .values()
        .any(|s| solver_sort(*s) == SolverSort::Real)
        || table.funs.values().any(|sig| {
            solver_sort(sig.result_sort) == SolverSort::Real
                || sig.arg_sorts.iter().any(|s| solver_sort(*s) == SolverSort::Real)
        });
    let literal_style = if any_real_symbol && !any_int_symbol {
        LiteralStyle::Real
    } else {
        LiteralStyle::Int
    };

    let mut emitter = Emitter::new(&table, &renames, literal_style);
    let mut scope = Scope::new();
    let mut assertions = Vec::new();

    // ℕ-sorted free variables carry a nonnegativity guard.
    for (var, sort) in &table.vars {
        if *sort == Sort::Nat {
            let safe = emitter.safe(var);
            assertions.push(format!("(assert (>= {safe} 0))"));
        }
    }

    for premise in &judgment.premise_formulas {
        let text = emitter.formula(premise, &mut scope)?;
        assertions.push(format!("(assert {text})"));
    }

    for formula in &desugared {
        let text = emitter.formula(formula, &mut scope)?;
        assertions.push(format!("(assert {text})"));
    }

    // Naturals-valued functions are nonnegative on their domain; stating it
    // helps ℕ-flavoured conclusions that the raw recurrence hides.
    for (_, def) in &judgment.definitions {
        if def.result_sort != Sort::Nat || def.params.is_empty() {
            continue;
        }
        let app = Term::App(
            def.name.clone(),
            def.params.iter().map(|p| Term::Var(p.clone())).collect(),
        );
        let mut axiom: Formula = Formula::Implies(
            Box::new(membership_conjunction(&def.params, &def.arg_sorts)),
            Box::new(Formula::Member(app, Sort::Nat)),
        );
        for (p, s) in def.params.iter().zip(&def.arg_sorts).rev() {
            axiom = Formula::Forall(p.clone(), *s, Box::new(axiom));
        }
        let text = emitter.formula(&axiom, &mut scope)?;
        assertions.push(format!("(assert {text})"));
    }

    for inst in instantiations(judgment, &desugared) {
        match inst {
            Simp::Formula(f) => {
                let text = emitter.formula(&f, &mut scope)?;
                assertions.push(format!("(assert {text})"));
            }
            // A definition contradicting itself at a point makes the premise
            // set inconsistent; saying so keeps the encoding faithful.
            Simp::False => assertions.push("(assert false)".to_string()),
            Simp::True => {}
        }
    }

    let conclusion = emitter.formula(&judgment.conclusion_formula, &mut scope)?;
    assertions.push(format!("(assert (not {conclusion}))"));

    let mut declarations = Vec::new();
    for (var, sort) in &table.vars {
        declarations.push(format!(
            "(declare-fun {} () {})",
            emitter.safe(var),
            sort_name(solver_sort(*sort))
        ));
    }
    for (name, sig) in &table.funs {
        let args: Vec<&str> = sig.arg_sorts.iter().map(|s| sort_name(solver_sort(*s))).collect();
        declarations.push(format!(
            "(declare-fun {} ({}) {})",
            emitter.safe(name),
            args.join(" "),
            sort_name(solver_sort(sig.result_sort))
        ));
    }

    let logic = choose_logic(&emitter, &table);
    let inverse_renames = renames.iter().map(|(orig, safe)| (safe.clone(), orig.clone())).collect();
    Ok(SmtScript {
        logic,
        declarations,
        assertions,
        produce_models: true,
        timeout_ms: DEFAULT_TIMEOUT_MS,
        renames: inverse_renames,
    })
}

fn membership_conjunction(params: &[String], sorts: &[Sort]) -> Formula {
    let mut memberships: Vec<Formula> = params
        .iter()
        .zip(sorts)
        .map(|(p, s)| Formula::Member(Term::Var(p.clone()), *s))
        .collect();
    let mut acc = memberships.pop().expect("at least one parameter");
    while let Some(m) = memberships.pop() {
        acc = Formula::And(Box::new(m), Box::new(acc));
    }
    acc
}

fn choose_logic(emitter: &Emitter<'_>, table: &SymbolSorts) -> String {
    let qf = if emitter.saw_quantifier { "" } else { "QF_" };
    let uf = if table.funs.is_empty() { "" } else { "UF" };
    let lin = if emitter.saw_nonlinear { "N" } else { "L" };
    let domain = match (emitter.saw_int, emitter.saw_real) {
        (true, true) => "IRA",
        (false, true) => "RA",
        // Default to integers for symbol-free scripts.
        _ => "IA",
    };
    let composed = format!("{qf}{uf}{lin}{domain}");
    const KNOWN: &[&str] = &[
        "QF_LIA", "QF_LRA", "QF_LIRA", "QF_NIA", "QF_NRA", "QF_NIRA", "QF_UFLIA",
        "QF_UFLRA", "QF_UFNIA", "QF_UFNRA", "LIA", "LRA", "NIA", "NRA", "UFLIA",
        "UFLRA", "UFNIA", "UFNRA",
    ];
    if KNOWN.contains(&composed.as_str()) {
        composed
    } else {
        // Exotic combinations (e.g. quantified mixed arithmetic) fall back
        // to the permissive catch-all logic.
        "ALL".to_string()
    }
}

/// A formula partially evaluated over its constant subterms.
enum Simp {
    True,
    False,
    Formula(Formula),
}

/// Fold atoms whose sides are constant into truth values and collapse the
/// surrounding connectives. Instantiated definitions are full of decided
/// guards (`4 >= 3`, `4 = 2`, ...); without this pass every dead branch
/// survives into the solver's case analysis.
fn simplify_ground(f: &Formula) -> Simp {
    match f {
        Formula::Atom(rel, lhs, rhs) => {
            match (const_fold_term(lhs), const_fold_term(rhs)) {
                (Some(l), Some(r)) => {
                    if rel.holds(&l, &r) {
                        Simp::True
                    } else {
                        Simp::False
                    }
                }
                _ => Simp::Formula(f.clone()),
            }
        }
        Formula::Member(t, sort) => match const_fold_term(t) {
            Some(v) => {
                if mathstep_cas::sort_admits(*sort, &v) {
                    Simp::True
                } else {
                    Simp::False
                }
            }
            None => Simp::Formula(f.clone()),
        },
        Formula::Not(inner) => match simplify_ground(inner) {
            Simp::True => Simp::False,
            Simp::False => Simp::True,
            Simp::Formula(g) => Simp::Formula(Formula::Not(Box::new(g))),
        },
        Formula::And(a, b) => match (simplify_ground(a), simplify_ground(b)) {
            (Simp::False, _) | (_, Simp::False) => Simp::False,
            (Simp::True, other) | (other, Simp::True) => other,
            (Simp::Formula(x), Simp::Formula(y)) => Simp::Formula(Formula::and(x, y)),
        },
        Formula::Or(a, b) => match (simplify_ground(a), simplify_ground(b)) {
            (Simp::True, _) | (_, Simp::True) => Simp::True,
            (Simp::False, other) | (other, Simp::False) => other,
            (Simp::Formula(x), Simp::Formula(y)) => Simp::Formula(Formula::or(x, y)),
        },
        Formula::Implies(a, b) => match (simplify_ground(a), simplify_ground(b)) {
            (Simp::False, _) | (_, Simp::True) => Simp::True,
            (Simp::True, other) => other,
            (Simp::Formula(x), Simp::False) => Simp::Formula(Formula::Not(Box::new(x))),
            (Simp::Formula(x), Simp::Formula(y)) => Simp::Formula(Formula::implies(x, y)),
        },
        Formula::Forall(..) | Formula::Exists(..) => Simp::Formula(f.clone()),
    }
}

/// Ground instantiation points: defined functions applied to literal
/// arguments with |k| ≤ 32, transitively through the definition bodies, at
/// most [`INSTANTIATION_CAP`] points in total. Each returned instantiation
/// is ground-simplified, so only its live branches reach the solver.
fn instantiations(judgment: &Judgment, desugared: &[Formula]) -> Vec<Simp> {
    let defined: BTreeMap<&str, (&Formula, usize)> = judgment
        .definitions
        .iter()
        .zip(desugared)
        .map(|((_, d), f)| (d.name.as_str(), (f, d.params.len())))
        .collect();
    if defined.is_empty() {
        return Vec::new();
    }

    let span = BigRational::from_integer(INSTANTIATION_SPAN.into());
    let mut seeds: BTreeSet<(String, Vec<BigRational>)> = BTreeSet::new();
    for formula in judgment
        .premise_formulas
        .iter()
        .chain(std::iter::once(&judgment.conclusion_formula))
    {
        collect_points(formula, &defined, &span, &mut seeds);
    }

    let mut queue: VecDeque<(String, Vec<BigRational>)> = seeds.into_iter().collect();
    let mut seen: BTreeSet<(String, Vec<BigRational>)> = BTreeSet::new();
    let mut out = Vec::new();
    while let Some(point) = queue.pop_front() {
        if seen.len() >= INSTANTIATION_CAP {
            break;
        }
        if !seen.insert(point.clone()) {
            continue;
        }
        let (name, args) = point;
        let Some((formula, arity)) = defined.get(name.as_str()) else { continue };
        if args.len() != *arity {
            continue;
        }
        let instantiated = simplify_ground(&instantiate(formula, &args));
        if let Simp::Formula(f) = &instantiated {
            let mut found = BTreeSet::new();
            collect_points(f, &defined, &span, &mut found);
            for p in found {
                if !seen.contains(&p) {
                    queue.push_back(p);
                }
            }
        }
        out.push(instantiated);
    }
    out
}

/// Substitute literal arguments into a desugared definition formula by
/// stripping its binders.
fn instantiate(desugared: &Formula, args: &[BigRational]) -> Formula {
    let mut binders = Vec::new();
    let mut body = desugared;
    while let Formula::Forall(v, _, inner) = body {
        binders.push(v.clone());
        body = inner;
    }
    let mut result = body.clone();
    for (binder, value) in binders.iter().zip(args) {
        result = result
            .substitute(binder, &Term::Rational(value.clone()))
            .expect("substituting a literal cannot capture");
    }
    result
}

fn collect_points(
    f: &Formula,
    defined: &BTreeMap<&str, (&Formula, usize)>,
    span: &BigRational,
    out: &mut BTreeSet<(String, Vec<BigRational>)>,
) {
    match f {
        Formula::Atom(_, a, b) => {
            collect_points_term(a, defined, span, out);
            collect_points_term(b, defined, span, out);
        }
        Formula::Member(t, _) => collect_points_term(t, defined, span, out),
        Formula::Not(inner) => collect_points(inner, defined, span, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_points(a, defined, span, out);
            collect_points(b, defined, span, out);
        }
        Formula::Forall(_, _, body) | Formula::Exists(_, _, body) => {
            collect_points(body, defined, span, out)
        }
    }
}

fn collect_points_term(
    t: &Term,
    defined: &BTreeMap<&str, (&Formula, usize)>,
    span: &BigRational,
    out: &mut BTreeSet<(String, Vec<BigRational>)>,
) {
    match t {
        Term::Rational(_) | Term::Var(_) => {}
        Term::App(name, args) => {
            for arg in args {
                collect_points_term(arg, defined, span, out);
            }
            if defined.contains_key(name.as_str()) {
                let folded: Option<Vec<BigRational>> =
                    args.iter().map(const_fold_term).collect();
                if let Some(values) = folded {
                    if values.iter().all(|v| v.abs() <= *span) {
                        out.insert((name.clone(), values));
                    }
                }
            }
        }
        Term::Neg(a) => collect_points_term(a, defined, span, out),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) | Term::Div(a, b)
        | Term::Pow(a, b) => {
            collect_points_term(a, defined, span, out);
            collect_points_term(b, defined, span, out);
        }
    }
}
