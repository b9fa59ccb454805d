//! Exact evaluation of terms and quantifier-free formulas over the
//! rationals, including unfolding of guarded function definitions.

use std::collections::BTreeMap;

use num::{BigRational, Signed, Zero};

use mathstep_core::{print_term, Definition, Formula, Sort, Term};

use crate::error::EvalError;

pub type Env = BTreeMap<String, BigRational>;

/// Evaluate a term with no function definitions in scope.
pub fn eval_term(term: &Term, env: &Env) -> Result<BigRational, EvalError> {
    Evaluator::new([]).eval(term, env)
}

/// Evaluate a closed term with no definitions and no bindings.
pub fn eval_closed(term: &Term) -> Result<BigRational, EvalError> {
    eval_term(term, &Env::new())
}

pub fn sort_admits(sort: Sort, value: &BigRational) -> bool {
    match sort {
        Sort::Nat => value.is_integer() && !value.is_negative(),
        Sort::Int => value.is_integer(),
        Sort::Rat | Sort::Real => true,
    }
}

/// Evaluator carrying function definitions, a memo table for calls, and a
/// fuel budget bounding the number of distinct unfoldings.
pub struct Evaluator {
    defs: BTreeMap<String, Definition>,
    fuel: u64,
    memo: BTreeMap<(String, Vec<BigRational>), BigRational>,
}

const DEFAULT_FUEL: u64 = 10_000;

impl Evaluator {
    pub fn new(defs: impl IntoIterator<Item = Definition>) -> Evaluator {
        Evaluator {
            defs: defs.into_iter().map(|d| (d.name.clone(), d)).collect(),
            fuel: DEFAULT_FUEL,
            memo: BTreeMap::new(),
        }
    }

    pub fn with_fuel(mut self, fuel: u64) -> Evaluator {
        self.fuel = fuel;
        self
    }

    /// Top the fuel back up (the memo table is kept, so previously computed
    /// calls stay free).
    pub fn set_fuel(&mut self, fuel: u64) {
        self.fuel = fuel;
    }

    pub fn eval(&mut self, term: &Term, env: &Env) -> Result<BigRational, EvalError> {
        match term {
            Term::Rational(r) => Ok(r.clone()),
            Term::Var(v) => env
                .get(v)
                .cloned()
                .ok_or_else(|| EvalError::UnboundVariable(v.clone())),
            Term::App(name, args) => {
                let values = args
                    .iter()
                    .map(|a| self.eval(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                self.call(name, values)
            }
            Term::Neg(a) => Ok(-self.eval(a, env)?),
            Term::Add(a, b) => Ok(self.eval(a, env)? + self.eval(b, env)?),
            Term::Sub(a, b) => Ok(self.eval(a, env)? - self.eval(b, env)?),
            Term::Mul(a, b) => Ok(self.eval(a, env)? * self.eval(b, env)?),
            Term::Div(a, b) => {
                let d = self.eval(b, env)?;
                if d.is_zero() {
                    return Err(EvalError::DivisionByZero(print_term(term)));
                }
                Ok(self.eval(a, env)? / d)
            }
            Term::Pow(a, e) => {
                let base = self.eval(a, env)?;
                let exp = self.eval(e, env)?;
                if !exp.is_integer() {
                    return Err(EvalError::NonIntegerExponent(print_term(term)));
                }
                let k: i64 = exp
                    .numer()
                    .try_into()
                    .map_err(|_| EvalError::Unsupported(format!("exponent in {}", print_term(term))))?;
                if !(0..=64).contains(&k) {
                    return Err(EvalError::Unsupported(format!(
                        "exponent {k} out of range in {}",
                        print_term(term)
                    )));
                }
                Ok(num::pow::pow(base, k as usize))
            }
        }
    }

    /// Truth of a quantifier-free formula. Connectives short-circuit, so a
    /// guard like `n >= 1 /\ p(n) = 0` never evaluates `p` outside its domain
    /// when the first conjunct already fails.
    pub fn eval_formula(&mut self, formula: &Formula, env: &Env) -> Result<bool, EvalError> {
        match formula {
            Formula::Atom(rel, lhs, rhs) => {
                Ok(rel.holds(&self.eval(lhs, env)?, &self.eval(rhs, env)?))
            }
            Formula::Member(t, sort) => Ok(sort_admits(*sort, &self.eval(t, env)?)),
            Formula::Not(f) => Ok(!self.eval_formula(f, env)?),
            Formula::And(a, b) => {
                Ok(self.eval_formula(a, env)? && self.eval_formula(b, env)?)
            }
            Formula::Or(a, b) => {
                Ok(self.eval_formula(a, env)? || self.eval_formula(b, env)?)
            }
            Formula::Implies(a, b) => {
                Ok(!self.eval_formula(a, env)? || self.eval_formula(b, env)?)
            }
            Formula::Forall(..) | Formula::Exists(..) => {
                Err(EvalError::Unsupported("quantified formula".to_string()))
            }
        }
    }

    fn call(&mut self, name: &str, args: Vec<BigRational>) -> Result<BigRational, EvalError> {
        let key = (name.to_string(), args.clone());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        if self.fuel == 0 {
            return Err(EvalError::FuelExhausted);
        }
        self.fuel -= 1;
        let def = self
            .defs
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::UndefinedFunction(name.to_string()))?;
        let no_branch = || EvalError::NoBranchApplies {
            function: name.to_string(),
            args: args
                .iter()
                .map(mathstep_core::format_rational)
                .collect::<Vec<_>>()
                .join(", "),
        };
        if def.params.len() != args.len() {
            return Err(no_branch());
        }
        // Outside the declared argument sorts the definition says nothing.
        for (sort, value) in def.arg_sorts.iter().zip(&args) {
            if !sort_admits(*sort, value) {
                return Err(no_branch());
            }
        }
        let env: Env = def.params.iter().cloned().zip(args.iter().cloned()).collect();
        for branch in &def.branches {
            let applies = match &branch.guard {
                None => true,
                Some(guard) => self.eval_formula(guard, &env)?,
            };
            if applies {
                let value = self.eval(&branch.body, &env)?;
                self.memo.insert(key, value.clone());
                return Ok(value);
            }
        }
        Err(no_branch())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mathstep_core::{parse_definition, parse_formula, parse_term};

    fn rat(n: i64) -> BigRational {
        BigRational::from(num::BigInt::from(n))
    }

    fn fib() -> Definition {
        parse_definition(
            "definition(f): NN -> NN f(n) := f(n-1) + f(n-2), if n >= 3; | 1, if n = 2; | 1, if n = 1",
        )
        .unwrap()
    }

    #[test]
    fn plain_arithmetic() {
        let t = parse_term("(1/2 + 1/3) * 6").unwrap();
        assert_eq!(eval_closed(&t).unwrap(), rat(5));
    }

    #[test]
    fn division_by_zero_reports_the_term() {
        let t = parse_term("1 / (2 - 2)").unwrap();
        match eval_closed(&t) {
            Err(EvalError::DivisionByZero(s)) => assert_eq!(s, "1 / (2 - 2)"),
            other => panic!("expected division error, got {other:?}"),
        }
    }

    #[test]
    fn recursive_definition_unfolds() {
        let mut ev = Evaluator::new([fib()]);
        let t = parse_term("f(10)").unwrap();
        assert_eq!(ev.eval(&t, &Env::new()).unwrap(), rat(55));
        // Memoization makes a second deep call cheap.
        let t = parse_term("f(30)").unwrap();
        assert_eq!(ev.eval(&t, &Env::new()).unwrap(), rat(832_040));
    }

    #[test]
    fn out_of_domain_call_hits_no_branch() {
        let mut ev = Evaluator::new([fib()]);
        let t = parse_term("f(0)").unwrap();
        assert!(matches!(
            ev.eval(&t, &Env::new()),
            Err(EvalError::NoBranchApplies { .. })
        ));
        // Negative argument violates the NN sort, same outcome.
        let t = parse_term("f(0 - 5)").unwrap();
        assert!(matches!(
            ev.eval(&t, &Env::new()),
            Err(EvalError::NoBranchApplies { .. })
        ));
    }

    #[test]
    fn fuel_bounds_unfolding() {
        let looping =
            parse_definition("definition(g): ZZ -> ZZ g(n) := g(n + 1)").unwrap();
        let mut ev = Evaluator::new([looping]).with_fuel(50);
        let t = parse_term("g(0)").unwrap();
        assert_eq!(ev.eval(&t, &Env::new()), Err(EvalError::FuelExhausted));
    }

    #[test]
    fn formula_evaluation_with_bindings() {
        let mut ev = Evaluator::new([fib()]);
        let f = parse_formula("f(n) > 4 /\\ n in NN").unwrap();
        let env: Env = [("n".to_string(), rat(5))].into();
        assert!(ev.eval_formula(&f, &env).unwrap());
        let env: Env = [("n".to_string(), rat(4))].into();
        assert!(!ev.eval_formula(&f, &env).unwrap());
    }

    #[test]
    fn guards_dispatch_in_order() {
        // Overlapping guards: first match wins.
        let d = parse_definition(
            "definition(h): ZZ -> ZZ h(n) := 1, if n >= 0; | 2, if n >= 0 \\/ n < 0",
        )
        .unwrap();
        let mut ev = Evaluator::new([d]);
        assert_eq!(ev.eval(&parse_term("h(3)").unwrap(), &Env::new()).unwrap(), rat(1));
        assert_eq!(ev.eval(&parse_term("h(0 - 3)").unwrap(), &Env::new()).unwrap(), rat(2));
    }
}
