//! Symbolic differentiation of the algebraic term fragment.
//!
//! Smart constructors fold out the `0` and `1` noise the textbook rules
//! produce, so results stay close to what a person would write.

use num::{BigRational, One, Signed, Zero};

use mathstep_core::{print_term, Term};

use crate::error::CasError;

pub fn differentiate(term: &Term, var: &str) -> Result<Term, CasError> {
    if !term.free_vars().contains(var) {
        // Constant with respect to `var`, even if it mentions opaque calls.
        return Ok(Term::int(0));
    }
    match term {
        Term::Rational(_) => Ok(Term::int(0)),
        Term::Var(_) => Ok(Term::int(1)),
        Term::App(name, _) => Err(CasError::UnsupportedTerm(format!(
            "cannot differentiate a call of `{name}`"
        ))),
        Term::Neg(a) => Ok(neg(differentiate(a, var)?)),
        Term::Add(a, b) => Ok(add(differentiate(a, var)?, differentiate(b, var)?)),
        Term::Sub(a, b) => Ok(sub(differentiate(a, var)?, differentiate(b, var)?)),
        Term::Mul(a, b) => {
            let da = differentiate(a, var)?;
            let db = differentiate(b, var)?;
            Ok(add(mul(da, (**b).clone()), mul((**a).clone(), db)))
        }
        Term::Div(a, b) => {
            let da = differentiate(a, var)?;
            let db = differentiate(b, var)?;
            let num = sub(mul(da, (**b).clone()), mul((**a).clone(), db));
            Ok(Term::Div(
                Box::new(num),
                Box::new(Term::Pow(b.clone(), Box::new(Term::int(2)))),
            ))
        }
        Term::Pow(base, exp) => {
            let k = match exp.as_ref() {
                Term::Rational(r) if r.is_integer() && !r.is_negative() => r.clone(),
                other => {
                    return Err(CasError::UnsupportedTerm(format!(
                        "cannot differentiate exponent {}",
                        print_term(other)
                    )))
                }
            };
            if k.is_zero() {
                return Ok(Term::int(0));
            }
            let lowered = &k - BigRational::one();
            let power = pow((**base).clone(), lowered);
            let outer = mul(Term::Rational(k), power);
            Ok(mul(outer, differentiate(base, var)?))
        }
    }
}

fn is_zero(t: &Term) -> bool {
    matches!(t, Term::Rational(r) if r.is_zero())
}

fn is_one(t: &Term) -> bool {
    matches!(t, Term::Rational(r) if r.is_one())
}

fn neg(t: Term) -> Term {
    if is_zero(&t) {
        t
    } else {
        Term::Neg(Box::new(t))
    }
}

fn add(a: Term, b: Term) -> Term {
    if is_zero(&a) {
        b
    } else if is_zero(&b) {
        a
    } else {
        Term::Add(Box::new(a), Box::new(b))
    }
}

fn sub(a: Term, b: Term) -> Term {
    if is_zero(&b) {
        a
    } else if is_zero(&a) {
        neg(b)
    } else {
        Term::Sub(Box::new(a), Box::new(b))
    }
}

fn mul(a: Term, b: Term) -> Term {
    if is_zero(&a) || is_zero(&b) {
        Term::int(0)
    } else if is_one(&a) {
        b
    } else if is_one(&b) {
        a
    } else {
        Term::Mul(Box::new(a), Box::new(b))
    }
}

fn pow(base: Term, exp: BigRational) -> Term {
    if exp.is_zero() {
        Term::int(1)
    } else if exp.is_one() {
        base
    } else {
        Term::Pow(Box::new(base), Box::new(Term::Rational(exp)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::{check_equiv, EquivOptions, Equivalence};
    use mathstep_core::parse_term;

    fn d(src: &str) -> Term {
        differentiate(&parse_term(src).unwrap(), "x").unwrap()
    }

    fn assert_same(got: &Term, expected: &str) {
        let expected = parse_term(expected).unwrap();
        assert!(
            matches!(
                check_equiv(got, &expected, &[], &EquivOptions::default()),
                Equivalence::Equal { .. }
            ),
            "derivative {} differs from {}",
            print_term(got),
            print_term(&expected),
        );
    }

    #[test]
    fn power_rule_reads_naturally() {
        assert_eq!(print_term(&d("x^3")), "3 * x^2");
        assert_eq!(print_term(&d("x")), "1");
        assert_eq!(print_term(&d("7")), "0");
    }

    #[test]
    fn composite_power() {
        assert_eq!(print_term(&d("(x + 1)^2")), "2 * (x + 1)");
        assert_same(&d("(2*x - 1)^3"), "6 * (2*x - 1)^2");
    }

    #[test]
    fn product_and_quotient_rules() {
        assert_same(&d("x * (x + 2)"), "2*x + 2");
        assert_same(&d("1 / x"), "0 - 1/x^2");
        assert_same(&d("(x^2 + 1) / x"), "1 - 1/x^2");
    }

    #[test]
    fn other_variables_are_constants() {
        assert_eq!(print_term(&d("y^2 + x")), "1");
        assert_eq!(print_term(&d("y * x")), "y");
        // Opaque calls not involving x differentiate to zero...
        assert_eq!(print_term(&d("g(y) + x")), "1");
        // ...but calls touching x are refused.
        assert!(differentiate(&parse_term("g(x)").unwrap(), "x").is_err());
    }

    #[test]
    fn polynomial_sum() {
        assert_same(&d("x^4 - 3*x^2 + 2*x - 9"), "4*x^3 - 6*x + 2");
    }
}
