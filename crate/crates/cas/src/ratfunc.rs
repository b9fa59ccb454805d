//! Rational-function normal forms: a reduced fraction of two polynomials
//! with a monic denominator. Two terms denote the same rational function iff
//! their normal forms are structurally equal (over the atoms both mention).

use num::{BigRational, One, Signed};

use mathstep_core::{print_term, Term};

use crate::error::CasError;
use crate::gcd::gcd;
use crate::poly::Polynomial;

/// Largest literal exponent we expand; beyond this the term is rejected
/// rather than risking enormous intermediate polynomials.
pub const MAX_EXPONENT: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: Polynomial,
    den: Polynomial,
}

impl RatFunc {
    pub fn from_polynomial(p: Polynomial) -> RatFunc {
        RatFunc { num: p, den: Polynomial::one() }
    }

    pub fn constant(value: BigRational) -> RatFunc {
        RatFunc::from_polynomial(Polynomial::constant(value))
    }

    pub fn atom(name: impl Into<String>) -> RatFunc {
        RatFunc::from_polynomial(Polynomial::atom(name))
    }

    /// Reduce to lowest terms and make the denominator monic.
    fn reduced(num: Polynomial, den: Polynomial) -> Result<RatFunc, CasError> {
        if den.is_zero() {
            return Err(CasError::DivisionByZero(print_term(&num.to_term())));
        }
        if num.is_zero() {
            return Ok(RatFunc { num, den: Polynomial::one() });
        }
        let g = gcd(&num, &den);
        let num = num.try_div_exact(&g).expect("gcd divides");
        let den = den.try_div_exact(&g).expect("gcd divides");
        // Monic denominator fixes the unit ambiguity of the reduction.
        let inv = BigRational::one() / den.leading_coeff().expect("nonzero denominator");
        Ok(RatFunc { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den == Polynomial::one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> Result<RatFunc, CasError> {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatFunc::reduced(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &RatFunc) -> Result<RatFunc, CasError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFunc) -> Result<RatFunc, CasError> {
        RatFunc::reduced(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, CasError> {
        if other.is_zero() {
            return Err(CasError::DivisionByZero(print_term(&self.to_term())));
        }
        RatFunc::reduced(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, exp: u32) -> Result<RatFunc, CasError> {
        if exp > MAX_EXPONENT {
            return Err(CasError::UnsupportedTerm(format!("exponent {exp} too large")));
        }
        RatFunc::reduced(self.num.pow(exp), self.den.pow(exp))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den == Polynomial::one()
    }

    pub fn has_opaque_atoms(&self) -> bool {
        self.num.has_opaque_atoms() || self.den.has_opaque_atoms()
    }

    pub fn used_atoms(&self) -> Vec<String> {
        let mut atoms = self.num.used_atoms();
        for a in self.den.used_atoms() {
            if !atoms.contains(&a) {
                atoms.push(a);
            }
        }
        atoms.sort();
        atoms
    }

    pub fn to_term(&self) -> Term {
        if self.is_polynomial() {
            self.num.to_term()
        } else {
            Term::Div(Box::new(self.num.to_term()), Box::new(self.den.to_term()))
        }
    }
}

/// Canonicalize a term into a rational-function normal form. Uninterpreted
/// applications become opaque atoms keyed by their canonical printed form
/// (arguments are themselves normalized first, so `f(x + x)` and `f(2 * x)`
/// share an atom).
pub fn normalize(term: &Term) -> Result<RatFunc, CasError> {
    match term {
        Term::Rational(r) => Ok(RatFunc::constant(r.clone())),
        Term::Var(v) => Ok(RatFunc::atom(v.clone())),
        Term::Neg(t) => Ok(normalize(t)?.neg()),
        Term::Add(a, b) => normalize(a)?.add(&normalize(b)?),
        Term::Sub(a, b) => normalize(a)?.sub(&normalize(b)?),
        Term::Mul(a, b) => normalize(a)?.mul(&normalize(b)?),
        Term::Div(a, b) => {
            let rb = normalize(b)?;
            if rb.is_zero() {
                return Err(CasError::DivisionByZero(print_term(b)));
            }
            normalize(a)?.div(&rb)
        }
        Term::Pow(base, exp) => {
            let e = literal_exponent(exp)?;
            normalize(base)?.pow(e)
        }
        Term::App(name, args) => {
            let canonical_args: Vec<Term> = args
                .iter()
                // Arguments that resist normalization keep their original
                // shape; the atom key is then only syntactically canonical.
                .map(|a| normalize(a).map(|rf| rf.to_term()).unwrap_or_else(|_| a.clone()))
                .collect();
            let key = print_term(&Term::App(name.clone(), canonical_args));
            Ok(RatFunc::atom(key))
        }
    }
}

fn literal_exponent(exp: &Term) -> Result<u32, CasError> {
    match exp {
        Term::Rational(r) if r.is_integer() && !r.is_negative() => {
            let n = r.to_integer();
            u32::try_from(&n)
                .ok()
                .filter(|n| *n <= MAX_EXPONENT)
                .ok_or_else(|| CasError::UnsupportedTerm(format!("exponent {n} too large")))
        }
        other => Err(CasError::UnsupportedTerm(format!(
            "non-literal exponent {}",
            print_term(other)
        ))),
    }
}

/// Convenience: the canonical term for a normalizable input.
pub fn normal_form(term: &Term) -> Result<Term, CasError> {
    Ok(normalize(term)?.to_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mathstep_core::parse_term;

    fn nf(src: &str) -> RatFunc {
        normalize(&parse_term(src).unwrap()).unwrap()
    }

    #[test]
    fn expansion_matches_expanded_form() {
        assert_eq!(nf("(x + 1)^2"), nf("x^2 + 2*x + 1"));
        assert_eq!(nf("(x + y) * (x - y)"), nf("x^2 - y^2"));
        assert_ne!(nf("(x + 1)^2"), nf("x^2 + 1"));
    }

    #[test]
    fn fractions_cancel() {
        // (x^2 - 1)/(x - 1) normalizes to x + 1.
        let f = nf("(x^2 - 1) / (x - 1)");
        assert!(f.is_polynomial());
        assert_eq!(mathstep_core::print_term(&f.to_term()), "x + 1");
    }

    #[test]
    fn denominator_is_monic() {
        // 1 / (2x + 2) -> (1/2) / (x + 1)
        let f = nf("1 / (2*x + 2)");
        assert_eq!(
            mathstep_core::print_term(&f.to_term()),
            "1/2 / (x + 1)"
        );
        assert_eq!(nf("1 / (2*x + 2)"), nf("(1/2) / (x + 1)"));
    }

    #[test]
    fn literal_division_by_zero_is_an_error() {
        let t = parse_term("1 / (x - x)").unwrap();
        assert!(matches!(normalize(&t), Err(CasError::DivisionByZero(_))));
    }

    #[test]
    fn opaque_applications_share_atoms_up_to_arg_normalization() {
        assert_eq!(nf("f(x + x) + 1"), nf("f(2 * x) + 1"));
        assert_ne!(nf("f(x)"), nf("f(y)"));
        assert!(nf("f(x)").has_opaque_atoms());
        assert!(!nf("x + 1").has_opaque_atoms());
    }

    #[test]
    fn variable_exponents_are_rejected() {
        let t = parse_term("2^n").unwrap();
        assert!(matches!(normalize(&t), Err(CasError::UnsupportedTerm(_))));
    }

    #[test]
    fn rational_arithmetic_folds() {
        let f = nf("1/2 + 1/3");
        assert_eq!(f.as_constant().unwrap(), BigRational::new(5.into(), 6.into()));
    }
}
