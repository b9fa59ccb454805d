//! Sparse multivariate polynomials over exact rationals.
//!
//! The "variables" are *atoms*: either plain variable names or canonical
//! strings for uninterpreted function applications (which extend the monomial
//! basis as opaque symbols, e.g. `g(x)`). Each polynomial carries its own
//! sorted atom list; binary operations merge bases on the fly.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Signed, Zero};

use mathstep_core::Term;

/// Invariants: `atoms` strictly increasing; every exponent vector has
/// `atoms.len()` entries; no zero coefficients; no all-zero exponent entry is
/// required (the constant term has an all-zero vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    atoms: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial { atoms: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn constant(value: BigRational) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Vec::new(), value);
        }
        Polynomial { atoms: Vec::new(), terms }
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(BigRational::one())
    }

    pub fn atom(name: impl Into<String>) -> Polynomial {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], BigRational::one());
        Polynomial { atoms: vec![name.into()], terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some((exps, coeff)) = self.terms.iter().next() {
                if exps.iter().all(|e| *e == 0) {
                    return Some(coeff.clone());
                }
            }
        }
        None
    }

    /// Atoms that actually occur with nonzero exponent somewhere.
    pub fn used_atoms(&self) -> Vec<String> {
        let mut used = vec![false; self.atoms.len()];
        for exps in self.terms.keys() {
            for (i, e) in exps.iter().enumerate() {
                if *e > 0 {
                    used[i] = true;
                }
            }
        }
        self.atoms
            .iter()
            .zip(used)
            .filter(|&(_a, u)| u).map(|(a, _u)| a.clone())
            .collect()
    }

    /// Drop atoms with no occurrences, canonicalizing the representation.
    pub fn compact(mut self) -> Polynomial {
        let used: Vec<String> = self.used_atoms();
        if used.len() == self.atoms.len() {
            return self;
        }
        let keep: Vec<usize> = self
            .atoms
            .iter()
            .enumerate()
            .filter_map(|(i, a)| used.contains(a).then_some(i))
            .collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(exps, c)| (keep.iter().map(|&i| exps[i]).collect(), c))
            .collect();
        Polynomial { atoms: used, terms }
    }

    /// Remap this polynomial onto a superset atom basis.
    fn embed(&self, atoms: &[String]) -> Polynomial {
        let map: Vec<usize> = self
            .atoms
            .iter()
            .map(|a| atoms.iter().position(|b| b == a).expect("superset basis"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(exps, c)| {
                let mut out = vec![0u32; atoms.len()];
                for (i, e) in exps.iter().enumerate() {
                    out[map[i]] = *e;
                }
                (out, c.clone())
            })
            .collect();
        Polynomial { atoms: atoms.to_vec(), terms }
    }

    fn merged_basis(a: &Polynomial, b: &Polynomial) -> Vec<String> {
        let mut atoms = a.atoms.clone();
        for atom in &b.atoms {
            if !atoms.contains(atom) {
                atoms.push(atom.clone());
            }
        }
        atoms.sort();
        atoms
    }

    fn insert_term(terms: &mut BTreeMap<Vec<u32>, BigRational>, exps: Vec<u32>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let atoms = Polynomial::merged_basis(self, other);
        let a = self.embed(&atoms);
        let b = other.embed(&atoms);
        let mut terms = a.terms;
        for (exps, c) in b.terms {
            Polynomial::insert_term(&mut terms, exps, c);
        }
        Polynomial { atoms, terms }.compact()
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            atoms: self.atoms.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let atoms = Polynomial::merged_basis(self, other);
        let a = self.embed(&atoms);
        let b = other.embed(&atoms);
        let mut terms = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                Polynomial::insert_term(&mut terms, exps, ca * cb);
            }
        }
        Polynomial { atoms, terms }.compact()
    }

    pub fn scale(&self, factor: &BigRational) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            atoms: self.atoms.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * factor)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Total degree of the polynomial (0 for constants and zero).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, atom: &str) -> u32 {
        match self.atoms.iter().position(|a| a == atom) {
            None => 0,
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
        }
    }

    /// Leading coefficient under the term order (highest exponent vector).
    fn leading(&self) -> Option<(&Vec<u32>, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<BigRational> {
        self.leading().map(|(_, c)| c.clone())
    }

    /// Divide by the leading coefficient, making the polynomial monic.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => Polynomial::zero(),
            Some((_, lc)) => {
                let inv = BigRational::one() / lc;
                self.scale(&inv)
            }
        }
    }

    /// Exact multivariate division: `Some(q)` iff `self == q * divisor`.
    pub fn try_div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let atoms = Polynomial::merged_basis(self, divisor);
        let mut rem = self.embed(&atoms);
        let div = divisor.embed(&atoms);
        let (dexp, dcoeff) = {
            let (e, c) = div.leading().expect("nonzero divisor");
            (e.clone(), c.clone())
        };
        let mut quot: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        while let Some((rexp, rcoeff)) = rem.leading() {
            let qexp: Vec<u32> = rexp
                .iter()
                .zip(&dexp)
                .map(|(r, d)| r.checked_sub(*d))
                .collect::<Option<_>>()?;
            let qcoeff = rcoeff / &dcoeff;
            // rem -= (qcoeff * X^qexp) * div
            let mut mono_terms = BTreeMap::new();
            mono_terms.insert(qexp.clone(), qcoeff.clone());
            let mono = Polynomial { atoms: atoms.clone(), terms: mono_terms };
            // Keep the remainder on the full basis so exponent vectors stay
            // aligned with `dexp` even after cancellation.
            rem = rem.sub(&mono.mul(&div)).embed(&atoms);
            Polynomial::insert_term(&mut quot, qexp, qcoeff);
        }
        Some(Polynomial { atoms, terms: quot }.compact())
    }

    /// Evaluate with every used atom bound in `env`; `None` if one is missing.
    pub fn eval(&self, env: &BTreeMap<String, BigRational>) -> Option<BigRational> {
        let values: Vec<&BigRational> = self
            .atoms
            .iter()
            .map(|a| env.get(a))
            .collect::<Option<_>>()?;
        let mut total = BigRational::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, e) in exps.iter().enumerate() {
                if *e > 0 {
                    term *= num::pow::pow(values[i].clone(), *e as usize);
                }
            }
            total += term;
        }
        Some(total)
    }

    /// View as univariate in `atom`: coefficient polynomials (over the other
    /// atoms) indexed by power, lowest first. The vector has `deg+1` entries.
    pub fn univariate_in(&self, atom: &str) -> Vec<Polynomial> {
        let deg = self.degree_in(atom) as usize;
        let mut out = vec![Polynomial::zero(); deg + 1];
        let idx = self.atoms.iter().position(|a| a == atom);
        for (exps, coeff) in &self.terms {
            let (power, rest_exps) = match idx {
                None => (0usize, exps.clone()),
                Some(i) => {
                    let mut rest = exps.clone();
                    let p = rest[i];
                    rest[i] = 0;
                    (p as usize, rest)
                }
            };
            let rest_atoms = self.atoms.clone();
            let mut terms = BTreeMap::new();
            terms.insert(rest_exps, coeff.clone());
            let piece = Polynomial { atoms: rest_atoms, terms }.compact();
            out[power] = out[power].add(&piece);
        }
        out
    }

    /// Rebuild from univariate coefficients: `Σ coeffs[i] * atom^i`.
    pub fn from_univariate(coeffs: &[Polynomial], atom: &str) -> Polynomial {
        let x = Polynomial::atom(atom);
        let mut acc = Polynomial::zero();
        for (i, c) in coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&x.pow(i as u32)));
        }
        acc
    }

    /// Render as a term, monomials in descending term order: `x^2 + 2*x + 1`.
    pub fn to_term(&self) -> Term {
        if self.terms.is_empty() {
            return Term::int(0);
        }
        let mut parts: Vec<Term> = Vec::new();
        for (exps, coeff) in self.terms.iter().rev() {
            let mut factors: Vec<Term> = Vec::new();
            for (i, e) in exps.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let base = atom_to_term(&self.atoms[i]);
                factors.push(if *e == 1 {
                    base
                } else {
                    Term::Pow(Box::new(base), Box::new(Term::int(*e as i64)))
                });
            }
            let mono = match factors.len() {
                0 => None,
                _ => {
                    let mut iter = factors.into_iter();
                    let first = iter.next().expect("nonempty");
                    Some(iter.fold(first, |acc, f| Term::Mul(Box::new(acc), Box::new(f))))
                }
            };
            let with_coeff = match mono {
                None => Term::Rational(coeff.clone()),
                Some(m) => {
                    if coeff.is_one() {
                        m
                    } else if (-coeff).is_one() {
                        Term::Neg(Box::new(m))
                    } else {
                        Term::Mul(Box::new(Term::Rational(coeff.clone())), Box::new(m))
                    }
                }
            };
            parts.push(with_coeff);
        }
        let mut iter = parts.into_iter();
        let first = iter.next().expect("nonempty");
        iter.fold(first, |acc, p| match p {
            // Fold `+ (-t)` into `- t` for readability.
            Term::Neg(inner) => Term::Sub(Box::new(acc), inner),
            Term::Rational(r) if r.is_negative() => {
                Term::Sub(Box::new(acc), Box::new(Term::Rational(-r)))
            }
            other => Term::Add(Box::new(acc), Box::new(other)),
        })
    }

    /// All atoms whose canonical key marks an uninterpreted application.
    pub fn has_opaque_atoms(&self) -> bool {
        self.used_atoms().iter().any(|a| a.contains('('))
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }
}

/// Atom keys are either identifiers or canonical application strings like
/// `f(n - 1)`; the latter re-parse as terms.
fn atom_to_term(atom: &str) -> Term {
    if atom.contains('(') {
        mathstep_core::parse_term(atom).unwrap_or_else(|_| Term::Var(atom.to_string()))
    } else {
        Term::Var(atom.to_string())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&mathstep_core::print_term(&self.to_term()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(num::BigInt::from(n))
    }

    fn x() -> Polynomial {
        Polynomial::atom("x")
    }

    fn y() -> Polynomial {
        Polynomial::atom("y")
    }

    #[test]
    fn arithmetic_and_display() {
        // (x + 1)^2 = x^2 + 2x + 1
        let p = x().add(&Polynomial::one()).pow(2);
        assert_eq!(p.to_string(), "x^2 + 2 * x + 1");
        assert_eq!(p.total_degree(), 2);
        // (x+1)^2 - (x^2 + 2x + 1) = 0
        let q = x()
            .pow(2)
            .add(&x().scale(&rat(2)))
            .add(&Polynomial::one());
        assert!(p.sub(&q).is_zero());
    }

    #[test]
    fn cancellation_compacts_the_basis() {
        // (x + y) - y = x: y must vanish from the atom list.
        let p = x().add(&y()).sub(&y());
        assert_eq!(p, x());
        assert_eq!(p.atoms(), ["x".to_string()]);
    }

    #[test]
    fn display_orders_monomials_high_to_low() {
        let p = x().pow(3).sub(&x()).add(&Polynomial::constant(rat(-5)));
        assert_eq!(p.to_string(), "x^3 - x - 5");
    }

    #[test]
    fn exact_division() {
        let a = x().pow(2).sub(&Polynomial::one()); // x^2 - 1
        let b = x().sub(&Polynomial::one()); // x - 1
        let q = a.try_div_exact(&b).unwrap();
        assert_eq!(q, x().add(&Polynomial::one()));
        // Non-exact division fails.
        assert!(x().pow(2).add(&Polynomial::one()).try_div_exact(&b).is_none());
        // Multivariate: (x^2 - y^2) / (x - y) = x + y
        let m = x().pow(2).sub(&y().pow(2));
        let d = x().sub(&y());
        assert_eq!(m.try_div_exact(&d).unwrap(), x().add(&y()));
    }

    #[test]
    fn eval_exactly() {
        let p = x().pow(2).add(&y()); // x^2 + y
        let mut env = BTreeMap::new();
        env.insert("x".to_string(), BigRational::new(3.into(), 2.into()));
        env.insert("y".to_string(), rat(1));
        assert_eq!(p.eval(&env).unwrap(), BigRational::new(13.into(), 4.into()));
        env.remove("y");
        assert_eq!(p.eval(&env), None);
    }

    #[test]
    fn univariate_view_round_trips() {
        // x^2*y + x + 3 viewed in x: [3, 1, y]
        let p = x().pow(2).mul(&y()).add(&x()).add(&Polynomial::constant(rat(3)));
        let coeffs = p.univariate_in("x");
        assert_eq!(coeffs.len(), 3);
        assert_eq!(coeffs[0], Polynomial::constant(rat(3)));
        assert_eq!(coeffs[1], Polynomial::one());
        assert_eq!(coeffs[2], y());
        assert_eq!(Polynomial::from_univariate(&coeffs, "x"), p);
    }

    #[test]
    fn opaque_atoms_extend_the_basis() {
        let p = Polynomial::atom("g(x)").add(&x());
        assert!(p.has_opaque_atoms());
        // Atoms sort lexicographically, so the application comes first.
        assert_eq!(p.to_string(), "g(x) + x");
    }

    #[test]
    fn monic_normalization() {
        let p = x().pow(2).scale(&rat(3)).add(&x().scale(&rat(6)));
        let m = p.monic();
        assert_eq!(m, x().pow(2).add(&x().scale(&rat(2))));
    }
}
