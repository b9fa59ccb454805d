//! Complete real-root lists for univariate polynomial equations.
//!
//! Degrees 1 and 2 are solved exactly (quadratic roots may be irrational and
//! are kept in the form `r + c*sqrt(d)`). Degrees 3 and 4 go through the
//! rational-root theorem with deflation; if the deflated remainder is still
//! cubic or worse we refuse rather than return an incomplete list.

use num::{BigInt, BigRational, One, Signed, Zero};

use mathstep_core::{format_rational, Term};

use crate::error::CasError;
use crate::ratfunc::normalize;

/// An exact real root. `Quadratic` encodes `rational + coefficient*sqrt(radicand)`
/// with `radicand > 1`, not a perfect square, and `coefficient != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Rational(BigRational),
    Quadratic {
        rational: BigRational,
        coefficient: BigRational,
        radicand: BigInt,
    },
}

impl Root {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Root::Rational(r) => Some(r),
            Root::Quadratic { .. } => None,
        }
    }

    fn sort_key(&self) -> (BigRational, BigRational, BigInt) {
        match self {
            Root::Rational(r) => (r.clone(), BigRational::zero(), BigInt::zero()),
            Root::Quadratic { rational, coefficient, radicand } => {
                (rational.clone(), coefficient.clone(), radicand.clone())
            }
        }
    }
}

impl std::fmt::Display for Root {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Root::Rational(r) => f.write_str(&format_rational(r)),
            Root::Quadratic { rational, coefficient, radicand } => {
                let (sign, mag) = if coefficient.is_negative() {
                    ("-", -coefficient)
                } else {
                    ("+", coefficient.clone())
                };
                if rational.is_zero() {
                    if sign == "-" {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{} {} ", format_rational(rational), sign)?;
                }
                if !mag.is_one() {
                    write!(f, "{} * ", format_rational(&mag))?;
                }
                write!(f, "sqrt({radicand})")
            }
        }
    }
}

/// Solve `lhs = rhs` for its single variable. Fails when the equation
/// mentions zero or several atoms, involves uninterpreted functions, or has
/// a shape whose complete root list we cannot certify.
pub fn solve_for(lhs: &Term, rhs: &Term) -> Result<(String, Vec<Root>), CasError> {
    let diff = normalize(&Term::Sub(Box::new(lhs.clone()), Box::new(rhs.clone())))?;
    if diff.is_zero() {
        return Err(CasError::DegenerateEquation);
    }
    if diff.has_opaque_atoms() {
        return Err(CasError::UnsupportedTerm(
            "equation involves uninterpreted functions".to_string(),
        ));
    }
    let atoms = diff.used_atoms();
    if atoms.len() != 1 {
        return Err(CasError::NotUnivariate(atoms));
    }
    let var = atoms.into_iter().next().expect("one atom");
    // Roots of a reduced rational function are exactly the roots of its
    // numerator: the reduced denominator shares none of them.
    let coeffs: Vec<BigRational> = diff
        .numerator()
        .univariate_in(&var)
        .iter()
        .map(|c| c.as_constant().expect("univariate coefficients are constant"))
        .collect();
    let mut roots = roots_of(&coeffs)?;
    roots.sort_by_key(Root::sort_key);
    roots.dedup();
    Ok((var, roots))
}

/// Complete root list of `Σ coeffs[i] x^i` (lowest power first).
pub fn roots_of(coeffs: &[BigRational]) -> Result<Vec<Root>, CasError> {
    let mut coeffs = trimmed(coeffs.to_vec());
    match coeffs.len() {
        0 => return Err(CasError::DegenerateEquation),
        1 => return Ok(Vec::new()),
        _ => {}
    }
    let mut roots = Vec::new();
    // Pull out x = 0 factors up front so the constant term is nonzero.
    if coeffs[0].is_zero() {
        roots.push(Root::Rational(BigRational::zero()));
        while coeffs.first().is_some_and(Zero::is_zero) {
            coeffs.remove(0);
        }
    }
    match coeffs.len() - 1 {
        0 => {}
        1 => roots.push(Root::Rational(-&coeffs[0] / &coeffs[1])),
        2 => roots.extend(quadratic_roots(&coeffs[0], &coeffs[1], &coeffs[2])),
        3 | 4 => {
            for candidate in rational_candidates(&coeffs) {
                while coeffs.len() > 1 && poly_at(&coeffs, &candidate).is_zero() {
                    if roots.last() != Some(&Root::Rational(candidate.clone())) {
                        roots.push(Root::Rational(candidate.clone()));
                    }
                    coeffs = deflate(&coeffs, &candidate);
                }
            }
            match coeffs.len() - 1 {
                0 => {}
                2 => roots.extend(quadratic_roots(&coeffs[0], &coeffs[1], &coeffs[2])),
                // A linear remainder would have a rational root we already
                // tried, so only irreducible cubics and quartics land here.
                residual => return Err(CasError::DegreeTooHigh(residual as u32)),
            }
        }
        deg => return Err(CasError::DegreeTooHigh(deg as u32)),
    }
    Ok(roots)
}

fn trimmed(mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

fn poly_at(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Synthetic division by `(x - r)`; only called when `r` is a root.
fn deflate(coeffs: &[BigRational], r: &BigRational) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); coeffs.len() - 1];
    let mut carry = BigRational::zero();
    for i in (0..coeffs.len() - 1).rev() {
        carry = &coeffs[i + 1] + &carry * r;
        out[i] = carry.clone();
    }
    out
}

/// Real roots of `c + b x + a x^2` (note the order: constant first).
fn quadratic_roots(c: &BigRational, b: &BigRational, a: &BigRational) -> Vec<Root> {
    let disc = b * b - BigRational::from(BigInt::from(4)) * a * c;
    if disc.is_negative() {
        return Vec::new();
    }
    let two_a = a + a;
    let center = -b / &two_a;
    if disc.is_zero() {
        return vec![Root::Rational(center)];
    }
    // disc = (n/d) with d > 0; sqrt(n/d) = sqrt(n*d)/d.
    let scaled = disc.numer() * disc.denom();
    let (square, remainder) = extract_square(&scaled);
    let base = BigRational::new(square, disc.denom().clone()) / &two_a;
    if remainder.is_one() {
        // Perfect square discriminant: two rational roots.
        let r1 = &center - &base;
        let r2 = &center + &base;
        return vec![Root::Rational(r1), Root::Rational(r2)];
    }
    let mag = if base.is_negative() { -&base } else { base };
    vec![
        Root::Quadratic {
            rational: center.clone(),
            coefficient: -&mag,
            radicand: remainder.clone(),
        },
        Root::Quadratic { rational: center, coefficient: mag, radicand: remainder },
    ]
}

const TRIAL_BOUND: u64 = 100_000;

/// Write `n = square^2 * remainder` with the square part found by trial
/// division up to the bound. `remainder` is squarefree up to that bound.
fn extract_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut rem = n.clone();
    let mut square = BigInt::one();
    let mut p = BigInt::from(2);
    let bound = BigInt::from(TRIAL_BOUND);
    while &p * &p <= rem && p <= bound {
        let pp = &p * &p;
        while (&rem % &pp).is_zero() {
            rem /= &pp;
            square *= &p;
        }
        p += 1;
    }
    // Catch a leftover perfect square (e.g. a prime square above the bound).
    let s = rem.sqrt();
    if &s * &s == rem {
        square *= s;
        rem = BigInt::one();
    }
    (square, rem)
}

const CANDIDATE_CAP: usize = 10_000;

/// Rational-root candidates `±p/q` with `p | a0` and `q | an`, the
/// coefficients first scaled to integers. Capped; a missed candidate only
/// ever costs completeness of deflation, which the caller then reports.
fn rational_candidates(coeffs: &[BigRational]) -> Vec<BigRational> {
    let scale: BigInt = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| num::integer::lcm(acc, c.denom().clone()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from(scale.clone())).to_integer())
        .collect();
    let a0 = ints.first().expect("nonzero constant term").abs();
    let an = ints.last().expect("leading term").abs();
    let qs = divisors(&an);
    let mut out = Vec::new();
    'outer: for p in divisors(&a0) {
        for q in &qs {
            let pos = BigRational::new(p.clone(), q.clone());
            out.push(-&pos);
            out.push(pos);
            if out.len() >= CANDIDATE_CAP {
                break 'outer;
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    let bound = BigInt::from(TRIAL_BOUND);
    while &d * &d <= *n && d <= bound {
        if (n % &d).is_zero() {
            small.push(d.clone());
            large.push(n / &d);
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small.dedup();
    small
}

/// Arithmetic in the field extension `Q(sqrt(d))`, used to replay irrational
/// roots through the original polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
struct QuadExt {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

impl QuadExt {
    fn rational(a: BigRational, d: BigInt) -> QuadExt {
        QuadExt { a, b: BigRational::zero(), d }
    }

    fn mul(&self, other: &QuadExt) -> QuadExt {
        debug_assert_eq!(self.d, other.d);
        let d = BigRational::from(self.d.clone());
        QuadExt {
            a: &self.a * &other.a + &self.b * &other.b * d,
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d.clone(),
        }
    }

    fn add(&self, other: &QuadExt) -> QuadExt {
        debug_assert_eq!(self.d, other.d);
        QuadExt {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d: self.d.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        // With d > 1 squarefree, sqrt(d) is irrational, so a + b*sqrt(d) = 0
        // forces both components to vanish.
        self.a.is_zero() && self.b.is_zero()
    }
}

/// Exact check that a root satisfies `Σ coeffs[i] x^i = 0`.
pub fn root_satisfies(coeffs: &[BigRational], root: &Root) -> bool {
    match root {
        Root::Rational(r) => poly_at(coeffs, r).is_zero(),
        Root::Quadratic { rational, coefficient, radicand } => {
            let x = QuadExt {
                a: rational.clone(),
                b: coefficient.clone(),
                d: radicand.clone(),
            };
            let mut acc = QuadExt::rational(BigRational::zero(), radicand.clone());
            for c in coeffs.iter().rev() {
                acc = acc.mul(&x).add(&QuadExt::rational(c.clone(), radicand.clone()));
            }
            acc.is_zero()
        }
    }
}
