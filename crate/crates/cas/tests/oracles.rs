//! Independent-oracle checks for the algebra kernel.
//!
//! Each suite validates a component against a second computation route:
//! derivatives against a five-point finite-difference stencil (exact for
//! degree <= 4 over the rationals), gcd against divisibility, equivalence
//! verdicts against witness replay, and root lists against substitution.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mathstep_cas::{
    check_equiv, differentiate, eval_term, gcd, root_satisfies, roots_of, solve_for,
    EquivOptions, Equivalence, Polynomial, Root,
};
use mathstep_core::{print_term, Term};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

// ---------------------------------------------------------------------------
// Derivative vs. five-point stencil.
//
// (f(x-2h) - 8 f(x-h) + 8 f(x+h) - f(x+2h)) / (12 h) equals f'(x) exactly
// when f is a polynomial of degree <= 4, so with rational arithmetic the
// two routes must agree within the pinned tolerance (they in fact agree
// exactly; the tolerance guards the contract, not rounding).
// ---------------------------------------------------------------------------

const VARS: [&str; 3] = ["x", "y", "z"];

fn random_poly_term(rng: &mut ChaCha8Rng) -> Term {
    let n_monomials = rng.random_range(1..=6);
    let mut poly = Polynomial::zero();
    for _ in 0..n_monomials {
        let coeff = int(rng.random_range(-9..=9));
        let mut mono = Polynomial::constant(coeff);
        let mut degree_left = 4u32;
        for v in VARS {
            let e = rng.random_range(0..=degree_left.min(3));
            degree_left -= e;
            mono = mono.mul(&Polynomial::atom(v).pow(e));
        }
        poly = poly.add(&mono);
    }
    poly.to_term()
}

fn random_point(rng: &mut ChaCha8Rng) -> BTreeMap<String, BigRational> {
    VARS.iter()
        .map(|v| {
            let numer = rng.random_range(-20i64..=20);
            let denom = [1i64, 1, 2, 4][rng.random_range(0..4usize)];
            (v.to_string(), rat(numer, denom))
        })
        .collect()
}

fn stencil_derivative(f: &Term, at: &BTreeMap<String, BigRational>) -> BigRational {
    let h = rat(1, 1024);
    let value_at = |offset: i64| {
        let mut env = at.clone();
        let x = env.get_mut("x").expect("x bound");
        *x = &*x + &h * int(offset);
        eval_term(f, &env).expect("polynomial evaluation cannot fail")
    };
    let num = value_at(-2) - value_at(-1) * int(8) + value_at(1) * int(8) - value_at(2);
    num / (&h * int(12))
}

fn within_tolerance(a: &BigRational, b: &BigRational) -> bool {
    let diff = (a - b).abs();
    let mut scale = BigRational::one();
    for v in [a, b] {
        let m = v.abs();
        if m > scale {
            scale = m;
        }
    }
    diff * int(1_000_000) <= scale
}

#[test]
fn derivative_matches_finite_difference_stencil() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..200 {
        let f = random_poly_term(&mut rng);
        let df = differentiate(&f, "x")
            .unwrap_or_else(|e| panic!("case {case}: cannot differentiate {}: {e}", print_term(&f)));
        for _ in 0..3 {
            let at = random_point(&mut rng);
            let symbolic = eval_term(&df, &at).expect("derivative evaluates");
            let numeric = stencil_derivative(&f, &at);
            assert!(
                within_tolerance(&symbolic, &numeric),
                "case {case}: d/dx {} = {} but the stencil gives {} at {at:?}",
                print_term(&f),
                print_term(&df),
                numeric,
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Gcd properties, with divisibility as the oracle.
// ---------------------------------------------------------------------------

fn poly_from(monos: &[(u32, u32, i64)]) -> Polynomial {
    let x = Polynomial::atom("x");
    let y = Polynomial::atom("y");
    monos.iter().fold(Polynomial::zero(), |acc, &(i, j, c)| {
        let mono = Polynomial::constant(int(c)).mul(&x.pow(i)).mul(&y.pow(j));
        acc.add(&mono)
    })
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((0u32..3, 0u32..3, -5i64..6), 0..5)
        .prop_map(|monos| poly_from(&monos))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn gcd_divides_and_extracts_common_factors(
        a in small_poly(),
        b in small_poly(),
        c in small_poly(),
    ) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let ac = a.mul(&c);
        let bc = b.mul(&c);
        let g = gcd(&ac, &bc);
        // Symmetric, monic, and divides both products.
        prop_assert_eq!(&g, &gcd(&bc, &ac));
        prop_assert_eq!(g.leading_coeff(), Some(BigRational::one()));
        prop_assert!(ac.try_div_exact(&g).is_some());
        prop_assert!(bc.try_div_exact(&g).is_some());
        // The common factor c must sit inside the gcd.
        prop_assert!(g.try_div_exact(&c.monic()).is_some());
    }

    #[test]
    fn gcd_with_zero_and_self(a in small_poly()) {
        prop_assume!(!a.is_zero());
        prop_assert_eq!(gcd(&a, &Polynomial::zero()), a.monic());
        prop_assert_eq!(gcd(&a, &a), a.monic());
    }
}

// ---------------------------------------------------------------------------
// Equivalence verdicts replay through evaluation of the original terms.
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn equivalence_agrees_with_polynomial_identity(
        p in small_poly(),
        q in small_poly(),
    ) {
        let lhs = p.to_term();
        let rhs = q.to_term();
        match check_equiv(&lhs, &rhs, &[], &EquivOptions::default()) {
            Equivalence::Equal { .. } => prop_assert_eq!(&p, &q),
            Equivalence::NotEqual { assignment, lhs_value, rhs_value } => {
                prop_assert_ne!(&p, &q);
                // The witness must replay exactly on the original terms.
                prop_assert_eq!(eval_term(&lhs, &assignment).unwrap(), lhs_value.clone());
                prop_assert_eq!(eval_term(&rhs, &assignment).unwrap(), rhs_value.clone());
                prop_assert_ne!(lhs_value, rhs_value);
            }
            Equivalence::Unknown { reason } => {
                prop_assert!(false, "polynomial pair came back Unknown: {}", reason);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Root lists: build a polynomial from chosen roots, solve, compare; and
// every reported root must satisfy the equation under exact substitution.
// ---------------------------------------------------------------------------

fn chosen_roots() -> impl Strategy<Value = Vec<BigRational>> {
    proptest::collection::vec((-6i64..=6, 1i64..=3), 1..=3)
        .prop_map(|pairs| pairs.into_iter().map(|(n, d)| rat(n, d)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn solving_recovers_chosen_roots(roots in chosen_roots()) {
        let x = Polynomial::atom("x");
        let product = roots.iter().fold(Polynomial::one(), |acc, r| {
            acc.mul(&x.sub(&Polynomial::constant(r.clone())))
        });
        let term = product.to_term();
        let (var, got) = solve_for(&term, &Term::int(0)).expect("factorable polynomial");
        prop_assert_eq!(var, "x");
        let mut expected: Vec<Root> = roots.into_iter().map(Root::Rational).collect();
        expected.sort_by(|a, b| {
            let (Root::Rational(a), Root::Rational(b)) = (a, b) else { unreachable!() };
            a.cmp(b)
        });
        expected.dedup();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn reported_roots_satisfy_the_polynomial(
        c in -9i64..=9,
        b in -9i64..=9,
        a in 1i64..=9,
        d in -9i64..=9,
    ) {
        // Random cubic d x^3 + a x^2 + b x + c (d may be zero -> quadratic).
        let coeffs = vec![int(c), int(b), int(a), int(d)];
        match roots_of(&coeffs) {
            Ok(roots) => {
                for r in &roots {
                    prop_assert!(
                        root_satisfies(&coeffs, r),
                        "root {} fails to replay", r
                    );
                }
            }
            Err(e) => {
                // The only acceptable refusals here are irreducible shapes.
                prop_assert!(
                    matches!(e, mathstep_cas::CasError::DegreeTooHigh(_)),
                    "unexpected solver error: {e}"
                );
            }
        }
    }
}

// ---------------------------------------------------------------------------
// A non-regression pin: the witness policy never produces NotEqual for
// opaque terms it cannot evaluate, even when normal forms differ.
// ---------------------------------------------------------------------------

#[test]
fn opaque_disagreement_stays_unknown() {
    let lhs = mathstep_core::parse_term("g(x) + 1").unwrap();
    let rhs = mathstep_core::parse_term("g(x)").unwrap();
    match check_equiv(&lhs, &rhs, &[], &EquivOptions::default()) {
        Equivalence::Unknown { .. } => {}
        other => panic!("expected Unknown for undefined g, got {other:?}"),
    }
}

#[test]
fn zero_values_handled_in_tolerance() {
    // Degenerate guard for the tolerance helper itself.
    assert!(within_tolerance(&BigRational::zero(), &BigRational::zero()));
    assert!(!within_tolerance(&BigRational::zero(), &BigRational::one()));
    assert!(within_tolerance(&int(1_000_000), &(int(1_000_000) + rat(1, 2))));
}
