//! Equivalence checking for terms: rational-function normal forms backed by
//! seeded numeric sampling.
//!
//! The verdict policy is deliberately asymmetric. `Equal` needs a proof
//! (identical normal forms, or syntactic identity). `NotEqual` needs a
//! concrete witness that replays through exact evaluation of the *original*
//! terms — differing normal forms alone are not enough, because opaque
//! function atoms or unsupported shapes can make the normal form lossy.
//! Everything else is `Unknown`.

use std::collections::BTreeMap;

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mathstep_core::{Definition, Term};

use crate::eval::{Env, Evaluator};
use crate::ratfunc::normalize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equal {
        normal_form: Term,
    },
    NotEqual {
        assignment: BTreeMap<String, BigRational>,
        lhs_value: BigRational,
        rhs_value: BigRational,
    },
    Unknown {
        reason: String,
    },
}

#[derive(Clone, Debug)]
pub struct EquivOptions {
    /// Total sample points tried when hunting for a witness.
    pub budget: u32,
    pub seed: u64,
}

impl Default for EquivOptions {
    fn default() -> EquivOptions {
        EquivOptions { budget: 200, seed: 0 }
    }
}

const MAGNITUDE: i64 = 1_000_000;
const FUEL_PER_POINT: u64 = 10_000;

/// Small values tried first so counterexamples come out readable.
const GRID: [(i64, i64); 10] =
    [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (-3, 1), (1, 2), (-1, 2), (5, 1)];

pub fn check_equiv(
    lhs: &Term,
    rhs: &Term,
    defs: &[Definition],
    opts: &EquivOptions,
) -> Equivalence {
    if lhs.is_ground() && rhs.is_ground() {
        // Ground terms have definite values; exact evaluation settles the
        // question outright when it goes through.
        let mut ev = Evaluator::new(defs.iter().cloned()).with_fuel(FUEL_PER_POINT);
        if let (Ok(a), Ok(b)) = (ev.eval(lhs, &Env::new()), ev.eval(rhs, &Env::new())) {
            if a == b {
                return Equivalence::Equal { normal_form: Term::Rational(a) };
            }
            return Equivalence::NotEqual {
                assignment: BTreeMap::new(),
                lhs_value: a,
                rhs_value: b,
            };
        }
    }
    let nf = match (normalize(lhs), normalize(rhs)) {
        (Ok(a), Ok(b)) => {
            if a == b {
                return Equivalence::Equal { normal_form: a.to_term() };
            }
            Some((a, b))
        }
        _ => None,
    };
    if lhs == rhs {
        // Identical shapes denote the same value even when the algebra
        // kernel cannot interpret them.
        return Equivalence::Equal { normal_form: lhs.clone() };
    }

    if let Some(witness) = hunt_witness(lhs, rhs, defs, opts) {
        return witness;
    }

    let reason = match nf {
        Some((a, b)) if a.has_opaque_atoms() || b.has_opaque_atoms() => {
            "normal forms differ but contain uninterpreted functions and no witness evaluated"
                .to_string()
        }
        Some(_) => "normal forms differ but no evaluable witness was found".to_string(),
        None => "terms fall outside the algebra fragment and no witness was found".to_string(),
    };
    Equivalence::Unknown { reason }
}

fn hunt_witness(
    lhs: &Term,
    rhs: &Term,
    defs: &[Definition],
    opts: &EquivOptions,
) -> Option<Equivalence> {
    let mut var_set = lhs.free_vars();
    var_set.extend(rhs.free_vars());
    let vars: Vec<String> = var_set.into_iter().collect();
    let mut ev = Evaluator::new(defs.iter().cloned());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for round in 0..opts.budget {
        let env: Env = vars
            .iter()
            .enumerate()
            .map(|(j, v)| (v.clone(), sample_value(round, j, &mut rng)))
            .collect();
        ev.set_fuel(FUEL_PER_POINT);
        let a = ev.eval(lhs, &env);
        let b = ev.eval(rhs, &env);
        if let (Ok(a), Ok(b)) = (a, b) {
            if a != b {
                return Some(Equivalence::NotEqual {
                    assignment: env,
                    lhs_value: a,
                    rhs_value: b,
                });
            }
        }
    }
    None
}

fn sample_value(round: u32, var_index: usize, rng: &mut ChaCha8Rng) -> BigRational {
    let grid_rounds = GRID.len() as u32 * 2;
    if round < grid_rounds {
        let (n, d) = GRID[(round as usize + var_index) % GRID.len()];
        return BigRational::new(n.into(), d.into());
    }
    let numer: i64 = rng.random_range(-MAGNITUDE..=MAGNITUDE);
    // Mostly integers; occasionally a small denominator to exercise
    // non-integral points.
    let denom: i64 = *[1, 1, 1, 2, 3, 4]
        .get(rng.random_range(0..6usize))
        .expect("index in range");
    BigRational::new(numer.into(), denom.into())
}
