//! Cube decision procedure: Fourier-Motzkin elimination over the rationals,
//! integer tightening, and branch-and-bound for integer-sorted variables.
//!
//! Soundness contract: `Infeasible` is always trustworthy (derived by valid
//! inference from a subset of the cube). `Feasible` carries a model that has
//! been checked against every atom of the cube, including nonlinear ones.
//! Anything we cannot settle within budget is `Unknown`.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::ir::{eval_expr, expr_vars, rel_holds, Cube, Expr, Rel, Sort};

/// `sum(coeffs[v] * v) + k <= 0` (or `< 0` when strict).
#[derive(Clone, Debug)]
struct Constraint {
    coeffs: BTreeMap<String, BigRational>,
    k: BigRational,
    strict: bool,
}

impl Constraint {
    fn normalize(mut self) -> Constraint {
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }

    fn upper_bound(var: &str, value: BigRational) -> Constraint {
        // var <= value
        Constraint {
            coeffs: [(var.to_string(), BigRational::one())].into(),
            k: -value,
            strict: false,
        }
    }

    fn lower_bound(var: &str, value: BigRational) -> Constraint {
        // var >= value
        Constraint {
            coeffs: [(var.to_string(), -BigRational::one())].into(),
            k: value,
            strict: false,
        }
    }
}

#[derive(Clone, Debug)]
struct Lin {
    coeffs: BTreeMap<String, BigRational>,
    k: BigRational,
}

impl Lin {
    fn constant(k: BigRational) -> Lin {
        Lin { coeffs: BTreeMap::new(), k }
    }

    fn add(mut self, other: &Lin) -> Lin {
        for (v, c) in &other.coeffs {
            *self.coeffs.entry(v.clone()).or_insert_with(BigRational::zero) += c;
        }
        self.k += &other.k;
        self
    }

    fn scale(mut self, factor: &BigRational) -> Lin {
        for c in self.coeffs.values_mut() {
            *c *= factor;
        }
        self.k *= factor;
        self
    }

    fn neg(self) -> Lin {
        self.scale(&-BigRational::one())
    }

    fn is_constant(&self) -> bool {
        self.coeffs.values().all(Zero::is_zero)
    }
}

/// `None` means the expression is not linear.
fn linearize(e: &Expr) -> Option<Lin> {
    match e {
        Expr::Num(n) => Some(Lin::constant(n.clone())),
        Expr::Var(v) => Some(Lin {
            coeffs: [(v.clone(), BigRational::one())].into(),
            k: BigRational::zero(),
        }),
        Expr::Add(items) => {
            let mut acc = Lin::constant(BigRational::zero());
            for item in items {
                acc = acc.add(&linearize(item)?);
            }
            Some(acc)
        }
        Expr::Neg(a) => Some(linearize(a)?.neg()),
        Expr::Mul(items) => {
            let mut acc = Lin::constant(BigRational::one());
            for item in items {
                let lin = linearize(item)?;
                if lin.is_constant() {
                    acc = acc.scale(&lin.k);
                } else if acc.is_constant() {
                    let factor = acc.k.clone();
                    acc = lin.scale(&factor);
                } else {
                    return None;
                }
            }
            Some(acc)
        }
        Expr::Div(a, b) => {
            let divisor = linearize(b)?;
            if !divisor.is_constant() || divisor.k.is_zero() {
                return None;
            }
            Some(linearize(a)?.scale(&(BigRational::one() / &divisor.k)))
        }
    }
}

pub enum CubeOutcome {
    Infeasible,
    Feasible(BTreeMap<String, BigRational>),
    Unknown,
}

const BB_BUDGET: u32 = 2000;
const FM_SIZE_CAP: usize = 20_000;

pub fn solve_cube(cube: &Cube, sorts: &BTreeMap<String, Sort>) -> CubeOutcome {
    let mut linear: Vec<Constraint> = Vec::new();
    let mut nonlinear: Vec<&(Rel, Expr, Expr)> = Vec::new();
    for atom in cube {
        let (rel, a, b) = atom;
        match (linearize(a), linearize(b)) {
            (Some(la), Some(lb)) => {
                let diff = la.add(&lb.clone().neg()); // a - b
                match rel {
                    Rel::Eq => {
                        linear.push(
                            Constraint {
                                coeffs: diff.coeffs.clone(),
                                k: diff.k.clone(),
                                strict: false,
                            }
                            .normalize(),
                        );
                        let negd = diff.neg();
                        linear.push(
                            Constraint { coeffs: negd.coeffs, k: negd.k, strict: false }
                                .normalize(),
                        );
                    }
                    Rel::Le | Rel::Lt => {
                        linear.push(
                            Constraint {
                                coeffs: diff.coeffs,
                                k: diff.k,
                                strict: *rel == Rel::Lt,
                            }
                            .normalize(),
                        );
                    }
                    // NNF never produces these, but handle them soundly.
                    Rel::Ge | Rel::Gt => {
                        let negd = diff.neg();
                        linear.push(
                            Constraint {
                                coeffs: negd.coeffs,
                                k: negd.k,
                                strict: *rel == Rel::Gt,
                            }
                            .normalize(),
                        );
                    }
                    Rel::Ne => nonlinear.push(atom),
                }
            }
            _ => nonlinear.push(atom),
        }
    }

    let mut budget = BB_BUDGET;
    match solve_linear(&linear, sorts, &mut budget) {
        LinOutcome::Infeasible => CubeOutcome::Infeasible,
        LinOutcome::Unknown => CubeOutcome::Unknown,
        LinOutcome::Feasible(mut model) => {
            // Close the model over variables only the nonlinear part sees,
            // then replay those atoms; a model that fails replay proves
            // nothing either way.
            let mut extra = Vec::new();
            for (_, a, b) in nonlinear.iter().copied() {
                expr_vars(a, &mut extra);
                expr_vars(b, &mut extra);
            }
            for v in extra {
                model.entry(v).or_insert_with(BigRational::zero);
            }
            for (rel, a, b) in nonlinear.iter().copied() {
                match (eval_expr(a, &model), eval_expr(b, &model)) {
                    (Some(x), Some(y)) if rel_holds(*rel, &x, &y) => {}
                    _ => return CubeOutcome::Unknown,
                }
            }
            CubeOutcome::Feasible(model)
        }
    }
}

enum LinOutcome {
    Infeasible,
    Feasible(BTreeMap<String, BigRational>),
    Unknown,
}

/// Branch-and-bound over rational relaxations, driven by an explicit
/// worklist so an adversarial instance burns budget instead of stack.
fn solve_linear(
    cons: &[Constraint],
    sorts: &BTreeMap<String, Sort>,
    budget: &mut u32,
) -> LinOutcome {
    let mut work: Vec<Vec<Constraint>> = vec![cons.to_vec()];
    let mut any_unknown = false;
    while let Some(current) = work.pop() {
        if *budget == 0 {
            // Unexplored branches remain, so infeasibility is not proven.
            return LinOutcome::Unknown;
        }
        *budget -= 1;
        let tightened = current.iter().map(|c| tighten(c, sorts)).collect();
        // Deep branches otherwise pile up redundant bounds and make
        // elimination quadratic in the branch depth.
        let compact = compress_bounds(tightened);
        match fm(&compact) {
            FmResult::Infeasible => {}
            FmResult::TooBig => any_unknown = true,
            FmResult::Model(model) => {
                let fractional = model.iter().find(|(v, val)| {
                    sorts.get(*v) == Some(&Sort::Int) && !val.is_integer()
                });
                let (var, value) = match fractional {
                    None => return LinOutcome::Feasible(model),
                    Some((v, val)) => (v.clone(), val.clone()),
                };
                let mut left = compact.clone();
                left.push(Constraint::upper_bound(&var, value.floor()));
                let mut right = compact;
                right.push(Constraint::lower_bound(&var, value.floor() + BigRational::one()));
                work.push(right);
                work.push(left);
            }
        }
    }
    if any_unknown {
        LinOutcome::Unknown
    } else {
        LinOutcome::Infeasible
    }
}

/// Keep only the tightest single-variable bound in each direction; the
/// remaining constraints pass through untouched. The feasible set is
/// unchanged because every dropped bound is implied by the kept one.
fn compress_bounds(cons: Vec<Constraint>) -> Vec<Constraint> {
    let mut out = Vec::new();
    let mut uppers: BTreeMap<String, (BigRational, bool)> = BTreeMap::new();
    let mut lowers: BTreeMap<String, (BigRational, bool)> = BTreeMap::new();
    for c in cons {
        if c.coeffs.len() != 1 {
            out.push(c);
            continue;
        }
        let (var, coeff) = c.coeffs.iter().next().expect("one entry");
        let bound = -&c.k / coeff;
        let book = if coeff.is_positive() { &mut uppers } else { &mut lowers };
        let existing_is_tighter = match book.get(var) {
            None => false,
            Some((cur, cur_strict)) => {
                let strictly = if coeff.is_positive() { *cur < bound } else { *cur > bound };
                strictly || (*cur == bound && (*cur_strict || !c.strict))
            }
        };
        if !existing_is_tighter {
            book.insert(var.clone(), (bound, c.strict));
        }
    }
    for (var, (bound, strict)) in uppers {
        out.push(Constraint {
            coeffs: [(var, BigRational::one())].into(),
            k: -bound,
            strict,
        });
    }
    for (var, (bound, strict)) in lowers {
        out.push(Constraint {
            coeffs: [(var, -BigRational::one())].into(),
            k: bound,
            strict,
        });
    }
    out
}

/// Integer tightening for constraints whose variables are all Int-sorted:
/// scale to integer coefficients, divide by their gcd, and round the bound
/// to an integer (strict bounds become non-strict one step tighter). This
/// both shrinks the feasible region to the integer hull in one dimension
/// and refutes divisibility conflicts like `2x = 5` after equality splits.
fn tighten(c: &Constraint, sorts: &BTreeMap<String, Sort>) -> Constraint {
    if c.coeffs.is_empty() {
        return c.clone();
    }
    let all_int = c
        .coeffs
        .keys()
        .all(|v| sorts.get(v) == Some(&Sort::Int));
    if !all_int {
        return c.clone();
    }
    let lcm_denom: BigInt = c
        .coeffs
        .values()
        .fold(BigInt::one(), |acc, v| num::integer::lcm(acc, v.denom().clone()));
    let scale = BigRational::from(lcm_denom);
    let ints: Vec<BigInt> = c.coeffs.values().map(|v| (v * &scale).to_integer()).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, v| num::integer::gcd(acc, v.abs()));
    if g.is_zero() {
        return c.clone();
    }
    let gq = BigRational::from(g);
    // sum(a x) <= bound, with sum(a x) integer-valued.
    let bound = -(&c.k * &scale) / &gq;
    let rounded = if c.strict {
        if bound.is_integer() {
            bound - BigRational::one()
        } else {
            bound.floor()
        }
    } else {
        bound.floor()
    };
    let coeffs = c
        .coeffs
        .iter()
        .map(|(v, cf)| (v.clone(), cf * &scale / &gq))
        .collect();
    Constraint { coeffs, k: -rounded, strict: false }
}

enum FmResult {
    Infeasible,
    TooBig,
    Model(BTreeMap<String, BigRational>),
}

fn fm(cons: &[Constraint]) -> FmResult {
    let mut active: Vec<Constraint> = cons.to_vec();
    let mut stages: Vec<(String, Vec<Constraint>)> = Vec::new();
    loop {
        // Constant constraints decide themselves.
        let mut kept = Vec::new();
        for c in active {
            if c.coeffs.is_empty() {
                let violated = if c.strict { !c.k.is_negative() } else { c.k.is_positive() };
                if violated {
                    return FmResult::Infeasible;
                }
            } else {
                kept.push(c);
            }
        }
        active = kept;
        if active.is_empty() {
            break;
        }
        // Choose the variable whose elimination creates the fewest pairs.
        let var = {
            let mut counts: BTreeMap<&String, (usize, usize)> = BTreeMap::new();
            for c in &active {
                for (v, coeff) in &c.coeffs {
                    let entry = counts.entry(v).or_insert((0, 0));
                    if coeff.is_positive() {
                        entry.0 += 1;
                    } else {
                        entry.1 += 1;
                    }
                }
            }
            counts
                .iter()
                .min_by_key(|(_, (up, lo))| up * lo)
                .map(|(v, _)| (*v).clone())
                .expect("active constraints have variables")
        };
        let mut uppers = Vec::new();
        let mut lowers = Vec::new();
        let mut rest = Vec::new();
        for c in active {
            match c.coeffs.get(&var) {
                None => rest.push(c),
                Some(coeff) if coeff.is_positive() => uppers.push(c),
                Some(_) => lowers.push(c),
            }
        }
        for u in &uppers {
            for l in &lowers {
                let cu = u.coeffs[&var].clone();
                let cl = l.coeffs[&var].clone();
                // cu > 0 > cl: cancel var with positive multipliers.
                let combined_coeffs = {
                    let mut lin = Lin { coeffs: u.coeffs.clone(), k: u.k.clone() }
                        .scale(&-cl.clone());
                    lin = lin.add(&Lin { coeffs: l.coeffs.clone(), k: l.k.clone() }.scale(&cu));
                    lin
                };
                let combined = Constraint {
                    coeffs: combined_coeffs.coeffs,
                    k: combined_coeffs.k,
                    strict: u.strict || l.strict,
                }
                .normalize();
                rest.push(combined);
                if rest.len() > FM_SIZE_CAP {
                    return FmResult::TooBig;
                }
            }
        }
        let mut stage_cons = uppers;
        stage_cons.extend(lowers);
        stages.push((var, stage_cons));
        active = rest;
    }

    // Back-substitute in reverse elimination order; every variable other
    // than the stage's own was eliminated later, so it is already assigned.
    let mut model: BTreeMap<String, BigRational> = BTreeMap::new();
    for (var, stage_cons) in stages.iter().rev() {
        // A variable can drop out of the active set by cancellation without
        // being eliminated itself; it is then unconstrained in everything
        // processed so far, so any default is sound (zero keeps it integral).
        for c in stage_cons {
            for v in c.coeffs.keys() {
                if v != var {
                    model.entry(v.clone()).or_insert_with(BigRational::zero);
                }
            }
        }
        let mut lo: Option<(BigRational, bool)> = None;
        let mut hi: Option<(BigRational, bool)> = None;
        for c in stage_cons {
            let coeff = &c.coeffs[var];
            let mut others = c.k.clone();
            for (v, cf) in &c.coeffs {
                if v != var {
                    others += cf * &model[v];
                }
            }
            let bound = -others / coeff;
            if coeff.is_positive() {
                let replace = match &hi {
                    None => true,
                    Some((cur, cur_strict)) => {
                        bound < *cur || (bound == *cur && c.strict && !cur_strict)
                    }
                };
                if replace {
                    hi = Some((bound, c.strict));
                }
            } else {
                let replace = match &lo {
                    None => true,
                    Some((cur, cur_strict)) => {
                        bound > *cur || (bound == *cur && c.strict && !cur_strict)
                    }
                };
                if replace {
                    lo = Some((bound, c.strict));
                }
            }
        }
        model.insert(var.clone(), pick_value(lo, hi));
    }
    FmResult::Model(model)
}

/// A value satisfying the given bounds, preferring integers so that
/// branch-and-bound has less to do.
fn pick_value(
    lo: Option<(BigRational, bool)>,
    hi: Option<(BigRational, bool)>,
) -> BigRational {
    match (lo, hi) {
        (None, None) => BigRational::zero(),
        (Some((l, strict)), None) => {
            if !strict && l.is_integer() {
                l
            } else {
                l.floor() + BigRational::one()
            }
        }
        (None, Some((h, strict))) => {
            if !strict && h.is_integer() {
                h
            } else {
                h.ceil() - BigRational::one()
            }
        }
        (Some((l, ls)), Some((h, hs))) => {
            let mut candidate = l.ceil();
            if ls && candidate == l {
                candidate += BigRational::one();
            }
            let fits_high = if hs { candidate < h } else { candidate <= h };
            if fits_high {
                candidate
            } else {
                (l + h) / BigRational::from(BigInt::from(2))
            }
        }
    }
}
