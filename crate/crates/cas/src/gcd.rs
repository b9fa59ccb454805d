//! Multivariate polynomial gcd via the primitive pseudo-remainder sequence.
//!
//! The result is normalized monic (leading coefficient 1 under the term
//! order), so `gcd` is canonical: `gcd(a, b) == gcd(b, a)` and scaling either
//! input by a nonzero constant leaves it unchanged.

use crate::poly::Polynomial;

/// Monic gcd of two polynomials. `gcd(0, 0) = 0`; nonzero constants are
/// units, so any constant input forces the result to 1.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Polynomial::one();
    }
    // Recurse on the greatest used atom so coefficient polynomials shrink.
    let main = {
        let mut atoms = a.used_atoms();
        atoms.extend(b.used_atoms());
        atoms.sort();
        atoms.pop().expect("non-constant operands use at least one atom")
    };
    let da = a.degree_in(&main);
    let db = b.degree_in(&main);
    if da == 0 {
        // `a` ignores the main atom entirely, so the gcd must too: it divides
        // `a` and every coefficient of `b`.
        return gcd(a, &content(&b.univariate_in(&main)));
    }
    if db == 0 {
        return gcd(&content(&a.univariate_in(&main)), b);
    }
    let ca = content(&a.univariate_in(&main));
    let cb = content(&b.univariate_in(&main));
    let cont_gcd = gcd(&ca, &cb);
    let mut f = a.try_div_exact(&ca).expect("content divides");
    let mut g = b.try_div_exact(&cb).expect("content divides");
    if f.degree_in(&main) < g.degree_in(&main) {
        std::mem::swap(&mut f, &mut g);
    }
    let pp_gcd = loop {
        let r = pseudo_rem(&f.univariate_in(&main), &g.univariate_in(&main), &main);
        if r.is_zero() {
            break primitive_part(&g, &main);
        }
        if r.degree_in(&main) == 0 {
            // Primitive operands sharing only a degree-0 factor are coprime
            // in the main atom.
            break Polynomial::one();
        }
        f = g;
        g = primitive_part(&r, &main);
    };
    cont_gcd.mul(&pp_gcd).monic()
}

/// Gcd of the coefficients of a univariate view (the content w.r.t. that
/// atom). The coefficients never mention the atom itself.
fn content(coeffs: &[Polynomial]) -> Polynomial {
    let mut acc = Polynomial::zero();
    for c in coeffs {
        if !c.is_zero() {
            acc = gcd(&acc, c);
            if acc.as_constant().is_some() {
                return Polynomial::one();
            }
        }
    }
    acc
}

fn primitive_part(p: &Polynomial, main: &str) -> Polynomial {
    let cont = content(&p.univariate_in(main));
    p.try_div_exact(&cont).expect("content divides")
}

/// Pseudo-remainder of `f` by `g` in the given atom: repeatedly scale by the
/// leading coefficient of `g` and eliminate the top term, so every division
/// stays polynomial. Inputs are univariate views, lowest power first.
fn pseudo_rem(f: &[Polynomial], g: &[Polynomial], main: &str) -> Polynomial {
    let dg = g.len() - 1;
    let lc_g = &g[dg];
    let mut r: Vec<Polynomial> = f.to_vec();
    loop {
        while r.last().is_some_and(Polynomial::is_zero) {
            r.pop();
        }
        if r.len() <= dg {
            break;
        }
        let dr = r.len() - 1;
        let lc_r = r.pop().expect("nonempty");
        for (i, coeff) in r.iter_mut().enumerate() {
            let mut next = coeff.mul(lc_g);
            if i + dg >= dr {
                next = next.sub(&g[i + dg - dr].mul(&lc_r));
            }
            *coeff = next;
        }
    }
    Polynomial::from_univariate(&r, main)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

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
    fn univariate_common_factor() {
        // gcd(x^2 - 1, x^2 - 2x + 1) = x - 1
        let a = x().pow(2).sub(&Polynomial::one());
        let b = x().pow(2).sub(&x().scale(&rat(2))).add(&Polynomial::one());
        assert_eq!(gcd(&a, &b), x().sub(&Polynomial::one()));
    }

    #[test]
    fn coprime_gives_one() {
        let a = x().pow(2).add(&Polynomial::one());
        let b = x().sub(&Polynomial::one());
        assert_eq!(gcd(&a, &b), Polynomial::one());
    }

    #[test]
    fn multivariate_factor() {
        // gcd((x+y)*x, (x+y)*y) = x + y
        let common = x().add(&y());
        let a = common.mul(&x());
        let b = common.mul(&y());
        assert_eq!(gcd(&a, &b), common);
    }

    #[test]
    fn scaling_is_irrelevant() {
        let a = x().pow(2).sub(&Polynomial::one());
        let b = x().add(&Polynomial::one());
        let g1 = gcd(&a, &b);
        let g2 = gcd(&a.scale(&rat(7)), &b.scale(&BigRational::new((-3).into(), 5.into())));
        assert_eq!(g1, g2);
        assert_eq!(g1, x().add(&Polynomial::one()));
    }

    #[test]
    fn zero_and_constant_cases() {
        assert!(gcd(&Polynomial::zero(), &Polynomial::zero()).is_zero());
        let a = x().scale(&rat(4));
        assert_eq!(gcd(&Polynomial::zero(), &a), x());
        assert_eq!(gcd(&Polynomial::constant(rat(6)), &a), Polynomial::one());
    }

    #[test]
    fn product_divided_by_gcd_is_exact() {
        let g = x().add(&y()).pow(2);
        let a = g.mul(&x().sub(&Polynomial::one()));
        let b = g.mul(&y().add(&Polynomial::constant(rat(2))));
        let got = gcd(&a, &b);
        assert_eq!(got, g);
        assert_eq!(a.try_div_exact(&got).unwrap(), x().sub(&Polynomial::one()));
    }
}
