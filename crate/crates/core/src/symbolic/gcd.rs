//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive: a polynomial is viewed as univariate in its first variable with
//! coefficients in the remaining ones, and the gcd of primitive parts is
//! computed with a primitive pseudo-remainder sequence.

use num_traits::One;

use super::{Monomial, Poly, Rational, Var};

/// Greatest common divisor, normalized to leading coefficient one.
/// `gcd(0, 0)` is zero.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    gcd_inner(a, b).monic()
}

fn gcd_inner(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.num_terms() == 1 {
        return monomial_gcd(a, b);
    }
    if b.num_terms() == 1 {
        return monomial_gcd(b, a);
    }
    if b.div_exact(a).is_some() {
        return a.clone();
    }
    if a.div_exact(b).is_some() {
        return b.clone();
    }
    let va = a.vars();
    let vb = b.vars();
    // A variable present in only one argument can be eliminated through content.
    if let Some(v) = va.symmetric_difference(&vb).next() {
        let (with, without) = if va.contains(v) { (a, b) } else { (b, a) };
        let c = content(with, v);
        return gcd_inner(&c, without);
    }
    let v = va.iter().next().expect("nonconstant").clone();
    let ca = content(a, &v);
    let cb = content(b, &v);
    let pa = primitive_part(a, &ca);
    let pb = primitive_part(b, &cb);
    let c = gcd_inner(&ca, &cb);
    let g = primitive_prs(pa, pb, &v);
    &c * &g
}

/// Gcd of a single term with an arbitrary polynomial.
fn monomial_gcd(m: &Poly, p: &Poly) -> Poly {
    let (mono, _) = m.leading_term().expect("nonzero");
    let mut powers: Vec<(Var, u32)> = mono.powers().to_vec();
    for (pm, _) in p.terms() {
        for (v, e) in powers.iter_mut() {
            *e = (*e).min(pm.exponent(v));
        }
    }
    Poly::term(Rational::one(), Monomial::from_powers(powers))
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content(p: &Poly, v: &Var) -> Poly {
    let coeffs = p.univariate_coefficients(v);
    let mut g = Poly::zero();
    for c in coeffs.iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd_inner(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g.monic()
}

fn primitive_part(p: &Poly, cont: &Poly) -> Poly {
    if cont.is_constant() {
        return p.clone();
    }
    p.div_exact(cont).expect("content divides")
}

fn primitive_prs(mut a: Poly, mut b: Poly, v: &Var) -> Poly {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        if b.degree_in(v) == 0 {
            return Poly::one();
        }
        let r = pseudo_remainder(&a, &b, v);
        a = b;
        if r.is_zero() {
            b = Poly::zero();
        } else {
            let c = content(&r, v);
            b = primitive_part(&r, &c);
        }
    }
    let c = content(&a, v);
    primitive_part(&a, &c)
}

fn pseudo_remainder(a: &Poly, b: &Poly, v: &Var) -> Poly {
    let db = b.degree_in(v);
    let bc = b.univariate_coefficients(v);
    let lb = bc.last().expect("nonzero").clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.univariate_coefficients(v).pop().expect("nonzero");
        let shift = Monomial::from_powers(vec![(v.clone(), dr - db)]);
        let t = (&lr * b).mul_monomial(&shift, &Rational::one());
        r = &(&lb * &r) - &t;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rat;

    fn v(n: &str) -> Poly {
        Poly::var(Var::new(n))
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let (x, y) = (v("x"), v("y"));
        let a = &(&x * &x) - &(&y * &y);
        let b = (&x - &y).scale(&rat(3));
        assert_eq!(poly_gcd(&a, &b), &x - &y);
    }

    #[test]
    fn gcd_with_hidden_common_factor() {
        let (x, y, z) = (v("x"), v("y"), v("z"));
        let f = &(&x * &y) + &z;
        let a = &f * &(&x + &Poly::one());
        let b = &f * &(&y - &z);
        assert_eq!(poly_gcd(&a, &b), f.monic());
    }

    #[test]
    fn coprime_gives_one() {
        let (x, y) = (v("x"), v("y"));
        assert!(poly_gcd(&(&x + &y), &(&x - &y)).is_one());
        assert_eq!(poly_gcd(&(&x * &y), &(&x * &x)), x);
    }
}
