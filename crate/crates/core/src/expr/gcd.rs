//! Multivariate polynomial gcd over the rationals.
//!
//! Inputs must be free of exponentials. When one argument mentions atoms the
//! other lacks, the gcd is folded over the coefficient groups of those atoms;
//! the expensive primitive remainder sequence only runs when both sides share
//! the same atom set, which in practice means two small polynomials.

use std::collections::BTreeSet;

use super::atom::Atom;
use super::poly::{Monomial, Poly};

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    debug_assert!(!a.has_exp() && !b.has_exp());
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.len() == 1 {
        return monomial_gcd(&a.terms()[0].0, b);
    }
    if b.len() == 1 {
        return monomial_gcd(&b.terms()[0].0, a);
    }
    let va = a.vars();
    let vb = b.vars();
    if !va.is_subset(&vb) {
        return fold_groups(a, &vb, b);
    }
    if !vb.is_subset(&va) {
        return fold_groups(b, &va, a);
    }
    // Same atom set: pick the atom of smallest combined degree as main variable.
    let x = va
        .iter()
        .min_by_key(|x| a.degree_in(x) + b.degree_in(x))
        .cloned()
        .expect("non-constant polynomial has atoms");
    let ca = content(a, &x);
    let cb = content(b, &x);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, &x);
    c.mul(&g).monic()
}

/// gcd of a single monomial with a polynomial: the monomial of minimum
/// exponents that divides every term.
fn monomial_gcd(m: &Monomial, p: &Poly) -> Poly {
    let mut g = m.without_exp();
    for (n, _) in p.terms() {
        g = g.gcd(n);
        if g.is_one() {
            break;
        }
    }
    Poly::term(g, num_traits::One::one())
}

/// gcd(a, b) where `a` mentions atoms outside `keep` (the atoms of `b`):
/// the gcd cannot contain those atoms, so it divides every coefficient group.
fn fold_groups(a: &Poly, keep: &BTreeSet<Atom>, b: &Poly) -> Poly {
    let groups = a.group_outside(keep);
    let mut g = b.monic();
    for (_, part) in groups {
        g = gcd(&part, &g);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

/// Content with respect to `x`: gcd of the coefficients of powers of `x`.
pub fn content(p: &Poly, x: &Atom) -> Poly {
    let coeffs = p.coeffs_in(x);
    let mut nonzero: Vec<Poly> = coeffs.into_iter().filter(|c| !c.is_zero()).collect();
    nonzero.sort_by_key(|c| c.len());
    let mut g = Poly::zero();
    for c in nonzero {
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    if g.is_zero() {
        Poly::one()
    } else {
        g
    }
}

fn primitive_part(p: &Poly, x: &Atom) -> Poly {
    let c = content(p, x);
    p.div_exact(&c).expect("content divides")
}

/// Pseudo-remainder of `f` by `g` in the main variable `x`.
fn pseudo_remainder(f: &Poly, g: &Poly, x: &Atom) -> Poly {
    let dg = g.degree_in(x);
    let lg = g.coeffs_in(x).pop().expect("nonzero");
    let mut r = f.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(x);
        if dr < dg {
            return r;
        }
        let lr = r.coeffs_in(x).pop().expect("nonzero");
        let shift = Poly::term(
            Monomial::from_factors(vec![(x.clone(), dr - dg)]),
            num_traits::One::one(),
        );
        r = r.mul(&lg).sub(&lr.mul(&shift).mul(g));
    }
}

/// gcd of two polynomials that are primitive in `x` (coefficients in the
/// remaining atoms have trivial gcd).
fn primitive_prs(a: Poly, b: Poly, x: &Atom) -> Poly {
    let (mut f, mut g) = if a.degree_in(x) >= b.degree_in(x) {
        (a, b)
    } else {
        (b, a)
    };
    if g.degree_in(x) == 0 {
        return Poly::one();
    }
    loop {
        let r = pseudo_remainder(&f, &g, x);
        if r.is_zero() {
            return g.monic();
        }
        if r.degree_in(x) == 0 {
            return Poly::one();
        }
        f = g;
        g = primitive_part(&r, x);
    }
}
