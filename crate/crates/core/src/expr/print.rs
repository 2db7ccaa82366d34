use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::fraction::Expr;
use super::poly::{Monomial, Poly, Rat};

fn write_monomial(out: &mut String, m: &Monomial) {
    let mut first = true;
    for (a, k) in m.factors() {
        if !first {
            out.push('*');
        }
        first = false;
        write!(out, "{a}").unwrap();
        if *k > 1 {
            write!(out, "^{k}").unwrap();
        }
    }
    if let Some(e) = m.exponent() {
        if !first {
            out.push('*');
        }
        write!(out, "exp({e})").unwrap();
    }
}

fn write_rat(out: &mut String, r: &Rat) {
    if r.denom().is_one() {
        write!(out, "{}", r.numer()).unwrap();
    } else {
        write!(out, "{}/{}", r.numer(), r.denom()).unwrap();
    }
}

/// Polynomial in the expression grammar. A leading `-1` in front of a
/// power is spelled out because `-u^2` reads back as `(-u)^2`.
pub(crate) fn poly_to_string(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            write_rat(&mut out, &mag);
            continue;
        }
        let leads_with_power = m.factors().first().map(|(_, k)| *k > 1).unwrap_or(false);
        if !mag.is_one() || (i == 0 && neg && leads_with_power) {
            write_rat(&mut out, &mag);
            out.push('*');
        }
        write_monomial(&mut out, m);
    }
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = poly_to_string(self.numerator());
        if self.denominator().is_one() {
            return f.write_str(&num);
        }
        write!(f, "({})/({})", num, poly_to_string(self.denominator()))
    }
}
