use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::atom::{Atom, Coord, FuncAtom};
use super::gcd::gcd;
use super::poly::{rat_int, Monomial, Poly, Rat};
use crate::error::{Error, Result};

/// Canonical symbolic expression: a reduced fraction `num / den`.
///
/// Invariants: `den` is nonzero, free of exponentials and monic;
/// `gcd(num, den) = 1` (taken group-wise over the exponentials of `num`);
/// zero is `0 / 1`. Two expressions are equal iff they are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl Expr {
    pub fn zero() -> Expr {
        Expr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Expr {
        Expr::from_rat(Rat::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::from_rat(rat_int(n))
    }

    pub fn from_rat(r: Rat) -> Expr {
        Expr {
            num: Poly::constant(r),
            den: Poly::one(),
        }
    }

    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::from_rat(super::poly::rat(n, d))
    }

    pub fn atom(a: Atom) -> Expr {
        Expr {
            num: Poly::atom(a),
            den: Poly::one(),
        }
    }

    pub fn param(name: &str) -> Expr {
        Expr::atom(Atom::param(name))
    }

    pub fn coord(c: Coord) -> Expr {
        Expr::atom(Atom::Coord(c))
    }

    pub fn func(f: FuncAtom) -> Expr {
        Expr::atom(Atom::Func(f))
    }

    pub fn from_poly(p: Poly) -> Expr {
        Expr {
            num: p,
            den: Poly::one(),
        }
    }

    /// `exp(e)`; the exponent may not contain exponentials itself.
    pub fn exp(e: &Expr) -> Result<Expr> {
        if e.has_exp() {
            return Err(Error::NestedExponential(e.to_string()));
        }
        Ok(Expr::from_poly(Poly::term(
            Monomial::exponential(e.clone()),
            Rat::one(),
        )))
    }

    /// Build `num / den` and bring it to canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Expr> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = move_exp_to_numerator(num, den)?;
        Ok(reduce(num, den))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_rat().is_some()
    }

    pub fn has_exp(&self) -> bool {
        self.num.has_exp()
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        self.num.atoms_deep(out);
        self.den.atoms_deep(out);
    }

    /// Every atom occurring anywhere, including inside exponents.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.atoms().contains(a)
    }

    pub fn contains_any(&self, pred: impl Fn(&Atom) -> bool) -> bool {
        self.atoms().iter().any(pred)
    }

    pub fn pow(&self, k: u32) -> Expr {
        Expr {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    pub fn checked_div(&self, rhs: &Expr) -> Result<Expr> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = rhs.recip()?;
        Ok(self * &inv)
    }

    pub fn recip(&self) -> Result<Expr> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (num, den) = move_exp_to_numerator(self.den.clone(), self.num.clone())?;
        // Already coprime; only the normalisation of `den` is needed.
        Ok(normalise_sign(num, den))
    }

    pub fn scale(&self, k: &Rat) -> Expr {
        if k.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// Partial derivative with respect to one atom.
    ///
    /// Differentiating by a coordinate also reaches unknown functions that
    /// depend on it (`d(xi0)/du = xi0_u`); every other pair of atoms is
    /// independent.
    pub fn diff(&self, a: &Atom) -> Expr {
        let dn = diff_poly(&self.num, a);
        if self.den.is_constant() {
            return if self.den.is_one() {
                dn
            } else {
                dn.scale(&self.den.as_constant().unwrap().recip())
            };
        }
        let dd = diff_poly(&self.den, a);
        if dd.is_zero() {
            return &dn * &Expr::from_parts(Poly::one(), self.den.clone()).unwrap();
        }
        // (n' d - n d') / d^2
        let d = Expr::from_poly(self.den.clone());
        let n = Expr::from_poly(self.num.clone());
        let top = &(&dn * &d) - &(&n * &dd);
        top.checked_div(&Expr::from_poly(self.den.mul(&self.den)))
            .expect("denominator is nonzero")
    }

    /// Simultaneous substitution of atoms by expressions.
    ///
    /// Fails if a bound atom occurs in any right-hand side, since one pass
    /// would then leave it in the result.
    pub fn substitute(&self, bindings: &BTreeMap<Atom, Expr>) -> Result<Expr> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        for rhs in bindings.values() {
            for a in rhs.atoms() {
                if bindings.contains_key(&a) {
                    return Err(Error::CyclicBinding(a.to_string()));
                }
            }
        }
        self.substitute_unchecked(bindings)
    }

    pub(crate) fn substitute_unchecked(&self, bindings: &BTreeMap<Atom, Expr>) -> Result<Expr> {
        let touched = |p: &Poly| {
            let mut atoms = BTreeSet::new();
            p.atoms_deep(&mut atoms);
            atoms.iter().any(|a| bindings.contains_key(a))
        };
        let num_touched = touched(&self.num);
        let den_touched = touched(&self.den);
        if !num_touched && !den_touched {
            return Ok(self.clone());
        }
        let mut cache = HashMap::new();
        let n = if num_touched {
            subst_poly(&self.num, bindings, &mut cache)?
        } else {
            Expr::from_poly(self.num.clone())
        };
        let d = if den_touched {
            subst_poly(&self.den, bindings, &mut cache)?
        } else {
            Expr::from_poly(self.den.clone())
        };
        n.checked_div(&d)
    }

    /// Simultaneous substitution; right-hand sides may mention bound atoms,
    /// which are not substituted again (a change of variables).
    pub fn change_variables(&self, bindings: &BTreeMap<Atom, Expr>) -> Result<Expr> {
        self.substitute_unchecked(bindings)
    }

    pub fn substitute_one(&self, a: &Atom, value: &Expr) -> Result<Expr> {
        let mut b = BTreeMap::new();
        b.insert(a.clone(), value.clone());
        self.substitute(&b)
    }

    /// Split `self = sum monomial * coefficient` over the atoms in `split`.
    ///
    /// Monomials are power products of split atoms; coefficients are free of
    /// them. Zero yields an empty map.
    pub fn collect(&self, split: &BTreeSet<Atom>) -> Result<BTreeMap<Monomial, Expr>> {
        for a in self.den.vars() {
            if split.contains(&a) {
                return Err(Error::NotPolynomial(a.to_string()));
            }
        }
        for (m, _) in self.num.terms() {
            if let Some(e) = m.exponent() {
                if let Some(a) = e.atoms().into_iter().find(|a| split.contains(a)) {
                    return Err(Error::NotPolynomial(a.to_string()));
                }
            }
        }
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, Rat)>> = BTreeMap::new();
        for (m, c) in self.num.terms() {
            let (key, rest) = m.split(|a| split.contains(a));
            groups.entry(key).or_default().push((rest, c.clone()));
        }
        let mut out = BTreeMap::new();
        for (key, terms) in groups {
            let coeff = Expr::from_parts(Poly::from_terms(terms), self.den.clone())?;
            if !coeff.is_zero() {
                out.insert(key, coeff);
            }
        }
        Ok(out)
    }

    /// Split by exponential factor: `self = sum exp(e) * coefficient`, with
    /// the key `None` holding the exponential-free part.
    pub fn collect_exp(&self) -> BTreeMap<Option<Arc<Expr>>, Expr> {
        let mut out = BTreeMap::new();
        for (k, p) in self.num.exp_groups() {
            let c = Expr::from_parts(p, self.den.clone()).expect("nonzero denominator");
            out.insert(k, c);
        }
        out
    }

    /// Rebuild from a collected map.
    pub fn recombine(parts: &BTreeMap<Monomial, Expr>) -> Expr {
        let mut acc = Expr::zero();
        for (m, c) in parts {
            acc = &acc + &(&Expr::from_poly(Poly::term(m.clone(), Rat::one())) * c);
        }
        acc
    }

    /// Degree in `a` when the expression is polynomial in it.
    pub fn degree_in(&self, a: &Atom) -> Option<u32> {
        if self.den.contains_atom(a) {
            return None;
        }
        Some(self.num.degree_in(a))
    }

    /// Coefficient of `a^k` when the expression is polynomial in `a`.
    pub fn coeff(&self, a: &Atom, k: u32) -> Result<Expr> {
        if self.den.contains_atom(a) {
            return Err(Error::NotPolynomial(a.to_string()));
        }
        let cs = self.num.coeffs_in(a);
        match cs.get(k as usize) {
            None => Ok(Expr::zero()),
            Some(c) => Expr::from_parts(c.clone(), self.den.clone()),
        }
    }

    /// Evaluate to a float, resolving atoms through `lookup`.
    pub fn eval_f64(&self, lookup: &dyn Fn(&Atom) -> Option<f64>) -> Result<f64> {
        let n = eval_poly(&self.num, lookup)?;
        let d = eval_poly(&self.den, lookup)?;
        if d == 0.0 {
            return Err(Error::Evaluation("denominator vanished".into()));
        }
        Ok(n / d)
    }
}

fn eval_poly(p: &Poly, lookup: &dyn Fn(&Atom) -> Option<f64>) -> Result<f64> {
    use num_traits::ToPrimitive;
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut v = c
            .to_f64()
            .ok_or_else(|| Error::Evaluation("coefficient out of range".into()))?;
        for (a, k) in m.factors() {
            let x = lookup(a).ok_or_else(|| Error::Evaluation(format!("no value for `{a}`")))?;
            v *= x.powi(*k as i32);
        }
        if let Some(e) = m.exponent() {
            v *= e.eval_f64(lookup)?.exp();
        }
        acc += v;
    }
    Ok(acc)
}

/// A denominator may carry at most one exponential group; it is moved to the
/// numerator as `exp(-e)`.
fn move_exp_to_numerator(num: Poly, den: Poly) -> Result<(Poly, Poly)> {
    if !den.has_exp() {
        return Ok((num, den));
    }
    let groups = den.exp_groups();
    if groups.len() != 1 {
        return Err(Error::ExponentialDenominator(
            Expr {
                num: den.clone(),
                den: Poly::one(),
            }
            .to_string(),
        ));
    }
    let (e, plain) = groups.into_iter().next().unwrap();
    let e = e.expect("group with exponential");
    let inv = Monomial::exponential(-(e.as_ref()));
    Ok((num.mul_monomial(&inv, &Rat::one()), plain))
}

/// gcd of a (possibly exponential) numerator with an exponential-free
/// denominator, taken over every exponential group of the numerator.
fn gcd_with_den(num: &Poly, den: &Poly) -> Poly {
    if den.is_constant() {
        return Poly::one();
    }
    if !num.has_exp() {
        return gcd(num, den);
    }
    let mut g = den.monic();
    for (_, part) in num.exp_groups() {
        g = gcd(&part, &g);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn reduce(num: Poly, den: Poly) -> Expr {
    if num.is_zero() {
        return Expr::zero();
    }
    let g = gcd_with_den(&num, &den);
    if g.is_one() {
        return normalise_sign(num, den);
    }
    let num = num.div_exact(&g).expect("gcd divides numerator");
    let den = den.div_exact(&g).expect("gcd divides denominator");
    normalise_sign(num, den)
}

fn normalise_sign(num: Poly, den: Poly) -> Expr {
    if num.is_zero() {
        return Expr::zero();
    }
    let lc = den.lead().expect("nonzero denominator").1.clone();
    if lc.is_one() {
        return Expr { num, den };
    }
    let inv = lc.recip();
    Expr {
        num: num.scale(&inv),
        den: den.scale(&inv),
    }
}

/// Derivative of a polynomial, returned as an expression because
/// exponents may carry denominators.
fn diff_poly(p: &Poly, a: &Atom) -> Expr {
    let mut plain: Vec<(Monomial, Rat)> = Vec::new();
    let mut exp_terms: BTreeMap<Arc<Expr>, Vec<(Monomial, Rat)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        for (i, (b, k)) in m.factors().iter().enumerate() {
            let db: Option<Atom> = if b == a {
                None
            } else {
                match (a, b) {
                    (Atom::Coord(coord), Atom::Func(f)) => match f.derivative(*coord) {
                        Some(df) => Some(Atom::Func(df)),
                        None => continue,
                    },
                    _ => continue,
                }
            };
            let mut factors: Vec<(Atom, u32)> = m.factors().to_vec();
            factors[i].1 -= 1;
            if let Some(db) = db {
                factors.push((db, 1));
            }
            let mono = Monomial::from_factors(factors).with_exp(m.exp.clone());
            plain.push((mono, c * rat_int(*k as i64)));
        }
        if let Some(e) = &m.exp {
            exp_terms
                .entry(e.clone())
                .or_default()
                .push((m.clone(), c.clone()));
        }
    }
    let mut out = Expr::from_poly(Poly::from_terms(plain));
    for (e, terms) in exp_terms {
        let de = e.diff(a);
        if de.is_zero() {
            continue;
        }
        out = &out + &(&Expr::from_poly(Poly::from_terms(terms)) * &de);
    }
    out
}

/// Accumulates a sum of fractions over a running lcm of denominators and
/// reduces once at the end.
struct FracSum {
    num: Poly,
    den: Poly,
}

impl FracSum {
    fn new() -> FracSum {
        FracSum {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    fn add(&mut self, e: &Expr) {
        if e.is_zero() {
            return;
        }
        if e.den == self.den {
            self.num = self.num.add(&e.num);
            return;
        }
        let g = gcd(&self.den, &e.den);
        let mine = e.den.div_exact(&g).expect("gcd divides");
        let theirs = self.den.div_exact(&g).expect("gcd divides");
        self.num = self.num.mul(&mine).add(&e.num.mul(&theirs));
        self.den = self.den.mul(&mine);
    }

    fn finish(self) -> Expr {
        reduce(self.num, self.den)
    }
}

fn subst_poly(
    p: &Poly,
    bindings: &BTreeMap<Atom, Expr>,
    cache: &mut HashMap<(Atom, u32), Expr>,
) -> Result<Expr> {
    let mut sum = FracSum::new();
    let mut untouched: Vec<(Monomial, Rat)> = Vec::new();
    for (m, c) in p.terms() {
        let bound = m.factors().iter().any(|(a, _)| bindings.contains_key(a));
        let exp_bound = m
            .exponent()
            .map(|e| e.atoms().iter().any(|a| bindings.contains_key(a)))
            .unwrap_or(false);
        if !bound && !exp_bound {
            untouched.push((m.clone(), c.clone()));
            continue;
        }
        let mut keep: Vec<(Atom, u32)> = Vec::new();
        let mut value = Expr::from_rat(c.clone());
        for (a, k) in m.factors() {
            match bindings.get(a) {
                Some(rhs) => {
                    let key = (a.clone(), *k);
                    let pw = match cache.get(&key) {
                        Some(v) => v.clone(),
                        None => {
                            let v = rhs.pow(*k);
                            cache.insert(key, v.clone());
                            v
                        }
                    };
                    value = &value * &pw;
                }
                None => keep.push((a.clone(), *k)),
            }
        }
        let mut mono = Monomial::from_factors(keep);
        if let Some(e) = m.exponent() {
            if exp_bound {
                let e2 = e.substitute_unchecked(bindings)?;
                value = &value * &Expr::exp(&e2)?;
            } else {
                mono = mono.with_exp(m.exp.clone());
            }
        }
        value = &value * &Expr::from_poly(Poly::term(mono, Rat::one()));
        sum.add(&value);
    }
    sum.add(&Expr::from_poly(Poly::from_terms(untouched)));
    Ok(sum.finish())
}

fn add_expr(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        if a.den.is_one() {
            return Expr {
                num: a.num.add(&b.num),
                den: Poly::one(),
            };
        }
        return reduce(a.num.add(&b.num), a.den.clone());
    }
    let g = gcd(&a.den, &b.den);
    if g.is_one() {
        // Coprime denominators of reduced fractions give a reduced sum.
        let num = a.num.mul(&b.den).add(&b.num.mul(&a.den));
        if num.is_zero() {
            return Expr::zero();
        }
        return normalise_sign(num, a.den.mul(&b.den));
    }
    let ad = a.den.div_exact(&g).expect("gcd divides");
    let bd = b.den.div_exact(&g).expect("gcd divides");
    let num = a.num.mul(&bd).add(&b.num.mul(&ad));
    if num.is_zero() {
        return Expr::zero();
    }
    let den = a.den.mul(&bd);
    // Any common factor of num and den divides g.
    let h = gcd_with_den(&num, &g);
    if h.is_one() {
        return normalise_sign(num, den);
    }
    normalise_sign(
        num.div_exact(&h).expect("gcd divides"),
        den.div_exact(&h).expect("gcd divides"),
    )
}

fn mul_expr(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return Expr {
            num: a.num.mul(&b.num),
            den: Poly::one(),
        };
    }
    let g1 = gcd_with_den(&a.num, &b.den);
    let g2 = gcd_with_den(&b.num, &a.den);
    let (an, bd) = if g1.is_one() {
        (a.num.clone(), b.den.clone())
    } else {
        (
            a.num.div_exact(&g1).expect("gcd divides"),
            b.den.div_exact(&g1).expect("gcd divides"),
        )
    };
    let (bn, ad) = if g2.is_one() {
        (b.num.clone(), a.den.clone())
    } else {
        (
            b.num.div_exact(&g2).expect("gcd divides"),
            a.den.div_exact(&g2).expect("gcd divides"),
        )
    };
    normalise_sign(an.mul(&bn), ad.mul(&bd))
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        add_expr(self, rhs)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        add_expr(&self, &rhs)
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        add_expr(self, &-rhs)
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        add_expr(&self, &-&rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        mul_expr(self, rhs)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        mul_expr(&self, &rhs)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl Zero for Expr {
    fn zero() -> Self {
        Expr::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Expr {
        s.parse().unwrap()
    }

    #[test]
    fn additive_inverse_is_zero() {
        assert!((&e("u") + &e("-u")).is_zero());
    }

    #[test]
    fn expansion_and_cancellation() {
        assert_eq!(&e("u+v") * &e("u-v"), e("u^2-v^2"));
        assert_eq!(e("u^2-v^2").checked_div(&e("u-v")).unwrap(), e("u+v"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(e("u").checked_div(&e("v-v")), Err(Error::DivisionByZero));
    }

    #[test]
    fn exponentials_merge_and_cancel() {
        let a = e("exp(2*t)*exp(-2*t)");
        assert!(a.is_one());
        assert_eq!(e("exp(t)*exp(x)"), e("exp(t+x)"));
        assert_eq!(e("exp(0)"), Expr::one());
    }

    #[test]
    fn division_by_single_exponential_moves_it_up() {
        let q = e("u").checked_div(&e("2*exp(a1*t)")).unwrap();
        assert_eq!(q, e("1/2*u*exp(-a1*t)"));
        let bad = e("u").checked_div(&e("exp(t)+exp(2*t)"));
        assert!(matches!(bad, Err(Error::ExponentialDenominator(_))));
    }

    #[test]
    fn derivative_rules() {
        let t = Atom::Coord(Coord::T);
        let u = Atom::Coord(Coord::U);
        assert_eq!(e("u*(a1+b1*u)").diff(&u), e("a1+2*b1*u"));
        assert_eq!(e("exp(c*t)").diff(&t), e("c*exp(c*t)"));
        assert_eq!(e("xi0").diff(&u), e("xi0_u"));
        assert_eq!(e("1/(lambda1-u)").diff(&u), e("1/(lambda1-u)^2"));
        assert_eq!(e("exp(t/lambda3)").diff(&t), e("exp(t/lambda3)/lambda3"));
    }

    #[test]
    fn substitution_examples() {
        let mut b = BTreeMap::new();
        b.insert(Atom::jet(super::super::atom::Dep::U, super::super::atom::JetIndex::XX), e("lambda1*u_t - u*(a1+b1*u)"));
        assert_eq!(e("u_xx").substitute(&b).unwrap(), e("lambda1*u_t - u*(a1+b1*u)"));
        assert_eq!(e("u+v").substitute(&BTreeMap::new()).unwrap(), e("u+v"));
        let mut z = BTreeMap::new();
        z.insert(Atom::jet(super::super::atom::Dep::U, super::super::atom::JetIndex::T), Expr::zero());
        assert!(e("u_t*u_x").substitute(&z).unwrap().is_zero());
    }

    #[test]
    fn cyclic_bindings_are_rejected() {
        let mut b = BTreeMap::new();
        b.insert(Atom::Coord(Coord::U), e("v"));
        b.insert(Atom::Coord(Coord::V), e("u"));
        assert!(matches!(e("u").substitute(&b), Err(Error::CyclicBinding(_))));
    }

    #[test]
    fn substitution_reaches_exponents() {
        let mut b = BTreeMap::new();
        b.insert(Atom::param("a1"), Expr::int(3));
        assert_eq!(e("exp(a1*t)").substitute(&b).unwrap(), e("exp(3*t)"));
        b.insert(Atom::param("a1"), Expr::zero());
        assert_eq!(e("u*exp(a1*t)").substitute(&b).unwrap(), e("u"));
    }

    #[test]
    fn collect_examples() {
        let split: BTreeSet<Atom> = [e("u_x"), e("u_t")]
            .iter()
            .map(|x| x.atoms().into_iter().next().unwrap())
            .collect();
        let parts = e("xi0_u*u_x*u_t + eta1_t").collect(&split).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&e("u_x*u_t").numerator().terms()[0].0], e("xi0_u"));
        assert_eq!(parts[&Monomial::one()], e("eta1_t"));
        assert!(Expr::zero().collect(&split).unwrap().is_empty());
        let sq = e("(u_t+u_x)^2").collect(&split).unwrap();
        assert_eq!(sq.values().cloned().collect::<Vec<_>>(), vec![Expr::int(1), Expr::int(2), Expr::int(1)]);
    }

    #[test]
    fn collect_rejects_split_atom_in_denominator() {
        let split: BTreeSet<Atom> = e("u_t").atoms();
        assert!(matches!(e("1/u_t").collect(&split), Err(Error::NotPolynomial(_))));
    }
}
