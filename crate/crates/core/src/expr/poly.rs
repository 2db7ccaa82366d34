use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::atom::Atom;
use super::fraction::Expr;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Power product of atoms times an optional exponential `exp(e)`.
///
/// Factors are kept sorted by atom with positive exponents. The exponent,
/// when present, is a canonical nonzero expression free of exponentials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub(crate) factors: SmallVec<[(Atom, u32); 4]>,
    pub(crate) exp: Option<Arc<Expr>>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial {
            factors: SmallVec::new(),
            exp: None,
        }
    }

    pub fn atom(a: Atom) -> Monomial {
        let mut factors = SmallVec::new();
        factors.push((a, 1));
        Monomial { factors, exp: None }
    }

    pub fn from_factors(mut list: Vec<(Atom, u32)>) -> Monomial {
        list.retain(|(_, k)| *k > 0);
        list.sort_by(|a, b| a.0.cmp(&b.0));
        let mut factors: SmallVec<[(Atom, u32); 4]> = SmallVec::new();
        for (a, k) in list {
            match factors.last_mut() {
                Some(last) if last.0 == a => last.1 += k,
                _ => factors.push((a, k)),
            }
        }
        Monomial { factors, exp: None }
    }

    pub fn exponential(e: Expr) -> Monomial {
        Monomial {
            factors: SmallVec::new(),
            exp: if e.is_zero() { None } else { Some(Arc::new(e)) },
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.exp.is_none()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.factors
    }

    pub fn exponent(&self) -> Option<&Expr> {
        self.exp.as_deref()
    }

    pub fn degree(&self, a: &Atom) -> u32 {
        self.factors
            .iter()
            .find(|(b, _)| b == a)
            .map(|(_, k)| *k)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|(_, k)| *k).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors: SmallVec<[(Atom, u32); 4]> =
            SmallVec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    factors.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    factors.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend(a[i..].iter().cloned());
        factors.extend(b[j..].iter().cloned());
        let exp = match (&self.exp, &other.exp) {
            (None, None) => None,
            (Some(e), None) | (None, Some(e)) => Some(e.clone()),
            (Some(e1), Some(e2)) => {
                let s = e1.as_ref() + e2.as_ref();
                if s.is_zero() {
                    None
                } else {
                    Some(Arc::new(s))
                }
            }
        };
        Monomial { factors, exp }
    }

    /// `self / other` when `other` divides `self` (exponential parts must match
    /// or `other` must carry none).
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let exp = match (&self.exp, &other.exp) {
            (e, None) => e.clone(),
            (Some(e1), Some(e2)) => {
                let d = e1.as_ref() - e2.as_ref();
                if d.is_zero() {
                    None
                } else {
                    Some(Arc::new(d))
                }
            }
            (None, Some(_)) => return None,
        };
        let mut factors: SmallVec<[(Atom, u32); 4]> = SmallVec::new();
        let mut j = 0;
        for (a, k) in &self.factors {
            let mut sub = 0;
            if j < other.factors.len() && &other.factors[j].0 == a {
                sub = other.factors[j].1;
                j += 1;
            } else if j < other.factors.len() && other.factors[j].0 < *a {
                return None;
            }
            if sub > *k {
                return None;
            }
            if k - sub > 0 {
                factors.push((a.clone(), k - sub));
            }
        }
        if j < other.factors.len() {
            return None;
        }
        Some(Monomial { factors, exp })
    }

    /// Exponent-wise minimum over the exponential-free parts.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut factors: SmallVec<[(Atom, u32); 4]> = SmallVec::new();
        for (a, k) in &self.factors {
            let m = other.degree(a).min(*k);
            if m > 0 {
                factors.push((a.clone(), m));
            }
        }
        Monomial { factors, exp: None }
    }

    pub fn without_exp(&self) -> Monomial {
        Monomial {
            factors: self.factors.clone(),
            exp: None,
        }
    }

    pub fn with_exp(&self, exp: Option<Arc<Expr>>) -> Monomial {
        Monomial {
            factors: self.factors.clone(),
            exp,
        }
    }

    /// Split into the part made of atoms satisfying `keep` and the rest
    /// (the exponential goes with the rest).
    pub fn split(&self, keep: impl Fn(&Atom) -> bool) -> (Monomial, Monomial) {
        let mut a = SmallVec::new();
        let mut b = SmallVec::new();
        for f in &self.factors {
            if keep(&f.0) {
                a.push(f.clone());
            } else {
                b.push(f.clone());
            }
        }
        (
            Monomial {
                factors: a,
                exp: None,
            },
            Monomial {
                factors: b,
                exp: self.exp.clone(),
            },
        )
    }
}

/// Lexicographic monomial order: atoms compared in ascending atom order,
/// the monomial with the larger exponent on the first differing atom wins.
/// The exponential part breaks remaining ties.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.factors, &other.factors);
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (None, None) => break,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((x, k)), Some((y, l))) => match x.cmp(y) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match k.cmp(l) {
                        Ordering::Equal => {}
                        o => return o,
                    },
                },
            }
            i += 1;
        }
        self.exp.cmp(&other.exp)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
/// Terms are sorted in descending monomial order and never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: Vec<(Monomial, Rat)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn atom(a: Atom) -> Poly {
        Poly {
            terms: vec![(Monomial::atom(a), Rat::one())],
        }
    }

    pub fn term(m: Monomial, c: Rat) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Poly {
        let mut acc: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(v) => *v += c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Poly {
            terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    fn from_sorted(terms: Vec<(Monomial, Rat)>) -> Poly {
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn lead(&self) -> Option<&(Monomial, Rat)> {
        self.terms.first()
    }

    pub fn has_exp(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.exp.is_some())
    }

    pub fn neg(&self) -> Poly {
        Poly::from_sorted(self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly::from_sorted(self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect())
    }

    pub fn mul_monomial(&self, m: &Monomial, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        if m.exp.is_none() {
            // Multiplying by an exponential-free monomial preserves the order.
            return Poly::from_sorted(
                self.terms.iter().map(|(n, c)| (n.mul(m), c * k)).collect(),
            );
        }
        Poly::from_terms(self.terms.iter().map(|(n, c)| (n.mul(m), c * k)))
    }

    /// Leading coefficient scaled to one.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly::from_sorted(out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.mul_monomial(m, c);
        }
        let mut acc: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m1, c1) in &small.terms {
            for (m2, c2) in &big.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Atoms occurring as factors (exponents are not searched).
    pub fn vars(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for (m, _) in &self.terms {
            for (a, _) in &m.factors {
                out.insert(a.clone());
            }
        }
        out
    }

    /// Atoms occurring anywhere, including inside exponents.
    pub fn atoms_deep(&self, out: &mut BTreeSet<Atom>) {
        for (m, _) in &self.terms {
            for (a, _) in &m.factors {
                out.insert(a.clone());
            }
            if let Some(e) = &m.exp {
                e.collect_atoms(out);
            }
        }
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.terms.iter().any(|(m, _)| m.degree(a) > 0)
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree(a)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `a`: `self = sum_k out[k] * a^k`.
    pub fn coeffs_in(&self, a: &Atom) -> Vec<Poly> {
        let deg = self.degree_in(a) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rat)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let k = m.degree(a);
            let rest = if k == 0 {
                m.clone()
            } else {
                let mut f = m.factors.clone();
                f.retain(|(b, _)| b != a);
                Monomial {
                    factors: f,
                    exp: m.exp.clone(),
                }
            };
            buckets[k as usize].push((rest, c.clone()));
        }
        buckets
            .into_iter()
            .map(|b| {
                // Removing a single atom from every term of one bucket keeps
                // the relative order intact.
                Poly::from_sorted(b)
            })
            .collect()
    }

    /// Group terms by the part of each monomial built from atoms outside
    /// `keep`; each group is returned as a polynomial in the `keep` atoms.
    pub fn group_outside(&self, keep: &BTreeSet<Atom>) -> BTreeMap<Monomial, Poly> {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, Rat)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inside, outside) = m.split(|a| keep.contains(a));
            groups.entry(outside).or_default().push((inside, c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, v)| (k, Poly::from_terms(v)))
            .collect()
    }

    /// Group terms by their exponential part.
    pub fn exp_groups(&self) -> BTreeMap<Option<Arc<Expr>>, Poly> {
        let mut groups: BTreeMap<Option<Arc<Expr>>, Vec<(Monomial, Rat)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups
                .entry(m.exp.clone())
                .or_default()
                .push((m.without_exp(), c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, v)| (k, Poly::from_sorted(v)))
            .collect()
    }

    /// Exact division by an exponential-free divisor; `None` if not exact.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        debug_assert!(!divisor.has_exp());
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = divisor.lead().cloned()?;
        let inv = lc.recip();
        if divisor.len() == 1 {
            let mut out = Vec::with_capacity(self.len());
            for (m, c) in &self.terms {
                out.push((m.div(&lm)?, c * &inv));
            }
            return Some(Poly::from_sorted(out));
        }
        let mut rem = self.clone();
        let mut quotient: Vec<(Monomial, Rat)> = Vec::new();
        while let Some((m, c)) = rem.lead().cloned() {
            let qm = m.div(&lm)?;
            let qc = &c * &inv;
            rem = rem.sub(&divisor.mul_monomial(&qm, &qc));
            quotient.push((qm, qc));
        }
        Some(Poly::from_terms(quotient))
    }

    /// Multiply the leading coefficient sign away: returns `(sign, |self|)`.
    pub fn lead_sign(&self) -> i32 {
        match self.lead() {
            Some((_, c)) if c.is_negative() => -1,
            Some(_) => 1,
            None => 0,
        }
    }

    /// Map over coefficients and monomials, re-sorting afterwards.
    pub fn map_terms(&self, f: impl Fn(&Monomial, &Rat) -> (Monomial, Rat)) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| f(m, c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::atom::Coord;

    fn p(a: &str) -> Poly {
        Poly::atom(match a {
            "u" => Atom::Coord(Coord::U),
            "v" => Atom::Coord(Coord::V),
            "t" => Atom::Coord(Coord::T),
            name => Atom::param(name),
        })
    }

    #[test]
    fn difference_of_squares_divides() {
        let (u, v) = (p("u"), p("v"));
        let num = u.mul(&u).sub(&v.mul(&v));
        let den = u.sub(&v);
        assert_eq!(num.div_exact(&den).unwrap(), u.add(&v));
        assert!(u.add(&Poly::one()).div_exact(&den).is_none());
    }

    #[test]
    fn lex_order_is_multiplicative() {
        let (u, v, t) = (p("u"), p("v"), p("t"));
        let a = u.mul(&v).lead().unwrap().0.clone();
        let b = v.mul(&v).lead().unwrap().0.clone();
        let m = t.lead().unwrap().0.clone();
        assert_eq!(a.cmp(&b), a.mul(&m).cmp(&b.mul(&m)));
    }

    #[test]
    fn coefficients_in_atom_recombine() {
        let (u, v) = (p("u"), p("v"));
        let e = u.mul(&u).mul(&v).add(&u.scale(&rat_int(3))).add(&v);
        let cs = e.coeffs_in(&Atom::Coord(Coord::U));
        assert_eq!(cs.len(), 3);
        let mut back = Poly::zero();
        for (k, c) in cs.iter().enumerate() {
            back = back.add(&c.mul(&u.pow(k as u32)));
        }
        assert_eq!(back, e);
    }
}
