//! Determining equations: split restricted residuals of the general operator
//! by jet monomials, then autoreduce the resulting linear PDE system for the
//! unknown coefficients.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_traits::One;

use crate::checker::{jet_atoms, restricted_residuals};
use crate::error::Result;
use crate::expr::{Atom, Coord, Expr, FuncAtom, Poly};
use crate::jet::VectorField;
use crate::model::{ManifoldKind, RdSystem};

const NAMES: [&str; 5] = ["xi0", "xi1", "eta1", "eta2", "eta3"];

/// Ranking of derivative atoms: total order, then function, then tag.
fn rank(f: &FuncAtom) -> (u32, usize, [u8; 5]) {
    let idx = NAMES.iter().position(|n| **n == *f.name).unwrap_or(NAMES.len());
    (f.order(), idx, f.tag)
}

fn func_atoms(e: &Expr) -> Vec<FuncAtom> {
    e.atoms()
        .into_iter()
        .filter_map(|a| match a {
            Atom::Func(f) => Some(f),
            _ => None,
        })
        .collect()
}

fn leading(e: &Expr) -> Option<FuncAtom> {
    func_atoms(e).into_iter().max_by_key(rank)
}

fn param_only(e: &Expr) -> bool {
    e.atoms().iter().all(Atom::is_param)
}

/// Canonical representative of the equation `e = 0`.
///
/// Parameter-only content is removed (parameters are generic, hence
/// nonzero); with `strip_xi0`, so are powers of `xi0`. The result is then
/// divided by the coefficient of its leading derivative when that is a pure
/// parameter expression, and made monic otherwise.
pub fn normalize(e: &Expr, strip_xi0: bool) -> Option<Expr> {
    if e.is_zero() {
        return None;
    }
    let mut p = e.numerator().clone();
    let params: BTreeSet<Atom> = p.vars().into_iter().filter(Atom::is_param).collect();
    let mut content = Poly::zero();
    for (_, part) in p.group_outside(&params) {
        content = crate::expr::gcd::gcd(&content, &part);
        if content.is_constant() {
            break;
        }
    }
    if !content.is_constant() {
        p = p.div_exact(&content).expect("content divides");
    }
    if strip_xi0 {
        let xi0 = Atom::Func(FuncAtom::new("xi0", &Coord::ALL));
        let k = p.terms().iter().map(|(m, _)| m.degree(&xi0)).min().unwrap_or(0);
        if k > 0 {
            let m = crate::expr::Monomial::from_factors(vec![(xi0, k)]);
            p = p.div_exact(&Poly::term(m, One::one())).expect("power of xi0 divides");
        }
    }
    let e = Expr::from_poly(p);
    if let Some(lead) = leading(&e) {
        let a = Atom::Func(lead);
        if e.degree_in(&a) == Some(1) {
            let lc = e.coeff(&a, 1).expect("polynomial");
            if param_only(&lc) {
                return Some(e.checked_div(&lc).expect("nonzero leading coefficient"));
            }
        }
    }
    Some(Expr::from_poly(e.numerator().monic()))
}

/// Print `e = 0` canonically: integer coefficients without common factor,
/// terms by decreasing rank of their leading derivative, first term positive.
pub fn format_equation(e: &Expr) -> String {
    use num_integer::Integer;
    let p = e.numerator();
    let mut den = num_bigint::BigInt::one();
    let mut num = num_bigint::BigInt::from(0);
    for (_, c) in p.terms() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    if num == num_bigint::BigInt::from(0) {
        return "0".into();
    }
    let e = Expr::from_poly(p.scale(&crate::expr::Rat::new(den, num)));
    let funcs: BTreeSet<Atom> = func_atoms(&e).into_iter().map(Atom::Func).collect();
    let parts = match e.collect(&funcs) {
        Ok(p) => p,
        Err(_) => return e.to_string(),
    };
    let key = |m: &crate::expr::Monomial| {
        m.factors()
            .iter()
            .filter_map(|(a, _)| match a {
                Atom::Func(f) => Some(rank(f)),
                _ => None,
            })
            .max()
    };
    let mut terms: Vec<(&crate::expr::Monomial, &Expr)> = parts.iter().collect();
    terms.sort_by(|a, b| key(b.0).cmp(&key(a.0)).then_with(|| b.0.cmp(a.0)));
    let negative = |c: &Expr| c.to_string().starts_with('-');
    let flip = terms.first().map(|(_, c)| negative(c)).unwrap_or(false);
    let mut out = String::new();
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let c = if flip { -c } else { c.clone() };
        let mono = if m.is_one() {
            String::new()
        } else {
            Expr::from_poly(Poly::term(m.clone(), One::one())).to_string()
        };
        let (neg, mag) = if negative(&c) { (true, -&c) } else { (false, c) };
        let ms = mag.to_string();
        let simple = !ms[1..].contains(['+', '-']);
        let body = match (mono.is_empty(), ms.as_str()) {
            (true, _) => ms.clone(),
            (false, "1") => mono,
            (false, _) if simple => format!("{ms}*{mono}"),
            (false, _) => format!("({ms})*{mono}"),
        };
        match (i, neg) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    out
}

/// Raw determining equations: numerators of the jet-monomial coefficients of
/// the restricted residuals of the general operator.
pub fn raw_equations(sys: &RdSystem, kind: ManifoldKind) -> Result<Vec<Expr>> {
    let q = VectorField::unknown();
    let restricted = restricted_residuals(sys, &q, kind)?;
    let jets = jet_atoms();
    let mut out = Vec::new();
    for r in &restricted {
        for (_, c) in r.collect(&jets)? {
            out.push(Expr::from_poly(c.numerator().clone()));
        }
    }
    Ok(out)
}

struct Reducer {
    strip_xi0: bool,
    rules: BTreeMap<FuncAtom, Expr>,
    cache: HashMap<(FuncAtom, FuncAtom), Expr>,
}

impl Reducer {
    fn derivative_of_rule(&mut self, lead: &FuncAtom, target: &FuncAtom) -> Expr {
        let key = (lead.clone(), target.clone());
        if let Some(e) = self.cache.get(&key) {
            return e.clone();
        }
        let mut r = self.rules[lead].clone();
        for c in Coord::ALL {
            for _ in lead.tag[c.index()]..target.tag[c.index()] {
                r = r.diff(&Atom::Coord(c));
            }
        }
        self.cache.insert(key, r.clone());
        r
    }

    fn rule_for(&self, f: &FuncAtom) -> Option<FuncAtom> {
        self.rules.keys().find(|l| f.is_derivative_of(l)).cloned()
    }

    fn reduce(&mut self, e: &Expr) -> Expr {
        let mut e = e.clone();
        loop {
            let mut bindings = BTreeMap::new();
            for f in func_atoms(&e) {
                if let Some(lead) = self.rule_for(&f) {
                    let r = self.derivative_of_rule(&lead, &f);
                    bindings.insert(Atom::Func(f), r);
                }
            }
            if bindings.is_empty() {
                return e;
            }
            e = e.substitute_unchecked(&bindings).expect("no division by zero");
        }
    }

    fn run(mut self, raw: Vec<Expr>) -> BTreeSet<Expr> {
        let mut pending: VecDeque<Expr> = raw.into();
        let mut out: Vec<Expr> = Vec::new();
        while let Some(e) = pending.pop_front() {
            let Some(e) = normalize(&self.reduce(&e), self.strip_xi0) else {
                continue;
            };
            let Some(lead) = leading(&e) else {
                out.push(e);
                continue;
            };
            let a = Atom::Func(lead.clone());
            let is_rule = e.degree_in(&a) == Some(1) && e.coeff(&a, 1).map(|c| c.is_one()).unwrap_or(false);
            if !is_rule {
                out.push(e);
                continue;
            }
            let rhs = &Expr::atom(a) - &e;
            let affected: Vec<FuncAtom> = self.rules.keys().filter(|l| l.is_derivative_of(&lead)).cloned().collect();
            for l in affected {
                let r = self.rules.remove(&l).unwrap();
                pending.push_back(&Expr::atom(Atom::Func(l)) - &r);
            }
            let (moved, kept): (Vec<Expr>, Vec<Expr>) = out
                .into_iter()
                .partition(|o| func_atoms(o).iter().any(|f| f.is_derivative_of(&lead)));
            out = kept;
            pending.extend(moved);
            self.rules.insert(lead.clone(), rhs);
            self.cache.clear();
            let others: Vec<FuncAtom> = self.rules.keys().filter(|l| **l != lead).cloned().collect();
            for l in others {
                let r = self.rules.remove(&l).unwrap();
                let r = self.reduce(&r);
                self.rules.insert(l, r);
                self.cache.clear();
            }
        }
        let mut set = BTreeSet::new();
        for (l, r) in &self.rules {
            if let Some(n) = normalize(&(&Expr::atom(Atom::Func(l.clone())) - r), self.strip_xi0) {
                set.insert(n);
            }
        }
        for o in out {
            if let Some(n) = normalize(&o, self.strip_xi0) {
                set.insert(n);
            }
        }
        set
    }
}

/// Autoreduced determining equations in normal form.
pub fn autoreduce(raw: Vec<Expr>, strip_xi0: bool) -> BTreeSet<Expr> {
    Reducer {
        strip_xi0,
        rules: BTreeMap::new(),
        cache: HashMap::new(),
    }
    .run(raw)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminingSystem {
    pub kind: ManifoldKind,
    pub raw: Vec<Expr>,
    pub equations: BTreeSet<Expr>,
}

impl DeterminingSystem {
    fn strip_xi0(&self) -> bool {
        !matches!(self.kind, ManifoldKind::Lie)
    }

    /// Membership up to a nonzero constant factor.
    pub fn contains(&self, e: &Expr) -> bool {
        normalize(e, self.strip_xi0())
            .map(|n| self.equations.contains(&n))
            .unwrap_or(true)
    }

    /// Equations in print order: shorter first, then lexicographic.
    pub fn sorted(&self) -> Vec<String> {
        let mut v: Vec<String> = self.equations.iter().map(format_equation).collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    /// Every equation with the unknown functions replaced by the
    /// coefficients of a concrete operator.
    pub fn evaluate_at(&self, q: &VectorField) -> Vec<Expr> {
        self.equations.iter().map(|e| evaluate_at(e, q)).collect()
    }
}

/// Replace every unknown-function atom by the matching derivative of a
/// coefficient of `q`.
pub fn evaluate_at(e: &Expr, q: &VectorField) -> Expr {
    let mut bindings = BTreeMap::new();
    for f in func_atoms(e) {
        let Some(idx) = NAMES.iter().position(|n| **n == *f.name) else {
            continue;
        };
        let mut v = q.coefficients()[idx].1.clone();
        for c in Coord::ALL {
            for _ in 0..f.tag[c.index()] {
                v = v.diff(&Atom::Coord(c));
            }
        }
        bindings.insert(Atom::Func(f), v);
    }
    e.substitute(&bindings).expect("operator coefficients carry no unknown functions")
}

pub fn determining_system(sys: &RdSystem, kind: ManifoldKind) -> Result<DeterminingSystem> {
    let raw = raw_equations(sys, kind)?;
    let equations = autoreduce(raw.clone(), !matches!(kind, ManifoldKind::Lie));
    Ok(DeterminingSystem { kind, raw, equations })
}

pub fn determining_equations(sys: &RdSystem) -> Result<DeterminingSystem> {
    determining_system(sys, ManifoldKind::Lie)
}

pub fn first_type_determining_equations(sys: &RdSystem, pivot: crate::expr::Dep) -> Result<DeterminingSystem> {
    determining_system(sys, ManifoldKind::FirstType(pivot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DlvSystem;

    fn e(s: &str) -> Expr {
        s.parse().unwrap()
    }

    #[test]
    fn normalization_is_up_to_constants() {
        let a = normalize(&e("(lambda1-lambda2)*(2*xi1_x - xi0_t)"), false).unwrap();
        assert_eq!(a, e("xi1_x - 1/2*xi0_t"));
        assert_eq!(normalize(&e("-3*xi0_u"), false).unwrap(), e("xi0_u"));
        assert_eq!(normalize(&e("xi0^2*eta1_uu"), true).unwrap(), e("eta1_uu"));
        assert!(normalize(&Expr::zero(), false).is_none());
    }

    #[test]
    fn equation_printing() {
        assert_eq!(format_equation(&e("xi1_x - 1/2*xi0_t")), "2*xi1_x - xi0_t");
        assert_eq!(format_equation(&e("-lambda1/2*xi1_t - eta1_xu")), "2*eta1_xu + lambda1*xi1_t");
        assert_eq!(format_equation(&e("(a1-a2)*eta1 + xi0_t")), "xi0_t + (a1 - a2)*eta1");
    }

    #[test]
    fn lie_system_for_symbolic_dlv() {
        let sys = DlvSystem::symbolic().to_rd().unwrap();
        let d = determining_equations(&sys).unwrap();
        for s in ["xi0_x", "xi0_u", "eta1_uu", "2*xi1_x - xi0_t", "2*eta1_xu + lambda1*xi1_t"] {
            assert!(d.contains(&e(s)), "missing {s}");
        }
    }
}
