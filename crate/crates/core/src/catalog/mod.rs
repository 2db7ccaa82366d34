//! The two classification tables as data: systems, restrictions, operators
//! and expected verdicts, with instantiation and seeded parameter sampling.

mod phi;
mod table1;
mod table2;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::checker::{check_invariance, Verdict};
use crate::error::{Error, Result};
use crate::expr::{Atom, Dep, Expr, Rat, Scope};
use crate::jet::VectorField;
use crate::model::{DlvSystem, ManifoldKind};

pub use phi::{PhiBranch, PHI};

/// A predicate over parameters that must not hold with equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    /// `expr != 0`.
    NonZero { label: &'static str, expr: &'static str },
    /// `e1^2 + e2^2 + ... != 0`, i.e. not all of them vanish.
    NotAllZero { label: &'static str, exprs: &'static [&'static str] },
}

impl Condition {
    pub fn label(&self) -> &'static str {
        match self {
            Condition::NonZero { label, .. } | Condition::NotAllZero { label, .. } => label,
        }
    }

    /// `Ok(false)` when the predicate is violated under the bindings.
    fn holds(&self, scope: &Scope, bindings: &BTreeMap<Atom, Expr>) -> Result<bool> {
        let vanishes = |s: &str| -> Result<bool> { Ok(scope.parse(s)?.substitute(bindings)?.is_zero()) };
        Ok(match self {
            Condition::NonZero { expr, .. } => !vanishes(expr)?,
            Condition::NotAllZero { exprs, .. } => {
                let mut any = false;
                for e in exprs.iter() {
                    if !vanishes(e)? {
                        any = true;
                        break;
                    }
                }
                any
            }
        })
    }
}

/// An equality restriction, solved for one parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solve {
    pub label: &'static str,
    pub param: &'static str,
    pub value: &'static str,
}

/// Operator constructor: five coefficient templates in the expression
/// grammar. Templates may use the bindings `K12, K13, K23` (ratios
/// `(a_i - a_j)/(lambda_i - lambda_j)`) and `Phi1..Phi4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorDef {
    pub label: &'static str,
    pub coeffs: [&'static str; 5],
    pub predicates: Vec<Condition>,
}

/// Parameter overrides selecting a branch of the entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variant {
    pub label: &'static str,
    pub overrides: &'static [(&'static str, &'static str)],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Expected {
    /// Lie symmetry; by the hierarchy also every conditional kind.
    Lie,
    /// First-type conditional for some pivot, not a Lie symmetry.
    StrictlyConditional,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub table: u32,
    pub case: u32,
    /// Bracket factors of the reaction terms, `C^k = u^k * (factor_k)`.
    pub reactions: [&'static str; 3],
    pub solves: Vec<Solve>,
    pub conditions: Vec<Condition>,
    pub operators: Vec<OperatorDef>,
    /// Parameters not in the standard alphabet.
    pub extra_params: &'static [&'static str],
    pub variants: Vec<Variant>,
}

/// A concrete row: system and operators with every template resolved.
#[derive(Clone, Debug)]
pub struct Instance {
    pub table: u32,
    pub case: u32,
    pub variant: Option<&'static str>,
    pub system: DlvSystem,
    pub operators: Vec<(&'static str, VectorField)>,
    pub bindings: BTreeMap<Atom, Expr>,
}

pub fn entries() -> Vec<CatalogEntry> {
    let mut v = table1::entries();
    v.extend(table2::entries());
    v
}

pub fn table(t: u32) -> Result<Vec<CatalogEntry>> {
    let v: Vec<CatalogEntry> = entries().into_iter().filter(|e| e.table == t).collect();
    if v.is_empty() {
        return Err(Error::CaseNotFound { table: t, case: 0 });
    }
    Ok(v)
}

pub fn entry(t: u32, case: u32) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.table == t && e.case == case)
        .ok_or(Error::CaseNotFound { table: t, case })
}

fn ratio(i: usize, j: usize) -> String {
    format!("(a{i}-a{j})/(lambda{i}-lambda{j})")
}

impl CatalogEntry {
    pub fn expected(&self) -> Expected {
        if self.table == 1 {
            Expected::Lie
        } else {
            Expected::StrictlyConditional
        }
    }

    pub fn scope(&self) -> Scope {
        let mut s = Scope::new();
        for p in self.extra_params {
            s.declare_param(p);
        }
        s
    }

    /// System template with every coefficient symbolic.
    pub fn template(&self) -> Result<DlvSystem> {
        let scope = self.scope();
        let u = Expr::atom(Atom::dep(Dep::U));
        let v = Expr::atom(Atom::dep(Dep::V));
        let w = Expr::atom(Atom::dep(Dep::W));
        let mut a = [Expr::zero(), Expr::zero(), Expr::zero()];
        let mut m: [[Expr; 3]; 3] = Default::default();
        for k in 0..3 {
            let f = scope.parse(self.reactions[k])?;
            for (j, var) in [&u, &v, &w].into_iter().enumerate() {
                let c = f.coeff(var.atoms().iter().next().unwrap(), 1)?;
                m[k][j] = c;
            }
            let mut rest = f.clone();
            for var in [&u, &v, &w] {
                rest = rest.substitute_one(var.atoms().iter().next().unwrap(), &Expr::zero())?;
            }
            a[k] = rest;
            let rebuilt = &(&(&a[k] + &(&m[k][0] * &u)) + &(&m[k][1] * &v)) + &(&m[k][2] * &w);
            if rebuilt != f {
                return Err(Error::InvalidSystem(format!(
                    "reaction factor `{}` is not affine in u, v, w",
                    self.reactions[k]
                )));
            }
        }
        Ok(DlvSystem {
            lambda: std::array::from_fn(|k| Expr::param(&format!("lambda{}", k + 1))),
            a,
            m,
        })
    }

    /// Every parameter the entry mentions, except those fixed by a solved
    /// restriction.
    pub fn free_params(&self) -> Result<BTreeSet<String>> {
        let scope = self.scope();
        let mut atoms = BTreeSet::new();
        let t = self.template()?;
        for (_, e) in t.entries() {
            e.collect_atoms(&mut atoms);
        }
        for s in &self.solves {
            scope.parse(s.value)?.collect_atoms(&mut atoms);
        }
        for c in &self.conditions {
            match c {
                Condition::NonZero { expr, .. } => scope.parse(expr)?.collect_atoms(&mut atoms),
                Condition::NotAllZero { exprs, .. } => {
                    for e in exprs.iter() {
                        scope.parse(e)?.collect_atoms(&mut atoms)
                    }
                }
            }
        }
        let phi_scope = self.operator_scope(&BTreeMap::new())?;
        for op in &self.operators {
            for c in op.coeffs {
                phi_scope.parse(c)?.collect_atoms(&mut atoms);
            }
        }
        let solved: BTreeSet<&str> = self.solves.iter().map(|s| s.param).collect();
        Ok(atoms
            .into_iter()
            .filter_map(|a| match a {
                Atom::Param(p) if !solved.contains(&*p) => Some(p.to_string()),
                _ => None,
            })
            .collect())
    }

    fn operator_scope(&self, bindings: &BTreeMap<Atom, Expr>) -> Result<Scope> {
        let mut scope = self.scope();
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            scope.bind(&format!("K{i}{j}"), Scope::new().parse(&ratio(i, j))?);
        }
        for p in PHI {
            let sel = Expr::param(p.selector).substitute(bindings)?;
            scope.bind(&p.binding_name(), p.resolve(&sel)?);
        }
        Ok(scope)
    }

    pub fn variant(&self, label: &str) -> Option<&Variant> {
        self.variants.iter().find(|v| v.label == label)
    }

    /// Resolve the entry under a parameter assignment (names to values;
    /// unassigned parameters stay symbolic).
    pub fn instantiate(&self, assign: &BTreeMap<String, Expr>, variant: Option<&Variant>) -> Result<Instance> {
        let scope = self.scope();
        let mut bindings: BTreeMap<Atom, Expr> = BTreeMap::new();
        let mut given = assign.clone();
        if let Some(v) = variant {
            for (p, val) in v.overrides {
                given.insert(p.to_string(), scope.parse(val)?);
            }
        }
        let solved: BTreeSet<&str> = self.solves.iter().map(|s| s.param).collect();
        for (p, val) in &given {
            if !solved.contains(p.as_str()) {
                bindings.insert(Atom::param(p), val.clone());
            }
        }
        let closed = |b: &BTreeMap<Atom, Expr>, e: &Expr| e.substitute(b);
        for s in &self.solves {
            let value = closed(&bindings, &scope.parse(s.value)?)?;
            if let Some(g) = given.get(s.param) {
                if (g - &value).is_zero() {
                    // consistent with the restriction
                } else {
                    return Err(Error::RestrictionViolated(s.label.to_string()));
                }
            }
            // keep every right-hand side free of bound atoms
            for rhs in bindings.values_mut() {
                *rhs = rhs.substitute_one(&Atom::param(s.param), &value)?;
            }
            bindings.insert(Atom::param(s.param), value);
        }
        for c in &self.conditions {
            if !c.holds(&scope, &bindings)? {
                return Err(Error::RestrictionViolated(c.label().to_string()));
            }
        }
        let system = self.template()?.substitute(&bindings)?;
        system.to_rd()?;
        system.check_coupling()?;
        let op_scope = self.operator_scope(&bindings)?;
        let mut operators = Vec::new();
        for op in &self.operators {
            for c in &op.predicates {
                if !c.holds(&scope, &bindings)? {
                    return Err(Error::RestrictionViolated(format!("{}: {}", op.label, c.label())));
                }
            }
            let mut coeffs = Vec::with_capacity(5);
            for c in op.coeffs {
                coeffs.push(op_scope.parse(c)?.substitute(&bindings)?);
            }
            let [xi0, xi1, e1, e2, e3]: [Expr; 5] = coeffs.try_into().unwrap();
            operators.push((op.label, VectorField::new(xi0, xi1, [e1, e2, e3])?));
        }
        Ok(Instance {
            table: self.table,
            case: self.case,
            variant: variant.map(|v| v.label),
            system,
            operators,
            bindings,
        })
    }

    pub fn symbolic(&self, variant: Option<&Variant>) -> Result<Instance> {
        self.instantiate(&BTreeMap::new(), variant)
    }

    /// Deterministic rejection sampling of small rationals satisfying every
    /// restriction, plus genericity: diffusivities positive and pairwise
    /// distinct unless fixed, other parameters nonzero and the `a_k` distinct.
    pub fn sample_params(&self, seed: u64, variant: Option<&Variant>) -> Result<BTreeMap<String, Expr>> {
        const ATTEMPTS: usize = 1000;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((self.table as u64) << 40) ^ ((self.case as u64) << 32));
        let overridden: BTreeSet<&str> = variant
            .map(|v| v.overrides.iter().map(|(p, _)| *p).collect())
            .unwrap_or_default();
        let free: Vec<String> = self
            .free_params()?
            .into_iter()
            .filter(|p| !overridden.contains(p.as_str()))
            .collect();
        let symbolic = self.symbolic(variant)?;
        let lambdas = [1, 2, 3, 4, 5, 6];
        for _ in 0..ATTEMPTS {
            let mut assign = BTreeMap::new();
            for p in &free {
                let value = if p.starts_with("lambda") {
                    let n = *lambdas.choose(&mut rng).unwrap();
                    let d = rng.gen_range(1..=2);
                    Rat::new(n.into(), d.into())
                } else {
                    let mut n: i64 = rng.gen_range(1..=7);
                    if rng.gen_bool(0.5) {
                        n = -n;
                    }
                    Rat::new(n.into(), rng.gen_range(1..=3i64).into())
                };
                assign.insert(p.clone(), Expr::from_rat(value));
            }
            let Ok(inst) = self.instantiate(&assign, variant) else {
                continue;
            };
            if is_generic(&inst, &symbolic, &overridden) {
                return Ok(assign);
            }
        }
        Err(Error::SamplingExhausted(ATTEMPTS))
    }

    /// Structured-text block for the catalog listing.
    pub fn listing(&self) -> String {
        let mut s = String::new();
        writeln!(s, "[table {} case {}]", self.table, self.case).unwrap();
        let vars = ["u", "v", "w"];
        for k in 0..3 {
            writeln!(s, "C{} = {}*({})", k + 1, vars[k], self.reactions[k]).unwrap();
        }
        for r in &self.solves {
            writeln!(s, "restriction: {}  (solved: {} = {})", r.label, r.param, r.value).unwrap();
        }
        for c in &self.conditions {
            writeln!(s, "restriction: {}", c.label()).unwrap();
        }
        for op in &self.operators {
            let names = ["xi0", "xi1", "eta1", "eta2", "eta3"];
            let parts: Vec<String> = names.iter().zip(op.coeffs).map(|(n, c)| format!("{n} = {c}")).collect();
            write!(s, "operator {}: {}", op.label, parts.join("; ")).unwrap();
            for p in &op.predicates {
                write!(s, "  [requires {}]", p.label()).unwrap();
            }
            s.push('\n');
        }
        for v in &self.variants {
            let o: Vec<String> = v.overrides.iter().map(|(p, e)| format!("{p} = {e}")).collect();
            writeln!(s, "variant {}: {}", v.label, o.join(", ")).unwrap();
        }
        s
    }
}

/// Genericity of a rational instance: positive diffusivities, no
/// coincidences among the `lambda_k` or the `a_k` beyond those of the
/// symbolic row, and every bound parameter nonzero unless overridden.
fn is_generic(inst: &Instance, symbolic: &Instance, overridden: &BTreeSet<&str>) -> bool {
    let l = &inst.system.lambda;
    if l.iter().any(|x| !matches!(x.as_rat(), Some(r) if r > Rat::from_integer(0.into()))) {
        return false;
    }
    let (sl, sa) = (&symbolic.system.lambda, &symbolic.system.a);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if l[i] == l[j] && sl[i] != sl[j] {
            return false;
        }
        let a = &inst.system.a;
        if a[i] == a[j] && sa[i] != sa[j] {
            return false;
        }
    }
    inst.bindings.iter().all(|(p, v)| match p {
        Atom::Param(name) if overridden.contains(&**name) => true,
        _ => !v.is_zero(),
    })
}

/// Outcome of one operator under one manifold kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorRecord {
    pub operator: String,
    pub kind: String,
    pub pivot: Option<String>,
    pub passed: bool,
    pub witness: Option<crate::checker::Witness>,
}

/// Per-operator verdicts and the comparison with expectations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub table: u32,
    pub case: u32,
    pub variant: Option<String>,
    pub records: Vec<OperatorRecord>,
    pub mismatches: Vec<String>,
}

fn record(label: &str, v: &Verdict) -> OperatorRecord {
    let pivot = match v.kind {
        ManifoldKind::FirstType(p) => Some(p.to_string()),
        _ => None,
    };
    let kind = match v.kind {
        ManifoldKind::Lie => "lie",
        ManifoldKind::FirstType(_) => "first-type",
        ManifoldKind::NonClassical => "non-classical",
    };
    OperatorRecord {
        operator: label.to_string(),
        kind: kind.to_string(),
        pivot,
        passed: v.passed,
        witness: v.witness.clone(),
    }
}

/// Check every operator of an instance against the expected verdicts.
///
/// Lie rows must pass the Lie check, every first-type pivot and the
/// non-classical check; conditional rows must pass first-type for some
/// pivot and fail the Lie check.
pub fn verify_instance(inst: &Instance) -> Result<EntryReport> {
    let sys = inst.system.to_rd()?;
    let expected = if inst.table == 1 { Expected::Lie } else { Expected::StrictlyConditional };
    let mut records = Vec::new();
    let mut mismatches = Vec::new();
    for (label, q) in &inst.operators {
        let lie = check_invariance(&sys, q, ManifoldKind::Lie)?;
        records.push(record(label, &lie));
        // conditional kinds need xi0 != 0; a Lie operator without d_t is
        // checked through d_t + Q, itself a Lie operator
        let shifted;
        let (cond_label, cond_q) = if q.xi0.is_zero() && expected == Expected::Lie {
            shifted = q.add(&VectorField::parse("1", "0", ["0", "0", "0"])?);
            (format!("d_t + {label}"), &shifted)
        } else {
            (label.to_string(), q)
        };
        let mut first = Vec::new();
        let mut nc = None;
        if !cond_q.xi0.is_zero() {
            for p in Dep::ALL {
                let v = check_invariance(&sys, cond_q, ManifoldKind::FirstType(p))?;
                records.push(record(&cond_label, &v));
                first.push(v.passed);
            }
            let v = check_invariance(&sys, cond_q, ManifoldKind::NonClassical)?;
            records.push(record(&cond_label, &v));
            nc = Some(v.passed);
        }
        match expected {
            Expected::Lie => {
                if !lie.passed {
                    mismatches.push(format!("{label}: expected a Lie symmetry"));
                }
                if first.iter().any(|p| !p) {
                    mismatches.push(format!("{cond_label}: Lie symmetry fails a first-type check"));
                }
                if nc == Some(false) {
                    mismatches.push(format!("{cond_label}: Lie symmetry fails the non-classical check"));
                }
            }
            Expected::StrictlyConditional => {
                if lie.passed {
                    mismatches.push(format!("{label}: unexpectedly a Lie symmetry"));
                }
                if !first.iter().any(|p| *p) {
                    mismatches.push(format!("{label}: no pivot gives a first-type symmetry"));
                }
            }
        }
    }
    Ok(EntryReport {
        table: inst.table,
        case: inst.case,
        variant: inst.variant.map(str::to_string),
        records,
        mismatches,
    })
}

pub fn verify_entry(entry: &CatalogEntry, assign: &BTreeMap<String, Expr>, variant: Option<&Variant>) -> Result<EntryReport> {
    verify_instance(&entry.instantiate(assign, variant)?)
}

/// Structured-text listing of the whole catalog.
pub fn listing() -> String {
    let mut s = String::new();
    for e in entries() {
        s.push_str(&e.listing());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_sizes() {
        assert_eq!(table(1).unwrap().len(), 8);
        assert_eq!(table(2).unwrap().len(), 9);
        assert!(matches!(table(3), Err(Error::CaseNotFound { .. })));
        assert!(matches!(entry(2, 10), Err(Error::CaseNotFound { .. })));
    }

    #[test]
    fn case2_with_given_parameters() {
        let e = entry(2, 2).unwrap();
        let mut assign = BTreeMap::new();
        for (k, v) in [("a1", 1), ("a2", 2), ("a3", 3), ("lambda1", 1), ("lambda2", 2), ("lambda3", 3)] {
            assign.insert(k.to_string(), Expr::int(v));
        }
        let inst = e.instantiate(&assign, None).unwrap();
        assert_eq!(inst.system.reaction(0), "u*(1+u+v+w)".parse().unwrap());
        assert_eq!(inst.operators.len(), 6);
    }

    #[test]
    fn restriction_violations_are_named() {
        let e = entry(2, 1).unwrap();
        let mut assign = BTreeMap::new();
        assign.insert("a1".to_string(), Expr::int(2));
        assign.insert("a2".to_string(), Expr::int(2));
        match e.instantiate(&assign, None) {
            Err(Error::RestrictionViolated(msg)) => assert!(msg.contains("a1 != a2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sampling_is_deterministic_and_solves_restrictions() {
        let e = entry(2, 4).unwrap();
        let a = e.sample_params(7, None).unwrap();
        assert_eq!(a, e.sample_params(7, None).unwrap());
        let inst = e.instantiate(&a, None).unwrap();
        let s = &inst.system;
        let r = &(&(&(&s.lambda[1] - &s.lambda[2]) * &s.a[0]) - &(&(&s.lambda[0] - &s.lambda[2]) * &s.a[1]))
            + &(&(&s.lambda[0] - &s.lambda[1]) * &s.a[2]);
        assert!(r.is_zero());
        let t14 = entry(1, 4).unwrap();
        for seed in 0..3 {
            let inst = t14.instantiate(&t14.sample_params(seed, None).unwrap(), None).unwrap();
            assert!(inst.system.lambda[1].is_one() && inst.system.lambda[2].is_one());
        }
    }

    #[test]
    fn listing_has_one_block_per_case() {
        let l = listing();
        assert_eq!(l.matches("[table ").count(), 17);
    }
}
