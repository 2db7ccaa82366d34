//! Reaction-diffusion systems, their residuals, and rewrite rules that
//! restrict expressions to the solution manifold and its conditional
//! submanifolds.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Atom, Dep, Expr, Indep, JetIndex, Scope};
use crate::jet::{total_derivative, VectorField};

/// `lambda_k * (k-th time jet) = (k-th xx jet) + C^k(u, v, w)`, k = 1..3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdSystem {
    pub lambda: [Expr; 3],
    pub c: [Expr; 3],
}

impl RdSystem {
    pub fn new(lambda: [Expr; 3], c: [Expr; 3]) -> Result<RdSystem> {
        for (k, l) in lambda.iter().enumerate() {
            if l.is_zero() {
                return Err(Error::InvalidSystem(format!("lambda{} is zero", k + 1)));
            }
            if l.atoms().iter().any(|a| !a.is_param()) {
                return Err(Error::InvalidSystem(format!(
                    "lambda{} must be constant",
                    k + 1
                )));
            }
        }
        for (k, ck) in c.iter().enumerate() {
            if let Some(a) = ck
                .atoms()
                .into_iter()
                .find(|a| a.is_jet() || *a == Atom::t() || *a == Atom::x())
            {
                return Err(Error::InvalidSystem(format!(
                    "reaction term C{} depends on {a}",
                    k + 1
                )));
            }
        }
        Ok(RdSystem { lambda, c })
    }

    /// `S_k = lambda_k k_t - k_xx - C^k`.
    pub fn residuals(&self) -> [Expr; 3] {
        std::array::from_fn(|k| {
            let d = Dep::from_index(k);
            let lt = &self.lambda[k] * &Expr::atom(Atom::Jet(d, JetIndex::T));
            &(&lt - &Expr::atom(Atom::Jet(d, JetIndex::XX))) - &self.c[k]
        })
    }
}

/// Diffusive Lotka-Volterra system:
/// `C^k = u^k (a_k + m[k][0] u + m[k][1] v + m[k][2] w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DlvSystem {
    pub lambda: [Expr; 3],
    pub a: [Expr; 3],
    pub m: [[Expr; 3]; 3],
}

/// Names of the interaction coefficients, row-major.
pub const INTERACTION_NAMES: [[&str; 3]; 3] = [["b1", "c1", "d1"], ["b2", "c2", "d2"], ["b3", "c3", "d3"]];

impl DlvSystem {
    /// Every coefficient a named parameter.
    pub fn symbolic() -> DlvSystem {
        DlvSystem {
            lambda: std::array::from_fn(|k| Expr::param(&format!("lambda{}", k + 1))),
            a: std::array::from_fn(|k| Expr::param(&format!("a{}", k + 1))),
            m: std::array::from_fn(|i| std::array::from_fn(|j| Expr::param(INTERACTION_NAMES[i][j]))),
        }
    }

    pub fn reaction(&self, k: usize) -> Expr {
        let vars = [Expr::atom(Atom::dep(Dep::U)), Expr::atom(Atom::dep(Dep::V)), Expr::atom(Atom::dep(Dep::W))];
        let mut inner = self.a[k].clone();
        for j in 0..3 {
            inner = &inner + &(&self.m[k][j] * &vars[j]);
        }
        &vars[k] * &inner
    }

    pub fn to_rd(&self) -> Result<RdSystem> {
        RdSystem::new(self.lambda.clone(), std::array::from_fn(|k| self.reaction(k)))
    }

    pub fn residuals(&self) -> [Expr; 3] {
        self.to_rd().map(|s| s.residuals()).unwrap_or_else(|_| {
            RdSystem {
                lambda: self.lambda.clone(),
                c: std::array::from_fn(|k| self.reaction(k)),
            }
            .residuals()
        })
    }

    /// The exclusion of semi-coupled systems, checked where the relevant
    /// coefficients are explicit rationals.
    pub fn check_coupling(&self) -> Result<()> {
        let pairs = [(0, 1, 2), (1, 0, 2), (2, 0, 1)];
        for (row, i, j) in pairs {
            let p = &self.m[row][i];
            let q = &self.m[row][j];
            if p.is_zero() && q.is_zero() {
                return Err(Error::InvalidSystem(format!(
                    "equation {} is semi-coupled ({} = {} = 0)",
                    row + 1,
                    INTERACTION_NAMES[row][i],
                    INTERACTION_NAMES[row][j]
                )));
            }
        }
        Ok(())
    }

    pub fn substitute(&self, bindings: &BTreeMap<Atom, Expr>) -> Result<DlvSystem> {
        let s = |e: &Expr| e.substitute(bindings);
        Ok(DlvSystem {
            lambda: [s(&self.lambda[0])?, s(&self.lambda[1])?, s(&self.lambda[2])?],
            a: [s(&self.a[0])?, s(&self.a[1])?, s(&self.a[2])?],
            m: [
                [s(&self.m[0][0])?, s(&self.m[0][1])?, s(&self.m[0][2])?],
                [s(&self.m[1][0])?, s(&self.m[1][1])?, s(&self.m[1][2])?],
                [s(&self.m[2][0])?, s(&self.m[2][1])?, s(&self.m[2][2])?],
            ],
        })
    }

    /// Named coefficients in file order.
    pub fn entries(&self) -> Vec<(String, &Expr)> {
        let mut out = Vec::new();
        for k in 0..3 {
            out.push((format!("lambda{}", k + 1), &self.lambda[k]));
        }
        for k in 0..3 {
            out.push((format!("a{}", k + 1), &self.a[k]));
        }
        for (i, row) in INTERACTION_NAMES.iter().enumerate() {
            for (j, name) in row.iter().enumerate() {
                out.push((name.to_string(), &self.m[i][j]));
            }
        }
        out
    }
}

impl fmt::Display for DlvSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, e) in self.entries() {
            writeln!(f, "{name} = {e}")?;
        }
        Ok(())
    }
}

/// A system read from a definition file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemDef {
    Dlv(DlvSystem),
    Rd(RdSystem),
}

impl SystemDef {
    pub fn rd(&self) -> Result<RdSystem> {
        match self {
            SystemDef::Dlv(s) => s.to_rd(),
            SystemDef::Rd(s) => Ok(s.clone()),
        }
    }
}

/// Parse a system definition: one `key = expression` per line, `#` comments.
///
/// Keys `lambda1..3`, `a1..3`, `b1..3`, `c1..3`, `d1..3` describe a DLV
/// system; omitted DLV keys stay symbolic. Keys `C1..C3` give general
/// reaction terms instead (omitted ones are zero). `params = p, q` declares
/// extra parameter names.
pub fn parse_system(text: &str) -> Result<SystemDef> {
    let mut scope = Scope::new();
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected `key = expression`", lineno + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k == "params" {
            for p in v.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                scope.declare_param(p);
            }
            continue;
        }
        entries.push((lineno + 1, k.to_string(), v.to_string()));
    }
    let mut values: BTreeMap<String, Expr> = BTreeMap::new();
    for (lineno, k, v) in entries {
        let e = scope
            .parse(&v)
            .map_err(|e| Error::Config(format!("line {lineno}: {e}")))?;
        if values.insert(k.clone(), e).is_some() {
            return Err(Error::Config(format!("line {lineno}: duplicate key `{k}`")));
        }
    }
    let general = values.keys().any(|k| matches!(k.as_str(), "C1" | "C2" | "C3"));
    let take = |values: &mut BTreeMap<String, Expr>, k: &str, default: Expr| {
        values.remove(k).unwrap_or(default)
    };
    let lambda: [Expr; 3] = std::array::from_fn(|k| {
        let n = format!("lambda{}", k + 1);
        values.remove(&n).unwrap_or_else(|| Expr::param(&n))
    });
    let def = if general {
        let c: [Expr; 3] = std::array::from_fn(|k| take(&mut values, &format!("C{}", k + 1), Expr::zero()));
        SystemDef::Rd(RdSystem::new(lambda, c)?)
    } else {
        let a: [Expr; 3] = std::array::from_fn(|k| {
            let n = format!("a{}", k + 1);
            take(&mut values, &n, Expr::param(&n))
        });
        let m: [[Expr; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let n = INTERACTION_NAMES[i][j];
                take(&mut values, n, Expr::param(n))
            })
        });
        let sys = DlvSystem { lambda, a, m };
        sys.to_rd()?;
        SystemDef::Dlv(sys)
    };
    if let Some(k) = values.keys().next() {
        return Err(Error::Config(format!("unknown key `{k}`")));
    }
    Ok(def)
}

/// Which invariant-surface conditions are adjoined to the system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "pivot")]
pub enum ManifoldKind {
    Lie,
    FirstType(Dep),
    NonClassical,
}

impl Serialize for Dep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.letter().to_string())
    }
}

impl<'de> Deserialize<'de> for Dep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Dep, D::Error> {
        let s = String::deserialize(d)?;
        let mut cs = s.chars();
        match (cs.next().and_then(Dep::from_letter), cs.next()) {
            (Some(dep), None) => Ok(dep),
            _ => Err(serde::de::Error::custom(format!("unknown variable `{s}`"))),
        }
    }
}

impl ManifoldKind {
    pub fn constrained(&self) -> Vec<Dep> {
        match self {
            ManifoldKind::Lie => vec![],
            ManifoldKind::FirstType(p) => vec![*p],
            ManifoldKind::NonClassical => Dep::ALL.to_vec(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ManifoldKind::Lie => "lie".into(),
            ManifoldKind::FirstType(p) => format!("first-type({p})"),
            ManifoldKind::NonClassical => "non-classical".into(),
        }
    }
}

impl fmt::Display for ManifoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `Q(var) = xi0 var_t + xi1 var_x - eta^var`.
pub fn invariant_surface(q: &VectorField, var: Dep) -> Expr {
    let jt = Expr::atom(Atom::Jet(var, JetIndex::T));
    let jx = Expr::atom(Atom::Jet(var, JetIndex::X));
    &(&(&q.xi0 * &jt) + &(&q.xi1 * &jx)) - &q.eta[var.index()]
}

/// Ordered rewrite levels; each level is one simultaneous substitution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ManifoldRules {
    pub levels: Vec<BTreeMap<Atom, Expr>>,
}

impl ManifoldRules {
    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        let mut out = e.clone();
        for level in &self.levels {
            out = out.substitute(level)?;
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All rules flattened, in application order.
    pub fn rules(&self) -> impl Iterator<Item = (&Atom, &Expr)> {
        self.levels.iter().flat_map(|l| l.iter())
    }
}

/// Solve the linear equation `e = 0` for the atom `a`.
fn solve_linear(e: &Expr, a: &Atom) -> Result<Expr> {
    let c1 = e.coeff(a, 1)?;
    if e.degree_in(a) != Some(1) || c1.is_zero() {
        return Err(Error::InvalidField(format!("constraint is not linear in {a}")));
    }
    let c0 = e.coeff(a, 0)?;
    (-&c0).checked_div(&c1)
}

/// Rewrite rules restricting jet-space expressions to the manifold of the
/// given kind.
///
/// Levels, applied in order: second time jets and mixed jets of
/// constrained variables from `D_t Q(p) = 0` and `D_x Q(p) = 0`; the `xx`
/// jets of every variable from `S_k = 0`; the time jets of constrained
/// variables from `Q(p) = 0`.
pub fn manifold_rules(sys: &RdSystem, q: &VectorField, kind: ManifoldKind) -> Result<ManifoldRules> {
    let constrained = kind.constrained();
    if !constrained.is_empty() {
        if q.xi0.is_zero() {
            return Err(Error::ZeroXi0);
        }
        if !q.xi0.is_constant() {
            log::warn!("xi0 = {} is not constant; restricted residuals assume it is nonzero", q.xi0);
        }
    }
    let mut tt = BTreeMap::new();
    let mut xt = BTreeMap::new();
    let mut tl = BTreeMap::new();
    for &p in &constrained {
        let qp = invariant_surface(q, p);
        tt.insert(Atom::Jet(p, JetIndex::TT), solve_linear(&total_derivative(&qp, Indep::T)?, &Atom::Jet(p, JetIndex::TT))?);
        xt.insert(Atom::Jet(p, JetIndex::XT), solve_linear(&total_derivative(&qp, Indep::X)?, &Atom::Jet(p, JetIndex::XT))?);
        tl.insert(Atom::Jet(p, JetIndex::T), solve_linear(&qp, &Atom::Jet(p, JetIndex::T))?);
    }
    let mut xx = BTreeMap::new();
    for d in Dep::ALL {
        let k = d.index();
        let rhs = &(&sys.lambda[k] * &Expr::atom(Atom::Jet(d, JetIndex::T))) - &sys.c[k];
        xx.insert(Atom::Jet(d, JetIndex::XX), rhs);
    }
    let mut levels = Vec::new();
    if !tt.is_empty() {
        levels.push(tt);
        levels.push(xt);
    }
    levels.push(xx);
    if !tl.is_empty() {
        levels.push(tl);
    }
    Ok(ManifoldRules { levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Expr {
        s.parse().unwrap()
    }

    #[test]
    fn symbolic_residual() {
        let s = DlvSystem::symbolic().residuals();
        assert_eq!(s[0], e("lambda1*u_t - u_xx - u*(a1+b1*u+c1*v+d1*w)"));
        assert_eq!(s[2], e("lambda3*w_t - w_xx - w*(a3+b3*u+c3*v+d3*w)"));
    }

    #[test]
    fn heat_residual() {
        let sys = RdSystem::new([e("1"), e("1"), e("1")], [e("0"), e("0"), e("0")]).unwrap();
        assert_eq!(sys.residuals()[0], e("u_t - u_xx"));
    }

    #[test]
    fn invariant_surface_examples() {
        let dt = VectorField::parse("1", "0", ["0", "0", "0"]).unwrap();
        assert_eq!(invariant_surface(&dt, Dep::U), e("u_t"));
        let q = VectorField::parse("1", "alpha", ["0", "0", "0"]).unwrap();
        assert_eq!(invariant_surface(&q, Dep::W), e("w_t + alpha*w_x"));
    }

    #[test]
    fn lie_rules_are_exactly_the_xx_rules() {
        let sys = DlvSystem::symbolic().to_rd().unwrap();
        let r = manifold_rules(&sys, &VectorField::unknown(), ManifoldKind::Lie).unwrap();
        assert_eq!(r.levels.len(), 1);
        assert_eq!(r.levels[0][&Atom::Jet(Dep::U, JetIndex::XX)], e("lambda1*u_t - u*(a1+b1*u+c1*v+d1*w)"));
    }

    #[test]
    fn first_type_rules_for_diagonal_operator() {
        let sys = DlvSystem::symbolic().to_rd().unwrap();
        let q = VectorField::parse("1", "0", ["(a1-a2)/(lambda1-lambda2)*u", "-(a1-a2)/(lambda1-lambda2)*u", "0"]).unwrap();
        let r = manifold_rules(&sys, &q, ManifoldKind::FirstType(Dep::U)).unwrap();
        let k = e("(a1-a2)/(lambda1-lambda2)");
        assert_eq!(r.levels[1][&Atom::Jet(Dep::U, JetIndex::XT)], &k * &e("u_x"));
        assert_eq!(r.levels[3][&Atom::Jet(Dep::U, JetIndex::T)], &k * &e("u"));
    }

    #[test]
    fn steady_manifold_rules() {
        let sys = DlvSystem::symbolic().to_rd().unwrap();
        let q = VectorField::parse("1", "0", ["0", "0", "0"]).unwrap();
        let r = manifold_rules(&sys, &q, ManifoldKind::NonClassical).unwrap();
        for d in Dep::ALL {
            assert!(r.levels[3][&Atom::Jet(d, JetIndex::T)].is_zero());
        }
    }

    #[test]
    fn conditional_kinds_need_xi0() {
        let sys = DlvSystem::symbolic().to_rd().unwrap();
        let q = VectorField::parse("0", "1", ["0", "0", "0"]).unwrap();
        assert_eq!(manifold_rules(&sys, &q, ManifoldKind::NonClassical), Err(Error::ZeroXi0));
    }

    #[test]
    fn system_file() {
        let def = parse_system("# comment\nlambda1 = 2\nb1 = -1\nparams = k\nc1 = k\n").unwrap();
        let SystemDef::Dlv(s) = def else { panic!() };
        assert_eq!(s.lambda[0], e("2"));
        assert_eq!(s.m[0][1], Expr::param("k"));
        assert_eq!(s.a[0], e("a1"));
        assert!(parse_system("foo = 1").is_err());
        assert!(matches!(parse_system("C1 = 0\nlambda1=1\nlambda2=1\nlambda3=1").unwrap(), SystemDef::Rd(_)));
    }
}
