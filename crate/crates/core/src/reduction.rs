//! Reduction of the three-species competition system
//! `lambda_k k_t = k_xx + k*(a_k - b*u - c*v - d*w)` by the conditional
//! operator `d_t + kappa*u*(d_u - b/c*d_v) + alpha*b*u*(1/c*d_v - 1/d*d_w)`,
//! `kappa = (a1-a2)/(lambda1-lambda2)`, and an exact solution built from a
//! constant solution of the reduced ODE system.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Atom, Coord, Dep, Expr, FuncAtom, JetIndex, Rat};
use crate::jet::VectorField;
use crate::model::{invariant_surface, DlvSystem};

/// Parameters of the competition system and of the exact solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleParams {
    pub lambda: [Expr; 3],
    pub a: [Expr; 3],
    pub b: Expr,
    pub c: Expr,
    pub d: Expr,
    pub alpha: Expr,
    pub v0: Expr,
}

impl ExampleParams {
    /// Every parameter a symbol.
    pub fn symbolic() -> ExampleParams {
        ExampleParams {
            lambda: std::array::from_fn(|k| Expr::param(&format!("lambda{}", k + 1))),
            a: std::array::from_fn(|k| Expr::param(&format!("a{}", k + 1))),
            b: Expr::param("b"),
            c: Expr::param("c"),
            d: Expr::param("d"),
            alpha: Expr::param("alpha"),
            v0: Expr::param("v0"),
        }
    }

    /// `lambda = (2, 1, 1)`, `a = (2, 1, 1)`, `b = c = d = 1`, `alpha = 0`,
    /// `v0 = 1/2`.
    pub fn default_numeric() -> ExampleParams {
        ExampleParams {
            lambda: [Expr::int(2), Expr::one(), Expr::one()],
            a: [Expr::int(2), Expr::one(), Expr::one()],
            b: Expr::one(),
            c: Expr::one(),
            d: Expr::one(),
            alpha: Expr::zero(),
            v0: Expr::ratio(1, 2),
        }
    }

    /// Read `key = value` lines over the keys `lambda1..3`, `a1..3`, `b`,
    /// `c`, `d`, `alpha`, `v0`; omitted keys keep their default values.
    pub fn parse(text: &str) -> Result<ExampleParams> {
        let mut p = ExampleParams::default_numeric();
        let mut scope = crate::expr::Scope::new();
        scope.declare_param("v0");
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let e = scope
                .parse(v.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
            let slot = match k.trim() {
                "lambda1" => &mut p.lambda[0],
                "lambda2" => &mut p.lambda[1],
                "lambda3" => &mut p.lambda[2],
                "a1" => &mut p.a[0],
                "a2" => &mut p.a[1],
                "a3" => &mut p.a[2],
                "b" => &mut p.b,
                "c" => &mut p.c,
                "d" => &mut p.d,
                "alpha" => &mut p.alpha,
                "v0" => &mut p.v0,
                other => return Err(Error::Config(format!("line {}: unknown key `{other}`", n + 1))),
            };
            *slot = e;
        }
        Ok(p)
    }

    pub fn entries(&self) -> Vec<(String, &Expr)> {
        let mut v: Vec<(String, &Expr)> = Vec::new();
        for k in 0..3 {
            v.push((format!("lambda{}", k + 1), &self.lambda[k]));
        }
        for k in 0..3 {
            v.push((format!("a{}", k + 1), &self.a[k]));
        }
        for (n, e) in [("b", &self.b), ("c", &self.c), ("d", &self.d), ("alpha", &self.alpha), ("v0", &self.v0)] {
            v.push((n.to_string(), e));
        }
        v
    }

    /// `(a1 - a2)/(lambda1 - lambda2)`.
    pub fn kappa(&self) -> Result<Expr> {
        if (&self.a[0] - &self.a[1]).is_zero() {
            return Err(Error::Degenerate("the ansatz requires a1 != a2".into()));
        }
        let dl = &self.lambda[0] - &self.lambda[1];
        if dl.is_zero() {
            return Err(Error::Degenerate("the ansatz requires lambda1 != lambda2".into()));
        }
        (&self.a[0] - &self.a[1]).checked_div(&dl)
    }

    fn check_scalings(&self) -> Result<()> {
        for (n, e) in [("b", &self.b), ("c", &self.c), ("d", &self.d)] {
            if e.is_zero() {
                return Err(Error::Degenerate(format!("{n} must be nonzero")));
            }
        }
        Ok(())
    }

    /// The value of `a3` forced by the restriction
    /// `(lambda2-lambda3)*a1 - (lambda1-lambda3)*a2 + (lambda1-lambda2)*a3 = 0`.
    pub fn restricted_a3(&self) -> Result<Expr> {
        let l = &self.lambda;
        let num = &(&(&l[0] - &l[2]) * &self.a[1]) - &(&(&l[1] - &l[2]) * &self.a[0]);
        num.checked_div(&(&l[0] - &l[1]))
    }

    /// Residual of the restriction; zero when it holds.
    pub fn restriction_defect(&self) -> Expr {
        let l = &self.lambda;
        &(&(&(&l[1] - &l[2]) * &self.a[0]) - &(&(&l[0] - &l[2]) * &self.a[1])) + &(&(&l[0] - &l[1]) * &self.a[2])
    }

    /// The competition system with these coefficients.
    pub fn system(&self) -> DlvSystem {
        let row = || [-self.b.clone(), -self.c.clone(), -self.d.clone()];
        DlvSystem {
            lambda: self.lambda.clone(),
            a: self.a.clone(),
            m: [row(), row(), row()],
        }
    }

    /// `d_t + kappa*u*(d_u - b/c*d_v) + alpha*b*u*(1/c*d_v - 1/d*d_w)`.
    pub fn operator(&self) -> Result<VectorField> {
        self.check_scalings()?;
        let k = self.kappa()?;
        let u = Expr::atom(Atom::dep(Dep::U));
        let ab = &self.alpha * &self.b;
        let e1 = &k * &u;
        let e2 = &(&ab - &(&k * &self.b)).checked_div(&self.c)? * &u;
        let e3 = -(&ab.checked_div(&self.d)? * &u);
        VectorField::new(Expr::one(), Expr::zero(), [e1, e2, e3])
    }

    fn rats(&self) -> Result<BTreeMap<String, f64>> {
        let mut out = BTreeMap::new();
        for (n, e) in self.entries() {
            let r = e
                .as_rat()
                .ok_or_else(|| Error::Evaluation(format!("parameter {n} = {e} is not a rational number")))?;
            out.insert(n, rat_f64(&r));
        }
        Ok(out)
    }
}

fn rat_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn phi(k: usize) -> FuncAtom {
    FuncAtom::new(&format!("phi{k}"), &[Coord::X])
}

fn phi_expr(k: usize) -> Expr {
    Expr::func(phi(k))
}

fn phi_xx(k: usize) -> Atom {
    Atom::Func(phi(k).derivative(Coord::X).unwrap().derivative(Coord::X).unwrap())
}

/// Replace profile functions, and their first and second derivatives, by
/// functions of `x`.
pub fn substitute_profiles(e: &Expr, profiles: &BTreeMap<usize, Expr>) -> Result<Expr> {
    let mut b = BTreeMap::new();
    for (k, f) in profiles {
        let fx = f.diff(&Atom::x());
        let f0 = phi(*k);
        let f1 = f0.derivative(Coord::X).unwrap();
        let f2 = f1.derivative(Coord::X).unwrap();
        b.insert(Atom::Func(f2), fx.diff(&Atom::x()));
        b.insert(Atom::Func(f1), fx);
        b.insert(Atom::Func(f0), f.clone());
    }
    e.change_variables(&b)
}

/// Solution template in terms of `phi1(x), phi2(x), phi3(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ansatz {
    pub kappa: Expr,
    pub u: Expr,
    pub v: Expr,
    pub w: Expr,
}

impl Ansatz {
    pub fn components(&self) -> [&Expr; 3] {
        [&self.u, &self.v, &self.w]
    }
}

/// `b*u = phi1*E`, `c*v = phi2 + (alpha/kappa - 1)*phi1*E`,
/// `d*w = phi3 - alpha/kappa*phi1*E` with `E = exp(kappa*t)`.
pub fn build_ansatz(p: &ExampleParams) -> Result<Ansatz> {
    p.check_scalings()?;
    let kappa = p.kappa()?;
    let e = Expr::exp(&(&kappa * &Expr::atom(Atom::t())))?;
    let pe = &phi_expr(1) * &e;
    let r = p.alpha.checked_div(&kappa)?;
    let u = pe.checked_div(&p.b)?;
    let v = (&phi_expr(2) + &(&(&r - &Expr::one()) * &pe)).checked_div(&p.c)?;
    let w = (&phi_expr(3) - &(&r * &pe)).checked_div(&p.d)?;
    Ok(Ansatz { kappa, u, v, w })
}

/// Replace `u, v, w` and their jets by the given functions of `(t, x)`.
pub fn substitute_solution(e: &Expr, sol: [&Expr; 3]) -> Result<Expr> {
    let mut b = BTreeMap::new();
    for (d, s) in Dep::ALL.into_iter().zip(sol) {
        let st = s.diff(&Atom::t());
        let sx = s.diff(&Atom::x());
        b.insert(Atom::dep(d), s.clone());
        b.insert(Atom::jet(d, JetIndex::T), st.clone());
        b.insert(Atom::jet(d, JetIndex::X), sx.clone());
        b.insert(Atom::jet(d, JetIndex::XX), sx.diff(&Atom::x()));
        b.insert(Atom::jet(d, JetIndex::XT), sx.diff(&Atom::t()));
        b.insert(Atom::jet(d, JetIndex::TT), st.diff(&Atom::t()));
    }
    e.change_variables(&b)
}

/// The invariant-surface expressions of the operator evaluated on the
/// ansatz; all zero for a correct ansatz.
pub fn ansatz_defect(p: &ExampleParams, ans: &Ansatz) -> Result<[Expr; 3]> {
    let q = p.operator()?;
    let mut out: [Expr; 3] = Default::default();
    for (k, d) in Dep::ALL.into_iter().enumerate() {
        out[k] = substitute_solution(&invariant_surface(&q, d), ans.components())?;
    }
    Ok(out)
}

/// Three ODEs in `phi1..phi3`, each normalized to unit coefficient of its
/// second derivative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedOdeSystem {
    pub equations: [Expr; 3],
}

fn normalize_ode(e: &Expr, k: usize) -> Result<Expr> {
    let c = e.coeff(&phi_xx(k), 1)?;
    if c.is_zero() {
        return Err(Error::Reduction(format!("equation {k} lost its second derivative")));
    }
    e.checked_div(&c)
}

fn exp_part(e: &Expr, rate: &Expr) -> Result<Expr> {
    let groups = e.collect_exp();
    let mut out = Expr::zero();
    for (g, coeff) in groups {
        let r = match &g {
            None => Expr::zero(),
            Some(x) => x.checked_div(&Expr::atom(Atom::t()))?,
        };
        if (&r - rate).is_zero() {
            out = coeff;
        } else if r.contains_atom(&Atom::t()) || r.contains_atom(&Atom::x()) {
            return Err(Error::Reduction(format!("unexpected exponential group {}", r)));
        }
    }
    Ok(out)
}

/// Substitute the ansatz into the system (with `a3` fixed by the
/// restriction), split by `exp(n*kappa*t)` for `n = 0, 1, 2`, and keep the
/// `phi1` equation from the `n = 1` part of the first residual and the
/// `phi2, phi3` equations from the `n = 0` parts of the others. The
/// remaining parts must vanish modulo the `phi1` equation.
pub fn reduce(p: &ExampleParams, ans: &Ansatz) -> Result<ReducedOdeSystem> {
    for (k, d) in ansatz_defect(p, ans)?.iter().enumerate() {
        if !d.is_zero() {
            return Err(Error::Reduction(format!(
                "the ansatz does not satisfy invariant-surface condition {}: {d}",
                k + 1
            )));
        }
    }
    let mut p = p.clone();
    if !p.restriction_defect().is_zero() {
        p.a[2] = p.restricted_a3()?;
    }
    let sys = p.system();
    let kappa = &ans.kappa;
    let scales = [&p.b, &p.c, &p.d];
    let mut parts: Vec<[Expr; 3]> = Vec::new();
    for (k, r) in sys.residuals().iter().enumerate() {
        let s = &substitute_solution(r, ans.components())? * scales[k];
        let total = s.collect_exp().len();
        let split: [Expr; 3] = [
            exp_part(&s, &Expr::zero())?,
            exp_part(&s, kappa)?,
            exp_part(&s, &(kappa * &Expr::int(2)))?,
        ];
        let covered = split.iter().filter(|e| !e.is_zero()).count();
        if covered != total {
            return Err(Error::Reduction(format!("residual {} has exponential groups outside exp(n*kappa*t), n <= 2", k + 1)));
        }
        if !split[2].is_zero() {
            return Err(Error::Reduction(format!(
                "the exp(2*kappa*t) part of residual {} does not vanish: {}",
                k + 1,
                split[2]
            )));
        }
        parts.push(split);
    }
    let eq1 = normalize_ode(&-&parts[0][1], 1)?;
    let eq2 = normalize_ode(&-&parts[1][0], 2)?;
    let eq3 = normalize_ode(&-&parts[2][0], 3)?;
    let rhs1 = &Expr::atom(phi_xx(1)) - &eq1;
    let mut rule = BTreeMap::new();
    rule.insert(phi_xx(1), rhs1);
    let leftovers = [(&parts[0][0], 1, 0), (&parts[1][1], 2, 1), (&parts[2][1], 3, 1)];
    for (e, k, n) in leftovers {
        let r = e.change_variables(&rule)?;
        if !r.is_zero() {
            return Err(Error::Reduction(format!(
                "the exp({n}*kappa*t) part of residual {k} does not reduce to zero: {r}"
            )));
        }
    }
    Ok(ReducedOdeSystem {
        equations: [eq1, eq2, eq3],
    })
}

/// Branch of the linear ODE `phi1'' + kp*phi1 = 0` used for `phi1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// `cos(s x)` or `cosh(s x)`: `phi1(0) = 1`, `phi1'(0) = 0`.
    Even,
    /// `sin(s x)/s` or `sinh(s x)/s`: `phi1(0) = 0`, `phi1'(0) = 1`.
    Odd,
    /// `exp(s x)`; only for `kp < 0`.
    Growing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Trigonometric,
    Hyperbolic,
}

/// The exact solution: `phi2 = v0`, `phi3 = a2 - v0` in the ansatz, with
/// `phi1` left as a function atom obeying `phi1'' = -kp*phi1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSolution {
    pub params: ExampleParams,
    pub kappa: Expr,
    /// `lambda2*(a2 - a1)/(lambda1 - lambda2)`.
    pub kappa_prime: Expr,
    pub profile: Profile,
    /// Known when `kappa_prime` is rational.
    pub branch: Option<Branch>,
    pub u: Expr,
    pub v: Expr,
    pub w: Expr,
}

pub fn exact_solution(p: &ExampleParams, profile: Profile) -> Result<ExactSolution> {
    p.check_scalings()?;
    let kappa = p.kappa()?;
    if !(&p.a[1] - &p.a[2]).is_zero() {
        return Err(Error::Degenerate("the exact solution requires a2 = a3".into()));
    }
    if !p.restriction_defect().is_zero() {
        return Err(Error::Degenerate(
            "a2 = a3 together with the restriction forces lambda2 = lambda3".into(),
        ));
    }
    let kp = (&p.lambda[1] * &(&p.a[1] - &p.a[0])).checked_div(&(&p.lambda[0] - &p.lambda[1]))?;
    let branch = kp.as_rat().map(|r| {
        if r > Rat::from_integer(0.into()) {
            Branch::Trigonometric
        } else {
            Branch::Hyperbolic
        }
    });
    if profile == Profile::Growing && branch == Some(Branch::Trigonometric) {
        return Err(Error::Degenerate("an exponential profile needs lambda2*(a2-a1)/(lambda1-lambda2) < 0".into()));
    }
    let ans = build_ansatz(p)?;
    let mut b = BTreeMap::new();
    b.insert(2, p.v0.clone());
    b.insert(3, &p.a[1] - &p.v0);
    let sub = |e: &Expr| substitute_profiles(e, &b);
    Ok(ExactSolution {
        params: p.clone(),
        kappa,
        kappa_prime: kp,
        profile,
        branch,
        u: sub(&ans.u)?,
        v: sub(&ans.v)?,
        w: sub(&ans.w)?,
    })
}

/// Solution with the default profile.
pub fn exact_solution_default(p: &ExampleParams) -> Result<ExactSolution> {
    exact_solution(p, Profile::Even)
}

impl ExactSolution {
    pub fn components(&self) -> [&Expr; 3] {
        [&self.u, &self.v, &self.w]
    }

    /// `phi1` in closed form when it is a sum of exponentials with rational
    /// rate, i.e. `kp = -s^2` with rational `s`.
    pub fn closed_profile(&self) -> Option<Expr> {
        let kp = self.kappa_prime.as_rat()?;
        if kp >= Rat::from_integer(0.into()) {
            return None;
        }
        let s = rational_sqrt(&-kp)?;
        let sx = &Expr::from_rat(s.clone()) * &Expr::atom(Atom::x());
        let plus = Expr::exp(&sx).ok()?;
        let minus = Expr::exp(&-&sx).ok()?;
        Some(match self.profile {
            Profile::Even => (&plus + &minus).scale(&Rat::new(1.into(), 2.into())),
            Profile::Odd => (&plus - &minus).scale(&(Rat::from_integer(2.into()) * s).recip()),
            Profile::Growing => plus,
        })
    }

    /// Residuals of the competition system on the solution, with `phi1''`
    /// rewritten by its ODE. Identically zero for a correct solution.
    pub fn symbolic_residual(&self) -> Result<[Expr; 3]> {
        let sys = self.params.system();
        let mut rule = BTreeMap::new();
        rule.insert(phi_xx(1), -(&self.kappa_prime * &phi_expr(1)));
        let mut out: [Expr; 3] = Default::default();
        for (k, r) in sys.residuals().iter().enumerate() {
            out[k] = substitute_solution(r, self.components())?.substitute(&rule)?;
        }
        Ok(out)
    }

    /// Residuals with `phi1` replaced by its closed form, when there is one.
    pub fn closed_form_residual(&self) -> Result<Option<[Expr; 3]>> {
        let Some(f) = self.closed_profile() else {
            return Ok(None);
        };
        let mut b = BTreeMap::new();
        b.insert(1, f);
        let comps: Vec<Expr> = self
            .components()
            .iter()
            .map(|c| substitute_profiles(c, &b))
            .collect::<Result<_>>()?;
        let sys = self.params.system();
        let mut out: [Expr; 3] = Default::default();
        for (k, r) in sys.residuals().iter().enumerate() {
            out[k] = substitute_solution(r, [&comps[0], &comps[1], &comps[2]])?;
        }
        Ok(Some(out))
    }

    /// The same construction with `alpha` replaced by `-alpha`.
    pub fn with_alpha_flipped(&self) -> Result<ExactSolution> {
        let mut p = self.params.clone();
        p.alpha = -&p.alpha;
        exact_solution(&p, self.profile)
    }

    /// The solution with `exp(kappa*t)` replaced by `exp(-kappa*t)`.
    pub fn with_kappa_flipped(&self) -> Result<ExactSolution> {
        let t = Atom::t();
        let mut b = BTreeMap::new();
        b.insert(t.clone(), -Expr::atom(t));
        let mut out = self.clone();
        out.u = self.u.change_variables(&b)?;
        out.v = self.v.change_variables(&b)?;
        out.w = self.w.change_variables(&b)?;
        Ok(out)
    }

    /// `phi1, phi1', phi1''` at `x`.
    fn profile_at(&self, kp: f64, x: f64) -> [f64; 3] {
        let s = kp.abs().sqrt();
        let (f, f1) = match (self.profile, kp > 0.0) {
            (Profile::Even, true) => ((s * x).cos(), -s * (s * x).sin()),
            (Profile::Odd, true) => ((s * x).sin() / s, (s * x).cos()),
            (Profile::Even, false) => ((s * x).cosh(), s * (s * x).sinh()),
            (Profile::Odd, false) => ((s * x).sinh() / s, (s * x).cosh()),
            (Profile::Growing, _) => ((s * x).exp(), s * (s * x).exp()),
        };
        [f, f1, -kp * f]
    }
}

fn rational_sqrt(r: &Rat) -> Option<Rat> {
    let n = r.numer();
    let d = r.denom();
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rat::new(sn, sd))
}

/// Evaluation grid over `[t0, t1] x [x0, x1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub t0: f64,
    pub t1: f64,
    pub x0: f64,
    pub x1: f64,
    pub nt: usize,
    pub nx: usize,
}

impl Grid {
    pub fn unit(nt: usize, nx: usize) -> Grid {
        Grid {
            t0: 0.0,
            t1: 1.0,
            x0: 0.0,
            x1: 1.0,
            nt,
            nx,
        }
    }

    fn points(n: usize, a: f64, b: f64) -> Vec<f64> {
        if n == 1 {
            return vec![a];
        }
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }
}

/// Maximum absolute residual of each equation over the grid, with every
/// derivative evaluated from its closed form in double precision.
pub fn residual_numeric(sol: &ExactSolution, grid: &Grid) -> Result<[f64; 3]> {
    if grid.nt == 0 || grid.nx == 0 {
        return Err(Error::Evaluation("empty grid".into()));
    }
    let vals = sol.params.rats()?;
    let kp = rat_f64(
        &sol.kappa_prime
            .as_rat()
            .ok_or_else(|| Error::Evaluation("kappa' is not rational".into()))?,
    );
    let f1 = phi(1);
    let f1x = f1.derivative(Coord::X).unwrap();
    let f1xx = f1x.derivative(Coord::X).unwrap();
    // u, u_t, u_xx for each component
    let mut fields: Vec<[Expr; 3]> = Vec::new();
    for c in sol.components() {
        let ct = c.diff(&Atom::t());
        let cxx = c.diff(&Atom::x()).diff(&Atom::x());
        fields.push([c.clone(), ct, cxx]);
    }
    let sys = sol.params.system();
    let coeff = |e: &Expr| -> Result<f64> {
        e.eval_f64(&|a: &Atom| match a {
            Atom::Param(p) => vals.get(&**p).copied(),
            _ => None,
        })
    };
    let lam: Vec<f64> = sys.lambda.iter().map(coeff).collect::<Result<_>>()?;
    let a: Vec<f64> = sys.a.iter().map(coeff).collect::<Result<_>>()?;
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = coeff(&sys.m[i][j])?;
        }
    }
    let ts = Grid::points(grid.nt, grid.t0, grid.t1);
    let xs = Grid::points(grid.nx, grid.x0, grid.x1);
    let rows: Vec<Result<[f64; 3]>> = ts
        .par_iter()
        .map(|&t| {
            let mut worst = [0.0f64; 3];
            for &x in &xs {
                let [p0, p1, p2] = sol.profile_at(kp, x);
                let lookup = |at: &Atom| -> Option<f64> {
                    match at {
                        Atom::Param(p) => vals.get(&**p).copied(),
                        Atom::Coord(Coord::T) => Some(t),
                        Atom::Coord(Coord::X) => Some(x),
                        Atom::Func(f) if *f == f1 => Some(p0),
                        Atom::Func(f) if *f == f1x => Some(p1),
                        Atom::Func(f) if *f == f1xx => Some(p2),
                        _ => None,
                    }
                };
                let mut ev = [[0.0; 3]; 3];
                for (k, fk) in fields.iter().enumerate() {
                    for j in 0..3 {
                        ev[k][j] = fk[j].eval_f64(&lookup)?;
                    }
                }
                let uvw = [ev[0][0], ev[1][0], ev[2][0]];
                for k in 0..3 {
                    let react = uvw[k] * (a[k] + m[k][0] * uvw[0] + m[k][1] * uvw[1] + m[k][2] * uvw[2]);
                    let r = lam[k] * ev[k][1] - ev[k][2] - react;
                    worst[k] = worst[k].max(r.abs());
                }
            }
            Ok(worst)
        })
        .collect();
    let mut out = [0.0f64; 3];
    for r in rows {
        let r = r?;
        for k in 0..3 {
            out[k] = out[k].max(r[k]);
        }
    }
    Ok(out)
}
