//! Local point transformations of the DLV class: linear mixing of the
//! dependent variables (diagonal entries may carry a factor `exp(r*t)`) and
//! affine changes of `t` and `x`.
//!
//! A transform is written as the old variables in terms of the new ones:
//! `u_old = sum_j mix[0][j] * new_j`, `t_old = t[0]*t + t[1]`,
//! `x_old = x[0]*x + x[1]`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Atom, Dep, Expr, Scope};
use crate::jet::VectorField;
use crate::model::{DlvSystem, INTERACTION_NAMES};

type Matrix = [[Expr; 3]; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTransform {
    pub mix: Matrix,
    pub t: [Expr; 2],
    pub x: [Expr; 2],
}

fn identity_matrix() -> Matrix {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Expr::one() } else { Expr::zero() }))
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = Expr::zero();
            for k in 0..3 {
                s = &s + &(&a[i][k] * &b[k][j]);
            }
            s
        })
    })
}

fn mat_vec(a: &Matrix, v: &[Expr; 3]) -> [Expr; 3] {
    std::array::from_fn(|i| {
        let mut s = Expr::zero();
        for k in 0..3 {
            s = &s + &(&a[i][k] * &v[k]);
        }
        s
    })
}

fn det(a: &Matrix) -> Expr {
    let m = |i: usize, j: usize| &a[i][j];
    let t1 = m(0, 0) * &(&(m(1, 1) * m(2, 2)) - &(m(1, 2) * m(2, 1)));
    let t2 = m(0, 1) * &(&(m(1, 0) * m(2, 2)) - &(m(1, 2) * m(2, 0)));
    let t3 = m(0, 2) * &(&(m(1, 0) * m(2, 1)) - &(m(1, 1) * m(2, 0)));
    &(&t1 - &t2) + &t3
}

fn inverse(a: &Matrix) -> Result<Matrix> {
    let d = det(a);
    if d.is_zero() {
        return Err(Error::NonInvertible("mixing matrix is singular".into()));
    }
    let mut out: Matrix = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let minor = &(&a[r0][c0] * &a[r1][c1]) - &(&a[r0][c1] * &a[r1][c0]);
            let cof = if (i + j) % 2 == 0 { minor } else { -minor };
            out[i][j] = cof.checked_div(&d)?;
        }
    }
    Ok(out)
}

fn vars() -> [Expr; 3] {
    Dep::ALL.map(|d| Expr::atom(Atom::dep(d)))
}

fn only_params(e: &Expr) -> bool {
    e.atoms().iter().all(Atom::is_param)
}

/// `(c, r)` with `e = c*exp(r*t)`, both constant.
fn exp_factor(e: &Expr) -> Option<(Expr, Expr)> {
    if e.is_zero() || e.atoms().iter().any(|a| !a.is_param() && *a != Atom::t()) {
        return None;
    }
    let r = e.diff(&Atom::t()).checked_div(e).ok()?;
    if !only_params(&r) {
        return None;
    }
    let c = e * &Expr::exp(&-(&r * &Expr::atom(Atom::t()))).ok()?;
    only_params(&c).then_some((c, r))
}

/// Coefficients of `e` as an affine form in `atoms`, with the constant term
/// last; `None` if `e` is not affine in them.
fn affine(e: &Expr, atoms: &[Atom]) -> Result<Option<Vec<Expr>>> {
    let mut coeffs = Vec::with_capacity(atoms.len() + 1);
    let mut rest = e.clone();
    for a in atoms {
        if !e.contains_atom(a) {
            coeffs.push(Expr::zero());
            continue;
        }
        if e.degree_in(a).map(|d| d > 1).unwrap_or(true) {
            return Ok(None);
        }
        let c = e.coeff(a, 1)?;
        rest = &rest - &(&c * &Expr::atom(a.clone()));
        coeffs.push(c);
    }
    if atoms.iter().any(|a| rest.contains_atom(a) || coeffs.iter().any(|c| c.contains_atom(a))) {
        return Ok(None);
    }
    coeffs.push(rest);
    Ok(Some(coeffs))
}

impl LocalTransform {
    pub fn identity() -> LocalTransform {
        LocalTransform {
            mix: identity_matrix(),
            t: [Expr::one(), Expr::zero()],
            x: [Expr::one(), Expr::zero()],
        }
    }

    /// `u -> s[0]*u, v -> s[1]*v, w -> s[2]*w`.
    pub fn scaling(s: [Expr; 3]) -> LocalTransform {
        let mut t = LocalTransform::identity();
        for (k, f) in s.into_iter().enumerate() {
            t.mix[k][k] = f;
        }
        t
    }

    pub fn new(mix: Matrix, t: [Expr; 2], x: [Expr; 2]) -> Result<LocalTransform> {
        let tr = LocalTransform { mix, t, x };
        tr.validate()?;
        Ok(tr)
    }

    /// Shape of the class: constant off-diagonal mixing, diagonal entries
    /// `c*exp(r*t)`, constant affine maps, nonzero scale factors.
    pub fn validate(&self) -> Result<()> {
        for i in 0..3 {
            for j in 0..3 {
                let e = &self.mix[i][j];
                if i == j {
                    if exp_factor(e).is_none() {
                        return Err(Error::InvalidField(format!(
                            "diagonal entry {} must be c*exp(r*t) with c != 0, got {e}",
                            i + 1
                        )));
                    }
                } else if !only_params(e) {
                    return Err(Error::InvalidField(format!("mixing entry ({}, {}) must be constant", i + 1, j + 1)));
                }
            }
        }
        for (name, pair) in [("t", &self.t), ("x", &self.x)] {
            if !pair.iter().all(only_params) {
                return Err(Error::InvalidField(format!("{name} map must have constant coefficients")));
            }
            if pair[0].is_zero() {
                return Err(Error::NonInvertible(format!("{name} scale factor is zero")));
            }
        }
        if det(&self.mix).is_zero() {
            return Err(Error::NonInvertible("mixing matrix is singular".into()));
        }
        Ok(())
    }

    fn has_exponential(&self) -> bool {
        (0..3).any(|k| self.mix[k][k].contains_atom(&Atom::t()))
    }

    /// Inverse transform; only for constant mixing.
    pub fn inverse(&self) -> Result<LocalTransform> {
        if self.has_exponential() {
            return Err(Error::NonInvertible(
                "inverse of a transform with exponential factors is not in the class form".into(),
            ));
        }
        let inv = |p: &[Expr; 2]| -> Result<[Expr; 2]> {
            let a = Expr::one().checked_div(&p[0])?;
            Ok([a.clone(), -(&p[1] * &a)])
        };
        LocalTransform::new(inverse(&self.mix)?, inv(&self.t)?, inv(&self.x)?)
    }

    /// Old variables in terms of new ones, as simultaneous bindings.
    fn bindings(&self) -> BTreeMap<Atom, Expr> {
        let mut b = BTreeMap::new();
        let t = Expr::atom(Atom::t());
        let x = Expr::atom(Atom::x());
        b.insert(Atom::t(), &(&self.t[0] * &t) + &self.t[1]);
        b.insert(Atom::x(), &(&self.x[0] * &x) + &self.x[1]);
        let new = mat_vec(&self.mix, &vars());
        for (d, e) in Dep::ALL.into_iter().zip(new) {
            b.insert(Atom::dep(d), e);
        }
        b
    }

    /// Rewrite the system in the new variables.
    ///
    /// Fails with a leaves-class error when the result is not a DLV system
    /// with constant coefficients.
    pub fn apply_to_system(&self, sys: &DlvSystem) -> Result<DlvSystem> {
        self.validate()?;
        let a = &self.mix;
        let ainv = inverse(a)?;
        let ts = &self.t[0];
        let xs2 = &self.x[0] * &self.x[0];
        let factor = xs2.checked_div(ts)?;
        let lam: Matrix = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { sys.lambda[i].clone() } else { Expr::zero() })
        });
        let l = mat_mul(&mat_mul(&ainv, &lam), a);
        let mut lambda: [Expr; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                let e = &l[i][j] * &factor;
                if i == j {
                    if !only_params(&e) {
                        return Err(Error::LeavesClass(format!("diffusivity {} becomes {e}", i + 1)));
                    }
                    lambda[i] = e;
                } else if !e.is_zero() {
                    return Err(Error::LeavesClass(format!(
                        "mixing couples the time derivatives of components {} and {}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut b = BTreeMap::new();
        let new = mat_vec(a, &vars());
        for (d, e) in Dep::ALL.into_iter().zip(new) {
            b.insert(Atom::dep(d), e);
        }
        let c_old: [Expr; 3] = std::array::from_fn(|k| sys.reaction(k));
        let c_sub = c_old
            .iter()
            .map(|c| c.change_variables(&b))
            .collect::<Result<Vec<_>>>()?;
        let c_sub: [Expr; 3] = c_sub.try_into().unwrap();
        let adot: Matrix = std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].diff(&Atom::t())));
        let drift = mat_vec(&mat_mul(&mat_mul(&ainv, &lam), &adot), &vars());
        let c_new = mat_vec(&ainv, &c_sub);
        let vs = vars();
        let atoms: Vec<Atom> = Dep::ALL.iter().map(|d| Atom::dep(*d)).collect();
        let mut out_a: [Expr; 3] = Default::default();
        let mut out_m: Matrix = Default::default();
        for k in 0..3 {
            let ck = &(&xs2 * &c_new[k]) - &(&factor * &drift[k]);
            let bracket = ck.checked_div(&vs[k])?;
            let Some(coeffs) = affine(&bracket, &atoms)? else {
                return Err(Error::LeavesClass(format!("reaction term {} becomes {ck}", k + 1)));
            };
            for (j, c) in coeffs.iter().enumerate() {
                if !only_params(c) {
                    return Err(Error::LeavesClass(format!(
                        "coefficient {} of reaction term {} becomes {c}",
                        if j < 3 { INTERACTION_NAMES[k][j].to_string() } else { format!("a{}", k + 1) },
                        k + 1
                    )));
                }
            }
            out_m[k] = std::array::from_fn(|j| coeffs[j].clone());
            out_a[k] = coeffs[3].clone();
        }
        Ok(DlvSystem {
            lambda,
            a: out_a,
            m: out_m,
        })
    }

    /// Push a vector field forward to the new variables.
    pub fn apply_to_field(&self, q: &VectorField) -> Result<VectorField> {
        self.validate()?;
        q.validate()?;
        let ainv = inverse(&self.mix)?;
        let b = self.bindings();
        let sub = |e: &Expr| e.change_variables(&b);
        let xi0 = sub(&q.xi0)?.checked_div(&self.t[0])?;
        let xi1 = sub(&q.xi1)?.checked_div(&self.x[0])?;
        let eta_old: [Expr; 3] = [sub(&q.eta[0])?, sub(&q.eta[1])?, sub(&q.eta[2])?];
        let adot: Matrix = std::array::from_fn(|i| std::array::from_fn(|j| self.mix[i][j].diff(&Atom::t())));
        let drift = mat_vec(&mat_mul(&ainv, &adot), &vars());
        let direct = mat_vec(&ainv, &eta_old);
        let eta: [Expr; 3] = std::array::from_fn(|k| &direct[k] - &(&drift[k] * &xi0));
        VectorField::new(xi0, xi1, eta)
    }

    /// Parse `u = ...`, `v = ...`, `w = ...`, `t = ...`, `x = ...` lines
    /// giving the old variables in terms of the new ones; omitted lines are
    /// the identity. `params = p, q` declares extra parameters.
    pub fn parse(text: &str) -> Result<LocalTransform> {
        let mut scope = Scope::new();
        let mut lines = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `variable = expression`", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "params" {
                for p in v.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    scope.declare_param(p);
                }
                continue;
            }
            if !matches!(k, "u" | "v" | "w" | "t" | "x") {
                return Err(Error::Config(format!("line {}: unknown variable `{k}`", n + 1)));
            }
            if lines.insert(k.to_string(), (n + 1, v.to_string())).is_some() {
                return Err(Error::Config(format!("line {}: duplicate variable `{k}`", n + 1)));
            }
        }
        let mut tr = LocalTransform::identity();
        let deps: Vec<Atom> = Dep::ALL.iter().map(|d| Atom::dep(*d)).collect();
        for (k, name) in ["u", "v", "w"].into_iter().enumerate() {
            let Some((n, src)) = lines.get(name) else { continue };
            let e = scope.parse(src).map_err(|e| Error::Config(format!("line {n}: {e}")))?;
            let c = affine(&e, &deps)?
                .filter(|c| c[3].is_zero())
                .ok_or_else(|| Error::Config(format!("line {n}: `{name}` must be linear in u, v, w")))?;
            tr.mix[k].clone_from_slice(&c[..3]);
        }
        for (name, atom) in [("t", Atom::t()), ("x", Atom::x())] {
            let Some((n, src)) = lines.get(name) else { continue };
            let e = scope.parse(src).map_err(|e| Error::Config(format!("line {n}: {e}")))?;
            let c = affine(&e, &[atom])?
                .filter(|c| c.iter().all(only_params))
                .ok_or_else(|| Error::Config(format!("line {n}: `{name}` must be affine in {name}")))?;
            let pair = [c[0].clone(), c[1].clone()];
            if name == "t" {
                tr.t = pair;
            } else {
                tr.x = pair;
            }
        }
        tr.validate()?;
        Ok(tr)
    }
}

impl fmt::Display for LocalTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = vars();
        for (k, name) in ["u", "v", "w"].into_iter().enumerate() {
            let mut e = Expr::zero();
            for j in 0..3 {
                e = &e + &(&self.mix[k][j] * &v[j]);
            }
            writeln!(f, "{name} = {e}")?;
        }
        let t = &(&self.t[0] * &Expr::atom(Atom::t())) + &self.t[1];
        let x = &(&self.x[0] * &Expr::atom(Atom::x())) + &self.x[1];
        writeln!(f, "t = {t}")?;
        writeln!(f, "x = {x}")
    }
}
