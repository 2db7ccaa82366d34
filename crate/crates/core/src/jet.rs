//! Total derivatives on the second-order jet space and second prolongation
//! of point-symmetry operators.

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Atom, Coord, Dep, Expr, FuncAtom, Indep, JetIndex};

/// `D_t` or `D_x` of an expression on the jet space.
///
/// Chain rule through `u, v, w` and every first-order jet; a second-order
/// jet that is actually present makes the result leave the jet space.
pub fn total_derivative(e: &Expr, wrt: Indep) -> Result<Expr> {
    let atoms = e.atoms();
    let mut out = e.diff(&Atom::Coord(wrt.coord()));
    for d in Dep::ALL {
        let dep = Atom::dep(d);
        let next = Atom::Jet(d, JetIndex::ALL[wrt as usize]);
        if mentions_coord(&atoms, d.coord()) {
            let p = e.diff(&dep);
            if !p.is_zero() {
                out = &out + &(&p * &Expr::atom(next));
            }
        }
        for j in JetIndex::ALL {
            let a = Atom::Jet(d, j);
            if !atoms.contains(&a) {
                continue;
            }
            let p = e.diff(&a);
            if p.is_zero() {
                continue;
            }
            match j.shift(wrt) {
                Some(k) => out = &out + &(&p * &Expr::atom(Atom::Jet(d, k))),
                None => return Err(Error::JetOrderOverflow(a.to_string())),
            }
        }
    }
    Ok(out)
}

/// Whether `c` occurs, directly or as an argument of an unknown function.
fn mentions_coord(atoms: &std::collections::BTreeSet<Atom>, c: Coord) -> bool {
    atoms.iter().any(|a| match a {
        Atom::Coord(b) => *b == c,
        Atom::Func(f) => f.depends_on(c),
        _ => false,
    })
}

pub fn dt(e: &Expr) -> Result<Expr> {
    total_derivative(e, Indep::T)
}

pub fn dx(e: &Expr) -> Result<Expr> {
    total_derivative(e, Indep::X)
}

/// Point-symmetry operator `xi0 d_t + xi1 d_x + eta1 d_u + eta2 d_v + eta3 d_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    pub xi0: Expr,
    pub xi1: Expr,
    pub eta: [Expr; 3],
}

impl VectorField {
    pub fn new(xi0: Expr, xi1: Expr, eta: [Expr; 3]) -> Result<VectorField> {
        let q = VectorField { xi0, xi1, eta };
        q.validate()?;
        Ok(q)
    }

    pub fn zero() -> VectorField {
        VectorField {
            xi0: Expr::zero(),
            xi1: Expr::zero(),
            eta: [Expr::zero(), Expr::zero(), Expr::zero()],
        }
    }

    /// Parse the five coefficients from expression strings.
    pub fn parse(xi0: &str, xi1: &str, eta: [&str; 3]) -> Result<VectorField> {
        VectorField::new(
            xi0.parse()?,
            xi1.parse()?,
            [eta[0].parse()?, eta[1].parse()?, eta[2].parse()?],
        )
    }

    /// The operator with every coefficient an unknown function of `(t,x,u,v,w)`.
    pub fn unknown() -> VectorField {
        let f = |n: &str| Expr::func(FuncAtom::new(n, &Coord::ALL));
        VectorField {
            xi0: f("xi0"),
            xi1: f("xi1"),
            eta: [f("eta1"), f("eta2"), f("eta3")],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in self.coefficients() {
            if let Some(a) = c.atoms().into_iter().find(Atom::is_jet) {
                return Err(Error::InvalidField(format!(
                    "coefficient {name} contains jet variable {a}"
                )));
            }
        }
        Ok(())
    }

    pub fn coefficients(&self) -> [(&'static str, &Expr); 5] {
        [
            ("xi0", &self.xi0),
            ("xi1", &self.xi1),
            ("eta1", &self.eta[0]),
            ("eta2", &self.eta[1]),
            ("eta3", &self.eta[2]),
        ]
    }

    pub fn map(&self, mut f: impl FnMut(&Expr) -> Result<Expr>) -> Result<VectorField> {
        Ok(VectorField {
            xi0: f(&self.xi0)?,
            xi1: f(&self.xi1)?,
            eta: [f(&self.eta[0])?, f(&self.eta[1])?, f(&self.eta[2])?],
        })
    }

    pub fn scale(&self, c: &Expr) -> VectorField {
        self.map(|e| Ok(e * c)).unwrap()
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            xi0: &self.xi0 + &other.xi0,
            xi1: &self.xi1 + &other.xi1,
            eta: [
                &self.eta[0] + &other.eta[0],
                &self.eta[1] + &other.eta[1],
                &self.eta[2] + &other.eta[2],
            ],
        }
    }

    pub fn substitute(
        &self,
        bindings: &std::collections::BTreeMap<Atom, Expr>,
    ) -> Result<VectorField> {
        self.map(|e| e.substitute(bindings))
    }

    /// Action of the (unprolonged) operator on a function of `(t,x,u,v,w)`.
    pub fn apply(&self, e: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (c, coord) in [
            (&self.xi0, Coord::T),
            (&self.xi1, Coord::X),
            (&self.eta[0], Coord::U),
            (&self.eta[1], Coord::V),
            (&self.eta[2], Coord::W),
        ] {
            if c.is_zero() {
                continue;
            }
            let d = e.diff(&Atom::Coord(coord));
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        out
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in [
            (&self.xi0, "d_t"),
            (&self.xi1, "d_x"),
            (&self.eta[0], "d_u"),
            (&self.eta[1], "d_v"),
            (&self.eta[2], "d_w"),
        ] {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "({c})*{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Second prolongation: coefficients attached to every jet coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedField {
    pub base: VectorField,
    pub sigma_t: [Expr; 3],
    pub sigma_x: [Expr; 3],
    pub sigma_xx: [Expr; 3],
    pub sigma_xt: [Expr; 3],
    pub sigma_tt: [Expr; 3],
}

impl ProlongedField {
    pub fn sigma(&self, d: Dep, j: JetIndex) -> &Expr {
        let k = d.index();
        match j {
            JetIndex::T => &self.sigma_t[k],
            JetIndex::X => &self.sigma_x[k],
            JetIndex::XX => &self.sigma_xx[k],
            JetIndex::XT => &self.sigma_xt[k],
            JetIndex::TT => &self.sigma_tt[k],
        }
    }
}

/// Recursive second prolongation.
pub fn prolong2(q: &VectorField) -> Result<ProlongedField> {
    let dt_xi0 = dt(&q.xi0)?;
    let dt_xi1 = dt(&q.xi1)?;
    let dx_xi0 = dx(&q.xi0)?;
    let dx_xi1 = dx(&q.xi1)?;
    let jet = |d: Dep, j: JetIndex| Expr::atom(Atom::Jet(d, j));
    // sigma_{J,i} = D_i sigma_J - u_{J,t} D_i xi0 - u_{J,x} D_i xi1
    let step = |sigma: &Expr, i: Indep, jt: Expr, jx: Expr| -> Result<Expr> {
        let (a, b) = match i {
            Indep::T => (&dt_xi0, &dt_xi1),
            Indep::X => (&dx_xi0, &dx_xi1),
        };
        let mut s = total_derivative(sigma, i)?;
        if !a.is_zero() {
            s = &s - &(&jt * a);
        }
        if !b.is_zero() {
            s = &s - &(&jx * b);
        }
        Ok(s)
    };
    let mut st = Vec::with_capacity(3);
    let mut sx = Vec::with_capacity(3);
    let mut sxx = Vec::with_capacity(3);
    let mut sxt = Vec::with_capacity(3);
    let mut stt = Vec::with_capacity(3);
    for d in Dep::ALL {
        let eta = &q.eta[d.index()];
        let t1 = step(eta, Indep::T, jet(d, JetIndex::T), jet(d, JetIndex::X))?;
        let x1 = step(eta, Indep::X, jet(d, JetIndex::T), jet(d, JetIndex::X))?;
        sxx.push(step(&x1, Indep::X, jet(d, JetIndex::XT), jet(d, JetIndex::XX))?);
        sxt.push(step(&x1, Indep::T, jet(d, JetIndex::XT), jet(d, JetIndex::XX))?);
        stt.push(step(&t1, Indep::T, jet(d, JetIndex::TT), jet(d, JetIndex::XT))?);
        st.push(t1);
        sx.push(x1);
    }
    let arr = |v: Vec<Expr>| -> [Expr; 3] { v.try_into().expect("three components") };
    Ok(ProlongedField {
        base: q.clone(),
        sigma_t: arr(st),
        sigma_x: arr(sx),
        sigma_xx: arr(sxx),
        sigma_xt: arr(sxt),
        sigma_tt: arr(stt),
    })
}

/// Action of the prolonged operator on a jet-space expression.
pub fn apply_prolonged(p: &ProlongedField, e: &Expr) -> Expr {
    let mut out = p.base.apply(e);
    let atoms = e.atoms();
    for d in Dep::ALL {
        for j in JetIndex::ALL {
            let a = Atom::Jet(d, j);
            if !atoms.contains(&a) {
                continue;
            }
            let s = p.sigma(d, j);
            if s.is_zero() {
                continue;
            }
            out = &out + &(s * &e.diff(&a));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Expr {
        s.parse().unwrap()
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(dx(&e("u")).unwrap(), e("u_x"));
        assert_eq!(dt(&e("u_x")).unwrap(), e("u_xt"));
        assert_eq!(dx(&e("eta1")).unwrap(), e("eta1_x + eta1_u*u_x + eta1_v*v_x + eta1_w*w_x"));
        assert!(matches!(dx(&e("u_xx")), Err(Error::JetOrderOverflow(_))));
    }

    #[test]
    fn translation_has_trivial_prolongation() {
        let p = prolong2(&VectorField::parse("1", "0", ["0", "0", "0"]).unwrap()).unwrap();
        for d in Dep::ALL {
            for j in JetIndex::ALL {
                assert!(p.sigma(d, j).is_zero());
            }
        }
    }

    #[test]
    fn scaling_operator_prolongation() {
        let q = VectorField::parse("2*t", "x", ["-2*u", "-2*v", "-2*w"]).unwrap();
        let p = prolong2(&q).unwrap();
        assert_eq!(p.sigma_t[0], e("-4*u_t"));
        assert_eq!(p.sigma_x[0], e("-3*u_x"));
        assert_eq!(p.sigma_xx[0], e("-4*u_xx"));
    }

    #[test]
    fn space_dilation_prolongation() {
        let p = prolong2(&VectorField::parse("0", "x", ["0", "0", "0"]).unwrap()).unwrap();
        assert_eq!(p.sigma_x[0], e("-u_x"));
        assert_eq!(p.sigma_xx[0], e("-2*u_xx"));
        assert!(p.sigma_t[0].is_zero());
    }

    #[test]
    fn apply_prolonged_examples() {
        let p = prolong2(&VectorField::parse("0", "0", ["u", "0", "0"]).unwrap()).unwrap();
        assert_eq!(apply_prolonged(&p, &e("u_t")), e("u_t"));
        assert!(apply_prolonged(&p, &e("7/3")).is_zero());
        let px = prolong2(&VectorField::parse("0", "1", ["0", "0", "0"]).unwrap()).unwrap();
        let s1 = e("lambda1*u_t - u_xx - u*(a1+b1*u+c1*v+d1*w)");
        assert!(apply_prolonged(&px, &s1).is_zero());
    }

    #[test]
    fn jet_coefficients_are_rejected() {
        assert!(matches!(
            VectorField::parse("u_t", "0", ["0", "0", "0"]),
            Err(Error::InvalidField(_))
        ));
    }
}
