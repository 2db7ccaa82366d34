use crate::error::Result;
use crate::expr::{Atom, Expr};

/// One of the time functions `phi_1..phi_4` with its two branches.
///
/// Both branches solve `phi' = -s*phi + r` where `s` is the selector
/// parameter and `r` the inhomogeneity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhiBranch {
    pub index: u8,
    pub selector: &'static str,
    pub when_zero: &'static str,
    pub when_nonzero: &'static str,
    pub inhomogeneity: &'static str,
}

pub const PHI: [PhiBranch; 4] = [
    PhiBranch {
        index: 1,
        selector: "a2",
        when_zero: "beta1*t + beta2",
        when_nonzero: "beta2*exp(-a2*t) + beta1/a2",
        inhomogeneity: "beta1",
    },
    PhiBranch {
        index: 2,
        selector: "a2",
        when_zero: "beta1*t",
        when_nonzero: "beta1/a2",
        inhomogeneity: "beta1",
    },
    PhiBranch {
        index: 3,
        selector: "a1",
        when_zero: "beta1*t + beta2",
        when_nonzero: "beta2*exp(-a1*t) + beta1/a1",
        inhomogeneity: "beta1",
    },
    PhiBranch {
        index: 4,
        selector: "a",
        when_zero: "t + beta",
        when_nonzero: "beta*exp(-a*t) + 1/a",
        inhomogeneity: "1",
    },
];

impl PhiBranch {
    pub fn binding_name(&self) -> String {
        format!("Phi{}", self.index)
    }

    fn scope() -> crate::expr::Scope {
        let mut s = crate::expr::Scope::new();
        s.declare_param("a");
        s
    }

    /// The branch for a given selector value: the zero branch exactly when
    /// the selector is identically zero.
    pub fn resolve(&self, selector_value: &Expr) -> Result<Expr> {
        let text = if selector_value.is_zero() {
            self.when_zero
        } else {
            self.when_nonzero
        };
        let e = Self::scope().parse(text)?;
        if selector_value.is_zero() {
            e.substitute_one(&Atom::param(self.selector), &Expr::zero())
        } else {
            Ok(e)
        }
    }

    /// `phi' + s*phi - r` for the given selector value; zero when the
    /// branch is right.
    pub fn ode_defect(&self, selector_value: &Expr) -> Result<Expr> {
        let phi = self.resolve(selector_value)?;
        let sel = Atom::param(self.selector);
        let phi = if selector_value.contains_atom(&sel) {
            phi
        } else {
            phi.substitute_one(&sel, selector_value)?
        };
        let r = Self::scope().parse(self.inhomogeneity)?;
        Ok(&(&phi.diff(&Atom::t()) + &(selector_value * &phi)) - &r)
    }
}
