//! Invariance criteria for Lie, first-type conditional and non-classical
//! symmetries.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::expr::{Atom, Dep, Expr, Monomial};
use crate::jet::{apply_prolonged, prolong2, VectorField};
use crate::model::{manifold_rules, ManifoldKind, RdSystem};

/// First nonzero jet-monomial coefficient of a failing residual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// 1-based index of the residual `S_k`.
    pub equation: usize,
    pub monomial: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: ManifoldKind,
    pub restricted_residuals: [Expr; 3],
    pub passed: bool,
    pub witness: Option<Witness>,
}

pub fn jet_atoms() -> BTreeSet<Atom> {
    Atom::all_jets().into_iter().collect()
}

fn monomial_to_string(m: &Monomial) -> String {
    if m.is_one() {
        return "1".into();
    }
    Expr::from_poly(crate::expr::Poly::term(m.clone(), num_traits::One::one())).to_string()
}

/// Prolonged residuals `pr2(Q) S_k` before any restriction.
pub fn prolonged_residuals(sys: &RdSystem, q: &VectorField) -> Result<[Expr; 3]> {
    let p = prolong2(q)?;
    let s = sys.residuals();
    Ok(std::array::from_fn(|k| apply_prolonged(&p, &s[k])))
}

/// Restricted residuals on the manifold of the given kind.
pub fn restricted_residuals(sys: &RdSystem, q: &VectorField, kind: ManifoldKind) -> Result<[Expr; 3]> {
    let rules = manifold_rules(sys, q, kind)?;
    let raw = prolonged_residuals(sys, q)?;
    let [a, b, c] = raw;
    Ok([rules.apply(&a)?, rules.apply(&b)?, rules.apply(&c)?])
}

pub fn check_invariance(sys: &RdSystem, q: &VectorField, kind: ManifoldKind) -> Result<Verdict> {
    q.validate()?;
    let restricted = restricted_residuals(sys, q, kind)?;
    let passed = restricted.iter().all(Expr::is_zero);
    let mut witness = None;
    if !passed {
        let jets = jet_atoms();
        for (k, r) in restricted.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let parts = r.collect(&jets)?;
            if let Some((m, c)) = parts.iter().next_back() {
                witness = Some(Witness {
                    equation: k + 1,
                    monomial: monomial_to_string(m),
                    coefficient: c.to_string(),
                });
            }
            break;
        }
    }
    Ok(Verdict {
        kind,
        restricted_residuals: restricted,
        passed,
        witness,
    })
}

/// First-type verdicts for every pivot, in the order u, v, w.
pub fn check_first_type_all(sys: &RdSystem, q: &VectorField) -> Result<Vec<Verdict>> {
    Dep::ALL
        .iter()
        .map(|&p| check_invariance(sys, q, ManifoldKind::FirstType(p)))
        .collect()
}
