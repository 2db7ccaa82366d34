//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' nonneg-integer)?
//! base   := rational | identifier | 'exp' '(' expr ')' | '(' expr ')' | '-' base
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_bigint::BigInt;

use super::atom::{Atom, Coord, Dep, FuncAtom, JetIndex};
use super::fraction::Expr;
use super::poly::Rat;
use crate::error::{Error, Result};

/// Parameter names known without declaration.
pub const STANDARD_PARAMS: &[&str] = &[
    "a1", "a2", "a3", "b", "b1", "b2", "b3", "c", "c1", "c2", "c3", "d", "d1", "d2", "d3",
    "lambda1", "lambda2", "lambda3", "alpha", "alpha1", "beta", "beta1", "beta2",
];

/// Unknown-function symbols and the coordinates they depend on.
pub fn function_signature(name: &str) -> Option<&'static [Coord]> {
    match name {
        "xi0" | "xi1" | "eta1" | "eta2" | "eta3" => Some(&Coord::ALL),
        "phi1" | "phi2" | "phi3" => Some(&[Coord::X]),
        _ => None,
    }
}

/// Identifier resolution for the parser: extra parameters and named
/// sub-expressions on top of the built-in alphabet.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    params: BTreeSet<String>,
    bindings: BTreeMap<String, Expr>,
}

impl Scope {
    pub fn new() -> Scope {
        Scope::default()
    }

    pub fn declare_param(&mut self, name: &str) -> &mut Self {
        self.params.insert(name.to_string());
        self
    }

    pub fn bind(&mut self, name: &str, value: Expr) -> &mut Self {
        self.bindings.insert(name.to_string(), value);
        self
    }

    pub fn with_binding(mut self, name: &str, value: Expr) -> Self {
        self.bind(name, value);
        self
    }

    pub fn parse(&self, text: &str) -> Result<Expr> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            scope: self,
        };
        p.skip_ws();
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    fn resolve(&self, name: &str, pos: usize) -> Result<Expr> {
        if let Some(e) = self.bindings.get(name) {
            return Ok(e.clone());
        }
        if let Some(a) = resolve_builtin(name) {
            return Ok(Expr::atom(a));
        }
        if self.params.contains(name) {
            return Ok(Expr::param(name));
        }
        Err(Error::UnknownIdentifier {
            name: name.to_string(),
            pos,
        })
    }
}

fn resolve_builtin(name: &str) -> Option<Atom> {
    let mut chars = name.chars();
    let first = chars.next()?;
    if name.len() == 1 {
        if let Some(c) = Coord::from_letter(first) {
            return Some(Atom::Coord(c));
        }
    }
    if let Some(dep) = Dep::from_letter(first) {
        if let Some(suffix) = name[1..].strip_prefix('_') {
            return JetIndex::from_suffix(suffix).map(|j| Atom::Jet(dep, j));
        }
    }
    if STANDARD_PARAMS.contains(&name) {
        return Some(Atom::param(name));
    }
    let (base, tag) = match name.split_once('_') {
        Some((b, t)) => (b, t),
        None => (name, ""),
    };
    let args = function_signature(base)?;
    let mut f = FuncAtom::new(base, args);
    for ch in tag.chars() {
        f = f.derivative(Coord::from_letter(ch)?)?;
    }
    Some(Atom::Func(f))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    scope: &'a Scope,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.factor()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.factor()?;
                acc = acc.checked_div(&d).map_err(|e| match e {
                    Error::DivisionByZero => Error::Syntax {
                        pos: at,
                        msg: "division by zero".into(),
                    },
                    other => other,
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let b = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let k = self.integer()?;
            let k: u32 = k
                .try_into()
                .map_err(|_| self.error("exponent too large"))?;
            return Ok(b.pow(k));
        }
        Ok(b)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a non-negative integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.base()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Expr::from_rat(Rat::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "exp" && self.peek() == Some(b'(') {
                    self.pos += 1;
                    let arg = self.expr()?;
                    if !self.eat(b')') {
                        return Err(self.error("expected `)`"));
                    }
                    return Expr::exp(&arg);
                }
                self.scope.resolve(name, start)
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        Scope::new().parse(s)
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_jet_token() {
        assert_eq!(parse("u_t").unwrap(), Expr::atom(Atom::Jet(Dep::U, JetIndex::T)));
        assert_eq!(parse("u_tx").unwrap(), parse("u_xt").unwrap());
    }

    #[test]
    fn reaction_term() {
        let e = parse("u*(a1+b1*u+c1*v+d1*w)").unwrap();
        assert_eq!(e, parse("a1*u + b1*u^2 + c1*u*v + d1*u*w").unwrap());
    }

    #[test]
    fn exponential_times_power() {
        let e = parse("exp(2*t)*x^2").unwrap();
        assert!(e.has_exp());
        assert_eq!(e.degree_in(&Atom::x()), Some(2));
    }

    #[test]
    fn rationals_and_unary_minus() {
        assert_eq!(parse("-3/4").unwrap(), Expr::ratio(-3, 4));
        assert_eq!(parse("-u^2").unwrap(), parse("u^2").unwrap());
        assert_eq!(parse("- -u").unwrap(), parse("u").unwrap());
    }

    #[test]
    fn function_atoms() {
        let e = parse("xi0_ut").unwrap();
        assert_eq!(e.to_string(), "xi0_tu");
        assert!(matches!(parse("phi1_t"), Err(Error::UnknownIdentifier { .. })));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("u +"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("u + q"), Err(Error::UnknownIdentifier { pos: 4, .. })));
        assert!(matches!(parse("(u"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("u^-1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("u/0"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn scope_declarations_and_bindings() {
        let mut s = Scope::new();
        s.declare_param("kappa");
        s.bind("K", parse("a1-a2").unwrap());
        assert_eq!(s.parse("K*kappa").unwrap(), parse("a1-a2").unwrap() * Expr::param("kappa"));
        assert!(parse("kappa").is_err());
    }
}
