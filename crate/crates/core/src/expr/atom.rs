use std::fmt;
use std::sync::Arc;

/// The five base coordinates: independent `t, x` and dependent `u, v, w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    T,
    X,
    U,
    V,
    W,
}

impl Coord {
    pub const ALL: [Coord; 5] = [Coord::T, Coord::X, Coord::U, Coord::V, Coord::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Coord::T => 't',
            Coord::X => 'x',
            Coord::U => 'u',
            Coord::V => 'v',
            Coord::W => 'w',
        }
    }

    pub fn from_letter(c: char) -> Option<Coord> {
        Some(match c {
            't' => Coord::T,
            'x' => Coord::X,
            'u' => Coord::U,
            'v' => Coord::V,
            'w' => Coord::W,
            _ => return None,
        })
    }

    pub fn is_independent(self) -> bool {
        matches!(self, Coord::T | Coord::X)
    }

    pub fn as_dep(self) -> Option<Dep> {
        match self {
            Coord::U => Some(Dep::U),
            Coord::V => Some(Dep::V),
            Coord::W => Some(Dep::W),
            _ => None,
        }
    }
}

/// Independent variable of the jet space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Indep {
    T,
    X,
}

impl Indep {
    pub fn coord(self) -> Coord {
        match self {
            Indep::T => Coord::T,
            Indep::X => Coord::X,
        }
    }
}

/// Dependent variable (species concentration).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dep {
    U,
    V,
    W,
}

impl Dep {
    pub const ALL: [Dep; 3] = [Dep::U, Dep::V, Dep::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> Dep {
        Dep::ALL[k]
    }

    pub fn coord(self) -> Coord {
        match self {
            Dep::U => Coord::U,
            Dep::V => Coord::V,
            Dep::W => Coord::W,
        }
    }

    pub fn letter(self) -> char {
        self.coord().letter()
    }

    pub fn from_letter(c: char) -> Option<Dep> {
        Coord::from_letter(c).and_then(Coord::as_dep)
    }
}

impl fmt::Display for Dep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Derivative slot of a jet coordinate, e.g. `u_xt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JetIndex {
    T,
    X,
    XX,
    XT,
    TT,
}

impl JetIndex {
    pub const ALL: [JetIndex; 5] = [
        JetIndex::T,
        JetIndex::X,
        JetIndex::XX,
        JetIndex::XT,
        JetIndex::TT,
    ];

    pub fn suffix(self) -> &'static str {
        match self {
            JetIndex::T => "t",
            JetIndex::X => "x",
            JetIndex::XX => "xx",
            JetIndex::XT => "xt",
            JetIndex::TT => "tt",
        }
    }

    pub fn from_suffix(s: &str) -> Option<JetIndex> {
        Some(match s {
            "t" => JetIndex::T,
            "x" => JetIndex::X,
            "xx" => JetIndex::XX,
            "xt" | "tx" => JetIndex::XT,
            "tt" => JetIndex::TT,
            _ => return None,
        })
    }

    pub fn order(self) -> u8 {
        match self {
            JetIndex::T | JetIndex::X => 1,
            _ => 2,
        }
    }

    /// Index obtained after one more derivative, if it stays within order 2.
    pub fn shift(self, wrt: Indep) -> Option<JetIndex> {
        match (self, wrt) {
            (JetIndex::T, Indep::T) => Some(JetIndex::TT),
            (JetIndex::T, Indep::X) | (JetIndex::X, Indep::T) => Some(JetIndex::XT),
            (JetIndex::X, Indep::X) => Some(JetIndex::XX),
            _ => None,
        }
    }
}

/// An unknown function of some of the base coordinates, carrying a
/// partial-derivative multi-index, e.g. `xi0_tx` or `phi1_xx`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncAtom {
    pub name: Arc<str>,
    /// Bit `i` set when the function depends on `Coord::ALL[i]`.
    pub args: u8,
    /// Derivative counts in the order t, x, u, v, w.
    pub tag: [u8; 5],
}

impl FuncAtom {
    pub fn new(name: &str, args: &[Coord]) -> FuncAtom {
        let mut mask = 0u8;
        for c in args {
            mask |= 1 << c.index();
        }
        FuncAtom {
            name: Arc::from(name),
            args: mask,
            tag: [0; 5],
        }
    }

    pub fn depends_on(&self, c: Coord) -> bool {
        self.args & (1 << c.index()) != 0
    }

    pub fn order(&self) -> u32 {
        self.tag.iter().map(|&k| k as u32).sum()
    }

    pub fn base(&self) -> FuncAtom {
        FuncAtom {
            tag: [0; 5],
            ..self.clone()
        }
    }

    /// Partial derivative of the function with respect to `c`, or `None` when
    /// the function does not depend on `c`.
    pub fn derivative(&self, c: Coord) -> Option<FuncAtom> {
        if !self.depends_on(c) {
            return None;
        }
        let mut out = self.clone();
        out.tag[c.index()] += 1;
        Some(out)
    }

    /// True when `self` is a derivative (possibly of order zero) of `other`.
    pub fn is_derivative_of(&self, other: &FuncAtom) -> bool {
        self.name == other.name && self.tag.iter().zip(other.tag.iter()).all(|(a, b)| a >= b)
    }
}

impl fmt::Display for FuncAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if self.order() > 0 {
            write!(f, "_")?;
            for c in Coord::ALL {
                for _ in 0..self.tag[c.index()] {
                    write!(f, "{}", c.letter())?;
                }
            }
        }
        Ok(())
    }
}

/// A symbol of the expression alphabet.
///
/// Exponentials are not atoms here: they live on monomials as an
/// exponent, which keeps `exp(a)*exp(b) = exp(a+b)` structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Coord(Coord),
    Jet(Dep, JetIndex),
    Param(Arc<str>),
    Func(FuncAtom),
}

impl Atom {
    pub fn t() -> Atom {
        Atom::Coord(Coord::T)
    }
    pub fn x() -> Atom {
        Atom::Coord(Coord::X)
    }
    pub fn dep(d: Dep) -> Atom {
        Atom::Coord(d.coord())
    }
    pub fn jet(d: Dep, j: JetIndex) -> Atom {
        Atom::Jet(d, j)
    }
    pub fn param(name: &str) -> Atom {
        Atom::Param(Arc::from(name))
    }

    pub fn is_jet(&self) -> bool {
        matches!(self, Atom::Jet(..))
    }

    pub fn is_param(&self) -> bool {
        matches!(self, Atom::Param(_))
    }

    /// Every jet coordinate of order one and two, in a fixed order.
    pub fn all_jets() -> Vec<Atom> {
        let mut out = Vec::with_capacity(15);
        for d in Dep::ALL {
            for j in JetIndex::ALL {
                out.push(Atom::Jet(d, j));
            }
        }
        out
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Coord(c) => write!(f, "{}", c.letter()),
            Atom::Jet(d, j) => write!(f, "{}_{}", d.letter(), j.suffix()),
            Atom::Param(p) => write!(f, "{p}"),
            Atom::Func(func) => write!(f, "{func}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn func_atom_display_orders_tag_letters() {
        let xi = FuncAtom::new("xi0", &Coord::ALL);
        let d = xi.derivative(Coord::U).unwrap().derivative(Coord::T).unwrap();
        assert_eq!(d.to_string(), "xi0_tu");
        assert!(d.is_derivative_of(&xi));
        assert!(!xi.is_derivative_of(&d));
    }

    #[test]
    fn restricted_function_has_no_foreign_derivative() {
        let phi = FuncAtom::new("phi1", &[Coord::X]);
        assert!(phi.derivative(Coord::T).is_none());
        assert_eq!(phi.derivative(Coord::X).unwrap().to_string(), "phi1_x");
    }

    #[test]
    fn jet_shift_stops_at_order_two() {
        assert_eq!(JetIndex::X.shift(Indep::T), Some(JetIndex::XT));
        assert_eq!(JetIndex::XX.shift(Indep::X), None);
        assert_eq!(Atom::all_jets().len(), 15);
    }
}
