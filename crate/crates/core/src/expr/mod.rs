//! Exact symbolic expressions: rational functions over atoms with
//! exponential factors.

pub mod atom;
mod fraction;
pub mod gcd;
pub mod parse;
pub mod poly;
mod print;

pub use atom::{Atom, Coord, Dep, FuncAtom, Indep, JetIndex};
pub use fraction::Expr;
pub use parse::{parse, Scope};
pub use poly::{Monomial, Poly, Rat};
