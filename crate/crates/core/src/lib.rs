pub mod catalog;
pub mod checker;
pub mod detsys;
pub mod error;
pub mod expr;
pub mod harness;
pub mod jet;
pub mod model;
pub mod reduction;
pub mod transform;

pub use error::{Error, Result};
pub use expr::{parse, Atom, Expr};
