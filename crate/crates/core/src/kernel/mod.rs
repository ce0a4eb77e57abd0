//! Exact arithmetic over multivariate rational functions with rational
//! coefficients, plus the linear algebra and rule-based reduction used by the
//! rest of the engine.

mod gcd;
mod indet;
mod matrix;
mod poly;
mod print;
mod ratexpr;
mod reduce;

pub use gcd::gcd;
pub use indet::{Coord, Indet, MultiIndex, ParamName, MAX_VARS};
pub use matrix::{generic_rank, matrix_inverse, Matrix};
pub use poly::{q_frac, q_int, Monomial, Poly, Q};
pub use print::Names;
pub use ratexpr::{eval_poly, Frac, RatExpr};
pub use reduce::{ReductionSystem, Rule};
