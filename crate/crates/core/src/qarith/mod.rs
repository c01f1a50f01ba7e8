//! Exact scalars: `Z[q, q^-1]`, `Q(q)`, quantum integers and exact linear
//! algebra. Everything else in the crate is built on these.

mod json;
mod laurent;
pub mod linalg;
mod qcomb;
mod ratq;

pub use laurent::LaurentInt;
pub use linalg::{solve_exact, Matrix, Solution};
pub use qcomb::{qbinom, qfact, qint};
pub use ratq::RatQ;
