//! Exact canonical bases of tensor products of integrable highest-weight
//! modules over quantum groups of symmetric Kac-Moody type.
//!
//! [`qarith`] holds the scalars, [`cartan`] the root datum, [`verma`] the
//! irreducible modules and [`tensor`] their tensor products. [`involution`]
//! computes the bar involution and [`canon`] the certified canonical bases;
//! [`verify`] checks relations and forms, and [`cli`] backs the binary.

pub mod canon;
pub mod cartan;
pub mod cli;
pub mod error;
pub mod involution;
pub mod qarith;
pub mod tensor;
pub mod verify;
pub mod verma;

pub use error::{Error, Result};
