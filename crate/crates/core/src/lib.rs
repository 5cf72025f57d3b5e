//! Qubit and qudit dynamical maps under time deformations.
//!
//! Time-local generators and memory kernels are reparameterized by a
//! nonnegative speed `α(t)`; the crate propagates the resulting master
//! equations and analyses the divisibility of the maps they produce.

// `!(x > 0.0)` guards deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod divisibility;
pub mod error;
pub mod generators;
pub mod kernels;
pub mod solvers;
pub mod superop;

pub use error::{Error, Result};
pub use superop::{ChoiMatrix, PauliEigenvalues, Superoperator};
