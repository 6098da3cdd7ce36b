//! Cloning machines for qubit observables.
//!
//! A cloning machine couples a signal qubit to a probe qubit through a
//! two-qubit unitary so that a whole class of observables keeps its
//! statistics on both outputs. This crate builds the known machines, checks
//! them in the Heisenberg picture, searches numerically for machines (and for
//! evidence that none exist), and evaluates the noise such machines add when
//! used for joint measurements of noncommuting observables.

pub mod classes;
pub mod error;
pub mod format;
pub mod jointmeas;
pub mod linalg;
pub mod machines;
pub mod pauli;
pub mod search;
mod simplex;

pub use error::{Error, Result};
