//! Cat-state generation in the quantum Rabi model.
//!
//! Closed-form eigenstates, time evolution and measurement-induced
//! coherent-state superpositions ([`analytic`], [`measurement`],
//! [`pipeline`]), each checked against exact diagonalization on a truncated
//! Fock space ([`oracle`]).

pub mod analytic;
pub mod cli;
pub mod error;
pub mod hilbert;
pub mod measurement;
pub mod model;
pub mod oracle;
pub mod pipeline;

pub use error::{Error, Result};
