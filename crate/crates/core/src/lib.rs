//! Exact constructions and verifiers for vectors with prescribed uniform
//! Dirichlet approximation behaviour.

pub mod construct;
pub mod dims;
pub mod error;
pub mod numkit;
pub mod par;
pub mod phi;
pub mod transfer;
pub mod verify;

pub use error::{Error, Result};
