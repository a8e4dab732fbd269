//! Integral positive definite ternary quadratic forms.

pub mod arith;
pub mod cache;
pub mod correspond;
pub mod enumerate;
pub mod error;
pub mod form;
pub mod genus;
pub mod lattice;
pub mod neighbors;
pub mod verify;

pub use error::{Error, Result};
pub use form::TernaryForm;
pub use lattice::{BasisChange, Vector};
