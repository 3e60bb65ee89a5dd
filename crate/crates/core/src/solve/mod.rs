//! Closed-form solutions built from the special functions.

pub mod basis;
pub mod identities;
pub mod ode;
pub mod series;
pub mod system;

pub use basis::{BasisTerm, ClosedFormSolution};
