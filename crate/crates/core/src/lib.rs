#![no_std]
//! Special functions, zero tables and closed-form solvers for linear
//! pantograph equations `y'(x) = b y(a x)` with `0 < a <= 1`.

extern crate alloc;

pub mod bvp;
pub mod error;
pub mod general_point;
pub mod oracle;
pub mod pde;
pub mod quad;
pub mod solve;
pub mod special;
pub mod sum;
pub mod zeros;

pub use error::{Error, Result};
pub use special::{Alpha, EvalOptions, SeriesValue, SpecialFunctionKind};
