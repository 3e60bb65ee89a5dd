//! Command-line front end for `pantograph-core` and the acceptance suites.

pub mod checks;
pub mod commands;
pub mod envelope;
