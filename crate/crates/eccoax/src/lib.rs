//! Sweeps, configuration, file formats and the command-line front end of the
//! eccentric coaxial waveguide solver in [`eccoax_core`].

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;
pub mod solve;
pub mod sweeps;
pub mod validate;

pub use eccoax_core;
pub use error::CliError;
