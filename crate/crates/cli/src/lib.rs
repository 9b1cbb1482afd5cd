//! Operating an atlas store from the command line: seeding it from files,
//! dumping it back out, drawing it and running coverage simulations.

pub mod dump;
pub mod error;
pub mod import;
pub mod render;
pub mod sim;

pub use error::CliError;
