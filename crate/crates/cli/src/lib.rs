//! Command-line interface and HTTP query service for competency models.

pub mod cli;
pub mod query;
pub mod server;

pub use cli::run;
