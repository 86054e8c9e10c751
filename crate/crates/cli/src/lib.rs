//! Command-line surface for `torocob`: versioned JSON documents, command
//! dispatch with a fixed exit-code contract, and the example corpus.

pub mod corpus;
pub mod run;
pub mod schema;

pub use run::{run, run_args, Cli, CliError, Command, Outcome};
