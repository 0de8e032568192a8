//! Command-line front end: builds corpus rings, runs the predicate, lemma
//! and roundtrip suites, and reads and writes the text formats.

pub mod commands;
pub mod report;

pub use commands::{run, Cli, Output};
