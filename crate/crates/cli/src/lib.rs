//! Command-line driver for `schedmatch`: problem files, commands and output.

pub mod commands;
pub mod corpus;
pub mod document;
pub mod error;
pub mod problem;
pub mod render;

pub use commands::run;
pub use document::{parse_document, render_document, ProblemDocument};
pub use error::{CliError, Result};
pub use problem::{parse_problem, Problem, Shape};
