//! Expression language, diagrams and command dispatch for the `msset`
//! command-line tool.

pub mod commands;
pub mod diagram;
pub mod expr;

pub use expr::{eval, parse, print, ErrorKind, Expr, ParseError};
