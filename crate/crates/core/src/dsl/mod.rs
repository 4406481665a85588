//! A small text language for charts, fields, volumes and queries.
//!
//! ```text
//! chart M { odd xi1, xi2; }
//! field Q on M = xi1*xi2*@xi2;
//! assert modular Q == -xi1;
//! ```

mod ast;
mod exec;
mod lexer;
mod parser;
mod printer;
mod report;

use std::fmt;

pub use ast::*;
pub use exec::{execute, Options};
pub use lexer::Pos;
pub use parser::parse;
pub use report::{ErrorKind, Record, Report, ScriptError, Status, Summary};

/// A lexical or syntax error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub token: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} (at `{}`)", self.pos, self.message, self.token)
    }
}

impl std::error::Error for ParseError {}

/// Canonical text of a script.
pub fn format(src: &str) -> Result<String, ParseError> {
    Ok(parse(src)?.to_string())
}

/// Parse and execute; parse errors are reported like any other failure.
pub fn run(src: &str, opts: &Options) -> Report {
    match parse(src) {
        Ok(script) => execute(&script, opts),
        Err(e) => {
            let mut r = Report::new();
            r.fail(e.into());
            r
        }
    }
}
