use std::fmt::Write as _;

use serde::Serialize;

use super::lexer::Pos;
use super::ParseError;
use crate::modular::VerdictRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    Parse,
    Type,
    Runtime,
}

/// An error that stopped a script, with the statement position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScriptError {
    pub kind: ErrorKind,
    #[serde(flatten)]
    pub pos: Pos,
    pub message: String,
}

impl ScriptError {
    pub fn type_error(pos: Pos, message: impl Into<String>) -> Self {
        ScriptError {
            kind: ErrorKind::Type,
            pos,
            message: message.into(),
        }
    }
}

impl From<ParseError> for ScriptError {
    fn from(e: ParseError) -> Self {
        ScriptError {
            kind: ErrorKind::Parse,
            pos: e.pos,
            message: format!("{} (at `{}`)", e.message, e.token),
        }
    }
}

impl std::fmt::Display for ScriptError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            ErrorKind::Parse => "parse error",
            ErrorKind::Type => "type error",
            ErrorKind::Runtime => "runtime error",
        };
        write!(f, "{kind} at {}: {}", self.pos, self.message)
    }
}

/// One query or assertion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub line: usize,
    pub query: String,
    pub inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    pub elapsed_us: u64,
}

impl Record {
    pub fn new(pos: Pos, query: String) -> Self {
        Record {
            line: pos.line,
            query,
            inputs: Vec::new(),
            value: None,
            verdict: None,
            passed: None,
            expected: None,
            actual: None,
            elapsed_us: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    AssertionFailed,
    ParseError,
    TypeError,
    RuntimeError,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub queries: usize,
    pub assertions: usize,
    pub failed: usize,
}

/// Outcome of running a script.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub status: Status,
    pub summary: Summary,
    pub records: Vec<Record>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ScriptError>,
}

impl Default for Report {
    fn default() -> Self {
        Report::new()
    }
}

impl Report {
    pub fn new() -> Self {
        Report {
            schema: 1,
            status: Status::Ok,
            summary: Summary::default(),
            records: Vec::new(),
            error: None,
        }
    }

    pub fn push(&mut self, r: Record) {
        match r.passed {
            Some(p) => {
                self.summary.assertions += 1;
                if !p {
                    self.summary.failed += 1;
                    if self.status == Status::Ok {
                        self.status = Status::AssertionFailed;
                    }
                }
            }
            None => self.summary.queries += 1,
        }
        self.records.push(r);
    }

    pub fn fail(&mut self, e: ScriptError) {
        self.status = match e.kind {
            ErrorKind::Parse => Status::ParseError,
            ErrorKind::Type => Status::TypeError,
            ErrorKind::Runtime => Status::RuntimeError,
        };
        self.error = Some(e);
    }

    /// 0 success, 1 assertion failure, 2 parse or type error, 3 runtime error.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::AssertionFailed => 1,
            Status::ParseError | Status::TypeError => 2,
            Status::RuntimeError => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Human-readable form; leaves out timings so it is reproducible.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            match (r.passed, &r.value, &r.verdict) {
                (Some(true), ..) => writeln!(out, "{:>4}  {}  ok", r.line, r.query),
                (Some(false), ..) => {
                    let _ = writeln!(out, "{:>4}  {}  FAILED", r.line, r.query);
                    if let (Some(e), Some(a)) = (&r.expected, &r.actual) {
                        let _ = writeln!(out, "        expected: {e}");
                        let _ = writeln!(out, "        actual:   {a}");
                    }
                    Ok(())
                }
                (None, Some(v), _) => writeln!(out, "{:>4}  {}  =>  {v}", r.line, r.query),
                (None, None, Some(v)) => {
                    let detail = match &v.witness {
                        Some(w) => format!("exact, witness {w}"),
                        None if v.complete => format!("not exact (complete search, bound {})", v.bound),
                        None => format!("no witness up to degree {} (search incomplete)", v.bound),
                    };
                    writeln!(out, "{:>4}  {}  =>  {detail}", r.line, r.query)
                }
                (None, None, None) => writeln!(out, "{:>4}  {}", r.line, r.query),
            }
            .expect("writing to a string");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "{e}");
        }
        let _ = writeln!(
            out,
            "{} queries, {} assertions, {} failed",
            self.summary.queries, self.summary.assertions, self.summary.failed
        );
        out
    }
}
