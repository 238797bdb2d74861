//! JSON game and setup documents, solver traces and Graphviz export.

mod document;
mod dot;
mod trace;

use std::fmt;

use serde::de::DeserializeOwned;
use serde::Serialize;

pub use document::{
    game_from_document, game_to_document, game_to_json, parse_game, GameDocument, NodeDocument,
    OutcomeDocument, UniqueMap,
};
pub use dot::{export_dot, DotError};
pub use trace::{
    trace_document, trace_to_json, MaximinEntry, PreemptionEntry, StepEntry, TraceDocument,
};

use crate::spacetime::{SetupSpec, SpacetimeError, SpacetimeSetup};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParseCode {
    /// Input is empty or whitespace.
    Empty,
    /// Not well-formed JSON.
    Syntax,
    /// Well-formed JSON that does not fit the schema (including unknown and
    /// repeated keys).
    Schema,
    DuplicateId,
    /// The document fits the schema but its names do not resolve.
    Invalid,
}

impl fmt::Display for ParseCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub code: ParseCode,
    pub message: String,
    /// Location inside the document, e.g. `nodes[2].moves`.
    pub path: Option<String>,
    /// 1-based line and column, when known.
    pub position: Option<(usize, usize)>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)?;
        if let Some((line, column)) = self.position {
            write!(f, " at line {line}, column {column}")?;
        }
        if let Some(path) = &self.path {
            write!(f, " ({path})")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    fn new(code: ParseCode, message: impl Into<String>) -> Self {
        ParseError {
            code,
            message: message.into(),
            path: None,
            position: None,
        }
    }
}

/// Deserializes with path tracking, rejecting empty input.
fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::new(ParseCode::Empty, "document is empty"));
    }
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let code = match inner.classify() {
            serde_json::error::Category::Data => ParseCode::Schema,
            _ => ParseCode::Syntax,
        };
        ParseError {
            code,
            message: inner.to_string(),
            path: (path != ".").then_some(path),
            position: (inner.line() > 0).then(|| (inner.line(), inner.column())),
        }
    })?;
    de.end().map_err(|e| ParseError {
        code: ParseCode::Syntax,
        message: e.to_string(),
        path: None,
        position: Some((e.line(), e.column())),
    })?;
    Ok(value)
}

pub fn parse_setup(text: &str) -> Result<SpacetimeSetup, ParseError> {
    let spec: SetupSpec = from_json(text)?;
    SpacetimeSetup::new(spec).map_err(|e| {
        let code = match e {
            SpacetimeError::Duplicate { .. } => ParseCode::DuplicateId,
            _ => ParseCode::Invalid,
        };
        ParseError::new(code, e.to_string())
    })
}

pub fn setup_to_json(setup: &SpacetimeSetup) -> String {
    serde_json::to_string_pretty(&setup.to_spec()).expect("setup serializes")
}
