use thiserror::Error;

use crate::kernel::{Point2, Point3, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HullError {
    #[error("input point set is empty")]
    EmptyInput,
    #[error("segment endpoints coincide at {0}")]
    DegenerateSegment(Point2),
    #[error("points at mixed heights ({0} and {1}) where a single height is required")]
    MixedHeights(Rational, Rational),
    #[error("complex does not match the hv-hull of the given active set")]
    InconsistentComplex,
    #[error("malformed trace: {0}")]
    MalformedTrace(String),
    #[error("shovel functional must have a non-zero linear part")]
    DegenerateShovel,
    #[error("point {0} is not in the active set")]
    NotActive(Point3),
}

/// Failure to read an input or complex document.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocumentError {
    #[error("input is not valid UTF-8: {0}")]
    Utf8(String),
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("document contains no points")]
    NoPoints,
    #[error("{labels} labels given for {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("inconsistent complex document: {0}")]
    Inconsistent(String),
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep the message bare.
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}
