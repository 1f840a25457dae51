use std::fmt;

use thiserror::Error;

use crate::elim::Violation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Malformed,
    DuplicateEdge,
    SelfLoop,
    Cycle,
    /// JSON edge ids are not exactly `0..|E|`.
    EdgeIds,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Malformed => "expected two vertex labels",
            ParseErrorKind::DuplicateEdge => "duplicate edge",
            ParseErrorKind::SelfLoop => "self-loop",
            ParseErrorKind::Cycle => "edge closes a cycle",
            ParseErrorKind::EdgeIds => "edge ids must be 0..|E| without gaps",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind} ({text:?})")]
pub struct ParseError {
    pub line: usize,
    pub text: String,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("format: {0}")]
    Format(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("ranking does not cover the forest: missing {missing:?}, extra {extra:?}")]
    Coverage {
        missing: Vec<usize>,
        extra: Vec<usize>,
    },
    #[error("invalid ranking: {}", render_violations(.0))]
    InvalidRanking(Vec<Violation>),
    #[error("edge {0} is already ranked")]
    AlreadyRanked(usize),
    #[error("shape: {0}")]
    Shape(String),
    #[error("{edges} edges exceed the exact-search guard of {guard}; use force to override")]
    GuardExceeded { edges: usize, guard: usize },
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("schedule step {step}: edges {a} and {b} are not a matching")]
    ScheduleInvalid { step: usize, a: usize, b: usize },
    #[error("schedule: {0}")]
    Schedule(String),
    #[error("parameter: {0}")]
    Parameter(String),
    #[error("certification incomplete: {0}")]
    CertificationIncomplete(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

fn render_violations(v: &[Violation]) -> String {
    let shown: Vec<String> = v.iter().take(5).map(|x| x.to_string()).collect();
    let mut s = shown.join("; ");
    if v.len() > 5 {
        s.push_str(&format!("; and {} more", v.len() - 5));
    }
    s
}

impl Error {
    /// Short machine-readable tag used in CLI error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
            Error::Format(_) => "format",
            Error::UnknownVertex(_) => "unknown-vertex",
            Error::UnknownEdge(_) => "unknown-edge",
            Error::InvalidSize(_) => "invalid-size",
            Error::Coverage { .. } => "coverage",
            Error::InvalidRanking(_) => "invalid-ranking",
            Error::AlreadyRanked(_) => "already-ranked",
            Error::Shape(_) => "shape",
            Error::GuardExceeded { .. } => "guard-exceeded",
            Error::Precondition(_) => "precondition",
            Error::Infeasible(_) => "infeasible",
            Error::ScheduleInvalid { .. } | Error::Schedule(_) => "schedule-invalid",
            Error::Parameter(_) => "parameter",
            Error::CertificationIncomplete(_) => "certification-incomplete",
            Error::Invariant(_) => "internal-invariant",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
