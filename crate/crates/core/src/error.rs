use std::path::PathBuf;

use crate::model::Violation;

/// Errors raised anywhere in the recovery and evaluation pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {path} at line {line}, column {column}: {message}")]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid dependency graph ({} violation(s)): {}", .0.len(), summarize(.0))]
    Validation(Vec<Violation>),
    #[error("unknown dependency type(s): {}", .0.join(", "))]
    UnknownDependencyTypes(Vec<String>),
    #[error("{0}")]
    Empty(&'static str),
    #[error("architectures do not share the same universe ({left} vs {right} entities, {shared} shared)")]
    UniverseMismatch {
        left: usize,
        right: usize,
        shared: usize,
    },
    #[error("invalid architecture: {0}")]
    InvalidArchitecture(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown file `{0}`")]
    UnknownFile(String),
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("oracle limited to small instances (got {0} entities, max 8)")]
    OracleTooLarge(usize),
    #[error("config error: {0}")]
    Config(String),
    #[error("RSF parse error in {path} line {line}: {message}")]
    Rsf {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

fn summarize(violations: &[Violation]) -> String {
    let shown: Vec<String> = violations.iter().take(5).map(|v| v.to_string()).collect();
    let mut out = shown.join("; ");
    if violations.len() > 5 {
        out.push_str(&format!("; ... and {} more", violations.len() - 5));
    }
    out
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, err: &serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }

    /// Tags the error with the pipeline stage it came from; already tagged errors keep their tag.
    pub fn in_stage(self, stage: &'static str) -> Self {
        match self {
            Error::Stage { .. } => self,
            other => Error::Stage {
                stage,
                source: Box::new(other),
            },
        }
    }

    /// True for errors caused by unusable user input rather than a pipeline failure.
    pub fn is_input_error(&self) -> bool {
        if let Error::Stage { source, .. } = self {
            return source.is_input_error();
        }
        matches!(
            self,
            Error::Io { .. }
                | Error::Json { .. }
                | Error::Validation(_)
                | Error::UnknownDependencyTypes(_)
                | Error::Config(_)
                | Error::Rsf { .. }
                | Error::UnknownName { .. }
                | Error::UniverseMismatch { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
