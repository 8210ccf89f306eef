use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SourceKind {
    Filename,
    Definition,
    Comment,
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceKind::Filename => "filename",
            SourceKind::Definition => "definition",
            SourceKind::Comment => "comment",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordOccurrence {
    pub file_id: String,
    pub entity_id: Option<String>,
    pub source_kind: SourceKind,
    pub word: String,
    pub count: u32,
    pub weight: Option<f64>,
}

impl WordOccurrence {
    pub fn new(file_id: impl Into<String>, entity_id: Option<String>, source_kind: SourceKind, word: impl Into<String>, count: u32) -> Self {
        WordOccurrence {
            file_id: file_id.into(),
            entity_id,
            source_kind,
            word: word.into(),
            count,
            weight: None,
        }
    }
}

/// Per-file topic distribution; entries are non-negative and sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicEmbedding {
    pub file_id: String,
    pub distribution: Vec<f64>,
}
