//! Builds the three raw information sources from on-disk inputs: the
//! dependency graph, word occurrences, and the folder tree.

mod depjson;
mod folders;
mod text;
mod tokenize;

pub use depjson::{
    adapt_depends_output, adapt_depends_str, parse_dependency_json, parse_dependency_str, validate_document,
    write_dependency_json, DependencyDocument, EdgeRecord, EntityRecord, MEMBER_SEPARATOR,
};
pub use folders::scan_folders;
pub use text::{extract_text, Preprocessor, SkipReport, TextExtraction};
pub use tokenize::tokenize_identifier;

use crate::model::{DependencyGraph, EntityKind, FolderTree};

/// Folder tree over the file entities of `g`, using their names as paths.
pub fn scan_graph_folders(g: &DependencyGraph) -> FolderTree {
    scan_folders(
        g.entities
            .iter()
            .filter(|e| e.kind == EntityKind::File)
            .map(|e| (e.id.as_str(), e.name.as_str())),
    )
}
