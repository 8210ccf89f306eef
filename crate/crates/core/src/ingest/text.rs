//! Lexical extraction of filename, definition and comment words.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rust_stemmers::{Algorithm, Stemmer};

use super::tokenize::tokenize_identifier;
use crate::error::{Error, Result};
use crate::model::{DependencyGraph, Entity, EntityKind, SourceKind, WordOccurrence};

const ENGLISH: &str = include_str!("../../data/stopwords_english.txt");
const KEYWORDS: [&str; 3] = [
    include_str!("../../data/keywords_c.txt"),
    include_str!("../../data/keywords_cpp.txt"),
    include_str!("../../data/keywords_java.txt"),
];

/// Files that could not be read during extraction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SkipReport {
    pub entries: Vec<(String, String)>,
}

impl SkipReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for SkipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (path, reason) in &self.entries {
            writeln!(f, "SKIP {path} {reason}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct TextExtraction {
    pub occurrences: Vec<WordOccurrence>,
    pub skipped: SkipReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CommentStyle {
    /// `//` and `/* */`
    CLike,
    /// `#`
    Hash,
}

fn comment_style(path: &str) -> CommentStyle {
    let ext = Path::new(path).extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext.to_ascii_lowercase().as_str() {
        "py" | "sh" | "bash" | "rb" | "pl" | "pm" | "r" | "cmake" | "mk" | "yml" | "yaml" | "toml" => CommentStyle::Hash,
        _ => CommentStyle::CLike,
    }
}

/// Splits source text into (code, comments), skipping over string and
/// character literals so delimiters inside them are not mistaken for comments.
fn split_comments(text: &str, style: CommentStyle) -> (String, Vec<String>) {
    let bytes: Vec<char> = text.chars().collect();
    let mut code = String::with_capacity(text.len());
    let mut comments = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let next = bytes.get(i + 1).copied();
        match (style, c, next) {
            (CommentStyle::CLike, '/', Some('/')) | (CommentStyle::Hash, '#', _) => {
                let start = i + if c == '#' { 1 } else { 2 };
                let mut j = start;
                while j < bytes.len() && bytes[j] != '\n' {
                    j += 1;
                }
                comments.push(bytes[start..j].iter().collect());
                i = j;
            }
            (CommentStyle::CLike, '/', Some('*')) => {
                let start = i + 2;
                let mut j = start;
                while j + 1 < bytes.len() && !(bytes[j] == '*' && bytes[j + 1] == '/') {
                    j += 1;
                }
                let end = j.min(bytes.len());
                comments.push(bytes[start..end].iter().collect());
                i = (j + 2).min(bytes.len());
                code.push(' ');
            }
            (_, '"', _) | (_, '\'', _) => {
                let quote = c;
                code.push(c);
                let mut j = i + 1;
                while j < bytes.len() && bytes[j] != quote && bytes[j] != '\n' {
                    if bytes[j] == '\\' {
                        j += 1;
                    }
                    j += 1;
                }
                // Literal contents never contribute words.
                code.push(quote);
                i = (j + 1).min(bytes.len());
            }
            _ => {
                code.push(c);
                i += 1;
            }
        }
    }
    (code, comments)
}

fn identifier_tokens(code: &str) -> HashSet<&str> {
    code.split(|c: char| !(c.is_alphanumeric() || c == '_'))
        .filter(|s| !s.is_empty())
        .collect()
}

/// Last component of a possibly qualified entity name.
fn simple_name(name: &str) -> &str {
    let name = name.rsplit("::").next().unwrap_or(name);
    let name = name.rsplit('.').next().unwrap_or(name);
    name.split('(').next().unwrap_or(name)
}

fn is_definition(e: &Entity, g: &DependencyGraph) -> bool {
    match e.kind {
        EntityKind::Class | EntityKind::Function => true,
        EntityKind::Variable => match e.parent_id.as_deref() {
            None => true,
            Some(p) => g.entity(p).is_none_or(|p| p.kind == EntityKind::File),
        },
        _ => false,
    }
}

type OccKey = (String, SourceKind, String, Option<String>);

fn extract_file(
    file: &Entity,
    members: &[&Entity],
    text: &str,
) -> Vec<WordOccurrence> {
    let mut counts: BTreeMap<OccKey, u32> = BTreeMap::new();
    let mut add = |kind: SourceKind, word: String, entity: Option<&str>| {
        *counts
            .entry((file.id.clone(), kind, word, entity.map(str::to_string)))
            .or_insert(0) += 1;
    };

    let file_name = Path::new(&file.name)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(&file.name);
    for w in tokenize_identifier(file_name) {
        add(SourceKind::Filename, w, None);
    }

    let (code, comments) = split_comments(text, comment_style(&file.name));
    for comment in &comments {
        for w in tokenize_identifier(comment) {
            add(SourceKind::Comment, w, None);
        }
    }

    let idents = identifier_tokens(&code);
    for e in members {
        let name = simple_name(&e.name);
        if name.is_empty() || !idents.contains(name) {
            continue;
        }
        for w in tokenize_identifier(name) {
            add(SourceKind::Definition, w, Some(&e.id));
        }
    }

    counts
        .into_iter()
        .map(|((file_id, kind, word, entity), count)| WordOccurrence::new(file_id, entity, kind, word, count))
        .collect()
}

/// Extracts words from the three allowed sources of every file entity in `g`.
///
/// File entity names are paths relative to `source_root`. Unreadable files are
/// skipped and listed in the returned report.
pub fn extract_text(source_root: impl AsRef<Path>, g: &DependencyGraph) -> TextExtraction {
    let root = source_root.as_ref();
    let mut members: BTreeMap<&str, Vec<&Entity>> = BTreeMap::new();
    for e in &g.entities {
        if is_definition(e, g) {
            members.entry(e.file_id.as_str()).or_default().push(e);
        }
    }
    let mut files: Vec<&Entity> = g.entities.iter().filter(|e| e.kind == EntityKind::File).collect();
    files.sort_by(|a, b| a.id.cmp(&b.id));

    let results: Vec<std::result::Result<Vec<WordOccurrence>, (String, String)>> = files
        .par_iter()
        .map(|file| {
            let path: PathBuf = root.join(&file.name);
            let bytes = std::fs::read(&path).map_err(|e| (file.name.clone(), e.kind().to_string().replace(' ', "_")))?;
            let text = String::from_utf8_lossy(&bytes);
            let m = members.get(file.id.as_str()).map(Vec::as_slice).unwrap_or(&[]);
            Ok(extract_file(file, m, &text))
        })
        .collect();

    let mut out = TextExtraction::default();
    for r in results {
        match r {
            Ok(occs) => out.occurrences.extend(occs),
            Err(skip) => {
                log::warn!("skipping {}: {}", skip.0, skip.1);
                out.skipped.entries.push(skip);
            }
        }
    }
    sort_occurrences(&mut out.occurrences);
    out
}

fn sort_occurrences(occs: &mut [WordOccurrence]) {
    occs.sort_by(|a, b| {
        (&a.file_id, a.source_kind, &a.word, &a.entity_id).cmp(&(&b.file_id, b.source_kind, &b.word, &b.entity_id))
    });
}

/// Stop-word removal and stemming.
pub struct Preprocessor {
    stop: HashSet<String>,
    stemmer: Stemmer,
}

impl Default for Preprocessor {
    fn default() -> Self {
        let stop = std::iter::once(ENGLISH)
            .chain(KEYWORDS)
            .flat_map(str::lines)
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .map(str::to_string)
            .collect();
        Preprocessor {
            stop,
            stemmer: Stemmer::create(Algorithm::English),
        }
    }
}

impl Preprocessor {
    /// Adds stop words from a newline-separated list.
    pub fn extend_stop_words(&mut self, list: &str) {
        self.stop
            .extend(list.lines().map(|w| w.trim().to_lowercase()).filter(|w| !w.is_empty()));
    }

    pub fn load_stop_words(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.extend_stop_words(&text);
        Ok(())
    }

    /// Canonical form of one word, or `None` when it is filtered out.
    pub fn normalize(&self, word: &str) -> Option<String> {
        let lower = word.to_lowercase();
        if self.stop.contains(&lower) {
            return None;
        }
        let stem = self.stemmer.stem(&lower).into_owned();
        if stem.chars().count() < 2 || self.stop.contains(&stem) {
            return None;
        }
        Some(stem)
    }

    /// Normalizes every occurrence, merging those that collapse to the same word.
    pub fn preprocess_words(&self, occs: Vec<WordOccurrence>) -> Vec<WordOccurrence> {
        let mut merged: BTreeMap<OccKey, WordOccurrence> = BTreeMap::new();
        for occ in occs {
            let Some(word) = self.normalize(&occ.word) else { continue };
            let key = (occ.file_id.clone(), occ.source_kind, word.clone(), occ.entity_id.clone());
            merged
                .entry(key)
                .and_modify(|m| m.count += occ.count)
                .or_insert(WordOccurrence { word, weight: None, ..occ });
        }
        let mut out: Vec<WordOccurrence> = merged.into_values().collect();
        sort_occurrences(&mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DependencyEdge;

    fn words(occs: &[WordOccurrence], kind: SourceKind) -> Vec<&str> {
        occs.iter().filter(|o| o.source_kind == kind).map(|o| o.word.as_str()).collect()
    }

    #[test]
    fn filename_and_comment_words() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("trio.c"), "/* trio format */\nint x;\n").unwrap();
        let g = DependencyGraph::new(vec![Entity::file("trio.c")], vec![]);
        let out = extract_text(dir.path(), &g);
        assert_eq!(words(&out.occurrences, SourceKind::Filename), ["trio"]);
        assert_eq!(words(&out.occurrences, SourceKind::Comment), ["format", "trio"]);
        assert!(out.skipped.is_empty());
    }

    #[test]
    fn definitions_are_split_and_bodies_ignored() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("plot.c"),
            "void plotFigure(void) { int localCounter = 0; char *s = \"// not a comment\"; }\n",
        )
        .unwrap();
        let g = DependencyGraph::new(
            vec![
                Entity::file("plot.c"),
                Entity::new("plot.c#plotFigure", EntityKind::Function, "plotFigure", "plot.c", Some("plot.c".into())),
            ],
            vec![DependencyEdge::new("plot.c#plotFigure", "plot.c", crate::model::DepType::Contain, 1)],
        );
        let out = extract_text(dir.path(), &g);
        assert_eq!(words(&out.occurrences, SourceKind::Definition), ["figure", "plot"]);
        assert!(words(&out.occurrences, SourceKind::Comment).is_empty());
        let def = out.occurrences.iter().find(|o| o.word == "figure").unwrap();
        assert_eq!(def.entity_id.as_deref(), Some("plot.c#plotFigure"));
        assert_eq!(out.occurrences.len(), 3);
    }

    #[test]
    fn unreadable_files_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let g = DependencyGraph::new(vec![Entity::file("gone.c")], vec![]);
        let out = extract_text(dir.path(), &g);
        assert!(out.occurrences.is_empty());
        assert!(out.skipped.to_string().starts_with("SKIP gone.c "));
    }

    #[test]
    fn hash_comments_for_scripts() {
        let (code, comments) = split_comments("x = 1  # set the counter\n", CommentStyle::Hash);
        assert_eq!(comments, [" set the counter"]);
        assert!(!code.contains("counter"));
    }

    #[test]
    fn preprocessing_rules() {
        let p = Preprocessor::default();
        assert_eq!(p.normalize("the"), None);
        assert_eq!(p.normalize("int"), None);
        assert_eq!(p.normalize("parsers").as_deref(), Some("parser"));
        assert_eq!(p.normalize("x"), None);
        assert_eq!(p.normalize("trio").as_deref(), Some("trio"));
    }

    #[test]
    fn preprocessing_merges_collapsed_words() {
        let p = Preprocessor::default();
        let occs = vec![
            WordOccurrence::new("a", None, SourceKind::Comment, "parser", 1),
            WordOccurrence::new("a", None, SourceKind::Comment, "parsers", 2),
            WordOccurrence::new("a", None, SourceKind::Comment, "the", 5),
        ];
        let out = p.preprocess_words(occs);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].count, 3);
    }
}
