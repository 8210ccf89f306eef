use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DependencyGraph, EntityKind, SourceKind, WordOccurrence};

/// Multiplier per origin of a word.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceKindWeights {
    pub filename: f64,
    pub definition: f64,
    pub comment: f64,
}

impl Default for SourceKindWeights {
    fn default() -> Self {
        SourceKindWeights {
            filename: 3.0,
            definition: 2.0,
            comment: 1.0,
        }
    }
}

impl SourceKindWeights {
    pub fn new(filename: f64, definition: f64, comment: f64) -> Result<Self> {
        let w = SourceKindWeights {
            filename,
            definition,
            comment,
        };
        for (name, v) in [("filename", filename), ("definition", definition), ("comment", comment)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("source weight `{name}` must be positive, got {v}")));
            }
        }
        Ok(w)
    }

    pub fn get(&self, kind: SourceKind) -> f64 {
        match kind {
            SourceKind::Filename => self.filename,
            SourceKind::Definition => self.definition,
            SourceKind::Comment => self.comment,
        }
    }
}

/// TF-IDF per `(file, word)` over a corpus of `n_files` documents.
///
/// `tf = count / words in file`, `idf = ln(n_files / df)`. Files without
/// words produce no entries but still count towards `n_files`.
pub fn tf_idf(occs: &[WordOccurrence], n_files: usize) -> Result<BTreeMap<(String, String), f64>> {
    let mut counts: BTreeMap<(&str, &str), u64> = BTreeMap::new();
    let mut totals: HashMap<&str, u64> = HashMap::new();
    for o in occs.iter().filter(|o| o.count > 0) {
        *counts.entry((o.file_id.as_str(), o.word.as_str())).or_insert(0) += u64::from(o.count);
        *totals.entry(o.file_id.as_str()).or_insert(0) += u64::from(o.count);
    }
    if n_files == 0 || totals.len() > n_files {
        return Err(Error::InvalidArgument(format!(
            "corpus size {n_files} is smaller than the {} files with words",
            totals.len()
        )));
    }
    let mut df: HashMap<&str, usize> = HashMap::new();
    for &(_, word) in counts.keys() {
        *df.entry(word).or_insert(0) += 1;
    }
    Ok(counts
        .into_iter()
        .map(|((file, word), c)| {
            let tf = c as f64 / totals[file] as f64;
            let idf = (n_files as f64 / df[word] as f64).ln();
            ((file.to_string(), word.to_string()), tf * idf)
        })
        .collect())
}

/// Sets `weight = source weight * entity factor * tfidf` on every occurrence.
///
/// The entity factor is the entity's importance over the largest importance
/// of any non-file entity in the same file, or 1.0 when the occurrence has no
/// entity or the file carries no importance at all.
pub fn weigh_words(
    occs: &[WordOccurrence],
    skw: &SourceKindWeights,
    g: &DependencyGraph,
    n_files: usize,
) -> Result<Vec<WordOccurrence>> {
    let tfidf = tf_idf(occs, n_files)?;
    let mut max_in_file: HashMap<&str, f64> = HashMap::new();
    for e in g.entities.iter().filter(|e| e.kind != EntityKind::File) {
        let imp = e.importance.unwrap_or(0.0);
        let m = max_in_file.entry(e.file_id.as_str()).or_insert(0.0);
        *m = m.max(imp);
    }
    Ok(occs
        .iter()
        .map(|o| {
            let factor = match o.entity_id.as_deref().and_then(|id| g.entity(id)) {
                Some(e) if e.kind != EntityKind::File => {
                    let max = max_in_file.get(e.file_id.as_str()).copied().unwrap_or(0.0);
                    if max > 0.0 {
                        e.importance.unwrap_or(0.0) / max
                    } else {
                        1.0
                    }
                }
                _ => 1.0,
            };
            let t = tfidf
                .get(&(o.file_id.clone(), o.word.clone()))
                .copied()
                .unwrap_or(0.0);
            let mut out = o.clone();
            out.weight = Some(skw.get(o.source_kind) * factor * t);
            out
        })
        .collect())
}
