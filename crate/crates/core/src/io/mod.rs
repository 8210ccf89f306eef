//! Architecture interchange formats: RSF and JSON.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Architecture;

/// One `contain <cluster> <file>` line per file, sorted, LF-terminated.
pub fn write_rsf(arch: &Architecture) -> String {
    let mut lines: Vec<String> = arch
        .clusters()
        .iter()
        .flat_map(|(c, files)| files.iter().map(move |f| format!("contain {c} {f}\n")))
        .collect();
    lines.sort();
    lines.concat()
}

pub fn parse_rsf(text: &str, origin: &Path) -> Result<Architecture> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [] => continue,
            ["contain", cluster, file] => pairs.push((file.to_string(), cluster.to_string())),
            _ => {
                return Err(Error::Rsf {
                    path: origin.to_path_buf(),
                    line: i + 1,
                    message: format!("expected `contain <cluster> <file>`, got `{line}`"),
                })
            }
        }
    }
    Architecture::from_assignment(pairs).map_err(|e| Error::Rsf {
        path: origin.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })
}

#[derive(Serialize, Deserialize)]
struct ArchitectureDoc {
    clusters: BTreeMap<String, Vec<String>>,
}

/// `{"clusters": {name: [files]}}` with sorted keys and arrays.
pub fn architecture_to_json(arch: &Architecture) -> String {
    let doc = ArchitectureDoc {
        clusters: arch
            .clusters()
            .iter()
            .map(|(c, fs)| (c.clone(), fs.iter().cloned().collect()))
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("architecture serializes");
    s.push('\n');
    s
}

pub fn architecture_from_json(text: &str, origin: &Path) -> Result<Architecture> {
    let doc: ArchitectureDoc = serde_json::from_str(text).map_err(|e| Error::json(origin, &e))?;
    Architecture::from_clusters(doc.clusters)
}

/// Reads an architecture, as JSON when the extension is `.json` and RSF otherwise.
pub fn read_architecture(path: impl AsRef<Path>) -> Result<Architecture> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        architecture_from_json(&text, path)
    } else {
        parse_rsf(&text, path)
    }
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    write_text(path, &s)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, &e))
}
