//! Canonical dependency JSON and the adapter for Depends matrix output.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_graph, DepType, DependencyEdge, DependencyGraph, Entity, EntityKind, Violation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityRecord {
    pub id: String,
    pub kind: String,
    pub name: String,
    pub file: String,
    #[serde(default)]
    pub parent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub src: String,
    pub dst: String,
    #[serde(rename = "type")]
    pub dep_type: String,
    pub count: u32,
}

/// On-disk form of a dependency graph.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DependencyDocument {
    #[serde(default)]
    pub entities: Vec<EntityRecord>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

impl DependencyDocument {
    pub fn from_graph(g: &DependencyGraph) -> Self {
        DependencyDocument {
            entities: g
                .entities
                .iter()
                .map(|e| EntityRecord {
                    id: e.id.clone(),
                    kind: e.kind.as_str().to_string(),
                    name: e.name.clone(),
                    file: e.file_id.clone(),
                    parent: e.parent_id.clone(),
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                    dep_type: e.dep_type.as_str().to_string(),
                    count: e.multiplicity,
                })
                .collect(),
        }
    }

    /// Converts to a graph, reporting every violated invariant at once.
    pub fn into_graph(self) -> Result<DependencyGraph> {
        let violations = validate_document(&self);
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        let entities = self
            .entities
            .into_iter()
            .map(|r| Entity {
                kind: r.kind.parse().expect("validated"),
                id: r.id,
                name: r.name,
                file_id: r.file,
                parent_id: r.parent,
                importance: None,
            })
            .collect();
        let edges = self
            .edges
            .into_iter()
            .map(|r| DependencyEdge::new(r.src, r.dst, r.dep_type.parse().expect("validated"), r.count))
            .collect();
        Ok(DependencyGraph::new(entities, edges))
    }
}

/// Violations of the document, including names outside the closed kind and type sets.
pub fn validate_document(doc: &DependencyDocument) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut typed_entities = Vec::new();
    for r in &doc.entities {
        match r.kind.parse::<EntityKind>() {
            Ok(kind) => typed_entities.push(Entity {
                id: r.id.clone(),
                kind,
                name: r.name.clone(),
                file_id: r.file.clone(),
                parent_id: r.parent.clone(),
                importance: None,
            }),
            Err(k) => out.push(Violation::UnknownEntityKind {
                entity: r.id.clone(),
                kind: k,
            }),
        }
    }
    let mut typed_edges = Vec::new();
    for (i, r) in doc.edges.iter().enumerate() {
        match r.dep_type.parse::<DepType>() {
            Ok(t) => typed_edges.push((i, DependencyEdge::new(r.src.clone(), r.dst.clone(), t, r.count))),
            Err(name) => out.push(Violation::UnknownDependencyType { edge: i, name }),
        }
    }
    // Structural checks run on the well-typed subset; edge positions refer to the document.
    let (positions, edges): (Vec<usize>, Vec<DependencyEdge>) = typed_edges.into_iter().unzip();
    let known: HashSet<&str> = doc.entities.iter().map(|e| e.id.as_str()).collect();
    let g = DependencyGraph::new(typed_entities, edges);
    for v in validate_graph(&g) {
        out.push(match v {
            // An entity with an unknown kind still exists; only its kind is wrong.
            Violation::DanglingEndpoint { id, .. } if known.contains(id.as_str()) => continue,
            Violation::DanglingEndpoint { edge, id } => Violation::DanglingEndpoint { edge: positions[edge], id },
            Violation::ZeroMultiplicity { edge } => Violation::ZeroMultiplicity { edge: positions[edge] },
            Violation::UnresolvedParent { parent, .. } if known.contains(parent.as_str()) => continue,
            other => other,
        });
    }
    out
}

pub fn parse_dependency_str(text: &str, origin: &Path) -> Result<DependencyGraph> {
    let doc: DependencyDocument = serde_json::from_str(text).map_err(|e| Error::json(origin, &e))?;
    doc.into_graph()
}

/// Reads a dependency graph in the canonical JSON schema.
pub fn parse_dependency_json(path: impl AsRef<Path>) -> Result<DependencyGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dependency_str(&text, path)
}

pub fn write_dependency_json(g: &DependencyGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(&DependencyDocument::from_graph(g)).expect("serializable");
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

#[derive(Debug, Deserialize)]
struct DependsCell {
    src: usize,
    dest: usize,
    values: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
struct DependsMatrix {
    #[serde(default)]
    granularity: Option<String>,
    variables: Vec<String>,
    #[serde(default)]
    cells: Vec<DependsCell>,
}

/// Separates a file path from a member name in fine-grained Depends variables.
pub const MEMBER_SEPARATOR: char = '#';

pub fn adapt_depends_str(text: &str, origin: &Path) -> Result<DependencyGraph> {
    let m: DependsMatrix = serde_json::from_str(text).map_err(|e| Error::json(origin, &e))?;
    let member_kind = match m.granularity.as_deref().unwrap_or("file") {
        "file" => None,
        "method" | "function" => Some(EntityKind::Function),
        "class" | "type" => Some(EntityKind::Class),
        "var" | "variable" => Some(EntityKind::Variable),
        other => {
            return Err(Error::Config(format!("unsupported Depends granularity `{other}`")));
        }
    };

    let unknown: BTreeSet<String> = m
        .cells
        .iter()
        .flat_map(|c| c.values.keys())
        .filter(|k| k.parse::<DepType>().is_err())
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(Error::UnknownDependencyTypes(unknown.into_iter().collect()));
    }

    let mut entities = Vec::new();
    let mut files = BTreeSet::new();
    let mut ids = Vec::with_capacity(m.variables.len());
    for var in &m.variables {
        match (member_kind, var.split_once(MEMBER_SEPARATOR)) {
            (Some(kind), Some((file, member))) => {
                if files.insert(file.to_string()) {
                    entities.push(Entity::file(file));
                }
                entities.push(Entity::new(var.clone(), kind, member, file, Some(file.to_string())));
            }
            (None, _) => {
                files.insert(var.clone());
                entities.push(Entity::file(var.clone()));
            }
            (Some(_), None) => {
                return Err(Error::Config(format!(
                    "variable `{var}` lacks the `{MEMBER_SEPARATOR}` file/member separator"
                )));
            }
        }
        ids.push(var.clone());
    }

    let mut edges = Vec::new();
    let mut violations = Vec::new();
    for (i, cell) in m.cells.iter().enumerate() {
        let (Some(src), Some(dst)) = (ids.get(cell.src), ids.get(cell.dest)) else {
            violations.push(Violation::DanglingEndpoint {
                edge: i,
                id: format!("{}->{}", cell.src, cell.dest),
            });
            continue;
        };
        for (name, &count) in &cell.values {
            let count = count.round();
            if count < 1.0 {
                continue;
            }
            edges.push(DependencyEdge::new(src.clone(), dst.clone(), name.parse().expect("checked"), count as u32));
        }
    }
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let g = DependencyGraph::new(entities, edges);
    let violations = validate_graph(&g);
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    Ok(g)
}

/// Converts Depends matrix output (`variables` plus per-type `cells`) into a graph.
pub fn adapt_depends_output(path: impl AsRef<Path>) -> Result<DependencyGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    adapt_depends_str(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<DependencyGraph> {
        parse_dependency_str(text, Path::new("test.json"))
    }

    #[test]
    fn two_entities_one_call() {
        let g = parse(
            r#"{"entities":[
                {"id":"a.c","kind":"File","name":"a.c","file":"a.c","parent":null},
                {"id":"a.c#f","kind":"Function","name":"f","file":"a.c","parent":"a.c"}],
              "edges":[{"src":"a.c#f","dst":"a.c","type":"Call","count":1}]}"#,
        )
        .unwrap();
        assert_eq!(g.entities.len(), 2);
        assert_eq!(g.edges.len(), 1);
    }

    #[test]
    fn empty_entity_list_is_fine() {
        let g = parse(r#"{"entities":[],"edges":[]}"#).unwrap();
        assert!(g.entities.is_empty());
    }

    #[test]
    fn missing_endpoint_is_a_validation_error() {
        let err = parse(
            r#"{"entities":[{"id":"a.c","kind":"File","name":"a.c","file":"a.c"}],
              "edges":[{"src":"a.c","dst":"nope","type":"Call","count":1}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Validation(ref v) if v.len() == 1));
    }

    #[test]
    fn unknown_type_is_reported() {
        let err = parse(
            r#"{"entities":[{"id":"a.c","kind":"File","name":"a.c","file":"a.c"}],
              "edges":[{"src":"a.c","dst":"a.c","type":"Foo","count":1}]}"#,
        )
        .unwrap_err();
        let Error::Validation(v) = err else { panic!() };
        assert_eq!(v, vec![Violation::UnknownDependencyType { edge: 0, name: "Foo".into() }]);
    }

    #[test]
    fn malformed_json_carries_line() {
        let err = parse("{\n\"entities\": [\n oops").unwrap_err();
        assert!(matches!(err, Error::Json { line: 3, .. }), "{err}");
    }

    fn adapt(text: &str) -> Result<DependencyGraph> {
        adapt_depends_str(text, Path::new("depends.json"))
    }

    #[test]
    fn depends_cell_maps_to_edge_with_multiplicity() {
        let g = adapt(r#"{"variables":["a.c","b.c"],"cells":[{"src":0,"dest":1,"values":{"Call":2.0}}]}"#).unwrap();
        assert_eq!(g.edges, vec![DependencyEdge::new("a.c", "b.c", DepType::Call, 2)]);
    }

    #[test]
    fn depends_cell_expands_per_type() {
        let g = adapt(r#"{"variables":["a.c","b.c"],"cells":[{"src":0,"dest":1,"values":{"Call":1,"Use":3}}]}"#).unwrap();
        assert_eq!(g.edges.len(), 2);
        assert_eq!(g.edges[1].dep_type, DepType::Use);
        assert_eq!(g.edges[1].multiplicity, 3);
    }

    #[test]
    fn depends_without_cells() {
        let g = adapt(r#"{"variables":["a.c","b.c","c.c"]}"#).unwrap();
        assert_eq!((g.entities.len(), g.edges.len()), (3, 0));
    }

    #[test]
    fn depends_unknown_types_are_named() {
        let err = adapt(r#"{"variables":["a","b"],"cells":[{"src":0,"dest":1,"values":{"Bogus":1,"Weird":2}}]}"#).unwrap_err();
        assert!(matches!(err, Error::UnknownDependencyTypes(ref n) if n == &["Bogus", "Weird"]));
    }

    #[test]
    fn depends_method_granularity_synthesizes_files() {
        let g = adapt(
            r#"{"granularity":"method","variables":["x/a.c#main","x/a.c#helper","b.c#run"],
               "cells":[{"src":0,"dest":2,"values":{"Call":1}}]}"#,
        )
        .unwrap();
        assert_eq!(g.file_ids(), vec!["b.c".to_string(), "x/a.c".to_string()]);
        assert_eq!(g.entity("x/a.c#main").unwrap().kind, EntityKind::Function);
    }
}
