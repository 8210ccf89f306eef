use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub type EntityId = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityKind {
    File,
    Class,
    Function,
    Variable,
    Other,
}

impl EntityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::File => "File",
            EntityKind::Class => "Class",
            EntityKind::Function => "Function",
            EntityKind::Variable => "Variable",
            EntityKind::Other => "Other",
        }
    }
}

impl FromStr for EntityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "File" => Ok(EntityKind::File),
            "Class" => Ok(EntityKind::Class),
            "Function" => Ok(EntityKind::Function),
            "Variable" => Ok(EntityKind::Variable),
            "Other" => Ok(EntityKind::Other),
            _ => Err(s.to_string()),
        }
    }
}

/// The closed set of relation kinds an extractor can report between entities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DepType {
    Implement,
    Throw,
    Call,
    Create,
    ImplLink,
    Extend,
    Use,
    Parameter,
    Import,
    Cast,
    Return,
    Contain,
    MixIn,
}

impl DepType {
    pub const ALL: [DepType; 13] = [
        DepType::Implement,
        DepType::Throw,
        DepType::Call,
        DepType::Create,
        DepType::ImplLink,
        DepType::Extend,
        DepType::Use,
        DepType::Parameter,
        DepType::Import,
        DepType::Cast,
        DepType::Return,
        DepType::Contain,
        DepType::MixIn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DepType::Implement => "Implement",
            DepType::Throw => "Throw",
            DepType::Call => "Call",
            DepType::Create => "Create",
            DepType::ImplLink => "ImplLink",
            DepType::Extend => "Extend",
            DepType::Use => "Use",
            DepType::Parameter => "Parameter",
            DepType::Import => "Import",
            DepType::Cast => "Cast",
            DepType::Return => "Return",
            DepType::Contain => "Contain",
            DepType::MixIn => "MixIn",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for DepType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DepType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DepType::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    pub kind: EntityKind,
    pub name: String,
    /// Containing file; equal to `id` for File entities.
    pub file_id: EntityId,
    pub parent_id: Option<EntityId>,
    pub importance: Option<f64>,
}

impl Entity {
    pub fn new(
        id: impl Into<String>,
        kind: EntityKind,
        name: impl Into<String>,
        file_id: impl Into<String>,
        parent_id: Option<String>,
    ) -> Self {
        Entity {
            id: id.into(),
            kind,
            name: name.into(),
            file_id: file_id.into(),
            parent_id,
            importance: None,
        }
    }

    /// A file entity whose id doubles as its path.
    pub fn file(path: impl Into<String>) -> Self {
        let path = path.into();
        Entity::new(path.clone(), EntityKind::File, path.clone(), path, None)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DependencyEdge {
    pub src: EntityId,
    pub dst: EntityId,
    pub dep_type: DepType,
    pub multiplicity: u32,
    pub weight: Option<f64>,
}

impl DependencyEdge {
    pub fn new(src: impl Into<String>, dst: impl Into<String>, dep_type: DepType, multiplicity: u32) -> Self {
        DependencyEdge {
            src: src.into(),
            dst: dst.into(),
            dep_type,
            multiplicity,
            weight: None,
        }
    }
}

/// A single broken invariant found by [`validate_graph`] or document validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(String),
    DanglingEndpoint { edge: usize, id: String },
    UnknownDependencyType { edge: usize, name: String },
    UnknownEntityKind { entity: String, kind: String },
    ZeroMultiplicity { edge: usize },
    UnresolvedFile { entity: String, file: String },
    UnresolvedParent { entity: String, parent: String },
    ParentCycle { entity: String },
    FileNotSelfContained { entity: String },
    NegativeImportance { entity: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId(id) => write!(f, "duplicate entity id `{id}`"),
            Violation::DanglingEndpoint { edge, id } => {
                write!(f, "dangling endpoint: edge #{edge} references unknown entity `{id}`")
            }
            Violation::UnknownDependencyType { edge, name } => {
                write!(f, "unknown dependency type `{name}` on edge #{edge}")
            }
            Violation::UnknownEntityKind { entity, kind } => {
                write!(f, "entity `{entity}` has unknown kind `{kind}`")
            }
            Violation::ZeroMultiplicity { edge } => write!(f, "edge #{edge} has count 0"),
            Violation::UnresolvedFile { entity, file } => {
                write!(f, "entity `{entity}` names file `{file}` which is not a File entity")
            }
            Violation::UnresolvedParent { entity, parent } => {
                write!(f, "entity `{entity}` has unknown parent `{parent}`")
            }
            Violation::ParentCycle { entity } => write!(f, "parent chain of `{entity}` is cyclic"),
            Violation::FileNotSelfContained { entity } => {
                write!(f, "file entity `{entity}` must name itself as its file")
            }
            Violation::NegativeImportance { entity } => {
                write!(f, "entity `{entity}` has negative importance")
            }
        }
    }
}

/// Directed multigraph of typed entities and typed dependency edges.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DependencyGraph {
    pub entities: Vec<Entity>,
    pub edges: Vec<DependencyEdge>,
    #[serde(skip)]
    index: HashMap<EntityId, usize>,
}

impl DependencyGraph {
    pub fn new(entities: Vec<Entity>, edges: Vec<DependencyEdge>) -> Self {
        let mut g = DependencyGraph {
            entities,
            edges,
            index: HashMap::new(),
        };
        g.reindex();
        g
    }

    pub fn reindex(&mut self) {
        self.index = self
            .entities
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.index.get(id).map(|&i| &self.entities[i])
    }

    pub fn entity_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Ids of File entities, sorted.
    pub fn file_ids(&self) -> Vec<EntityId> {
        let mut ids: Vec<EntityId> = self
            .entities
            .iter()
            .filter(|e| e.kind == EntityKind::File)
            .map(|e| e.id.clone())
            .collect();
        ids.sort();
        ids
    }

    pub fn file_of(&self, id: &str) -> Option<&str> {
        self.entity(id).map(|e| e.file_id.as_str())
    }
}

/// Checks every structural invariant of a dependency graph.
pub fn validate_graph(g: &DependencyGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut ids: HashMap<&str, &Entity> = HashMap::new();
    for e in &g.entities {
        if ids.insert(e.id.as_str(), e).is_some() {
            out.push(Violation::DuplicateId(e.id.clone()));
        }
    }
    for e in &g.entities {
        if e.kind == EntityKind::File && e.file_id != e.id {
            out.push(Violation::FileNotSelfContained { entity: e.id.clone() });
        }
        match ids.get(e.file_id.as_str()) {
            Some(f) if f.kind == EntityKind::File => {}
            _ => out.push(Violation::UnresolvedFile {
                entity: e.id.clone(),
                file: e.file_id.clone(),
            }),
        }
        if let Some(p) = &e.parent_id {
            if !ids.contains_key(p.as_str()) {
                out.push(Violation::UnresolvedParent {
                    entity: e.id.clone(),
                    parent: p.clone(),
                });
            }
        }
        if matches!(e.importance, Some(x) if x < 0.0 || x.is_nan()) {
            out.push(Violation::NegativeImportance { entity: e.id.clone() });
        }
    }
    for e in &g.entities {
        let mut seen = HashSet::new();
        let mut cur = e;
        seen.insert(cur.id.as_str());
        while let Some(p) = cur.parent_id.as_deref().and_then(|p| ids.get(p)) {
            if !seen.insert(p.id.as_str()) {
                out.push(Violation::ParentCycle { entity: e.id.clone() });
                break;
            }
            cur = p;
        }
    }
    for (i, edge) in g.edges.iter().enumerate() {
        for end in [&edge.src, &edge.dst] {
            if !ids.contains_key(end.as_str()) {
                out.push(Violation::DanglingEndpoint {
                    edge: i,
                    id: end.clone(),
                });
            }
        }
        if edge.multiplicity == 0 {
            out.push(Violation::ZeroMultiplicity { edge: i });
        }
    }
    out
}
