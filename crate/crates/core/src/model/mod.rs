//! Domain types shared across the pipeline. No algorithms live here.

mod architecture;
mod folder;
mod graph;
mod text;
mod type_weights;

pub use architecture::{Architecture, UNASSIGNED};
pub use folder::{FolderNode, FolderTree};
pub use graph::{validate_graph, DepType, DependencyEdge, DependencyGraph, Entity, EntityId, EntityKind, Violation};
pub use text::{SourceKind, TopicEmbedding, WordOccurrence};
pub use type_weights::{TypeWeights, DEFAULT_TYPE_WEIGHTS, MAX_TYPE_WEIGHT, MIN_TYPE_WEIGHT};
