//! Weighted file-level dependency graphs.

mod file_graph;
mod ipr;
mod optimize;
mod weighting;

pub use file_graph::FileGraph;
pub use ipr::{function_subgraph, inverse_pagerank, IprOptions};
pub use optimize::{optimize_type_weights, OptimizationResult, OptimizerOptions};
pub use weighting::{aggregate_to_files, propagate_importance, uniform_importance, weigh_edges};

use crate::error::Result;
use crate::model::{DependencyGraph, TypeWeights};

/// Importance for every entity from inverse PageRank; uniform 1.0 when the
/// graph has no functions to rank.
pub fn entity_importance(g: &DependencyGraph, opts: IprOptions) -> DependencyGraph {
    match inverse_pagerank(&function_subgraph(g), opts) {
        Ok(scores) => propagate_importance(g, &scores),
        Err(_) => {
            log::warn!("no function entities, falling back to uniform importance");
            uniform_importance(g, 1.0)
        }
    }
}

/// Importance, edge weighting, and file aggregation in one step.
pub fn weighted_file_graph(g: &DependencyGraph, tw: &TypeWeights, use_importance: bool) -> Result<FileGraph> {
    let g = if use_importance {
        entity_importance(g, IprOptions::default())
    } else {
        uniform_importance(g, 1.0)
    };
    aggregate_to_files(&weigh_edges(&g, tw)?)
}
