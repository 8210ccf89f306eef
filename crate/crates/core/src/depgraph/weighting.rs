use std::collections::{BTreeMap, HashMap};

use super::file_graph::FileGraph;
use crate::error::{Error, Result};
use crate::model::{DependencyGraph, EntityKind, TypeWeights};

/// Sets importance on every entity from function scores.
///
/// Functions take their own score. Files and classes take the sum over every
/// function they contain, directly or transitively. Variables and other
/// leaf entities split their parent's importance evenly among the parent's
/// Variable/Other children; an entity without a parent hangs off its file.
pub fn propagate_importance(g: &DependencyGraph, fn_scores: &BTreeMap<String, f64>) -> DependencyGraph {
    let mut out = g.clone();
    let n = out.entities.len();
    let mut importance = vec![0.0f64; n];

    for (i, e) in out.entities.iter().enumerate() {
        if e.kind != EntityKind::Function {
            continue;
        }
        let score = fn_scores.get(&e.id).copied().unwrap_or(0.0);
        importance[i] = score;
        let mut credited = Vec::new();
        let mut cur = e.parent_id.as_deref();
        let mut steps = 0;
        while let Some(p) = cur {
            let Some(pi) = out.entity_index(p) else { break };
            if matches!(out.entities[pi].kind, EntityKind::File | EntityKind::Class) && !credited.contains(&pi) {
                credited.push(pi);
            }
            cur = out.entities[pi].parent_id.as_deref();
            steps += 1;
            if steps > n {
                break;
            }
        }
        if let Some(fi) = out.entity_index(&e.file_id) {
            if !credited.contains(&fi) {
                credited.push(fi);
            }
        }
        for pi in credited {
            importance[pi] += score;
        }
    }

    let parent_of = |i: usize| -> Option<usize> {
        let e = &out.entities[i];
        match e.parent_id.as_deref() {
            Some(p) => out.entity_index(p),
            None if e.kind != EntityKind::File => out.entity_index(&e.file_id),
            None => None,
        }
    };
    let is_leaf = |i: usize| matches!(out.entities[i].kind, EntityKind::Variable | EntityKind::Other);

    let mut leaf_children: HashMap<usize, usize> = HashMap::new();
    let mut leaves: Vec<(usize, usize)> = Vec::new();
    for i in (0..n).filter(|&i| is_leaf(i)) {
        let mut depth = 0;
        let mut cur = parent_of(i);
        while let Some(p) = cur {
            depth += 1;
            if depth > n {
                break;
            }
            cur = parent_of(p);
        }
        leaves.push((depth, i));
        if let Some(p) = parent_of(i) {
            *leaf_children.entry(p).or_insert(0) += 1;
        }
    }
    // Parents before children so nested leaves see their parent's share.
    leaves.sort();
    for (_, i) in leaves {
        importance[i] = match parent_of(i) {
            Some(p) => importance[p] / leaf_children[&p] as f64,
            None => 0.0,
        };
    }

    for (e, imp) in out.entities.iter_mut().zip(importance) {
        e.importance = Some(imp);
    }
    out
}

/// Sets every entity's importance to the same value.
pub fn uniform_importance(g: &DependencyGraph, value: f64) -> DependencyGraph {
    let mut out = g.clone();
    for e in &mut out.entities {
        e.importance = Some(value);
    }
    out
}

/// `weight = multiplicity * type_weight * (impt(src) + impt(dst)) / 2`.
pub fn weigh_edges(g: &DependencyGraph, tw: &TypeWeights) -> Result<DependencyGraph> {
    let mut out = g.clone();
    for (i, edge) in g.edges.iter().enumerate() {
        let imp = |id: &str| -> Result<f64> {
            g.entity(id)
                .and_then(|e| e.importance)
                .ok_or_else(|| Error::InvalidArgument(format!("entity `{id}` has no importance set")))
        };
        let mean = (imp(&edge.src)? + imp(&edge.dst)?) / 2.0;
        out.edges[i].weight = Some(f64::from(edge.multiplicity) * tw.get(edge.dep_type) * mean);
    }
    Ok(out)
}

/// Sums entity-level edge weights into file-to-file weights, discarding
/// edges whose endpoints share a file.
pub fn aggregate_to_files(g: &DependencyGraph) -> Result<FileGraph> {
    let mut fg = FileGraph::new(g.file_ids());
    for edge in &g.edges {
        let w = edge
            .weight
            .ok_or_else(|| Error::InvalidArgument(format!("edge {} -> {} is not weighted", edge.src, edge.dst)))?;
        let file = |id: &str| {
            g.file_of(id)
                .and_then(|f| fg.index_of(f))
                .ok_or_else(|| Error::UnknownFile(id.to_string()))
        };
        let (a, b) = (file(&edge.src)?, file(&edge.dst)?);
        fg.add_weight(a, b, w);
    }
    Ok(fg)
}
