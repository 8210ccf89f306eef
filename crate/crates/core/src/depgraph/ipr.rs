//! Entity importance from inverse PageRank over the function call graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::{DependencyGraph, EntityKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IprOptions {
    pub damping: f64,
    /// Stop once the largest per-node change falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for IprOptions {
    fn default() -> Self {
        IprOptions {
            damping: 0.85,
            tolerance: 1e-9,
            max_iterations: 200,
        }
    }
}

/// Keeps only Function entities and the edges running between them.
pub fn function_subgraph(g: &DependencyGraph) -> DependencyGraph {
    let entities: Vec<_> = g
        .entities
        .iter()
        .filter(|e| e.kind == EntityKind::Function)
        .cloned()
        .collect();
    let keep: BTreeSet<&str> = entities.iter().map(|e| e.id.as_str()).collect();
    let edges = g
        .edges
        .iter()
        .filter(|e| keep.contains(e.src.as_str()) && keep.contains(e.dst.as_str()))
        .cloned()
        .collect();
    DependencyGraph::new(entities, edges)
}

/// Inverse PageRank: importance flows from callees back to their callers.
///
/// `IPR(i) = d * sum_{j in succ(i)} IPR(j) / in_degree(j) + (1 - d) / N`.
/// Parallel edges between the same pair count once, self-loops are ignored,
/// and nodes without successors receive only the uniform share.
pub fn inverse_pagerank(g: &DependencyGraph, opts: IprOptions) -> Result<BTreeMap<String, f64>> {
    let ids: Vec<&str> = {
        let mut v: Vec<&str> = g.entities.iter().map(|e| e.id.as_str()).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    if ids.is_empty() {
        return Err(Error::Empty("no functions to rank"));
    }
    let n = ids.len();
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();

    let mut pairs = BTreeSet::new();
    for e in &g.edges {
        if let (Some(&s), Some(&d)) = (index.get(e.src.as_str()), index.get(e.dst.as_str())) {
            if s != d {
                pairs.insert((s, d));
            }
        }
    }
    let mut in_degree = vec![0usize; n];
    let mut successors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(s, d) in &pairs {
        in_degree[d] += 1;
        successors[s].push(d);
    }

    let base = (1.0 - opts.damping) / n as f64;
    let mut scores = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..opts.max_iterations {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let flow: f64 = successors[i].iter().map(|&j| scores[j] / in_degree[j] as f64).sum();
            next[i] = opts.damping * flow + base;
            delta = delta.max((next[i] - scores[i]).abs());
        }
        std::mem::swap(&mut scores, &mut next);
        if delta < opts.tolerance {
            break;
        }
    }
    Ok(ids.into_iter().map(str::to_string).zip(scores).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DepType, DependencyEdge, Entity};

    fn functions(names: &[&str], calls: &[(&str, &str)]) -> DependencyGraph {
        let mut entities = vec![Entity::file("f.c")];
        entities.extend(
            names
                .iter()
                .map(|n| Entity::new(*n, EntityKind::Function, *n, "f.c", Some("f.c".into()))),
        );
        let edges = calls
            .iter()
            .map(|(a, b)| DependencyEdge::new(*a, *b, DepType::Call, 1))
            .collect();
        DependencyGraph::new(entities, edges)
    }

    #[test]
    fn subgraph_keeps_functions_only() {
        let mut g = functions(&["a", "b"], &[("a", "b")]);
        g.entities.push(Entity::new("v", EntityKind::Variable, "v", "f.c", Some("f.c".into())));
        g.edges.push(DependencyEdge::new("a", "v", DepType::Use, 1));
        g.reindex();
        let sub = function_subgraph(&g);
        assert_eq!(sub.entities.len(), 2);
        assert_eq!(sub.edges.len(), 1);
        assert_eq!(sub.edges[0].dep_type, DepType::Call);
    }

    #[test]
    fn empty_graph_is_an_error() {
        let sub = function_subgraph(&DependencyGraph::new(vec![Entity::file("x.c")], vec![]));
        assert!(sub.entities.is_empty());
        assert!(inverse_pagerank(&sub, IprOptions::default()).is_err());
    }

    #[test]
    fn isolated_node() {
        let s = inverse_pagerank(&function_subgraph(&functions(&["a"], &[])), IprOptions::default()).unwrap();
        assert!((s["a"] - 0.15).abs() < 1e-12);
    }

    #[test]
    fn chain_of_two() {
        let s = inverse_pagerank(&function_subgraph(&functions(&["a", "b"], &[("a", "b")])), IprOptions::default()).unwrap();
        assert!((s["b"] - 0.075).abs() < 1e-9);
        assert!((s["a"] - 0.13875).abs() < 1e-9);
    }

    #[test]
    fn utility_hub_scores_lowest() {
        let callers = ["c1", "c2", "c3", "c4", "c5"];
        let mut names = callers.to_vec();
        names.push("hub");
        let calls: Vec<(&str, &str)> = callers.iter().map(|c| (*c, "hub")).collect();
        let s = inverse_pagerank(&function_subgraph(&functions(&names, &calls)), IprOptions::default()).unwrap();
        assert!((s["hub"] - 0.025).abs() < 1e-12);
        for c in callers {
            assert!(s[c] > s["hub"]);
            assert!((s[c] - (0.85 * 0.025 / 5.0 + 0.025)).abs() < 1e-9);
        }
    }
}
