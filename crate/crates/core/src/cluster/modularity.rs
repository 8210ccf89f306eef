use std::collections::HashMap;

use crate::depgraph::FileGraph;
use crate::error::{Error, Result};
use crate::model::Architecture;

/// Resolution-parameterized modularity of a node labelling.
///
/// Directed weights are symmetrized by summing both directions, so
/// `2m` equals twice the total directed weight.
pub fn modularity_of_labels(fg: &FileGraph, labels: &[usize], gamma: f64) -> Result<f64> {
    assert_eq!(labels.len(), fg.node_count());
    let total = fg.total_weight();
    if total <= 0.0 {
        return Err(Error::Empty("empty graph has no modularity"));
    }
    let two_m = 2.0 * total;
    let mut inner: HashMap<usize, f64> = HashMap::new();
    let mut degree: HashMap<usize, f64> = HashMap::new();
    for (a, b, w) in fg.edges() {
        *degree.entry(labels[a]).or_insert(0.0) += w;
        *degree.entry(labels[b]).or_insert(0.0) += w;
        if labels[a] == labels[b] {
            *inner.entry(labels[a]).or_insert(0.0) += 2.0 * w;
        }
    }
    let mut communities: Vec<usize> = degree.keys().copied().collect();
    communities.sort_unstable();
    Ok(communities
        .into_iter()
        .map(|c| {
            let tot = degree[&c] / two_m;
            inner.get(&c).copied().unwrap_or(0.0) / two_m - gamma * tot * tot
        })
        .sum())
}

/// Modularity of `partition` over `fg`; the partition must cover every node.
pub fn modularity(fg: &FileGraph, partition: &Architecture, gamma: f64) -> Result<f64> {
    let assignment = partition.assignment();
    let names: Vec<&str> = partition.clusters().keys().map(String::as_str).collect();
    let label_of: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let labels = fg
        .nodes()
        .iter()
        .map(|node| {
            assignment
                .get(node.as_str())
                .map(|c| label_of[c])
                .ok_or_else(|| Error::InvalidArgument(format!("partition does not cover `{node}`")))
        })
        .collect::<Result<Vec<usize>>>()?;
    modularity_of_labels(fg, &labels, gamma)
}
