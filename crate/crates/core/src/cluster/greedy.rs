//! Agglomerative greedy modularity maximization (Clauset-Newman-Moore).

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::depgraph::FileGraph;
use crate::error::Result;
use crate::model::Architecture;

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gain: f64,
    a: usize,
    b: usize,
    version_a: u32,
    version_b: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // Largest gain first; among equal gains the lexicographically smallest pair.
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| (other.a, other.b).cmp(&(self.a, self.b)))
            .then_with(|| (other.version_a, other.version_b).cmp(&(self.version_a, self.version_b)))
    }
}

/// Community index per node after greedy merging at resolution `gamma`.
///
/// Starts from singletons and repeatedly merges the pair of communities with
/// the largest positive modularity gain `2 (e_ab - gamma a_a a_b)`. A merged
/// community keeps the smaller id, which is always the index of its
/// lexicographically smallest file.
pub fn greedy_labels(fg: &FileGraph, gamma: f64) -> Vec<usize> {
    let n = fg.node_count();
    let mut labels: Vec<usize> = (0..n).collect();
    let two_m = 2.0 * fg.total_weight();
    if two_m <= 0.0 {
        return labels;
    }

    let adjacency = fg.symmetrized();
    let mut share: Vec<f64> = adjacency
        .iter()
        .map(|row| row.iter().map(|(_, w)| w).sum::<f64>() / two_m)
        .collect();
    let mut links: Vec<HashMap<usize, f64>> = adjacency
        .iter()
        .map(|row| row.iter().map(|&(j, w)| (j, w / two_m)).collect())
        .collect();
    let mut alive = vec![true; n];
    let mut version = vec![0u32; n];
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();

    let mut heap = BinaryHeap::new();
    for (a, row) in links.iter().enumerate() {
        for (&b, &e) in row {
            if a < b {
                heap.push(Candidate {
                    gain: 2.0 * (e - gamma * share[a] * share[b]),
                    a,
                    b,
                    version_a: 0,
                    version_b: 0,
                });
            }
        }
    }

    while let Some(c) = heap.pop() {
        if !(alive[c.a] && alive[c.b] && version[c.a] == c.version_a && version[c.b] == c.version_b) {
            continue;
        }
        if c.gain <= 0.0 {
            break;
        }
        let (keep, gone) = (c.a, c.b);
        alive[gone] = false;
        let absorbed = std::mem::take(&mut links[gone]);
        for (other, e) in absorbed {
            if other == keep {
                continue;
            }
            *links[keep].entry(other).or_insert(0.0) += e;
            links[other].remove(&gone);
        }
        links[keep].remove(&gone);
        share[keep] += share[gone];
        share[gone] = 0.0;
        version[keep] += 1;
        let moved = std::mem::take(&mut members[gone]);
        members[keep].extend(moved);

        for (&other, &e) in &links[keep] {
            push_candidate(&mut heap, keep, other, e, gamma, &share, &version);
        }
        let entries: Vec<(usize, f64)> = links[keep].iter().map(|(&o, &e)| (o, e)).collect();
        for (other, e) in entries {
            links[other].insert(keep, e);
        }
    }

    for (community, nodes) in members.iter().enumerate() {
        for &node in nodes {
            labels[node] = community;
        }
    }
    labels
}

fn push_candidate(heap: &mut BinaryHeap<Candidate>, x: usize, y: usize, e: f64, gamma: f64, share: &[f64], version: &[u32]) {
    let (a, b) = if x < y { (x, y) } else { (y, x) };
    heap.push(Candidate {
        gain: 2.0 * (e - gamma * share[a] * share[b]),
        a,
        b,
        version_a: version[a],
        version_b: version[b],
    });
}

/// Greedy modularity clustering of `fg` as an architecture.
pub fn greedy_modularity(fg: &FileGraph, gamma: f64) -> Result<Architecture> {
    let labels = greedy_labels(fg, gamma);
    Architecture::from_groups(groups_from_labels(fg.nodes(), &labels))
}

fn groups_from_labels(nodes: &[String], labels: &[usize]) -> Vec<Vec<String>> {
    let mut groups: HashMap<usize, Vec<String>> = HashMap::new();
    for (node, &l) in nodes.iter().zip(labels) {
        groups.entry(l).or_default().push(node.clone());
    }
    groups.into_values().collect()
}
