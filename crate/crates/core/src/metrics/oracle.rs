//! Exhaustive breadth-first search over edit sequences, for small universes.

use std::collections::{HashMap, HashSet, VecDeque};

use super::table::require_same_universe;
use crate::error::{Error, Result};
use crate::model::Architecture;

/// Largest universe the oracles accept.
pub const ORACLE_LIMIT: usize = 8;

/// Canonical labels: first occurrence order, so equal partitions compare equal.
fn canonical(labels: &[u8]) -> Vec<u8> {
    let mut map = [u8::MAX; 16];
    let mut next = 0;
    labels
        .iter()
        .map(|&l| {
            if map[l as usize] == u8::MAX {
                map[l as usize] = next;
                next += 1;
            }
            map[l as usize]
        })
        .collect()
}

fn labels_of(a: &Architecture, b: &Architecture) -> Result<(Vec<u8>, Vec<u8>)> {
    require_same_universe(a, b)?;
    let n = a.entity_count();
    if n > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge(n));
    }
    let encode = |x: &Architecture| -> Vec<u8> {
        let names: HashMap<&str, u8> = x.clusters().keys().enumerate().map(|(i, k)| (k.as_str(), i as u8)).collect();
        let assignment = x.assignment();
        canonical(&assignment.values().map(|c| names[c]).collect::<Vec<_>>())
    };
    Ok((encode(a), encode(b)))
}

fn neighbours(state: &[u8], joins: bool) -> Vec<Vec<u8>> {
    let clusters = state.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = Vec::new();
    for e in 0..state.len() {
        // Moving into a fresh cluster is label `clusters`.
        for target in 0..=clusters {
            if target == state[e] {
                continue;
            }
            let mut next = state.to_vec();
            next[e] = target;
            out.push(canonical(&next));
        }
    }
    if joins {
        for x in 0..clusters {
            for y in (x + 1)..clusters {
                let next: Vec<u8> = state.iter().map(|&l| if l == y { x } else { l }).collect();
                out.push(canonical(&next));
            }
        }
    }
    out
}

fn bfs(from: Vec<u8>, to: &[u8], joins: bool) -> u64 {
    let mut seen = HashSet::from([from.clone()]);
    let mut queue = VecDeque::from([(from, 0u64)]);
    while let Some((state, d)) = queue.pop_front() {
        if state == to {
            return d;
        }
        for next in neighbours(&state, joins) {
            if seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    unreachable!("every partition is reachable by moves")
}

/// Fewest moves and joins turning `a` into `b`, by exhaustive search.
pub fn oracle_mojo(a: &Architecture, b: &Architecture) -> Result<u64> {
    let (x, y) = labels_of(a, b)?;
    Ok(bfs(x, &y, true))
}

/// Fewest single-entity moves turning `a` into `b`, by exhaustive search.
pub fn oracle_moves(a: &Architecture, b: &Architecture) -> Result<u64> {
    let (x, y) = labels_of(a, b)?;
    Ok(bfs(x, &y, false))
}
