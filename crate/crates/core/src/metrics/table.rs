use std::collections::{BTreeMap, BTreeSet};

use super::matching::SparseTable;
use crate::error::{Error, Result};
use crate::model::Architecture;

/// Overlap counts between the clusters of two architectures on their shared entities.
#[derive(Debug, Clone)]
pub(crate) struct Contingency {
    pub table: SparseTable,
    /// Cluster sizes counting shared entities only.
    pub row_sizes: Vec<u64>,
    pub col_sizes: Vec<u64>,
    pub n_shared: u64,
    /// Entities present in exactly one of the two architectures.
    pub n_diff: u64,
}

impl Contingency {
    pub fn new(a: &Architecture, b: &Architecture) -> Self {
        let col_of: BTreeMap<&str, usize> = b
            .clusters()
            .values()
            .enumerate()
            .flat_map(|(j, members)| members.iter().map(move |m| (m.as_str(), j)))
            .collect();
        let mut table = SparseTable {
            rows: a.cluster_count(),
            cols: b.cluster_count(),
            ..SparseTable::default()
        };
        let mut row_sizes = vec![0u64; table.rows];
        let mut col_sizes = vec![0u64; table.cols];
        let mut n_shared = 0u64;
        for (i, members) in a.clusters().values().enumerate() {
            for m in members {
                if let Some(&j) = col_of.get(m.as_str()) {
                    *table.cells.entry((i, j)).or_insert(0) += 1;
                    row_sizes[i] += 1;
                    col_sizes[j] += 1;
                    n_shared += 1;
                }
            }
        }
        let total = (a.entity_count() + b.entity_count()) as u64;
        Contingency {
            table,
            row_sizes,
            col_sizes,
            n_shared,
            n_diff: total - 2 * n_shared,
        }
    }

    /// Largest overlap of each row cluster with any column cluster.
    pub fn row_max(&self) -> Vec<u64> {
        let mut max = vec![0u64; self.table.rows];
        for (&(i, _), &v) in &self.table.cells {
            max[i] = max[i].max(v);
        }
        max
    }
}

/// Fails unless both architectures cover exactly the same entities.
pub(crate) fn require_same_universe(a: &Architecture, b: &Architecture) -> Result<()> {
    let (ua, ub) = (a.universe(), b.universe());
    if ua != ub {
        let shared = ua.intersection(&ub).count();
        return Err(Error::UniverseMismatch {
            left: ua.len(),
            right: ub.len(),
            shared,
        });
    }
    Ok(())
}

/// Both architectures restricted to the entities they share; disjoint universes are an error.
pub fn restrict_to_shared(a: &Architecture, b: &Architecture) -> Result<(Architecture, Architecture)> {
    let (ua, ub) = (a.universe(), b.universe());
    if ua == ub {
        return Ok((a.clone(), b.clone()));
    }
    let shared: BTreeSet<String> = ua.intersection(&ub).cloned().collect();
    if shared.is_empty() {
        return Err(Error::UniverseMismatch {
            left: ua.len(),
            right: ub.len(),
            shared: 0,
        });
    }
    Ok((a.restrict_to(&shared), b.restrict_to(&shared)))
}
