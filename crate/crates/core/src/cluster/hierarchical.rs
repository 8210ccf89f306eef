use kodama::{linkage, Method};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Complete-linkage agglomerative clustering of `n` items cut at `k` clusters.
///
/// `dissimilarity(i, j)` is called for `i < j` and must be finite. Returns
/// groups of item indices.
pub fn complete_linkage_cut<F>(n: usize, k: usize, dissimilarity: F) -> Result<Vec<Vec<usize>>>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("cannot cut {n} items into {k} clusters")));
    }
    if n == 1 {
        return Ok(vec![vec![0]]);
    }
    // Condensed upper triangle, row by row; f32 keeps large inputs in memory.
    let mut condensed: Vec<f32> = (0..n - 1)
        .into_par_iter()
        .flat_map_iter(|i| {
            let d = &dissimilarity;
            ((i + 1)..n).map(move |j| d(i, j) as f32)
        })
        .collect();
    if let Some(bad) = condensed.iter().find(|d| !d.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite dissimilarity {bad}")));
    }
    let dendrogram = linkage(&mut condensed, n, Method::Complete);

    // Labels: observations are 0..n, step s creates cluster n + s.
    let mut parent: Vec<usize> = (0..(2 * n - 1)).collect();
    for (s, step) in dendrogram.steps().iter().take(n - k).enumerate() {
        parent[step.cluster1] = n + s;
        parent[step.cluster2] = n + s;
    }
    fn root(parent: &[usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for i in 0..n {
        groups.entry(root(&parent, i)).or_default().push(i);
    }
    Ok(groups.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut groups: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        for g in &mut groups {
            g.sort_unstable();
        }
        groups.sort();
        groups
    }

    #[test]
    fn two_correlated_pairs() {
        // corr(0,1) = corr(2,3) = 1, cross pairs 0 -> distance 1.
        let d = |i: usize, j: usize| if i / 2 == j / 2 { 0.0 } else { 1.0 };
        assert_eq!(sorted(complete_linkage_cut(4, 2, d).unwrap()), [vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn extreme_cuts() {
        let d = |i: usize, j: usize| (i as f64 - j as f64).abs();
        assert_eq!(complete_linkage_cut(5, 5, d).unwrap().len(), 5);
        assert_eq!(complete_linkage_cut(5, 1, d).unwrap(), [vec![0, 1, 2, 3, 4]]);
        assert!(complete_linkage_cut(5, 6, d).is_err());
    }

    #[test]
    fn complete_linkage_differs_from_single_linkage_on_a_chain() {
        // A chain 0-1-2-3 with gaps 1, 1.1, 1: single linkage would keep the
        // chain together longest; complete linkage splits it in the middle.
        let pos = [0.0f64, 1.0, 2.1, 3.1];
        let d = |i: usize, j: usize| (pos[i] - pos[j]).abs();
        assert_eq!(sorted(complete_linkage_cut(4, 2, d).unwrap()), [vec![0, 1], vec![2, 3]]);
    }
}
