use super::matching::max_cardinality_matching;
use super::table::{require_same_universe, Contingency};
use crate::error::{Error, Result};
use crate::model::Architecture;

/// Minimum number of move and join operations turning `a` into `b`.
///
/// Each cluster of `a` is tagged with a group of `b` it overlaps most; the
/// objects outside their cluster's tag are moved, and clusters sharing a tag
/// are joined. Ties between equally good tags are resolved by a maximum
/// matching so that as many groups as possible receive a distinct cluster.
pub fn mojo_distance(a: &Architecture, b: &Architecture) -> Result<u64> {
    require_same_universe(a, b)?;
    Ok(mno(&Contingency::new(a, b)))
}

fn mno(t: &Contingency) -> u64 {
    let max = t.row_max();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); t.table.rows];
    for (&(i, j), &v) in &t.table.cells {
        if v == max[i] {
            adj[i].push(j);
        }
    }
    let matched = max_cardinality_matching(&adj, t.table.cols) as u64;
    let moves: u64 = t.row_sizes.iter().zip(&max).map(|(s, m)| s - m).sum();
    moves + t.table.rows as u64 - matched
}

/// Largest `mno(x, b)` over every partition `x` of `b`'s entities.
///
/// With group sizes `b_1 >= ... >= b_g` and `b_{g+1} = 0`, the worst case is
/// `n - min_t (t + b_{t+1})`: the best-preserved group can be kept to
/// `b_{t+1}` objects only by spreading the `t` largest groups over at least
/// `t` clusters.
pub fn max_mojo_distance(b: &Architecture) -> u64 {
    let mut sizes: Vec<u64> = b.groups().map(|g| g.len() as u64).collect();
    sizes.sort_unstable_by(|x, y| y.cmp(x));
    sizes.push(0);
    let n: u64 = sizes.iter().sum();
    let best = sizes.iter().enumerate().map(|(t, &s)| t as u64 + s).min().unwrap_or(0);
    n - best
}

/// `(1 - mno(a, b) / max mno(any, b)) * 100`.
pub fn mojo_fm(a: &Architecture, b: &Architecture) -> Result<f64> {
    let distance = mojo_distance(a, b)?;
    let max = max_mojo_distance(b);
    if max == 0 {
        return if distance == 0 {
            Ok(100.0)
        } else {
            Err(Error::InvalidArchitecture("MoJoFM is undefined for this reference".into()))
        };
    }
    Ok((1.0 - distance as f64 / max as f64) * 100.0)
}
