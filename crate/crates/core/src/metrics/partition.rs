use super::table::{require_same_universe, Contingency};
use crate::error::{Error, Result};
use crate::model::Architecture;

/// Percentage of `a`'s clusters matched by some cluster of `b` overlapping
/// at least `th` of the larger of the two.
pub fn c2c_cvg(a: &Architecture, b: &Architecture, th: f64) -> Result<f64> {
    if !(th > 0.0 && th <= 1.0) {
        return Err(Error::InvalidArgument(format!("c2c threshold must lie in (0, 1], got {th}")));
    }
    if a.is_empty() {
        return Err(Error::Empty("architecture has no clusters"));
    }
    let t = Contingency::new(a, b);
    let a_sizes: Vec<usize> = a.groups().map(|g| g.len()).collect();
    let b_sizes: Vec<usize> = b.groups().map(|g| g.len()).collect();
    let mut covered = vec![false; a_sizes.len()];
    for (&(i, j), &v) in &t.table.cells {
        if v as f64 >= th * a_sizes[i].max(b_sizes[j]) as f64 {
            covered[i] = true;
        }
    }
    Ok(covered.iter().filter(|&&c| c).count() as f64 / a_sizes.len() as f64 * 100.0)
}

fn pairs(x: u64) -> f64 {
    (x * x.saturating_sub(1)) as f64 / 2.0
}

/// Adjusted Rand index in `[-1, 1]`; identical trivial partitions score 1.
pub fn ari(a: &Architecture, b: &Architecture) -> Result<f64> {
    require_same_universe(a, b)?;
    let t = Contingency::new(a, b);
    if t.n_shared < 2 {
        return Err(Error::InvalidArgument("ARI needs at least two entities".into()));
    }
    let index: f64 = t.table.cells.values().map(|&v| pairs(v)).sum();
    let sum_a: f64 = t.row_sizes.iter().map(|&s| pairs(s)).sum();
    let sum_b: f64 = t.col_sizes.iter().map(|&s| pairs(s)).sum();
    let expected = sum_a * sum_b / pairs(t.n_shared);
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}
