use super::matching::max_weight_matching;
use super::table::Contingency;
use crate::error::{Error, Result};
use crate::model::Architecture;

/// Cost of building `x` from nothing: add and place each entity, add each cluster.
fn aco(x: &Architecture) -> u64 {
    2 * x.entity_count() as u64 + x.cluster_count() as u64
}

struct Costs {
    /// Reassignments of shared entities under the best cluster matching.
    moves: u64,
    /// Added and removed entities and clusters.
    add_remove: u64,
    n_shared: u64,
    n_diff: u64,
    nc_a: u64,
    nc_b: u64,
}

fn costs(a: &Architecture, b: &Architecture) -> Costs {
    let t = Contingency::new(a, b);
    let kept = max_weight_matching(&t.table);
    let (nc_a, nc_b) = (a.cluster_count() as u64, b.cluster_count() as u64);
    Costs {
        moves: t.n_shared - kept,
        add_remove: t.n_diff + nc_a.abs_diff(nc_b),
        n_shared: t.n_shared,
        n_diff: t.n_diff,
        nc_a,
        nc_b,
    }
}

/// Operations turning `a` into `b`: cluster additions and removals, entity
/// additions and removals, and moves of shared entities.
pub fn mto(a: &Architecture, b: &Architecture) -> u64 {
    let c = costs(a, b);
    c.moves + c.add_remove
}

/// `(1 - mto(a, b) / (aco(a) + aco(b))) * 100`.
pub fn a2a(a: &Architecture, b: &Architecture) -> Result<f64> {
    let total = aco(a) + aco(b);
    if total == 0 {
        return Err(Error::Empty("both architectures are empty"));
    }
    Ok((1.0 - mto(a, b) as f64 / total as f64) * 100.0)
}

/// Worst-case reassignments between partitions of `n_shared` entities when
/// the larger side has `max(nc_a, nc_b)` clusters.
///
/// The best matching always keeps at least `ceil(n / max nc)` entities in
/// place: the cells of the padded square table split into `max nc` disjoint
/// matchings, one of which holds at least the average.
pub fn mto_m_max(n_shared: u64, nc_a: u64, nc_b: u64) -> u64 {
    let nc = nc_a.max(nc_b).max(1);
    n_shared - n_shared.div_ceil(nc)
}

/// Adjusted a2a: reassignment and add/remove costs normalized separately and
/// mixed by how much of the two architectures is shared.
pub fn a2a_adj(a: &Architecture, b: &Architecture) -> Result<f64> {
    let total = aco(a) + aco(b);
    if total == 0 {
        return Err(Error::Empty("both architectures are empty"));
    }
    let c = costs(a, b);
    let denom = (c.n_shared + c.n_diff + c.nc_a.max(c.nc_b)) as f64;
    let alpha = (c.n_shared + c.nc_a.min(c.nc_b)) as f64 / denom;
    let beta = (c.n_diff + c.nc_a.abs_diff(c.nc_b)) as f64 / denom;
    let max_moves = mto_m_max(c.n_shared, c.nc_a, c.nc_b);
    let move_term = if max_moves == 0 {
        0.0
    } else {
        c.moves as f64 / max_moves as f64
    };
    let add_remove_term = c.add_remove as f64 / total as f64;
    Ok((1.0 - alpha * move_term - beta * add_remove_term) * 100.0)
}

/// Minimum reassignments of shared entities, the move component of a2a.
pub fn transfer_distance(a: &Architecture, b: &Architecture) -> u64 {
    costs(a, b).moves
}
