//! Bipartite matchings over contingency tables.

use std::collections::BTreeMap;

/// Sparse non-negative weights between `rows` left and `cols` right vertices.
#[derive(Debug, Clone, Default)]
pub(crate) struct SparseTable {
    pub rows: usize,
    pub cols: usize,
    pub cells: BTreeMap<(usize, usize), u64>,
}

/// Minimum-cost assignment of every row to a distinct column (`rows <= cols`).
fn hungarian(cost: &[Vec<i64>]) -> Vec<usize> {
    const INF: i64 = i64::MAX / 4;
    let n = cost.len();
    let m = cost[0].len();
    debug_assert!(n <= m);
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=m {
        if p[j] != 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Total weight of a maximum-weight one-to-one matching.
///
/// The table is split into connected components of its non-zero cells and
/// each component is solved densely, which keeps large sparse tables cheap.
pub(crate) fn max_weight_matching(t: &SparseTable) -> u64 {
    let mut parent: Vec<usize> = (0..t.rows + t.cols).collect();
    for &(r, c) in t.cells.keys() {
        let (a, b) = (find(&mut parent, r), find(&mut parent, t.rows + c));
        if a != b {
            parent[a] = b;
        }
    }
    let mut components: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for &(r, c) in t.cells.keys() {
        let root = find(&mut parent, r);
        let entry = components.entry(root).or_default();
        entry.0.push(r);
        entry.1.push(c);
    }
    let mut total = 0u64;
    for (_, (mut rows, mut cols)) in components {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        let weight = |r: usize, c: usize| t.cells.get(&(r, c)).copied().unwrap_or(0);
        if rows.len() == 1 || cols.len() == 1 {
            total += rows.iter().flat_map(|&r| cols.iter().map(move |&c| (r, c))).map(|(r, c)| weight(r, c)).max().unwrap_or(0);
            continue;
        }
        let transpose = rows.len() > cols.len();
        let (left, right) = if transpose { (&cols, &rows) } else { (&rows, &cols) };
        let cell = |a: usize, b: usize| if transpose { weight(b, a) } else { weight(a, b) };
        let cost: Vec<Vec<i64>> = left
            .iter()
            .map(|&a| right.iter().map(|&b| -(cell(a, b) as i64)).collect())
            .collect();
        let assignment = hungarian(&cost);
        total += assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| cell(left[i], right[j]))
            .sum::<u64>();
    }
    total
}

/// Size of a maximum-cardinality matching; `adj[r]` lists the columns of row `r`.
pub(crate) fn max_cardinality_matching(adj: &[Vec<usize>], cols: usize) -> usize {
    let mut match_col: Vec<Option<usize>> = vec![None; cols];
    let mut match_row: Vec<Option<usize>> = vec![None; adj.len()];
    let mut size = 0;
    for (r, cs) in adj.iter().enumerate() {
        if let Some(&c) = cs.iter().find(|&&c| match_col[c].is_none()) {
            match_col[c] = Some(r);
            match_row[r] = Some(c);
            size += 1;
        }
    }
    let mut stamp = vec![usize::MAX; cols];
    let mut prev = vec![0usize; cols];
    for start in 0..adj.len() {
        if match_row[start].is_some() {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        let mut free_col = None;
        'search: while let Some(u) = queue.pop_front() {
            for &c in &adj[u] {
                if stamp[c] == start {
                    continue;
                }
                stamp[c] = start;
                prev[c] = u;
                match match_col[c] {
                    None => {
                        free_col = Some(c);
                        break 'search;
                    }
                    Some(next) => queue.push_back(next),
                }
            }
        }
        let Some(mut c) = free_col else { continue };
        loop {
            let u = prev[c];
            let previous = match_row[u];
            match_col[c] = Some(u);
            match_row[u] = Some(c);
            match previous {
                Some(pc) if u != start => c = pc,
                _ => break,
            }
        }
        size += 1;
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rows: &[&[u64]]) -> SparseTable {
        let mut t = SparseTable {
            rows: rows.len(),
            cols: rows[0].len(),
            ..SparseTable::default()
        };
        for (i, row) in rows.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                if w > 0 {
                    t.cells.insert((i, j), w);
                }
            }
        }
        t
    }

    fn brute(rows: &[&[u64]]) -> u64 {
        fn go(rows: &[&[u64]], i: usize, used: &mut Vec<bool>) -> u64 {
            if i == rows.len() {
                return 0;
            }
            let mut best = go(rows, i + 1, used);
            for j in 0..rows[i].len() {
                if !used[j] {
                    used[j] = true;
                    best = best.max(rows[i][j] + go(rows, i + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        go(rows, 0, &mut vec![false; rows[0].len()])
    }

    #[test]
    fn weight_matching_agrees_with_brute_force() {
        let cases: [&[&[u64]]; 4] = [
            &[&[3, 1], &[2, 2]],
            &[&[1, 2, 3], &[2, 4, 6], &[3, 6, 9]],
            &[&[5, 0, 0, 1], &[0, 0, 2, 0], &[4, 0, 0, 0]],
            &[&[1], &[7], &[2]],
        ];
        for rows in cases {
            assert_eq!(max_weight_matching(&table(rows)), brute(rows), "{rows:?}");
        }
    }

    #[test]
    fn cardinality_matching_needs_augmenting_paths() {
        // Greedy takes (0,0) and leaves row 1 stranded without augmentation.
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        assert_eq!(max_cardinality_matching(&adj, 3), 3);
        assert_eq!(max_cardinality_matching(&[vec![0], vec![0]], 1), 1);
    }
}
