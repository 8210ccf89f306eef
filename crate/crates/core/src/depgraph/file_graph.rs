use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Directed, weighted file-level graph. Nodes are kept sorted by id; weights
/// are finite and strictly positive, and there are no self-loops.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "FileGraphDoc", try_from = "FileGraphDoc")]
pub struct FileGraph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeMap<(usize, usize), f64>,
}

#[derive(Serialize, Deserialize)]
struct FileGraphDoc {
    nodes: Vec<String>,
    edges: Vec<(String, String, f64)>,
}

impl From<FileGraph> for FileGraphDoc {
    fn from(g: FileGraph) -> Self {
        let edges = g
            .edges
            .iter()
            .map(|(&(a, b), &w)| (g.nodes[a].clone(), g.nodes[b].clone(), w))
            .collect();
        FileGraphDoc { nodes: g.nodes, edges }
    }
}

impl TryFrom<FileGraphDoc> for FileGraph {
    type Error = Error;

    fn try_from(doc: FileGraphDoc) -> Result<Self> {
        let mut g = FileGraph::new(doc.nodes);
        for (a, b, w) in doc.edges {
            g.add_weight_by_id(&a, &b, w)?;
        }
        Ok(g)
    }
}

impl FileGraph {
    pub fn new<I, S>(nodes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        nodes.sort();
        nodes.dedup();
        let index = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        FileGraph {
            nodes,
            index,
            edges: BTreeMap::new(),
        }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Edges as `(src index, dst index, weight)` in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(a, b), &w)| (a, b, w))
    }

    pub fn weight(&self, src: usize, dst: usize) -> Option<f64> {
        self.edges.get(&(src, dst)).copied()
    }

    pub fn has_edge_between(&self, a: usize, b: usize) -> bool {
        self.edges.contains_key(&(a, b)) || self.edges.contains_key(&(b, a))
    }

    /// Adds `w` to the edge `src -> dst`. Self-loops and non-positive weights are ignored.
    pub fn add_weight(&mut self, src: usize, dst: usize, w: f64) {
        assert!(w.is_finite(), "edge weight must be finite");
        if src == dst || w <= 0.0 {
            return;
        }
        *self.edges.entry((src, dst)).or_insert(0.0) += w;
    }

    pub fn add_weight_by_id(&mut self, src: &str, dst: &str, w: f64) -> Result<()> {
        let a = self.index_of(src).ok_or_else(|| Error::UnknownFile(src.to_string()))?;
        let b = self.index_of(dst).ok_or_else(|| Error::UnknownFile(dst.to_string()))?;
        self.add_weight(a, b, w);
        Ok(())
    }

    /// Rewrites every edge weight through `f(src, dst, weight)`.
    pub fn map_weights(&mut self, mut f: impl FnMut(usize, usize, f64) -> f64) {
        for (&(a, b), w) in self.edges.iter_mut() {
            *w = f(a, b, *w);
        }
        self.edges.retain(|_, w| *w > 0.0);
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.values().sum()
    }

    /// Median of the positive edge weights, or `None` for an edgeless graph.
    pub fn median_weight(&self) -> Option<f64> {
        let mut ws: Vec<f64> = self.edges.values().copied().filter(|w| *w > 0.0).collect();
        if ws.is_empty() {
            return None;
        }
        ws.sort_by(f64::total_cmp);
        let n = ws.len();
        Some(if n % 2 == 1 { ws[n / 2] } else { (ws[n / 2 - 1] + ws[n / 2]) / 2.0 })
    }

    /// Undirected adjacency with directed weights summed both ways.
    pub fn symmetrized(&self) -> Vec<Vec<(usize, f64)>> {
        let mut acc: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); self.nodes.len()];
        for (&(a, b), &w) in &self.edges {
            *acc[a].entry(b).or_insert(0.0) += w;
            *acc[b].entry(a).or_insert(0.0) += w;
        }
        acc.into_iter().map(|m| m.into_iter().collect()).collect()
    }
}
