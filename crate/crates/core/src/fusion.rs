//! Single-source recoveries, adaptive source weights, and the fused file graph.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cluster::{complete_linkage_cut, greedy_modularity};
use crate::depgraph::FileGraph;
use crate::error::{Error, Result};
use crate::folders::folder_partition;
use crate::metrics::a2a_adj;
use crate::model::{Architecture, FolderTree};
use crate::textual::TopicSpace;

/// Correlation above which unconnected files receive a textual edge.
pub const DEFAULT_CORRELATION_THRESHOLD: f64 = 0.8;
/// Lower bound of the text coefficient.
pub const DEFAULT_MIN_TEXT_COEFFICIENT: f64 = 0.05;
/// Upper bound applied to the folder weight before it enters the folder coefficient.
pub const DEFAULT_MAX_FOLDER_WEIGHT: f64 = 0.95;

/// How strongly text and folder information reshape the dependency graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionWeights {
    pub w_text: f64,
    pub w_folder: f64,
}

impl FusionWeights {
    pub fn new(w_text: f64, w_folder: f64) -> Result<Self> {
        for (name, w) in [("w_text", w_text), ("w_folder", w_folder)] {
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {w}")));
            }
        }
        Ok(FusionWeights { w_text, w_folder })
    }

    pub fn none() -> Self {
        FusionWeights {
            w_text: 0.0,
            w_folder: 0.0,
        }
    }
}

/// Tunables of the fusion step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionOptions {
    pub correlation_threshold: f64,
    pub min_text_coefficient: f64,
    pub max_folder_weight: f64,
}

impl Default for FusionOptions {
    fn default() -> Self {
        FusionOptions {
            correlation_threshold: DEFAULT_CORRELATION_THRESHOLD,
            min_text_coefficient: DEFAULT_MIN_TEXT_COEFFICIENT,
            max_folder_weight: DEFAULT_MAX_FOLDER_WEIGHT,
        }
    }
}

/// Greedy modularity clustering of the weighted dependency graph.
pub fn recover_dep_only(fg: &FileGraph, resolution: f64) -> Result<Architecture> {
    greedy_modularity(fg, resolution)
}

/// Maps every file of `fg` to its row in `space`, if it has one.
fn space_rows(fg: &FileGraph, space: &TopicSpace) -> Vec<Option<usize>> {
    fg.nodes().iter().map(|f| space.index_of(f)).collect()
}

/// Complete-linkage clustering of the files of `fg` on `1 - correlation`, cut at `k`.
pub fn recover_text_only(fg: &FileGraph, space: &TopicSpace, k: usize) -> Result<Architecture> {
    let rows = space_rows(fg, space);
    let groups = complete_linkage_cut(fg.node_count(), k, |i, j| match (rows[i], rows[j]) {
        (Some(a), Some(b)) => 1.0 - space.correlation(a, b),
        _ => 1.0,
    })?;
    Architecture::from_groups(
        groups
            .into_iter()
            .map(|g| g.into_iter().map(|i| fg.nodes()[i].clone()).collect())
            .collect(),
    )
}

/// Each source's weight is its adjusted a2a similarity to the dependency-only architecture.
pub fn assign_weights(dep: &Architecture, text: &Architecture, folder: &Architecture) -> Result<FusionWeights> {
    FusionWeights::new(source_weight(dep, text)?, source_weight(dep, folder)?)
}

/// `a2a_adj(dep, other) / 100`, clamped to `[0, 1]` against rounding.
pub fn source_weight(dep: &Architecture, other: &Architecture) -> Result<f64> {
    Ok((a2a_adj(dep, other)? / 100.0).clamp(0.0, 1.0))
}

fn text_coefficient(corr: f64, w_text: f64, opts: &FusionOptions) -> f64 {
    (1.0 + corr * w_text).max(opts.min_text_coefficient)
}

/// Scales every edge by `1 + corr * w_text` and links highly correlated,
/// unconnected files in both directions with a median-strength edge.
pub fn apply_text_coefficients(fg: &FileGraph, space: &TopicSpace, w_text: f64, opts: &FusionOptions) -> FileGraph {
    if w_text == 0.0 {
        return fg.clone();
    }
    let rows = space_rows(fg, space);
    let corr = |a: usize, b: usize| match (rows[a], rows[b]) {
        (Some(x), Some(y)) => space.correlation(x, y),
        _ => 0.0,
    };
    let mut out = fg.clone();
    out.map_weights(|a, b, w| w * text_coefficient(corr(a, b), w_text, opts));

    let base = fg.median_weight().unwrap_or(1.0);
    let fg_row: HashMap<usize, usize> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|r| (r, i)))
        .collect();
    for (x, y, c) in space.pairs_above(opts.correlation_threshold) {
        let (Some(&a), Some(&b)) = (fg_row.get(&x), fg_row.get(&y)) else {
            continue;
        };
        if fg.has_edge_between(a, b) {
            continue;
        }
        let w = base * text_coefficient(c, w_text, opts);
        out.add_weight(a, b, w);
        out.add_weight(b, a, w);
    }
    out
}

/// Multiplies edges inside one folder cluster by `1 / (1 - w_folder)`.
pub fn apply_folder_coefficients(fg: &FileGraph, filtered: &FolderTree, w_folder: f64, opts: &FusionOptions) -> Result<FileGraph> {
    if w_folder == 0.0 {
        return Ok(fg.clone());
    }
    let coef = 1.0 / (1.0 - w_folder.min(opts.max_folder_weight));
    let partition = folder_partition(filtered)?;
    let cluster: Vec<Option<&str>> = fg.nodes().iter().map(|f| partition.cluster_of(f)).collect();
    let mut out = fg.clone();
    out.map_weights(|a, b, w| match (cluster[a], cluster[b]) {
        (Some(x), Some(y)) if x == y => w * coef,
        _ => w,
    });
    Ok(out)
}

/// The final graph: text coefficients and edges first, then folder coefficients.
pub fn fuse(
    fg: &FileGraph,
    space: Option<&TopicSpace>,
    filtered: &FolderTree,
    weights: FusionWeights,
    opts: &FusionOptions,
) -> Result<FileGraph> {
    let text = match space {
        Some(space) => apply_text_coefficients(fg, space, weights.w_text, opts),
        None => fg.clone(),
    };
    apply_folder_coefficients(&text, filtered, weights.w_folder, opts)
}

/// Everything a single-source recovery may draw on.
pub struct SourceInputs<'a> {
    pub file_graph: &'a FileGraph,
    pub topics: Option<&'a TopicSpace>,
    pub folders: &'a FolderTree,
    pub resolution: f64,
    /// Cluster count requested from recoveries that need one.
    pub cluster_count: usize,
}

/// An architecture recovered from one information source alone.
pub trait SingleSourceRecovery: Send + Sync {
    fn name(&self) -> &str;
    fn recover(&self, inputs: &SourceInputs<'_>) -> Result<Architecture>;
}

struct DependencySource;
struct TextSource;
struct FolderSource;

impl SingleSourceRecovery for DependencySource {
    fn name(&self) -> &str {
        "dependency"
    }

    fn recover(&self, inputs: &SourceInputs<'_>) -> Result<Architecture> {
        recover_dep_only(inputs.file_graph, inputs.resolution)
    }
}

impl SingleSourceRecovery for TextSource {
    fn name(&self) -> &str {
        "text"
    }

    fn recover(&self, inputs: &SourceInputs<'_>) -> Result<Architecture> {
        let space = inputs
            .topics
            .ok_or(Error::Empty("no topic embeddings for text recovery"))?;
        recover_text_only(inputs.file_graph, space, inputs.cluster_count)
    }
}

impl SingleSourceRecovery for FolderSource {
    fn name(&self) -> &str {
        "folder"
    }

    fn recover(&self, inputs: &SourceInputs<'_>) -> Result<Architecture> {
        folder_partition(inputs.folders)
    }
}

/// Single-source recoveries selectable by name.
pub struct SourceRegistry {
    sources: Vec<Box<dyn SingleSourceRecovery>>,
}

impl SourceRegistry {
    pub fn empty() -> Self {
        SourceRegistry { sources: Vec::new() }
    }

    /// `dependency`, `text`, and `folder`.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(DependencySource));
        r.register(Box::new(TextSource));
        r.register(Box::new(FolderSource));
        r
    }

    /// Adds `source`, replacing any source registered under the same name.
    pub fn register(&mut self, source: Box<dyn SingleSourceRecovery>) {
        match self.sources.iter().position(|s| s.name() == source.name()) {
            Some(i) => self.sources[i] = source,
            None => self.sources.push(source),
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.sources.iter().map(|s| s.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn SingleSourceRecovery> {
        self.sources
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "source",
                name: name.to_string(),
            })
    }

    pub fn recover(&self, name: &str, inputs: &SourceInputs<'_>) -> Result<Architecture> {
        self.get(name)?.recover(inputs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::scan_folders;
    use crate::model::TopicEmbedding;
    use proptest::prelude::*;

    fn graph(files: &[&str], edges: &[(&str, &str, f64)]) -> FileGraph {
        let mut g = FileGraph::new(files.iter().copied());
        for &(a, b, w) in edges {
            g.add_weight_by_id(a, b, w).unwrap();
        }
        g
    }

    fn space(vectors: &[(&str, &[f64])]) -> TopicSpace {
        let es: Vec<TopicEmbedding> = vectors
            .iter()
            .map(|(f, v)| TopicEmbedding {
                file_id: f.to_string(),
                distribution: v.to_vec(),
            })
            .collect();
        TopicSpace::new(&es).unwrap()
    }

    #[test]
    fn dep_only_finds_triangles() {
        let files = ["a", "b", "c", "d", "e", "f"];
        let edges: Vec<(&str, &str, f64)> = [("a", "b"), ("b", "c"), ("c", "a"), ("d", "e"), ("e", "f"), ("f", "d")]
            .iter()
            .map(|&(x, y)| (x, y, 1.0))
            .collect();
        let g = graph(&files, &edges);
        let arch = recover_dep_only(&g, 1.0).unwrap();
        assert_eq!(arch.cluster_count(), 2);
        assert_eq!(arch, recover_dep_only(&g, 1.0).unwrap());
        assert_eq!(recover_dep_only(&graph(&["x"], &[]), 1.0).unwrap().cluster_count(), 1);
    }

    #[test]
    fn text_only_groups_correlated_pairs() {
        let g = graph(&["a", "b", "c", "d"], &[]);
        let s = space(&[
            ("a", &[0.8, 0.1, 0.1]),
            ("b", &[0.7, 0.2, 0.1]),
            ("c", &[0.1, 0.1, 0.8]),
            ("d", &[0.1, 0.2, 0.7]),
        ]);
        let arch = recover_text_only(&g, &s, 2).unwrap();
        assert_eq!(arch.cluster_of("a"), arch.cluster_of("b"));
        assert_eq!(arch.cluster_of("c"), arch.cluster_of("d"));
        assert_ne!(arch.cluster_of("a"), arch.cluster_of("c"));
        assert_eq!(recover_text_only(&g, &s, 4).unwrap().cluster_count(), 4);
        assert_eq!(recover_text_only(&g, &s, 1).unwrap().cluster_count(), 1);
        assert!(recover_text_only(&g, &s, 5).is_err());
    }

    #[test]
    fn identical_text_architecture_gets_full_weight() {
        let dep = Architecture::from_clusters([("x", vec!["a", "b"]), ("y", vec!["c"])]).unwrap();
        let folder = Architecture::from_clusters([("ROOT", vec!["a", "b", "c"])]).unwrap();
        let w = assign_weights(&dep, &dep, &folder).unwrap();
        assert_eq!(w.w_text, 1.0);
        assert!(w.w_folder < 1.0);
    }

    #[test]
    fn text_coefficient_scales_and_adds_edges() {
        let g = graph(&["a", "b", "c"], &[("a", "b", 2.0)]);
        let s = space(&[("a", &[0.9, 0.1]), ("b", &[0.9, 0.1]), ("c", &[0.9, 0.1])]);
        let opts = FusionOptions::default();
        let out = apply_text_coefficients(&g, &s, 0.639, &opts);
        assert!((out.weight(0, 1).unwrap() - 2.0 * 1.639).abs() < 1e-12);
        // a-c and b-c are perfectly correlated and unconnected.
        assert!((out.weight(0, 2).unwrap() - 2.0 * 1.639).abs() < 1e-12);
        assert_eq!(out.weight(0, 2), out.weight(2, 0));
        assert_eq!(out.edge_count(), 5);
        assert!((text_coefficient(0.5, 0.639, &opts) - 1.3195).abs() < 1e-12);
        assert_eq!(text_coefficient(0.0, 0.7, &opts), 1.0);
        assert_eq!(text_coefficient(-1.0, 1.0, &opts), 0.05);
    }

    #[test]
    fn folder_coefficient_applies_within_folders() {
        let files = ["m/a.c", "m/b.c", "n/c.c"];
        let g = graph(&files, &[("m/a.c", "m/b.c", 1.0), ("m/a.c", "n/c.c", 0.25)]);
        let tree = scan_folders(files.iter().map(|f| (*f, *f)));
        let opts = FusionOptions::default();
        let out = apply_folder_coefficients(&g, &tree, 0.5, &opts).unwrap();
        assert_eq!(out.weight(0, 1), Some(2.0));
        assert_eq!(out.weight(0, 2), Some(0.25));
        let capped = apply_folder_coefficients(&g, &tree, 1.0, &opts).unwrap();
        assert!((capped.weight(0, 1).unwrap() - 20.0).abs() < 1e-9);
    }

    #[test]
    fn fuse_multiplies_both_coefficients() {
        let files = ["m/a.c", "m/b.c"];
        let g = graph(&files, &[("m/a.c", "m/b.c", 0.5)]);
        let tree = scan_folders(files.iter().map(|f| (*f, *f)));
        let s = space(&[("m/a.c", &[0.6, 0.4]), ("m/b.c", &[0.6, 0.4])]);
        let out = fuse(&g, Some(&s), &tree, FusionWeights::new(0.2, 0.5).unwrap(), &FusionOptions::default()).unwrap();
        assert!((out.weight(0, 1).unwrap() - 1.2).abs() < 1e-12);
    }

    #[test]
    fn registry_names_and_lookup() {
        let r = SourceRegistry::standard();
        assert_eq!(r.names(), ["dependency", "text", "folder"]);
        let g = graph(&["a/x.c", "b/y.c"], &[("a/x.c", "b/y.c", 1.0)]);
        let tree = scan_folders([("a/x.c", "a/x.c"), ("b/y.c", "b/y.c")]);
        let inputs = SourceInputs {
            file_graph: &g,
            topics: None,
            folders: &tree,
            resolution: 1.0,
            cluster_count: 1,
        };
        assert_eq!(r.recover("folder", &inputs).unwrap().cluster_count(), 2);
        assert!(r.recover("text", &inputs).is_err());
        assert!(r.get("build").is_err());
    }

    proptest! {
        #[test]
        fn zero_weights_leave_graph_unchanged_and_weights_stay_positive(
            raw in prop::collection::vec((0usize..6, 0usize..6, 0.01f64..5.0), 1..20),
            corr in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 6),
            w_text in 0.0f64..=1.0,
            w_folder in 0.0f64..=1.0,
        ) {
            let files = ["p/a", "p/b", "p/c", "q/d", "q/e", "f"];
            let mut g = FileGraph::new(files);
            for (a, b, w) in raw {
                g.add_weight(a, b, w);
            }
            let es: Vec<TopicEmbedding> = files
                .iter()
                .zip(corr)
                .map(|(f, v)| TopicEmbedding { file_id: f.to_string(), distribution: v })
                .collect();
            let s = TopicSpace::new(&es).unwrap();
            let tree = scan_folders(files.iter().map(|f| (*f, *f)));
            let opts = FusionOptions::default();
            let same = fuse(&g, Some(&s), &tree, FusionWeights::none(), &opts).unwrap();
            prop_assert_eq!(&same, &g);
            let out = fuse(&g, Some(&s), &tree, FusionWeights::new(w_text, w_folder).unwrap(), &opts).unwrap();
            for (_, _, w) in out.edges() {
                prop_assert!(w.is_finite() && w > 0.0);
            }
        }
    }
}
