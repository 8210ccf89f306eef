//! Folder filtering and the folder-derived architecture.

use std::collections::HashMap;

use crate::depgraph::FileGraph;
use crate::error::Result;
use crate::model::{Architecture, FolderTree};

/// Cluster name for files held directly by the root folder.
pub const ROOT_CLUSTER: &str = "ROOT";

/// Merges every non-root folder with more crossing than internal dependency
/// weight into its parent, leaves first.
///
/// A folder's internal weight counts edges with both ends among the files of
/// its subtree; crossing weight counts edges with exactly one end there.
/// Merging never changes a subtree's file set, so each decision only depends
/// on the original tree.
pub fn filter_folders(tree: &FolderTree, fg: &FileGraph) -> FolderTree {
    let mut out = tree.clone();
    let n = tree.nodes.len();
    let mut folder_of: HashMap<&str, usize> = HashMap::new();
    for i in tree.live() {
        for f in &tree.nodes[i].files {
            folder_of.insert(f.as_str(), i);
        }
    }
    let mut depth = vec![0usize; n];
    for i in tree.live() {
        if let Some(p) = tree.nodes[i].parent {
            depth[i] = depth[p] + 1;
        }
    }

    let mut inner_at = vec![0.0f64; n];
    let mut inter = vec![0.0f64; n];
    for (a, b, w) in fg.edges() {
        let (Some(&x), Some(&y)) = (folder_of.get(fg.nodes()[a].as_str()), folder_of.get(fg.nodes()[b].as_str())) else {
            continue;
        };
        let (mut x, mut y) = (x, y);
        while x != y {
            if depth[x] >= depth[y] {
                inter[x] += w;
                x = tree.nodes[x].parent.expect("non-root has a parent");
            } else {
                inter[y] += w;
                y = tree.nodes[y].parent.expect("non-root has a parent");
            }
        }
        inner_at[x] += w;
    }
    let order = tree.post_order();
    let mut inner = inner_at;
    for &i in &order {
        if let Some(p) = tree.nodes[i].parent {
            inner[p] += inner[i];
        }
    }

    for &i in &order {
        let Some(parent) = out.nodes[i].parent else { continue };
        if inter[i] <= inner[i] {
            continue;
        }
        let node = std::mem::take(&mut out.nodes[i]);
        for &c in &node.children {
            out.nodes[c].parent = Some(parent);
        }
        let p = &mut out.nodes[parent];
        p.children.retain(|&c| c != i);
        p.children.extend(node.children);
        p.files.extend(node.files);
        p.files.sort();
        out.nodes[i].path = node.path;
        let mut children = std::mem::take(&mut out.nodes[parent].children);
        children.sort_by(|&a, &b| out.nodes[a].path.cmp(&out.nodes[b].path));
        out.nodes[parent].children = children;
    }
    out
}

/// One cluster per live folder holding files directly, named by its path;
/// files in the root form [`ROOT_CLUSTER`].
pub fn folder_partition(tree: &FolderTree) -> Result<Architecture> {
    let clusters: Vec<(String, Vec<String>)> = tree
        .live()
        .into_iter()
        .filter(|&i| !tree.nodes[i].files.is_empty())
        .map(|i| {
            let node = &tree.nodes[i];
            let name = if i == FolderTree::ROOT {
                ROOT_CLUSTER.to_string()
            } else {
                node.path.split_whitespace().collect::<Vec<_>>().join("_")
            };
            (name, node.files.clone())
        })
        .collect();
    Architecture::from_clusters(clusters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::scan_folders;
    use proptest::prelude::*;

    fn tree(files: &[&str]) -> FolderTree {
        scan_folders(files.iter().map(|f| (*f, *f)))
    }

    fn graph(files: &[&str], edges: &[(&str, &str, f64)]) -> FileGraph {
        let mut g = FileGraph::new(files.iter().copied());
        for &(a, b, w) in edges {
            g.add_weight_by_id(a, b, w).unwrap();
        }
        g
    }

    #[test]
    fn cohesive_folder_is_kept() {
        let files = ["m/x.c", "m/y.c", "z.c"];
        let g = graph(&files, &[("m/x.c", "m/y.c", 5.0), ("m/y.c", "z.c", 1.0)]);
        let f = filter_folders(&tree(&files), &g);
        assert!(f.find("m").is_some());
        let arch = folder_partition(&f).unwrap();
        assert_eq!(arch.cluster_of("m/x.c"), Some("m"));
        assert_eq!(arch.cluster_of("z.c"), Some(ROOT_CLUSTER));
    }

    #[test]
    fn header_folder_is_merged() {
        let files = ["include/h1.h", "include/h2.h", "src/a.c", "src/b.c"];
        let g = graph(
            &files,
            &[
                ("src/a.c", "include/h1.h", 1.0),
                ("src/a.c", "include/h2.h", 1.0),
                ("src/b.c", "include/h1.h", 1.0),
                ("src/b.c", "include/h2.h", 1.0),
                ("src/a.c", "src/b.c", 5.0),
            ],
        );
        let f = filter_folders(&tree(&files), &g);
        assert!(f.find("include").is_none());
        assert!(f.find("src").is_some());
        assert_eq!(f.root().files, ["include/h1.h", "include/h2.h"]);
        assert_eq!(f.file_count(), 4);
    }

    #[test]
    fn tie_keeps_folder() {
        let files = ["m/x.c", "m/y.c", "z.c"];
        let g = graph(&files, &[("m/x.c", "m/y.c", 2.0), ("m/y.c", "z.c", 2.0)]);
        assert!(filter_folders(&tree(&files), &g).find("m").is_some());
    }

    #[test]
    fn merged_folder_hands_children_to_parent() {
        let files = ["a/x.c", "a/b/y.c", "a/b/z.c", "w.c"];
        let g = graph(&files, &[("a/b/y.c", "a/b/z.c", 4.0), ("a/x.c", "w.c", 3.0)]);
        let f = filter_folders(&tree(&files), &g);
        // Folder a: inner 4, inter 3 -> kept; a/b: inner 4, inter 0 -> kept.
        assert!(f.find("a").is_some() && f.find("a/b").is_some());
        let g2 = graph(&files, &[("a/b/y.c", "a/b/z.c", 1.0), ("a/x.c", "w.c", 3.0)]);
        let f2 = filter_folders(&tree(&files), &g2);
        assert!(f2.find("a").is_none());
        let b = f2.find("a/b").unwrap();
        assert_eq!(f2.nodes[b].parent, Some(FolderTree::ROOT));
        let arch = folder_partition(&f2).unwrap();
        assert_eq!(arch.cluster_count(), 2);
        assert_eq!(arch.cluster_of("a/x.c"), Some(ROOT_CLUSTER));
    }

    #[test]
    fn flat_tree_is_one_root_cluster() {
        let files = ["a.c", "b.c"];
        let arch = folder_partition(&tree(&files)).unwrap();
        assert_eq!(arch.clusters().keys().collect::<Vec<_>>(), ["ROOT"]);
    }

    #[test]
    fn direct_files_and_surviving_child_are_separate_clusters() {
        let files = ["p/a.c", "p/q/b.c", "p/q/c.c"];
        let g = graph(&files, &[("p/q/b.c", "p/q/c.c", 1.0)]);
        let arch = folder_partition(&filter_folders(&tree(&files), &g)).unwrap();
        assert_eq!(arch.cluster_of("p/a.c"), Some("p"));
        assert_eq!(arch.cluster_of("p/q/b.c"), Some("p/q"));
    }

    proptest! {
        #[test]
        fn filtering_is_idempotent_and_conserves_files(
            paths in prop::collection::btree_set("[abc]{1}(/[abc]{1}){0,3}\\.c", 2..12),
            raw in prop::collection::vec((0usize..12, 0usize..12, 0.1f64..5.0), 0..30),
        ) {
            let files: Vec<&str> = paths.iter().map(String::as_str).collect();
            let t = tree(&files);
            let mut g = FileGraph::new(files.iter().copied());
            for (a, b, w) in raw {
                g.add_weight(a % files.len(), b % files.len(), w);
            }
            let once = filter_folders(&t, &g);
            let twice = filter_folders(&once, &g);
            prop_assert_eq!(folder_partition(&once).unwrap(), folder_partition(&twice).unwrap());
            prop_assert_eq!(once.file_count(), files.len());
            let arch = folder_partition(&once).unwrap();
            prop_assert_eq!(arch.entity_count(), files.len());
        }
    }
}
