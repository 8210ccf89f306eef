use std::collections::BTreeMap;

use crate::model::{FolderNode, FolderTree};

/// Builds the folder hierarchy for `(file id, relative path)` pairs.
///
/// Files attach to their immediate folder; intermediate folders are created
/// even when they hold no files directly.
pub fn scan_folders<'a, I>(files: I) -> FolderTree
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut tree = FolderTree {
        nodes: vec![FolderNode {
            path: String::new(),
            parent: None,
            children: Vec::new(),
            files: Vec::new(),
        }],
    };
    let mut by_path: BTreeMap<String, usize> = BTreeMap::new();
    by_path.insert(String::new(), FolderTree::ROOT);

    let mut sorted: Vec<(&str, &str)> = files.into_iter().collect();
    sorted.sort();
    for (id, path) in sorted {
        let path = path.replace('\\', "/");
        let mut parts: Vec<&str> = path.split('/').filter(|p| !p.is_empty() && *p != ".").collect();
        parts.pop();
        let mut cur = FolderTree::ROOT;
        let mut prefix = String::new();
        for part in parts {
            if !prefix.is_empty() {
                prefix.push('/');
            }
            prefix.push_str(part);
            cur = match by_path.get(&prefix) {
                Some(&i) => i,
                None => {
                    let i = tree.nodes.len();
                    tree.nodes.push(FolderNode {
                        path: prefix.clone(),
                        parent: Some(cur),
                        children: Vec::new(),
                        files: Vec::new(),
                    });
                    tree.nodes[cur].children.push(i);
                    by_path.insert(prefix.clone(), i);
                    i
                }
            };
        }
        tree.nodes[cur].files.push(id.to_string());
    }
    for node in &mut tree.nodes {
        node.files.sort();
        node.children.sort();
    }
    tree
}
