use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolderNode {
    /// Path relative to the source root, `""` for the root itself.
    pub path: String,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Files held directly by this folder, sorted.
    pub files: Vec<String>,
}

/// Directory hierarchy over the project's files. Node 0 is the root.
///
/// Filtering detaches merged folders by clearing them and unlinking them from
/// their parent; detached nodes keep their slot so indices stay stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolderTree {
    pub nodes: Vec<FolderNode>,
}

impl FolderTree {
    pub const ROOT: usize = 0;

    pub fn root(&self) -> &FolderNode {
        &self.nodes[Self::ROOT]
    }

    /// Live folders in pre-order from the root.
    pub fn live(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![Self::ROOT];
        while let Some(i) = stack.pop() {
            out.push(i);
            for &c in self.nodes[i].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Live folders with every child before its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = self.live();
        out.reverse();
        out
    }

    /// All files held by `node` or any descendant.
    pub fn subtree_files(&self, node: usize) -> Vec<&str> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(i) = stack.pop() {
            out.extend(self.nodes[i].files.iter().map(String::as_str));
            stack.extend(self.nodes[i].children.iter().copied());
        }
        out
    }

    pub fn file_count(&self) -> usize {
        self.live().iter().map(|&i| self.nodes[i].files.len()).sum()
    }

    pub fn find(&self, path: &str) -> Option<usize> {
        self.live().into_iter().find(|&i| self.nodes[i].path == path)
    }
}
