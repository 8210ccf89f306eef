use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cluster that holds files no recovery view could place.
pub const UNASSIGNED: &str = "UNASSIGNED";

/// A total partition of file ids into named, non-empty, disjoint clusters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    clusters: BTreeMap<String, BTreeSet<String>>,
}

impl Architecture {
    pub fn from_clusters<I, N, F>(clusters: I) -> Result<Self>
    where
        I: IntoIterator<Item = (N, F)>,
        N: Into<String>,
        F: IntoIterator,
        F::Item: Into<String>,
    {
        let mut out: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (name, files) in clusters {
            let name = name.into();
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidArchitecture(format!(
                    "cluster name `{name}` must be non-empty and contain no whitespace"
                )));
            }
            let members: BTreeSet<String> = files.into_iter().map(Into::into).collect();
            if members.is_empty() {
                return Err(Error::InvalidArchitecture(format!("cluster `{name}` is empty")));
            }
            for m in &members {
                if !seen.insert(m.clone()) {
                    return Err(Error::InvalidArchitecture(format!(
                        "file `{m}` appears in more than one cluster"
                    )));
                }
            }
            if out.insert(name.clone(), members).is_some() {
                return Err(Error::InvalidArchitecture(format!("duplicate cluster `{name}`")));
            }
        }
        Ok(Architecture { clusters: out })
    }

    /// Builds an architecture from `(file, cluster)` pairs.
    pub fn from_assignment<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let mut clusters: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (file, cluster) in pairs {
            let file = file.into();
            if !seen.insert(file.clone()) {
                return Err(Error::InvalidArchitecture(format!(
                    "file `{file}` is assigned more than once"
                )));
            }
            clusters.entry(cluster.into()).or_default().insert(file);
        }
        Architecture::from_clusters(clusters)
    }

    /// Groups of files, named by position (`C0`, `C1`, ...) after sorting
    /// groups by their smallest member.
    pub fn from_groups(groups: Vec<Vec<String>>) -> Result<Self> {
        let mut groups: Vec<BTreeSet<String>> = groups
            .into_iter()
            .map(|g| g.into_iter().collect::<BTreeSet<_>>())
            .filter(|g| !g.is_empty())
            .collect();
        groups.sort_by(|a, b| a.iter().next().cmp(&b.iter().next()));
        Architecture::from_clusters(groups.into_iter().enumerate().map(|(i, g)| (format!("C{i}"), g)))
    }

    pub fn clusters(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.clusters
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    pub fn entity_count(&self) -> usize {
        self.clusters.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn universe(&self) -> BTreeSet<String> {
        self.clusters.values().flatten().cloned().collect()
    }

    pub fn cluster_of(&self, file: &str) -> Option<&str> {
        self.clusters
            .iter()
            .find(|(_, members)| members.contains(file))
            .map(|(name, _)| name.as_str())
    }

    /// Map from file to cluster name.
    pub fn assignment(&self) -> BTreeMap<&str, &str> {
        self.clusters
            .iter()
            .flat_map(|(name, members)| members.iter().map(move |m| (m.as_str(), name.as_str())))
            .collect()
    }

    /// Keeps only the given files, dropping clusters that become empty.
    pub fn restrict_to(&self, keep: &BTreeSet<String>) -> Architecture {
        let clusters = self
            .clusters
            .iter()
            .filter_map(|(name, members)| {
                let kept: BTreeSet<String> = members.intersection(keep).cloned().collect();
                (!kept.is_empty()).then(|| (name.clone(), kept))
            })
            .collect();
        Architecture { clusters }
    }

    /// Cluster member sets in name order.
    pub fn groups(&self) -> impl Iterator<Item = &BTreeSet<String>> {
        self.clusters.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_overlap_and_empty_clusters() {
        assert!(Architecture::from_clusters([("a", vec!["x"]), ("b", vec!["x"])]).is_err());
        assert!(Architecture::from_clusters([("a", Vec::<String>::new())]).is_err());
        assert!(Architecture::from_clusters([("has space", vec!["x"])]).is_err());
    }

    #[test]
    fn sizes_sum_to_universe() {
        let a = Architecture::from_clusters([("a", vec!["1", "2"]), ("b", vec!["3"])]).unwrap();
        assert_eq!(a.entity_count(), a.universe().len());
        assert_eq!(a.cluster_of("3"), Some("b"));
    }

    #[test]
    fn restriction_drops_emptied_clusters() {
        let a = Architecture::from_clusters([("a", vec!["1", "2"]), ("b", vec!["3"])]).unwrap();
        let keep: BTreeSet<String> = ["1".to_string()].into();
        let r = a.restrict_to(&keep);
        assert_eq!(r.cluster_count(), 1);
    }

    #[test]
    fn groups_are_named_by_smallest_member() {
        let a = Architecture::from_groups(vec![vec!["z".into()], vec!["b".into(), "a".into()]]).unwrap();
        assert_eq!(a.cluster_of("a"), Some("C0"));
        assert_eq!(a.cluster_of("z"), Some("C1"));
    }
}
