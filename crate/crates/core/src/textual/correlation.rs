use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::TopicEmbedding;

/// Centered, unit-length copy of `v`, or `None` when `v` is constant.
fn standardize(v: &[f64]) -> Option<Vec<f64>> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let centered: Vec<f64> = v.iter().map(|x| x - mean).collect();
    let norm = centered.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= 1e-12 * (1.0 + mean.abs()) {
        return None;
    }
    Some(centered.into_iter().map(|x| x / norm).collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().clamp(-1.0, 1.0)
}

/// Pearson correlation of two topic distributions; 0 when either is constant.
pub fn topic_correlation(a: &TopicEmbedding, b: &TopicEmbedding) -> Result<f64> {
    if a.distribution.len() != b.distribution.len() {
        return Err(Error::InvalidArgument(format!(
            "topic vectors differ in length: {} vs {}",
            a.distribution.len(),
            b.distribution.len()
        )));
    }
    Ok(match (standardize(&a.distribution), standardize(&b.distribution)) {
        (Some(x), Some(y)) => dot(&x, &y),
        _ => 0.0,
    })
}

/// All files' embeddings prepared for cheap pairwise correlation queries.
#[derive(Debug, Clone)]
pub struct TopicSpace {
    files: Vec<String>,
    index: HashMap<String, usize>,
    vectors: Vec<Option<Vec<f64>>>,
}

impl TopicSpace {
    pub fn new(embeddings: &[TopicEmbedding]) -> Result<Self> {
        let mut sorted: Vec<&TopicEmbedding> = embeddings.iter().collect();
        sorted.sort_by(|a, b| a.file_id.cmp(&b.file_id));
        if let Some(first) = sorted.first() {
            if let Some(bad) = sorted.iter().find(|e| e.distribution.len() != first.distribution.len()) {
                return Err(Error::InvalidArgument(format!("embedding of `{}` has a different length", bad.file_id)));
            }
        }
        let files: Vec<String> = sorted.iter().map(|e| e.file_id.clone()).collect();
        let index: HashMap<String, usize> = files.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        if index.len() != files.len() {
            return Err(Error::InvalidArgument("duplicate file in embeddings".into()));
        }
        let vectors = sorted.par_iter().map(|e| standardize(&e.distribution)).collect();
        Ok(TopicSpace { files, index, vectors })
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn index_of(&self, file: &str) -> Option<usize> {
        self.index.get(file).copied()
    }

    /// Correlation between files at positions `i` and `j` of [`files`](Self::files).
    pub fn correlation(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return if self.vectors[i].is_some() { 1.0 } else { 0.0 };
        }
        match (&self.vectors[i], &self.vectors[j]) {
            (Some(x), Some(y)) => dot(x, y),
            _ => 0.0,
        }
    }

    /// Correlation by file id; 0 for files without an embedding.
    pub fn correlation_by_id(&self, a: &str, b: &str) -> f64 {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.correlation(i, j),
            _ => 0.0,
        }
    }

    /// All pairs `i < j` whose correlation strictly exceeds `threshold`.
    pub fn pairs_above(&self, threshold: f64) -> Vec<(usize, usize, f64)> {
        let n = self.files.len();
        (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                ((i + 1)..n).filter_map(move |j| {
                    let c = self.correlation(i, j);
                    (c > threshold).then_some((i, j, c))
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn emb(file: &str, v: &[f64]) -> TopicEmbedding {
        TopicEmbedding {
            file_id: file.into(),
            distribution: v.to_vec(),
        }
    }

    #[test]
    fn identical_and_opposite() {
        let a = emb("a", &[0.9, 0.1]);
        let b = emb("b", &[0.1, 0.9]);
        assert!((topic_correlation(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!((topic_correlation(&a, &b).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_vector_is_uncorrelated() {
        let u = emb("u", &[0.25; 4]);
        let x = emb("x", &[0.7, 0.1, 0.1, 0.1]);
        assert_eq!(topic_correlation(&u, &x).unwrap(), 0.0);
        assert_eq!(topic_correlation(&u, &u).unwrap(), 0.0);
        assert!(topic_correlation(&u, &emb("y", &[1.0])).is_err());
    }

    #[test]
    fn space_matches_direct_computation() {
        let es = vec![
            emb("c", &[0.5, 0.3, 0.2]),
            emb("a", &[0.1, 0.3, 0.6]),
            emb("b", &[0.2, 0.5, 0.3]),
        ];
        let space = TopicSpace::new(&es).unwrap();
        assert_eq!(space.files(), ["a", "b", "c"]);
        for x in &es {
            for y in &es {
                let direct = topic_correlation(x, y).unwrap();
                let fast = space.correlation_by_id(&x.file_id, &y.file_id);
                assert!((direct - fast).abs() < 1e-12);
            }
        }
        assert!(space.pairs_above(0.99).is_empty());
        assert_eq!(space.pairs_above(-1.1).len(), 3);
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(a in prop::collection::vec(0.0f64..1.0, 5), b in prop::collection::vec(0.0f64..1.0, 5)) {
            let (x, y) = (emb("x", &a), emb("y", &b));
            let xy = topic_correlation(&x, &y).unwrap();
            let yx = topic_correlation(&y, &x).unwrap();
            prop_assert_eq!(xy, yx);
            prop_assert!((-1.0..=1.0).contains(&xy));
        }
    }
}
