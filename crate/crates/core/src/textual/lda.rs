//! Latent Dirichlet Allocation trained by collapsed Gibbs sampling.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{TopicEmbedding, WordOccurrence};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub topics: usize,
    /// Symmetric document-topic prior; `50 / topics` when unset.
    pub alpha: Option<f64>,
    /// Symmetric topic-word prior.
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
    /// Weight represented by one pseudo-token.
    pub resolution: f64,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            topics: 100,
            alpha: None,
            beta: 0.01,
            iterations: 1000,
            seed: 42,
            resolution: 0.1,
        }
    }
}

impl LdaConfig {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.topics as f64)
    }

    fn validate(&self) -> Result<()> {
        if self.topics == 0 {
            return Err(Error::InvalidArgument("topic count must be at least 1".into()));
        }
        for (name, v) in [("alpha", self.alpha()), ("beta", self.beta), ("resolution", self.resolution)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!("lda {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// One document per file: summed word weights, keyed by word.
pub type WeightedDocs = BTreeMap<String, BTreeMap<String, f64>>;

/// Groups weighted occurrences into documents; every file in `files` gets one,
/// possibly empty.
pub fn weighted_documents<'a>(files: impl IntoIterator<Item = &'a str>, occs: &[WordOccurrence]) -> WeightedDocs {
    let mut docs: WeightedDocs = files.into_iter().map(|f| (f.to_string(), BTreeMap::new())).collect();
    for o in occs {
        let w = o.weight.unwrap_or(0.0);
        if w > 0.0 {
            *docs
                .entry(o.file_id.clone())
                .or_default()
                .entry(o.word.clone())
                .or_insert(0.0) += w;
        }
    }
    docs
}

/// Trained document-topic counts; enough to derive per-file topic distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    topics: usize,
    alpha: f64,
    docs: HashMap<String, usize>,
    doc_topic: Vec<Vec<u32>>,
    doc_len: Vec<u32>,
}

impl LdaModel {
    pub fn topics(&self) -> usize {
        self.topics
    }

    pub fn document_count(&self) -> usize {
        self.doc_len.len()
    }
}

/// Number of pseudo-tokens standing for `weight`; any positive weight yields at least one.
fn pseudo_count(weight: f64, resolution: f64) -> u32 {
    if weight <= 0.0 {
        0
    } else {
        ((weight / resolution).round() as u32).max(1)
    }
}

/// Trains LDA on weighted documents. Deterministic for equal inputs and config.
pub fn train_lda(docs: &WeightedDocs, config: &LdaConfig) -> Result<LdaModel> {
    config.validate()?;
    let k = config.topics;
    let (alpha, beta) = (config.alpha(), config.beta);

    let mut vocab: HashMap<&str, u32> = HashMap::new();
    let mut vocab_order: Vec<&str> = docs.values().flat_map(|d| d.keys().map(String::as_str)).collect();
    vocab_order.sort_unstable();
    vocab_order.dedup();
    for (i, w) in vocab_order.iter().enumerate() {
        vocab.insert(w, i as u32);
    }
    let v = vocab_order.len();

    let mut tokens: Vec<Vec<u32>> = Vec::with_capacity(docs.len());
    for doc in docs.values() {
        let mut t = Vec::new();
        for (word, &w) in doc {
            let id = vocab[word.as_str()];
            t.extend(std::iter::repeat_n(id, pseudo_count(w, config.resolution) as usize));
        }
        tokens.push(t);
    }
    if tokens.iter().all(Vec::is_empty) {
        return Err(Error::Empty("all documents are empty"));
    }
    log::info!(
        "lda: {} documents, {v} words, {} tokens",
        tokens.len(),
        tokens.iter().map(Vec::len).sum::<usize>()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut doc_topic = vec![vec![0u32; k]; tokens.len()];
    // Word-major layout keeps the inner sampling loop contiguous.
    let mut word_topic = vec![0u32; v * k];
    let mut topic_total = vec![0u32; k];
    let mut assignment: Vec<Vec<u16>> = Vec::with_capacity(tokens.len());
    if k > usize::from(u16::MAX) + 1 {
        return Err(Error::InvalidArgument(format!("at most 65536 topics supported, got {k}")));
    }
    for (d, doc) in tokens.iter().enumerate() {
        let mut z = Vec::with_capacity(doc.len());
        for &w in doc {
            let t = rng.gen_range(0..k);
            z.push(t as u16);
            doc_topic[d][t] += 1;
            word_topic[w as usize * k + t] += 1;
            topic_total[t] += 1;
        }
        assignment.push(z);
    }

    let mut word_nonzero: Vec<Vec<u16>> = vec![Vec::new(); v];
    for (w, nz) in word_nonzero.iter_mut().enumerate() {
        nz.extend((0..k).filter(|&t| word_topic[w * k + t] > 0).map(|t| t as u16));
    }
    let v_beta = v as f64 * beta;
    let mut sampler = SparseSampler {
        k,
        alpha,
        beta,
        denom: topic_total.iter().map(|&n| f64::from(n) + v_beta).collect(),
        coef: vec![0.0; k],
        s_mass: 0.0,
        r_mass: 0.0,
        doc_nonzero: Vec::with_capacity(k),
        q: Vec::with_capacity(k),
    };
    for _ in 0..config.iterations {
        for (d, doc) in tokens.iter().enumerate() {
            let nd = &mut doc_topic[d];
            sampler.start_document(nd);
            for (i, &w) in doc.iter().enumerate() {
                let w = w as usize;
                let row = &mut word_topic[w * k..(w + 1) * k];
                let old = usize::from(assignment[d][i]);
                sampler.update(nd, old, -1);
                row[old] -= 1;
                if row[old] == 0 {
                    remove_topic(&mut word_nonzero[w], old);
                }

                let new = sampler.draw(nd, row, &word_nonzero[w], rng.gen::<f64>());

                assignment[d][i] = new as u16;
                sampler.update(nd, new, 1);
                if row[new] == 0 {
                    word_nonzero[w].push(new as u16);
                }
                row[new] += 1;
            }
        }
    }

    Ok(LdaModel {
        topics: k,
        alpha,
        docs: docs.keys().enumerate().map(|(i, f)| (f.clone(), i)).collect(),
        doc_len: tokens.iter().map(|t| t.len() as u32).collect(),
        doc_topic,
    })
}

fn remove_topic(list: &mut Vec<u16>, t: usize) {
    if let Some(pos) = list.iter().position(|&x| usize::from(x) == t) {
        list.swap_remove(pos);
    }
}

/// Collapsed Gibbs conditional split into smoothing, document, and word
/// buckets, so each draw only visits topics with nonzero counts.
struct SparseSampler {
    k: usize,
    alpha: f64,
    beta: f64,
    /// `n_t + V beta` per topic.
    denom: Vec<f64>,
    /// `(n_dt + alpha) / denom_t` for the current document.
    coef: Vec<f64>,
    s_mass: f64,
    r_mass: f64,
    doc_nonzero: Vec<u16>,
    q: Vec<f64>,
}

impl SparseSampler {
    fn start_document(&mut self, nd: &[u32]) {
        let (a, b) = (self.alpha, self.beta);
        self.s_mass = self.denom.iter().map(|d| a * b / d).sum();
        self.doc_nonzero.clear();
        self.r_mass = 0.0;
        for (t, &n) in nd.iter().enumerate() {
            self.coef[t] = (f64::from(n) + a) / self.denom[t];
            if n > 0 {
                self.doc_nonzero.push(t as u16);
                self.r_mass += f64::from(n) * b / self.denom[t];
            }
        }
    }

    /// Adds `delta` (+1 or -1) to topic `t` in the document and global counts.
    fn update(&mut self, nd: &mut [u32], t: usize, delta: i32) {
        let (a, b) = (self.alpha, self.beta);
        let n = f64::from(nd[t]);
        self.s_mass -= a * b / self.denom[t];
        self.r_mass -= n * b / self.denom[t];
        if delta > 0 {
            if nd[t] == 0 {
                self.doc_nonzero.push(t as u16);
            }
            nd[t] += 1;
            self.denom[t] += 1.0;
        } else {
            nd[t] -= 1;
            self.denom[t] -= 1.0;
            if nd[t] == 0 {
                remove_topic(&mut self.doc_nonzero, t);
            }
        }
        let n = f64::from(nd[t]);
        self.s_mass += a * b / self.denom[t];
        self.r_mass += n * b / self.denom[t];
        self.coef[t] = (n + a) / self.denom[t];
    }

    /// Draws a topic for a token of a word with topic counts `row`, given a uniform `u` in [0, 1).
    fn draw(&mut self, nd: &[u32], row: &[u32], word_nonzero: &[u16], u: f64) -> usize {
        self.q.clear();
        let mut q_mass = 0.0;
        for &t in word_nonzero {
            let t = usize::from(t);
            q_mass += self.coef[t] * f64::from(row[t]);
            self.q.push(q_mass);
        }
        let s_mass = self.s_mass.max(0.0);
        let r_mass = self.r_mass.max(0.0);
        let mut u = u * (s_mass + r_mass + q_mass);
        if u < q_mass {
            let i = self.q.partition_point(|&c| c <= u).min(word_nonzero.len() - 1);
            return usize::from(word_nonzero[i]);
        }
        u -= q_mass;
        if u < r_mass && !self.doc_nonzero.is_empty() {
            for &t in &self.doc_nonzero {
                let t = usize::from(t);
                u -= f64::from(nd[t]) * self.beta / self.denom[t];
                if u < 0.0 {
                    return t;
                }
            }
            return usize::from(*self.doc_nonzero.last().expect("non-empty"));
        }
        u = (u - r_mass).max(0.0);
        for t in 0..self.k {
            u -= self.alpha * self.beta / self.denom[t];
            if u < 0.0 {
                return t;
            }
        }
        self.k - 1
    }
}

/// Smoothed topic distribution of `file`: `(n_dk + alpha) / (n_d + K alpha)`.
pub fn topic_embedding(model: &LdaModel, file: &str) -> Result<TopicEmbedding> {
    let &d = model
        .docs
        .get(file)
        .ok_or_else(|| Error::UnknownFile(file.to_string()))?;
    let denom = f64::from(model.doc_len[d]) + model.topics as f64 * model.alpha;
    Ok(TopicEmbedding {
        file_id: file.to_string(),
        distribution: model.doc_topic[d]
            .iter()
            .map(|&n| (f64::from(n) + model.alpha) / denom)
            .collect(),
    })
}

/// Embeddings of every trained document, ordered by file id.
pub fn all_embeddings(model: &LdaModel) -> Vec<TopicEmbedding> {
    let mut files: Vec<&String> = model.docs.keys().collect();
    files.sort();
    files
        .into_iter()
        .map(|f| topic_embedding(model, f).expect("trained document"))
        .collect()
}
