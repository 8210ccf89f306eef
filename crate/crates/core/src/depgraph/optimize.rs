//! Black-box search for dependency-type weights that make the weighted file
//! graphs of a corpus cluster into the most modular partitions.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::{entity_importance, FileGraph, IprOptions};
use crate::cluster::{greedy_labels, modularity_of_labels};
use crate::error::{Error, Result};
use crate::model::{DepType, DependencyGraph, TypeWeights, MAX_TYPE_WEIGHT, MIN_TYPE_WEIGHT};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    /// Maximum number of weight vectors evaluated.
    pub budget: usize,
    pub seed: u64,
    /// Stop once the best loss has not improved by `min_improvement` for this many evaluations.
    pub patience: usize,
    pub min_improvement: f64,
    /// Resolution used both to cluster and to score the clustering.
    pub gamma: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            budget: 500,
            seed: 42,
            patience: 50,
            min_improvement: 1e-5,
            gamma: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub weights: TypeWeights,
    /// Mean modularity over the corpus at the best weights.
    pub quality: f64,
    pub evaluations: usize,
    /// Best mean modularity after each evaluation.
    pub history: Vec<f64>,
    pub converged: bool,
}

/// Per-type weight contributions of every file pair, independent of the type weights.
struct PreparedGraph {
    nodes: Vec<String>,
    pairs: Vec<(usize, usize, [f64; 13])>,
}

impl PreparedGraph {
    fn new(g: &DependencyGraph) -> Self {
        let g = entity_importance(g, IprOptions::default());
        let fg = FileGraph::new(g.file_ids());
        let mut pairs: BTreeMap<(usize, usize), [f64; 13]> = BTreeMap::new();
        for e in &g.edges {
            let (Some(fa), Some(fb)) = (
                g.file_of(&e.src).and_then(|f| fg.index_of(f)),
                g.file_of(&e.dst).and_then(|f| fg.index_of(f)),
            ) else {
                continue;
            };
            if fa == fb {
                continue;
            }
            let imp = |id: &str| g.entity(id).and_then(|x| x.importance).unwrap_or(0.0);
            let base = f64::from(e.multiplicity) * (imp(&e.src) + imp(&e.dst)) / 2.0;
            pairs.entry((fa, fb)).or_insert([0.0; 13])[e.dep_type.index()] += base;
        }
        PreparedGraph {
            nodes: fg.nodes().to_vec(),
            pairs: pairs.into_iter().map(|((a, b), c)| (a, b, c)).collect(),
        }
    }

    fn quality(&self, tw: &TypeWeights, gamma: f64) -> f64 {
        let weights = tw.as_array();
        let mut fg = FileGraph::new(self.nodes.iter().cloned());
        for (a, b, contrib) in &self.pairs {
            let w: f64 = contrib.iter().zip(&weights).map(|(c, w)| c * w).sum();
            fg.add_weight(*a, *b, w);
        }
        let labels = greedy_labels(&fg, gamma);
        modularity_of_labels(&fg, &labels, gamma).unwrap_or(0.0)
    }
}

/// Searchable types; MixIn does not occur in supported languages and stays at 1.0.
fn searchable() -> impl Iterator<Item = DepType> {
    DepType::ALL.into_iter().filter(|t| *t != DepType::MixIn)
}

fn random_weights(rng: &mut ChaCha8Rng) -> TypeWeights {
    let (lo, hi) = (MIN_TYPE_WEIGHT.ln(), MAX_TYPE_WEIGHT.ln());
    let mut tw = TypeWeights::uniform(1.0).expect("1.0 in range");
    for t in searchable() {
        tw.set(t, rng.gen_range(lo..=hi).exp().clamp(MIN_TYPE_WEIGHT, MAX_TYPE_WEIGHT))
            .expect("clamped");
    }
    tw
}

fn perturb(best: &TypeWeights, step: f64, rng: &mut ChaCha8Rng) -> TypeWeights {
    let noise = Normal::new(0.0, step).expect("positive step");
    let mut tw = *best;
    for t in searchable() {
        let w = (best.get(t).ln() + noise.sample(rng)).exp();
        tw.set(t, w.clamp(MIN_TYPE_WEIGHT, MAX_TYPE_WEIGHT)).expect("clamped");
    }
    tw
}

/// Searches `[0.1, 10]^13` for the weights maximizing mean modularity.
///
/// The first candidate is drawn log-uniformly; later ones are either fresh
/// draws or log-normal perturbations of the incumbent with a step size that
/// grows on success and shrinks on failure.
pub fn optimize_type_weights(corpus: &[DependencyGraph], opts: OptimizerOptions) -> Result<OptimizationResult> {
    if corpus.is_empty() {
        return Err(Error::Empty("optimization corpus is empty"));
    }
    if opts.budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let prepared: Vec<PreparedGraph> = corpus.par_iter().map(PreparedGraph::new).collect();
    let evaluate = |tw: &TypeWeights| -> f64 {
        let qs: Vec<f64> = prepared.par_iter().map(|p| p.quality(tw, opts.gamma)).collect();
        qs.iter().sum::<f64>() / qs.len() as f64
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = random_weights(&mut rng);
    let mut best_quality = evaluate(&best);
    let mut history = vec![best_quality];
    let mut last_improvement = 0;
    let mut step = 1.0f64;
    log::info!("evaluation 1: best modularity {best_quality:.6}");

    let mut converged = false;
    for i in 1..opts.budget {
        let candidate = if rng.gen_bool(0.25) {
            random_weights(&mut rng)
        } else {
            perturb(&best, step, &mut rng)
        };
        let q = evaluate(&candidate);
        if q > best_quality {
            if q - best_quality >= opts.min_improvement {
                last_improvement = i;
            }
            best = candidate;
            best_quality = q;
            step = (step * 1.2).min(2.0);
        } else {
            step = (step * 0.95).max(0.01);
        }
        history.push(best_quality);
        log::info!("evaluation {}: best modularity {best_quality:.6}", i + 1);
        if i - last_improvement >= opts.patience {
            converged = true;
            break;
        }
    }

    Ok(OptimizationResult {
        weights: best,
        quality: best_quality,
        evaluations: history.len(),
        history,
        converged,
    })
}
