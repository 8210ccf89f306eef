//! End-to-end commands: recover, evaluate, optimize weights, and resolution sweeps.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cluster::modularity;
use crate::config::{DepsFormat, RunConfig};
use crate::depgraph::{
    entity_importance, optimize_type_weights, uniform_importance, weighted_file_graph, FileGraph, IprOptions,
    OptimizationResult, OptimizerOptions,
};
use crate::error::{Error, Result};
use crate::folders::filter_folders;
use crate::fusion::{fuse, source_weight, FusionWeights, SourceInputs, SourceRegistry};
use crate::ingest::{adapt_depends_output, extract_text, parse_dependency_json, scan_graph_folders, Preprocessor, SkipReport};
use crate::io::{read_architecture, read_json, write_json, write_text, architecture_to_json, write_rsf};
use crate::metrics::MetricRegistry;
use crate::model::{Architecture, DependencyGraph, FolderTree, TopicEmbedding, TypeWeights};
use crate::textual::{all_embeddings, train_lda, weigh_words, weighted_documents, TopicSpace};

pub const RSF_FILE: &str = "architecture.rsf";
pub const JSON_FILE: &str = "architecture.json";
pub const PROVENANCE_FILE: &str = "provenance.json";
pub const CACHE_DIR: &str = "cache";

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn digest_file(path: &Path) -> Result<String> {
    Ok(sha256_hex(&fs::read(path).map_err(|e| Error::io(path, e))?))
}

/// Everything about a project that does not depend on the resolution.
pub struct Prepared {
    pub graph: DependencyGraph,
    pub file_graph: FileGraph,
    pub embeddings: Vec<TopicEmbedding>,
    pub topics: Option<TopicSpace>,
    pub filtered_folders: Option<FolderTree>,
    pub skipped: SkipReport,
    /// Content digests of every input, keyed by role.
    pub digests: BTreeMap<String, String>,
}

/// The outcome of one recovery at a fixed resolution.
pub struct Recovery {
    pub architecture: Architecture,
    pub fused: FileGraph,
    pub weights: FusionWeights,
    pub resolution: f64,
    pub modularity: Option<f64>,
    /// Single-source architectures by source name.
    pub sources: BTreeMap<String, Architecture>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub cluster_count: usize,
    pub modularity: Option<f64>,
    pub resolution: f64,
    pub fusion_weights: FusionWeights,
    pub source_cluster_counts: BTreeMap<String, usize>,
    pub file_count: usize,
    pub fused_edge_count: usize,
    pub skipped_files: Vec<String>,
    pub inputs: BTreeMap<String, String>,
    pub config: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct EmbeddingCache {
    key: String,
    embeddings: Vec<TopicEmbedding>,
    skipped: Vec<(String, String)>,
}

pub fn load_graph(config: &RunConfig) -> Result<DependencyGraph> {
    let path = config
        .deps
        .as_ref()
        .ok_or_else(|| Error::Config("no dependency file given (`deps`)".into()))?;
    match config.deps_format {
        DepsFormat::Native => parse_dependency_json(path),
        DepsFormat::Depends => adapt_depends_output(path),
    }
}

fn type_weights(config: &RunConfig) -> Result<TypeWeights> {
    if !config.use_type_weights {
        return TypeWeights::uniform(1.0);
    }
    match &config.type_weights {
        Some(path) => TypeWeights::parse(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?),
        None => Ok(TypeWeights::defaults()),
    }
}

/// Digest of every graph file's content under `root`, in file order.
fn source_digest(root: &Path, g: &DependencyGraph) -> String {
    let mut hasher = Sha256::new();
    for file in g.file_ids() {
        let name = g.entity(&file).map(|e| e.name.clone()).unwrap_or(file);
        hasher.update(name.as_bytes());
        hasher.update([0]);
        match fs::read(root.join(&name)) {
            Ok(bytes) => hasher.update(sha256_hex(&bytes).as_bytes()),
            Err(_) => hasher.update(b"missing"),
        }
        hasher.update([0]);
    }
    hex::encode(hasher.finalize())
}

fn embedding_cache_key(config: &RunConfig, digests: &BTreeMap<String, String>) -> String {
    let relevant: Vec<String> = [
        "lda.topics",
        "lda.iterations",
        "lda.alpha",
        "lda.beta",
        "lda.resolution",
        "text.weights.filename",
        "text.weights.definition",
        "text.weights.comment",
        "fusion.use_entity_importance",
    ]
    .iter()
    .map(|k| format!("{k}={}", config.get(k).expect("known key")))
    .chain(std::iter::once(format!("lda.seed={}", config.lda_seed())))
    .chain(digests.iter().map(|(k, v)| format!("{k}:{v}")))
    .collect();
    sha256_hex(relevant.join("\n").as_bytes())
}

fn train_embeddings(config: &RunConfig, source: &Path, g: &DependencyGraph, fg: &FileGraph, skipped: &mut SkipReport) -> Result<Vec<TopicEmbedding>> {
    let extraction = extract_text(source, g);
    *skipped = extraction.skipped;
    let mut pre = Preprocessor::default();
    if let Some(path) = &config.stop_words {
        pre.load_stop_words(path)?;
    }
    let occs = pre.preprocess_words(extraction.occurrences);
    let ranked = if config.use_entity_importance {
        entity_importance(g, IprOptions::default())
    } else {
        uniform_importance(g, 1.0)
    };
    let weighted = weigh_words(&occs, &config.source_weights, &ranked, fg.node_count())?;
    let docs = weighted_documents(fg.nodes().iter().map(String::as_str), &weighted);
    match train_lda(&docs, &config.lda_config()) {
        Ok(model) => Ok(all_embeddings(&model)),
        Err(Error::Empty(why)) => {
            log::warn!("text information unavailable: {why}");
            Ok(Vec::new())
        }
        Err(e) => Err(e),
    }
}

/// Loads inputs and computes every resolution-independent artifact.
///
/// Topic embeddings are reused from `<output>/cache` when their inputs and
/// settings are unchanged.
pub fn prepare(config: &RunConfig) -> Result<Prepared> {
    config.validate().map_err(|e| e.in_stage("config"))?;
    let graph = load_graph(config).map_err(|e| e.in_stage("ingest"))?;
    let mut digests = BTreeMap::new();
    digests.insert("deps".to_string(), digest_file(config.deps.as_deref().expect("loaded"))?);
    if let (true, Some(path)) = (config.use_type_weights, &config.type_weights) {
        digests.insert("type_weights".into(), digest_file(path).map_err(|e| e.in_stage("depgraph"))?);
    }
    let file_graph = type_weights(config)
        .and_then(|tw| weighted_file_graph(&graph, &tw, config.use_entity_importance))
        .map_err(|e| e.in_stage("depgraph"))?;
    log::info!("file graph: {} files, {} edges", file_graph.node_count(), file_graph.edge_count());

    let mut skipped = SkipReport::default();
    let mut embeddings = Vec::new();
    match (&config.source, config.use_text) {
        (Some(source), true) => {
            digests.insert("source".into(), source_digest(source, &graph));
            if let Some(path) = &config.stop_words {
                digests.insert("stopwords".into(), digest_file(path).map_err(|e| e.in_stage("textual"))?);
            }
            let key = embedding_cache_key(config, &digests);
            let cache_path = config.output.as_ref().map(|o| o.join(CACHE_DIR).join("embeddings.json"));
            let cached = cache_path
                .as_ref()
                .and_then(|p| read_json::<EmbeddingCache>(p).ok())
                .filter(|c| c.key == key);
            embeddings = match cached {
                Some(c) => {
                    log::info!("reusing cached topic embeddings");
                    skipped.entries = c.skipped;
                    c.embeddings
                }
                None => {
                    let e = train_embeddings(config, source, &graph, &file_graph, &mut skipped)
                        .map_err(|e| e.in_stage("textual"))?;
                    if let Some(p) = &cache_path {
                        let cache = EmbeddingCache {
                            key,
                            embeddings: e.clone(),
                            skipped: skipped.entries.clone(),
                        };
                        write_json(p, &cache).map_err(|e| e.in_stage("output"))?;
                    }
                    e
                }
            };
        }
        (None, true) => log::warn!("no source root given, text information disabled"),
        _ => {}
    }
    let topics = if embeddings.is_empty() {
        None
    } else {
        Some(TopicSpace::new(&embeddings).map_err(|e| e.in_stage("textual"))?)
    };

    let filtered_folders = config
        .use_folder
        .then(|| filter_folders(&scan_graph_folders(&graph), &file_graph));

    Ok(Prepared {
        graph,
        file_graph,
        embeddings,
        topics,
        filtered_folders,
        skipped,
        digests,
    })
}

/// Fuses the prepared sources and clusters the result at `resolution`.
pub fn recover_at(prepared: &Prepared, config: &RunConfig, resolution: f64) -> Result<Recovery> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::Config(format!("resolution must be positive, got {resolution}")).in_stage("config"));
    }
    let registry = SourceRegistry::standard();
    let empty_tree = scan_graph_folders(&DependencyGraph::default());
    let folders = prepared.filtered_folders.as_ref().unwrap_or(&empty_tree);
    let mut inputs = SourceInputs {
        file_graph: &prepared.file_graph,
        topics: prepared.topics.as_ref(),
        folders,
        resolution,
        cluster_count: 1,
    };
    let dep = registry.recover("dependency", &inputs).map_err(|e| e.in_stage("cluster"))?;
    inputs.cluster_count = dep.cluster_count();

    let mut sources = BTreeMap::new();
    let mut weights = FusionWeights::none();
    if prepared.topics.is_some() {
        let text = registry.recover("text", &inputs).map_err(|e| e.in_stage("textual"))?;
        weights.w_text = source_weight(&dep, &text).map_err(|e| e.in_stage("fusion"))?;
        sources.insert("text".to_string(), text);
    }
    if prepared.filtered_folders.is_some() {
        let folder = registry.recover("folder", &inputs).map_err(|e| e.in_stage("folders"))?;
        weights.w_folder = source_weight(&dep, &folder).map_err(|e| e.in_stage("fusion"))?;
        sources.insert("folder".to_string(), folder);
    }
    log::info!("fusion weights: text {:.4}, folder {:.4}", weights.w_text, weights.w_folder);

    let fused = fuse(&prepared.file_graph, prepared.topics.as_ref(), folders, weights, &config.fusion)
        .map_err(|e| e.in_stage("fusion"))?;
    inputs.file_graph = &fused;
    let architecture = registry.recover("dependency", &inputs).map_err(|e| e.in_stage("cluster"))?;
    let q = modularity(&fused, &architecture, resolution).ok();
    sources.insert("dependency".to_string(), dep);
    Ok(Recovery {
        architecture,
        fused,
        weights,
        resolution,
        modularity: q,
        sources,
    })
}

pub fn provenance(prepared: &Prepared, recovery: &Recovery, config: &RunConfig) -> Provenance {
    Provenance {
        cluster_count: recovery.architecture.cluster_count(),
        modularity: recovery.modularity,
        resolution: recovery.resolution,
        fusion_weights: recovery.weights,
        source_cluster_counts: recovery
            .sources
            .iter()
            .map(|(k, a)| (k.clone(), a.cluster_count()))
            .collect(),
        file_count: prepared.file_graph.node_count(),
        fused_edge_count: recovery.fused.edge_count(),
        skipped_files: prepared.skipped.entries.iter().map(|(p, r)| format!("{p} {r}")).collect(),
        inputs: prepared.digests.clone(),
        config: config.effective(),
    }
}

/// Writes the architecture, provenance, and intermediate caches under `dir`.
pub fn write_outputs(dir: &Path, prepared: &Prepared, recovery: &Recovery, config: &RunConfig) -> Result<()> {
    write_artifacts(dir, prepared, recovery, config).map_err(|e| e.in_stage("output"))
}

fn write_artifacts(dir: &Path, prepared: &Prepared, recovery: &Recovery, config: &RunConfig) -> Result<()> {
    write_text(dir.join(RSF_FILE), &write_rsf(&recovery.architecture))?;
    write_text(dir.join(JSON_FILE), &architecture_to_json(&recovery.architecture))?;
    write_json(dir.join(PROVENANCE_FILE), &provenance(prepared, recovery, config))?;
    let cache = dir.join(CACHE_DIR);
    write_json(cache.join("weighted_graph.json"), &prepared.file_graph)?;
    write_json(cache.join("fusion_weights.json"), &recovery.weights)?;
    Ok(())
}

fn output_dir(config: &RunConfig) -> Result<&Path> {
    config
        .output
        .as_deref()
        .ok_or_else(|| Error::Config("no output directory given (`output`)".into()))
}

/// Full recovery at the configured resolution, written to the output directory.
pub fn cmd_recover(config: &RunConfig) -> Result<Recovery> {
    let dir = output_dir(config).map_err(|e| e.in_stage("config"))?.to_path_buf();
    let prepared = prepare(config)?;
    let recovery = recover_at(&prepared, config, config.resolution)?;
    write_outputs(&dir, &prepared, &recovery, config)?;
    Ok(recovery)
}

/// Cluster count per resolution, sharing one preparation across all of them.
pub fn cmd_sweep(config: &RunConfig, gammas: &[f64]) -> Result<Vec<(f64, usize)>> {
    if gammas.is_empty() {
        return Err(Error::Config("no resolutions to sweep".into()).in_stage("config"));
    }
    let prepared = prepare(config)?;
    gammas
        .iter()
        .map(|&g| Ok((g, recover_at(&prepared, config, g)?.architecture.cluster_count())))
        .collect()
}

pub fn sweep_csv(rows: &[(f64, usize)]) -> String {
    let mut out = String::from("gamma,cluster_count\n");
    for (g, n) in rows {
        out.push_str(&format!("{g},{n}\n"));
    }
    out
}

/// Scores a recovered architecture against a ground truth with the named
/// metrics, or all of them when `metrics` is empty.
pub fn cmd_evaluate(recovered: &Path, ground_truth: &Path, c2c_threshold: f64, metrics: &[String]) -> Result<Vec<(String, f64)>> {
    let rec = read_architecture(recovered)?;
    let gt = read_architecture(ground_truth)?;
    if !(c2c_threshold > 0.0 && c2c_threshold <= 1.0) {
        return Err(Error::Config(format!("c2c threshold must lie in (0, 1], got {c2c_threshold}")));
    }
    let shared = rec.universe().intersection(&gt.universe()).count();
    if shared == 0 {
        return Err(Error::UniverseMismatch {
            left: rec.entity_count(),
            right: gt.entity_count(),
            shared,
        });
    }
    if shared != rec.entity_count() || shared != gt.entity_count() {
        log::warn!("architectures share {shared} files; MoJoFM and ARI use only those");
    }
    MetricRegistry::standard(c2c_threshold).evaluate(metrics, &rec, &gt)
}

/// Dependency graph paths listed in a manifest, relative to the manifest's folder.
pub fn read_manifest(path: &Path) -> Result<Vec<PathBuf>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let entries: Vec<PathBuf> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| base.join(l))
        .collect();
    if entries.is_empty() {
        return Err(Error::Config(format!("manifest {} lists no dependency files", path.display())));
    }
    Ok(entries)
}

/// Optimizes type weights over a manifest's corpus and writes them to
/// `output`; without a manifest the built-in defaults are written.
pub fn cmd_optimize_weights(manifest: Option<&Path>, opts: OptimizerOptions, output: &Path) -> Result<Option<OptimizationResult>> {
    let Some(manifest) = manifest else {
        log::warn!("no corpus manifest given, writing the default type weights");
        write_text(output, &TypeWeights::defaults().to_text())?;
        return Ok(None);
    };
    let corpus = read_manifest(manifest)?
        .iter()
        .map(parse_dependency_json)
        .collect::<Result<Vec<_>>>()?;
    let result = optimize_type_weights(&corpus, opts)?;
    write_text(output, &result.weights.to_text())?;
    Ok(Some(result))
}
