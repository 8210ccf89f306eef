//! Run configuration: a flat `key = value` file with dotted keys.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cluster::DEFAULT_RESOLUTION;
use crate::error::{Error, Result};
use crate::fusion::FusionOptions;
use crate::textual::{LdaConfig, SourceKindWeights};

/// Every configuration key with a one-line description.
pub const CONFIG_KEYS: &[(&str, &str)] = &[
    ("deps", "dependency graph file"),
    ("deps.format", "dependency file format: native or depends"),
    ("source", "source root the dependency file paths are relative to"),
    ("output", "output directory"),
    ("resolution", "modularity resolution of the final clustering"),
    ("seed", "seed for every random choice"),
    ("type_weights", "dependency type weights file; built-in defaults when unset"),
    ("lda.topics", "number of topics"),
    ("lda.iterations", "Gibbs sampling sweeps"),
    ("lda.seed", "topic model seed; auto means seed"),
    ("lda.alpha", "document-topic prior; auto means 50 / topics"),
    ("lda.beta", "topic-word prior"),
    ("lda.resolution", "word weight represented by one sampled token"),
    ("text.weights.filename", "weight of words from file names"),
    ("text.weights.definition", "weight of words from definitions"),
    ("text.weights.comment", "weight of words from comments"),
    ("text.stopwords", "extra stop-word file, one word per line"),
    ("fusion.use_text", "fuse textual similarity"),
    ("fusion.use_folder", "fuse folder structure"),
    ("fusion.use_entity_importance", "weigh edges by entity importance"),
    ("fusion.use_type_weights", "weigh edges by dependency type"),
    ("fusion.correlation_threshold", "topic correlation above which files are linked"),
    ("fusion.min_text_coefficient", "floor of the text coefficient"),
    ("fusion.max_folder_weight", "cap on the folder weight"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepsFormat {
    Native,
    Depends,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub deps: Option<PathBuf>,
    pub deps_format: DepsFormat,
    pub source: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub resolution: f64,
    pub seed: u64,
    pub type_weights: Option<PathBuf>,
    pub lda: LdaConfig,
    lda_seed: Option<u64>,
    pub source_weights: SourceKindWeights,
    pub stop_words: Option<PathBuf>,
    pub use_text: bool,
    pub use_folder: bool,
    pub use_entity_importance: bool,
    pub use_type_weights: bool,
    pub fusion: FusionOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            deps: None,
            deps_format: DepsFormat::Native,
            source: None,
            output: None,
            resolution: DEFAULT_RESOLUTION,
            seed: 42,
            type_weights: None,
            lda: LdaConfig::default(),
            lda_seed: None,
            source_weights: SourceKindWeights::default(),
            stop_words: None,
            use_text: true,
            use_folder: true,
            use_entity_importance: true,
            use_type_weights: true,
            fusion: FusionOptions::default(),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config(format!("invalid boolean `{value}` for `{key}`"))),
    }
}

fn path_or_none(value: &str) -> Option<PathBuf> {
    let v = value.trim();
    (!v.is_empty()).then(|| PathBuf::from(v))
}

fn show_path(p: &Option<PathBuf>) -> String {
    p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
}

impl RunConfig {
    /// Reads `key = value` lines; `#` starts a comment.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = RunConfig::default();
        config.apply_text(&text)?;
        Ok(config)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "deps" => self.deps = path_or_none(value),
            "deps.format" => {
                self.deps_format = match value.trim() {
                    "native" => DepsFormat::Native,
                    "depends" => DepsFormat::Depends,
                    other => return Err(Error::Config(format!("unknown dependency format `{other}`"))),
                }
            }
            "source" => self.source = path_or_none(value),
            "output" => self.output = path_or_none(value),
            "resolution" => self.resolution = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "type_weights" => self.type_weights = path_or_none(value),
            "lda.topics" => self.lda.topics = parse(key, value)?,
            "lda.iterations" => self.lda.iterations = parse(key, value)?,
            "lda.seed" => {
                self.lda_seed = match value.trim() {
                    "auto" | "" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "lda.alpha" => {
                self.lda.alpha = match value.trim() {
                    "auto" | "" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "lda.beta" => self.lda.beta = parse(key, value)?,
            "lda.resolution" => self.lda.resolution = parse(key, value)?,
            "text.weights.filename" => self.source_weights.filename = parse(key, value)?,
            "text.weights.definition" => self.source_weights.definition = parse(key, value)?,
            "text.weights.comment" => self.source_weights.comment = parse(key, value)?,
            "text.stopwords" => self.stop_words = path_or_none(value),
            "fusion.use_text" => self.use_text = parse_bool(key, value)?,
            "fusion.use_folder" => self.use_folder = parse_bool(key, value)?,
            "fusion.use_entity_importance" => self.use_entity_importance = parse_bool(key, value)?,
            "fusion.use_type_weights" => self.use_type_weights = parse_bool(key, value)?,
            "fusion.correlation_threshold" => self.fusion.correlation_threshold = parse(key, value)?,
            "fusion.min_text_coefficient" => self.fusion.min_text_coefficient = parse(key, value)?,
            "fusion.max_folder_weight" => self.fusion.max_folder_weight = parse(key, value)?,
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Result<String> {
        Ok(match key {
            "deps" => show_path(&self.deps),
            "deps.format" => match self.deps_format {
                DepsFormat::Native => "native".into(),
                DepsFormat::Depends => "depends".into(),
            },
            "source" => show_path(&self.source),
            "output" => show_path(&self.output),
            "resolution" => self.resolution.to_string(),
            "seed" => self.seed.to_string(),
            "type_weights" => show_path(&self.type_weights),
            "lda.topics" => self.lda.topics.to_string(),
            "lda.iterations" => self.lda.iterations.to_string(),
            "lda.seed" => self.lda_seed.map_or("auto".into(), |v| v.to_string()),
            "lda.alpha" => self.lda.alpha.map_or("auto".into(), |a| a.to_string()),
            "lda.beta" => self.lda.beta.to_string(),
            "lda.resolution" => self.lda.resolution.to_string(),
            "text.weights.filename" => self.source_weights.filename.to_string(),
            "text.weights.definition" => self.source_weights.definition.to_string(),
            "text.weights.comment" => self.source_weights.comment.to_string(),
            "text.stopwords" => show_path(&self.stop_words),
            "fusion.use_text" => self.use_text.to_string(),
            "fusion.use_folder" => self.use_folder.to_string(),
            "fusion.use_entity_importance" => self.use_entity_importance.to_string(),
            "fusion.use_type_weights" => self.use_type_weights.to_string(),
            "fusion.correlation_threshold" => self.fusion.correlation_threshold.to_string(),
            "fusion.min_text_coefficient" => self.fusion.min_text_coefficient.to_string(),
            "fusion.max_folder_weight" => self.fusion.max_folder_weight.to_string(),
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        })
    }

    pub fn lda_seed(&self) -> u64 {
        self.lda_seed.unwrap_or(self.seed)
    }

    /// LDA settings with the effective seed filled in.
    pub fn lda_config(&self) -> LdaConfig {
        LdaConfig {
            seed: self.lda_seed(),
            ..self.lda
        }
    }

    /// Effective values of every key except `output`, which names where
    /// results go rather than how they are computed.
    pub fn effective(&self) -> BTreeMap<String, String> {
        CONFIG_KEYS
            .iter()
            .filter(|(k, _)| *k != "output")
            .map(|(k, _)| (k.to_string(), self.get(k).expect("listed key")))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resolution.is_finite() && self.resolution > 0.0) {
            return Err(Error::Config(format!("resolution must be positive, got {}", self.resolution)));
        }
        if self.lda.topics == 0 || self.lda.topics > 65536 {
            return Err(Error::Config(format!("lda.topics must lie in 1..=65536, got {}", self.lda.topics)));
        }
        let positive = [
            ("lda.beta", self.lda.beta),
            ("lda.resolution", self.lda.resolution),
            ("lda.alpha", self.lda.alpha()),
            ("text.weights.filename", self.source_weights.filename),
            ("text.weights.definition", self.source_weights.definition),
            ("text.weights.comment", self.source_weights.comment),
            ("fusion.min_text_coefficient", self.fusion.min_text_coefficient),
        ];
        for (key, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{key} must be positive, got {v}")));
            }
        }
        if !(0.0..1.0).contains(&self.fusion.max_folder_weight) {
            return Err(Error::Config("fusion.max_folder_weight must lie in [0, 1)".into()));
        }
        if !(-1.0..=1.0).contains(&self.fusion.correlation_threshold) {
            return Err(Error::Config("fusion.correlation_threshold must lie in [-1, 1]".into()));
        }
        Ok(())
    }
}
