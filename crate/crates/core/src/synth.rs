//! Seeded synthetic projects with planted module structure, for experiments,
//! tests, and benchmarks.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::ingest::write_dependency_json;
use crate::io::write_text;
use crate::model::{Architecture, DepType, DependencyEdge, DependencyGraph, Entity, EntityKind};

const SYLLABLES: [&str; 26] = [
    "ka", "lo", "mi", "ne", "ru", "ta", "vo", "zi", "pe", "qua", "dor", "fen", "gil", "hap", "jot", "lum", "mar", "nix",
    "orb", "pul", "rix", "sev", "tov", "wex", "yul", "zan",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FolderLayout {
    /// One folder per module.
    PerModule,
    /// Every file in the root folder.
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vocabulary {
    /// Each module draws identifiers and comments from its own words.
    PerModule,
    /// All modules draw from one common pool.
    Shared,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectSpec {
    pub modules: usize,
    pub files_per_module: usize,
    pub functions_per_file: usize,
    /// Calls from each function to random functions of its own module.
    pub intra_calls: usize,
    /// Probability that a function also calls one function of another module.
    pub cross_call_probability: f64,
    pub words_per_module: usize,
    pub comment_words: usize,
    pub layout: FolderLayout,
    pub vocabulary: Vocabulary,
    pub seed: u64,
}

impl Default for ProjectSpec {
    fn default() -> Self {
        ProjectSpec {
            modules: 3,
            files_per_module: 5,
            functions_per_file: 3,
            intra_calls: 3,
            cross_call_probability: 0.1,
            words_per_module: 10,
            comment_words: 4,
            layout: FolderLayout::PerModule,
            vocabulary: Vocabulary::PerModule,
            seed: 7,
        }
    }
}

/// A generated project: dependency graph, source texts, and the planted modules.
#[derive(Debug, Clone)]
pub struct SyntheticProject {
    pub graph: DependencyGraph,
    /// `(relative path, content)` of every source file.
    pub sources: Vec<(String, String)>,
    pub modules: Architecture,
}

impl SyntheticProject {
    /// Writes sources under `dir/src` and the graph to `dir/deps.json`;
    /// returns `(deps path, source root)`.
    pub fn write_to(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        let src = dir.join("src");
        for (path, text) in &self.sources {
            write_text(src.join(path), text)?;
        }
        let deps = dir.join("deps.json");
        write_dependency_json(&self.graph, &deps)?;
        Ok((deps, src))
    }
}

fn make_words(rng: &mut ChaCha8Rng, count: usize, taken: &mut BTreeSet<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let w: String = (0..3).map(|_| *SYLLABLES.choose(rng).expect("non-empty")).collect();
        if taken.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

fn pick<'a>(rng: &mut ChaCha8Rng, words: &'a [String]) -> &'a str {
    words.choose(rng).expect("non-empty vocabulary")
}

struct Function {
    id: String,
    name: String,
    module: usize,
    file: usize,
}

/// Builds a project from `spec`; equal specs give identical projects.
pub fn generate_project(spec: &ProjectSpec) -> SyntheticProject {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut taken = BTreeSet::new();
    let shared = make_words(&mut rng, spec.words_per_module * spec.modules.max(1), &mut taken);
    let vocab: Vec<Vec<String>> = (0..spec.modules)
        .map(|_| match spec.vocabulary {
            Vocabulary::PerModule => make_words(&mut rng, spec.words_per_module, &mut taken),
            Vocabulary::Shared => shared.clone(),
        })
        .collect();

    let mut entities = Vec::new();
    let mut files: Vec<(String, usize)> = Vec::new();
    let mut functions: Vec<Function> = Vec::new();
    let mut comments: Vec<Vec<&str>> = Vec::new();
    for (m, words) in vocab.iter().enumerate() {
        for f in 0..spec.files_per_module {
            let stem = format!("{}_{}_{f}.c", pick(&mut rng, words), pick(&mut rng, words));
            let path = match spec.layout {
                FolderLayout::PerModule => format!("mod{m}/{stem}"),
                FolderLayout::Flat => format!("m{m}_{stem}"),
            };
            let file_index = files.len();
            entities.push(Entity::file(&path));
            for k in 0..spec.functions_per_file {
                let name = format!("{}_{}{k}", pick(&mut rng, words), pick(&mut rng, words));
                let id = format!("{path}::{name}");
                entities.push(Entity::new(&id, EntityKind::Function, &name, &path, Some(path.clone())));
                functions.push(Function {
                    id,
                    name,
                    module: m,
                    file: file_index,
                });
            }
            comments.push((0..spec.comment_words).map(|_| pick(&mut rng, words)).collect());
            files.push((path, m));
        }
    }

    let by_module: Vec<Vec<usize>> = (0..spec.modules)
        .map(|m| (0..functions.len()).filter(|&i| functions[i].module == m).collect())
        .collect();
    let mut edges = Vec::new();
    let mut callees: Vec<Vec<usize>> = vec![Vec::new(); functions.len()];
    for (i, f) in functions.iter().enumerate() {
        let own = &by_module[f.module];
        let mut chosen = BTreeSet::new();
        for _ in 0..spec.intra_calls {
            let &j = own.choose(&mut rng).expect("module has functions");
            if j != i {
                chosen.insert(j);
            }
        }
        if spec.modules > 1 && rng.gen_bool(spec.cross_call_probability) {
            let other = (f.module + rng.gen_range(1..spec.modules)) % spec.modules;
            chosen.insert(*by_module[other].choose(&mut rng).expect("module has functions"));
        }
        for j in chosen {
            edges.push(DependencyEdge::new(&f.id, &functions[j].id, DepType::Call, 1));
            callees[i].push(j);
        }
    }

    let mut sources = Vec::with_capacity(files.len());
    for (fi, (path, _)) in files.iter().enumerate() {
        let mut text = format!("/* {} */\n", comments[fi].join(" "));
        for (i, f) in functions.iter().enumerate().filter(|(_, f)| f.file == fi) {
            text.push_str(&format!("int {}(int x) {{\n", f.name));
            for &j in &callees[i] {
                text.push_str(&format!("    x += {}(x);\n", functions[j].name));
            }
            text.push_str("    return x;\n}\n");
        }
        sources.push((path.clone(), text));
    }

    let modules = Architecture::from_assignment(files.iter().map(|(p, m)| (p.clone(), format!("M{m}"))))
        .expect("unique paths");
    SyntheticProject {
        graph: DependencyGraph::new(entities, edges),
        sources,
        modules,
    }
}

/// Three cohesive modules in their own folders with distinct vocabularies.
pub fn three_module_project(seed: u64) -> SyntheticProject {
    generate_project(&ProjectSpec {
        seed,
        intra_calls: 4,
        cross_call_probability: 0.05,
        ..ProjectSpec::default()
    })
}

/// Every file in the root folder; each module has its own vocabulary.
pub fn libxml2_like(seed: u64) -> SyntheticProject {
    generate_project(&ProjectSpec {
        modules: 6,
        files_per_module: 8,
        layout: FolderLayout::Flat,
        vocabulary: Vocabulary::PerModule,
        seed,
        ..ProjectSpec::default()
    })
}

/// Module-aligned folders; all modules share one generic vocabulary.
pub fn bash_like(seed: u64) -> SyntheticProject {
    generate_project(&ProjectSpec {
        modules: 6,
        files_per_module: 8,
        layout: FolderLayout::PerModule,
        vocabulary: Vocabulary::Shared,
        seed,
        ..ProjectSpec::default()
    })
}

/// Roughly `files` files and `10 * files` call edges in `files / 100` modules.
pub fn scale_project(files: usize, seed: u64) -> SyntheticProject {
    generate_project(&ProjectSpec {
        modules: (files / 100).max(1),
        files_per_module: 100.min(files),
        functions_per_file: 2,
        intra_calls: 5,
        cross_call_probability: 0.1,
        words_per_module: 12,
        comment_words: 3,
        seed,
        ..ProjectSpec::default()
    })
}

/// A graph whose Call edges stay inside planted modules while Use edges join
/// uniformly random functions.
pub fn planted_call_use_graph(modules: usize, files_per_module: usize, seed: u64) -> DependencyGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entities = Vec::new();
    let mut functions: Vec<(String, usize)> = Vec::new();
    for m in 0..modules {
        for f in 0..files_per_module {
            let path = format!("m{m}/f{f}.c");
            entities.push(Entity::file(&path));
            for k in 0..2 {
                let id = format!("{path}::fn{k}");
                entities.push(Entity::new(&id, EntityKind::Function, format!("fn{k}"), &path, Some(path.clone())));
                functions.push((id, m));
            }
        }
    }
    let mut edges = Vec::new();
    for (i, (id, m)) in functions.iter().enumerate() {
        let own: Vec<usize> = (0..functions.len()).filter(|&j| functions[j].1 == *m && j != i).collect();
        for _ in 0..3 {
            let &j = own.choose(&mut rng).expect("module has other functions");
            edges.push(DependencyEdge::new(id, &functions[j].0, DepType::Call, 1));
        }
        for _ in 0..3 {
            let j = rng.gen_range(0..functions.len());
            if j != i {
                edges.push(DependencyEdge::new(id, &functions[j].0, DepType::Use, 1));
            }
        }
    }
    DependencyGraph::new(entities, edges)
}

/// A ground truth with Zipf-distributed cluster sizes and the architectures
/// obtained by merging its clusters, largest first, into one growing cluster.
///
/// Returns `(ground truth, steps)`; `steps[0]` is the ground truth and the last
/// step has a single cluster.
pub fn merge_sequence(clusters: usize, largest: usize) -> (Architecture, Vec<Architecture>) {
    let sizes: Vec<usize> = (1..=clusters).map(|i| (largest / i).max(1)).collect();
    let mut members: Vec<Vec<String>> = Vec::with_capacity(clusters);
    let mut next = 0usize;
    for &size in &sizes {
        members.push((next..next + size).map(|e| format!("f{e:04}")).collect());
        next += size;
    }
    let named = |groups: &[Vec<String>]| {
        Architecture::from_clusters(groups.iter().enumerate().map(|(i, g)| (format!("c{i:02}"), g.clone())))
            .expect("disjoint groups")
    };
    let truth = named(&members);
    let mut steps = vec![truth.clone()];
    let mut current = members;
    while current.len() > 1 {
        let absorbed = current.remove(1);
        current[0].extend(absorbed);
        steps.push(named(&current));
    }
    (truth, steps)
}

/// `per_cluster` points around each of `clusters` well separated centers on a
/// grid in the plane, with their planted labels.
pub fn separated_points(clusters: usize, per_cluster: usize, seed: u64) -> (Vec<[f64; 2]>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = (clusters as f64).sqrt().ceil() as usize;
    let mut points = Vec::with_capacity(clusters * per_cluster);
    let mut labels = Vec::with_capacity(clusters * per_cluster);
    for c in 0..clusters {
        let center = [(c % side) as f64 * 10.0, (c / side) as f64 * 10.0];
        for _ in 0..per_cluster {
            points.push([center[0] + rng.gen_range(-1.0..1.0), center[1] + rng.gen_range(-1.0..1.0)]);
            labels.push(c);
        }
    }
    (points, labels)
}

fn dist2(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Lloyd's k-means with k-means++ seeding; the best of `restarts` runs by inertia.
pub fn kmeans(points: &[[f64; 2]], k: usize, restarts: usize, seed: u64) -> Vec<usize> {
    assert!(k >= 1 && k <= points.len(), "k must lie in 1..=points");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..restarts.max(1) {
        let mut centers = vec![points[rng.gen_range(0..points.len())]];
        while centers.len() < k {
            let d: Vec<f64> = points
                .iter()
                .map(|p| centers.iter().map(|c| dist2(p, c)).fold(f64::INFINITY, f64::min))
                .collect();
            let total: f64 = d.iter().sum();
            let next = if total > 0.0 {
                let mut u = rng.gen::<f64>() * total;
                d.iter()
                    .position(|&x| {
                        u -= x;
                        u < 0.0
                    })
                    .unwrap_or(points.len() - 1)
            } else {
                rng.gen_range(0..points.len())
            };
            centers.push(points[next]);
        }
        let mut labels = vec![0usize; points.len()];
        for _ in 0..100 {
            let mut changed = false;
            for (p, l) in points.iter().zip(labels.iter_mut()) {
                let nearest = (0..k)
                    .min_by(|&a, &b| dist2(p, &centers[a]).total_cmp(&dist2(p, &centers[b])))
                    .expect("k >= 1");
                if nearest != *l {
                    *l = nearest;
                    changed = true;
                }
            }
            let mut sums = vec![[0.0f64; 3]; k];
            for (p, &l) in points.iter().zip(&labels) {
                sums[l][0] += p[0];
                sums[l][1] += p[1];
                sums[l][2] += 1.0;
            }
            for (c, s) in centers.iter_mut().zip(&sums) {
                if s[2] > 0.0 {
                    *c = [s[0] / s[2], s[1] / s[2]];
                }
            }
            if !changed {
                break;
            }
        }
        let inertia: f64 = points.iter().zip(&labels).map(|(p, &l)| dist2(p, &centers[l])).sum();
        if best.as_ref().is_none_or(|(b, _)| inertia < *b) {
            best = Some((inertia, labels));
        }
    }
    best.expect("at least one run").1
}

/// Architecture over points named `p0000`, `p0001`, ... from per-point labels.
pub fn labels_to_architecture(labels: &[usize]) -> Architecture {
    Architecture::from_assignment(labels.iter().enumerate().map(|(i, l)| (format!("p{i:04}"), format!("k{l}"))))
        .expect("unique point names")
}
