//! Acceptance criteria, one PASS/FAIL line each.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use archrecovery::cluster::{greedy_modularity, modularity};
use archrecovery::config::RunConfig;
use archrecovery::depgraph::{inverse_pagerank, optimize_type_weights, weighted_file_graph, FileGraph, IprOptions, OptimizerOptions};
use archrecovery::fusion::recover_dep_only;
use archrecovery::io::write_rsf;
use archrecovery::metrics::{mojo_distance, oracle_moves, oracle_mojo, transfer_distance, MetricRegistry};
use archrecovery::model::{Architecture, DepType, DependencyEdge, DependencyGraph, Entity, EntityKind, TypeWeights};
use archrecovery::pipeline::{cmd_recover, prepare, recover_at, RSF_FILE};
use archrecovery::synth::{self, SyntheticProject};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn scores(rec: &Architecture, truth: &Architecture, th: f64) -> BTreeMap<String, f64> {
    MetricRegistry::standard(th)
        .evaluate(&[], rec, truth)
        .expect("metrics defined")
        .into_iter()
        .collect()
}

/// Every partition of `e0..e{n-1}` from restricted growth strings.
fn partitions(n: usize) -> Vec<Architecture> {
    fn grow(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for l in 0..=next {
            prefix.push(l);
            grow(prefix, n, out);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    grow(&mut Vec::new(), n, &mut all);
    all.into_iter()
        .map(|ls| {
            Architecture::from_assignment(ls.iter().enumerate().map(|(e, l)| (format!("e{e}"), format!("c{l}")))).unwrap()
        })
        .collect()
}

fn random_architecture(rng: &mut ChaCha8Rng) -> Architecture {
    let n = rng.gen_range(2..80);
    let k = rng.gen_range(1..=n);
    Architecture::from_assignment((0..n).map(|i| (format!("f{i}"), format!("c{}", rng.gen_range(0..k))))).unwrap()
}

fn metric_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..50 {
        let a = random_architecture(&mut rng);
        for (name, v) in scores(&a, &a, 0.66) {
            ensure(v == 100.0, format!("case {case}: {name} = {v}"))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("50 self-comparisons in {:.2?}", start.elapsed()))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for n in 1..=5 {
        let all = partitions(n);
        for a in &all {
            for b in &all {
                let (fast, slow) = (mojo_distance(a, b).unwrap(), oracle_mojo(a, b).unwrap());
                ensure(fast == slow, format!("mojo {fast} vs oracle {slow} on {a:?} / {b:?}"))?;
                let (fast, slow) = (transfer_distance(a, b), oracle_moves(a, b).unwrap());
                ensure(fast == slow, format!("mto_m {fast} vs oracle {slow} on {a:?} / {b:?}"))?;
                pairs += 1;
            }
        }
        if n == 5 {
            ensure(all.len() * all.len() == 2704, "52 partitions of 5 elements")?;
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{pairs} pairs (2704 at n=5), no mismatch, {:.2?}", start.elapsed()))
}

fn nine_clusters() -> Outcome {
    let (points, labels) = synth::separated_points(9, 40, 11);
    let truth = synth::labels_to_architecture(&labels);
    let mut at30 = BTreeMap::new();
    for k in 1..=30 {
        let rec = synth::labels_to_architecture(&synth::kmeans(&points, k, 10, 5));
        let s = scores(&rec, &truth, 0.66);
        if k == 9 {
            for (name, v) in &s {
                ensure(*v == 100.0, format!("k=9: {name} = {v}"))?;
            }
        }
        if k == 30 {
            at30 = s;
        }
    }
    let (mojofm, ari, adj) = (at30["mojofm"], at30["ari"], at30["a2a_adj"]);
    ensure(mojofm > 90.0, format!("MoJoFM at k=30 is {mojofm:.2}"))?;
    ensure(mojofm - ari >= 20.0, format!("ARI {ari:.2} not 20 below MoJoFM {mojofm:.2}"))?;
    ensure(mojofm - adj >= 20.0, format!("a2a_adj {adj:.2} not 20 below MoJoFM {mojofm:.2}"))?;
    Ok(format!("k=30: MoJoFM {mojofm:.2}, ARI {ari:.2}, a2a_adj {adj:.2}"))
}

fn merge_experiment() -> Outcome {
    let (truth, steps) = synth::merge_sequence(67, 60);
    let series: Vec<BTreeMap<String, f64>> = steps.iter().map(|s| scores(s, &truth, 0.1)).collect();
    for (i, w) in series.windows(2).enumerate() {
        for name in ["ari", "a2a_adj"] {
            ensure(
                w[1][name] <= w[0][name],
                format!("{name} rises at step {}: {} -> {}", i + 1, w[0][name], w[1][name]),
            )?;
        }
    }
    for (i, s) in series.iter().enumerate() {
        ensure(s["c2c_cvg"] == 100.0, format!("c2c_cvg@0.1 = {} at step {i}", s["c2c_cvg"]))?;
    }
    let drop = |name: &str| series[0][name] - series[series.len() - 1][name];
    let (d_a2a, d_adj) = (drop("a2a"), drop("a2a_adj"));
    ensure(d_a2a < d_adj, format!("a2a drop {d_a2a:.2} >= a2a_adj drop {d_adj:.2}"))?;
    Ok(format!("{} steps; drops: a2a {d_a2a:.2}, a2a_adj {d_adj:.2}", steps.len() - 1))
}

fn function_graph(n: usize, edges: &[(usize, usize)]) -> DependencyGraph {
    let name = |i: usize| format!("n{i:02}");
    DependencyGraph::new(
        (0..n).map(|i| Entity::new(name(i), EntityKind::Function, name(i), "f.c", None)).collect(),
        edges.iter().map(|&(a, b)| DependencyEdge::new(name(a), name(b), DepType::Call, 1)).collect(),
    )
}

/// Plain PageRank with no dangling redistribution, by solving `(I - d M) x = (1 - d) / N`.
fn pagerank_oracle(n: usize, edges: &BTreeSet<(usize, usize)>, d: f64) -> Vec<f64> {
    let mut out_degree = vec![0usize; n];
    for &(a, _) in edges {
        out_degree[a] += 1;
    }
    let mut m = vec![vec![0.0; n + 1]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
        row[n] = (1.0 - d) / n as f64;
    }
    for &(a, b) in edges {
        m[b][a] -= d / out_degree[a] as f64;
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs())).unwrap();
        m.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= f * p;
                }
            }
        }
    }
    (0..n).map(|i| m[i][n] / m[i][i]).collect()
}

fn ipr_checks() -> Outcome {
    let opts = IprOptions::default();
    let d = opts.damping;
    let g = function_graph(4, &[(0, 1), (1, 2)]);
    let s = inverse_pagerank(&g, opts).unwrap();
    ensure(s["n03"] == (1.0 - d) / 4.0, format!("isolated node scored {}", s["n03"]))?;

    let g = function_graph(2, &[(0, 1)]);
    let s = inverse_pagerank(&g, opts).unwrap();
    ensure((s["n00"] - 0.13875).abs() < 1e-9, format!("caller scored {}", s["n00"]))?;
    ensure((s["n01"] - 0.075).abs() < 1e-9, format!("callee scored {}", s["n01"]))?;

    let mut worst = 0.0f64;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(5..40);
        let p = rng.gen_range(0.05..0.3);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b)
            .filter(|_| rng.gen_bool(p))
            .collect();
        let ranked = inverse_pagerank(&function_graph(n, &edges), opts).unwrap();
        let reversed: BTreeSet<(usize, usize)> = edges.iter().map(|&(a, b)| (b, a)).collect();
        let oracle = pagerank_oracle(n, &reversed, d);
        for (i, o) in oracle.iter().enumerate() {
            worst = worst.max((ranked[&format!("n{i:02}")] - o).abs());
        }
    }
    ensure(worst < 1e-8, format!("duality gap {worst:e}"))?;
    Ok(format!("fixtures exact; duality gap {worst:.1e} over 20 digraphs"))
}

fn modularity_triangles() -> Outcome {
    let mut g = FileGraph::new(["a", "b", "c", "d", "e", "f"]);
    for (x, y) in [("a", "b"), ("b", "c"), ("c", "a"), ("d", "e"), ("e", "f"), ("f", "d")] {
        g.add_weight_by_id(x, y, 1.0).unwrap();
    }
    let arch = greedy_modularity(&g, 1.0).unwrap();
    let groups: BTreeSet<BTreeSet<String>> = arch.groups().cloned().collect();
    let expected: BTreeSet<BTreeSet<String>> = [["a", "b", "c"], ["d", "e", "f"]]
        .iter()
        .map(|t| t.iter().map(|s| s.to_string()).collect())
        .collect();
    ensure(groups == expected, format!("clusters {groups:?}"))?;
    let q = modularity(&g, &arch, 1.0).unwrap();
    ensure((q - 0.5).abs() <= 1e-12, format!("Q = {q}"))?;
    Ok(format!("two triangles, Q = {q}"))
}

fn config_for(project: &SyntheticProject, dir: &Path) -> RunConfig {
    let (deps, src) = project.write_to(dir).unwrap();
    let mut config = RunConfig::default();
    config.deps = Some(deps);
    config.source = Some(src);
    config.output = Some(dir.join("out"));
    config
}

fn ablation_identity(work: &Path) -> Outcome {
    let project = synth::three_module_project(1);
    let mut config = config_for(&project, &work.join("ablation"));
    config.use_text = false;
    config.use_folder = false;
    cmd_recover(&config).map_err(|e| e.to_string())?;
    let written = fs::read(config.output.as_ref().unwrap().join(RSF_FILE)).unwrap();
    let fg = weighted_file_graph(&project.graph, &TypeWeights::defaults(), true).unwrap();
    let dep_only = write_rsf(&recover_dep_only(&fg, config.resolution).unwrap());
    ensure(written == dep_only.as_bytes(), "RSF differs from dependency-only recovery")?;
    Ok(format!("{} bytes identical", written.len()))
}

fn fusion_direction(work: &Path) -> Outcome {
    let mut report = Vec::new();
    for (name, project, text_wins) in [
        ("libxml2-like", synth::libxml2_like(3), true),
        ("bash-like", synth::bash_like(3), false),
    ] {
        let config = config_for(&project, &work.join(name));
        let prepared = prepare(&config).map_err(|e| e.to_string())?;
        let w = recover_at(&prepared, &config, config.resolution).map_err(|e| e.to_string())?.weights;
        let ok = if text_wins { w.w_text > w.w_folder } else { w.w_folder > w.w_text };
        ensure(ok, format!("{name}: w_text {:.4}, w_folder {:.4}", w.w_text, w.w_folder))?;
        report.push(format!("{name} w_text {:.3} w_folder {:.3}", w.w_text, w.w_folder));
    }
    Ok(report.join("; "))
}

fn optimizer_direction() -> Outcome {
    let start = Instant::now();
    let corpus: Vec<DependencyGraph> = (0..3).map(|s| synth::planted_call_use_graph(4, 6, 100 + s)).collect();
    let mut report = Vec::new();
    for seed in 1..=5 {
        let opts = OptimizerOptions {
            seed,
            ..OptimizerOptions::default()
        };
        let r = optimize_type_weights(&corpus, opts).map_err(|e| e.to_string())?;
        let (call, used) = (r.weights.get(DepType::Call), r.weights.get(DepType::Use));
        ensure(call > used, format!("seed {seed}: Call {call:.3} <= Use {used:.3}"))?;
        ensure(r.converged || r.evaluations == opts.budget, format!("seed {seed}: stopped early without converging"))?;
        report.push(format!("{call:.2}/{used:.2} in {}", r.evaluations));
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("Call/Use per seed: {} ({:.1?})", report.join(", "), start.elapsed()))
}

fn files_under(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn determinism(work: &Path) -> Outcome {
    let project = synth::libxml2_like(9);
    let mut outputs = Vec::new();
    let mut weights = Vec::new();
    let mut config = config_for(&project, &work.join("determinism"));
    for run in ["first", "second"] {
        config.output = Some(work.join("determinism").join(run));
        weights.push(cmd_recover(&config).map_err(|e| e.to_string())?.weights);
        outputs.push(files_under(config.output.as_ref().unwrap()));
    }
    ensure(weights[0] == weights[1], "fusion weights differ")?;
    ensure(outputs[0].len() >= 5, format!("only {} output files", outputs[0].len()))?;
    let differing: Vec<String> = outputs[0]
        .iter()
        .filter(|(p, bytes)| outputs[1].get(*p) != Some(*bytes))
        .map(|(p, _)| p.display().to_string())
        .collect();
    ensure(
        differing.is_empty() && outputs[0].len() == outputs[1].len(),
        format!("output files differ: {differing:?}"),
    )?;
    Ok(format!(
        "{} files byte-identical; w_text {:.4}, w_folder {:.4}",
        outputs[0].len(),
        weights[0].w_text,
        weights[0].w_folder
    ))
}

fn scale(work: &Path) -> Outcome {
    let project = synth::scale_project(10_000, 1);
    let files = project.sources.len();
    let edges = project.graph.edges.len();
    ensure(files == 10_000 && edges >= 100_000, format!("{files} files, {edges} edges"))?;
    let config = config_for(&project, &work.join("scale"));
    let start = Instant::now();
    let r = cmd_recover(&config).map_err(|e| e.to_string())?;
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!(
        "{files} files, {edges} edges, {} clusters in {:.1?}",
        r.architecture.cluster_count(),
        start.elapsed()
    ))
}

#[test]
fn acceptance_criteria() {
    let work = tempfile::tempdir().unwrap();
    let w = work.path();
    let criteria: Vec<Criterion<'_>> = vec![
        ("metric identity", Box::new(metric_identity)),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("nine-cluster experiment", Box::new(nine_clusters)),
        ("merge experiment", Box::new(merge_experiment)),
        ("inverse PageRank", Box::new(ipr_checks)),
        ("modularity fixture", Box::new(modularity_triangles)),
        ("ablation identity", Box::new(|| ablation_identity(w))),
        ("fusion-weight direction", Box::new(|| fusion_direction(w))),
        ("type-weight optimizer", Box::new(optimizer_direction)),
        ("end-to-end determinism", Box::new(|| determinism(w))),
        ("scale smoke test", Box::new(|| scale(w))),
    ];
    let mut failed = Vec::new();
    println!();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
