use std::fs;

use archrecovery::config::RunConfig;
use archrecovery::pipeline::{cmd_sweep, prepare, recover_at, CACHE_DIR};
use archrecovery::synth;
use archrecovery::Error;

fn fixture(dir: &std::path::Path) -> RunConfig {
    let (deps, src) = synth::three_module_project(4).write_to(dir).unwrap();
    let mut config = RunConfig::default();
    config.deps = Some(deps);
    config.source = Some(src);
    config.output = Some(dir.join("out"));
    config.lda.iterations = 200;
    config
}

#[test]
fn embeddings_cache_is_reused_and_invalidated() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = fixture(dir.path());
    let first = prepare(&config).unwrap();
    let cache = config.output.as_ref().unwrap().join(CACHE_DIR).join("embeddings.json");
    let stamp = fs::read(&cache).unwrap();
    let again = prepare(&config).unwrap();
    assert_eq!(first.embeddings, again.embeddings);
    assert_eq!(fs::read(&cache).unwrap(), stamp);

    config.seed = 7;
    prepare(&config).unwrap();
    assert_ne!(fs::read(&cache).unwrap(), stamp, "seed change retrains");

    config.lda.topics = 5;
    let retrained = prepare(&config).unwrap();
    assert_eq!(retrained.embeddings[0].distribution.len(), 5);
    assert_ne!(fs::read(&cache).unwrap(), stamp);
}

#[test]
fn sweep_matches_individual_recoveries() {
    let dir = tempfile::tempdir().unwrap();
    let config = fixture(dir.path());
    let prepared = prepare(&config).unwrap();
    let rows = cmd_sweep(&config, &[0.5, 1.7, 3.0]).unwrap();
    for (gamma, count) in rows {
        assert_eq!(recover_at(&prepared, &config, gamma).unwrap().architecture.cluster_count(), count);
    }
    assert!(matches!(cmd_sweep(&config, &[]), Err(e) if e.is_input_error()));
}

#[test]
fn errors_name_their_stage() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = fixture(dir.path());
    config.deps = Some(dir.path().join("absent.json"));
    let err = prepare(&config).err().unwrap();
    assert!(matches!(err, Error::Stage { stage: "ingest", .. }));
    assert!(err.is_input_error());
    assert!(err.to_string().starts_with("ingest: "));
}
