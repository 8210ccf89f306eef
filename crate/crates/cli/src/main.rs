//! `archrecover`: recover module architectures from dependency graphs, source
//! text, and folder layout, and score them against ground truths.

use std::path::PathBuf;
use std::process::ExitCode;

use archrecovery::config::{RunConfig, CONFIG_KEYS};
use archrecovery::depgraph::OptimizerOptions;
use archrecovery::metrics::DEFAULT_C2C_THRESHOLD;
use archrecovery::{io, pipeline, Error, Result};
use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};

fn config_args() -> Vec<Arg> {
    let mut args = vec![
        Arg::new("config")
            .long("config")
            .value_name("FILE")
            .value_parser(value_parser!(PathBuf))
            .help("key = value configuration file; flags override it"),
        Arg::new("no-text")
            .long("no-text")
            .action(ArgAction::SetTrue)
            .help("same as --fusion.use_text false"),
        Arg::new("no-folder")
            .long("no-folder")
            .action(ArgAction::SetTrue)
            .help("same as --fusion.use_folder false"),
    ];
    for (key, help) in CONFIG_KEYS {
        args.push(Arg::new(*key).long(*key).value_name("VALUE").help(*help));
    }
    args
}

fn cli() -> Command {
    Command::new("archrecover")
        .about("Architecture recovery from dependencies, text, and folders")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("verbose")
                .short('v')
                .long("verbose")
                .global(true)
                .action(ArgAction::Count)
                .help("log progress (-v) or details (-vv) to stderr"),
        )
        .subcommand(
            Command::new("recover")
                .about("Recover an architecture and write it with a provenance report")
                .args(config_args()),
        )
        .subcommand(
            Command::new("sweep")
                .about("Cluster count per resolution, as CSV")
                .args(config_args())
                .arg(
                    Arg::new("gammas")
                        .long("gammas")
                        .required(true)
                        .value_delimiter(',')
                        .value_parser(value_parser!(f64))
                        .help("comma-separated resolutions"),
                ),
        )
        .subcommand(
            Command::new("evaluate")
                .about("Score a recovered architecture against a ground truth")
                .arg(Arg::new("recovered").required(true).value_parser(value_parser!(PathBuf)))
                .arg(Arg::new("ground_truth").required(true).value_parser(value_parser!(PathBuf)))
                .arg(
                    Arg::new("threshold")
                        .long("threshold")
                        .value_parser(value_parser!(f64))
                        .help("c2c_cvg overlap threshold [default: 0.66]"),
                )
                .arg(Arg::new("project").long("project").default_value("project"))
                .arg(
                    Arg::new("metrics")
                        .long("metrics")
                        .value_delimiter(',')
                        .help("comma-separated subset of mojofm,a2a,c2c_cvg,ari,a2a_adj"),
                )
                .arg(
                    Arg::new("format")
                        .long("format")
                        .value_parser(["table", "csv"])
                        .default_value("table"),
                ),
        )
        .subcommand(
            Command::new("optimize-weights")
                .about("Search dependency type weights over a corpus of dependency graphs")
                .arg(
                    Arg::new("manifest")
                        .long("manifest")
                        .value_parser(value_parser!(PathBuf))
                        .help("file listing one dependency JSON per line"),
                )
                .arg(
                    Arg::new("output")
                        .long("output")
                        .required(true)
                        .value_parser(value_parser!(PathBuf)),
                )
                .arg(Arg::new("budget").long("budget").value_parser(value_parser!(usize)))
                .arg(Arg::new("seed").long("seed").value_parser(value_parser!(u64)))
                .arg(Arg::new("patience").long("patience").value_parser(value_parser!(usize)))
                .arg(Arg::new("gamma").long("gamma").value_parser(value_parser!(f64))),
        )
}

fn run_config(m: &ArgMatches) -> Result<RunConfig> {
    let mut config = match m.get_one::<PathBuf>("config") {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    for (key, _) in CONFIG_KEYS {
        if let Some(value) = m.get_one::<String>(key) {
            config.set(key, value)?;
        }
    }
    if m.get_flag("no-text") {
        config.use_text = false;
    }
    if m.get_flag("no-folder") {
        config.use_folder = false;
    }
    Ok(config)
}

fn recover(m: &ArgMatches) -> Result<()> {
    let config = run_config(m)?;
    let dir = config
        .output
        .clone()
        .ok_or_else(|| Error::Config("no output directory given (`--output`)".into()))?;
    let prepared = pipeline::prepare(&config)?;
    for (path, reason) in &prepared.skipped.entries {
        eprintln!("SKIP {path}: {reason}");
    }
    let recovery = pipeline::recover_at(&prepared, &config, config.resolution)?;
    pipeline::write_outputs(&dir, &prepared, &recovery, &config)?;
    println!(
        "{} clusters over {} files, modularity {}, w_text {:.4}, w_folder {:.4}",
        recovery.architecture.cluster_count(),
        prepared.file_graph.node_count(),
        recovery.modularity.map_or("n/a".into(), |q| format!("{q:.4}")),
        recovery.weights.w_text,
        recovery.weights.w_folder,
    );
    println!("wrote {}", dir.join(pipeline::RSF_FILE).display());
    Ok(())
}

fn sweep(m: &ArgMatches) -> Result<()> {
    let config = run_config(m)?;
    let gammas: Vec<f64> = m.get_many::<f64>("gammas").into_iter().flatten().copied().collect();
    let csv = pipeline::sweep_csv(&pipeline::cmd_sweep(&config, &gammas)?);
    if let Some(dir) = &config.output {
        io::write_text(dir.join("sweep.csv"), &csv)?;
    }
    print!("{csv}");
    Ok(())
}

fn evaluate(m: &ArgMatches) -> Result<()> {
    let recovered = m.get_one::<PathBuf>("recovered").expect("required");
    let truth = m.get_one::<PathBuf>("ground_truth").expect("required");
    let th = m.get_one::<f64>("threshold").copied().unwrap_or(DEFAULT_C2C_THRESHOLD);
    let metrics: Vec<String> = m.get_many::<String>("metrics").into_iter().flatten().cloned().collect();
    let scores = pipeline::cmd_evaluate(recovered, truth, th, &metrics)?;
    let project = m.get_one::<String>("project").expect("defaulted");
    if m.get_one::<String>("format").map(String::as_str) == Some("csv") {
        let names: Vec<&str> = scores.iter().map(|(n, _)| n.as_str()).collect();
        let values: Vec<String> = scores.iter().map(|(_, v)| format!("{v:.4}")).collect();
        println!("project,{}", names.join(","));
        println!("{project},{}", values.join(","));
    } else {
        println!("{:<16}{:>10}", "metric", "score");
        for (name, v) in &scores {
            let label = if name == "c2c_cvg" { format!("c2c_cvg@{th}") } else { name.clone() };
            println!("{label:<16}{v:>10.2}");
        }
    }
    Ok(())
}

fn optimize(m: &ArgMatches) -> Result<()> {
    let mut opts = OptimizerOptions::default();
    if let Some(&b) = m.get_one::<usize>("budget") {
        opts.budget = b;
    }
    if let Some(&s) = m.get_one::<u64>("seed") {
        opts.seed = s;
    }
    if let Some(&p) = m.get_one::<usize>("patience") {
        opts.patience = p;
    }
    if let Some(&g) = m.get_one::<f64>("gamma") {
        opts.gamma = g;
    }
    let output = m.get_one::<PathBuf>("output").expect("required");
    let manifest = m.get_one::<PathBuf>("manifest").map(PathBuf::as_path);
    match pipeline::cmd_optimize_weights(manifest, opts, output)? {
        Some(r) => println!(
            "best modularity {:.6} after {} evaluations{}; wrote {}",
            r.quality,
            r.evaluations,
            if r.converged { " (converged)" } else { "" },
            output.display()
        ),
        None => println!("wrote default weights to {}", output.display()),
    }
    Ok(())
}

fn init_logging(verbosity: u8) {
    let level = match verbosity {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
}

fn dispatch(m: &ArgMatches) -> Result<()> {
    match m.subcommand() {
        Some(("recover", sub)) => recover(sub),
        Some(("sweep", sub)) => sweep(sub),
        Some(("evaluate", sub)) => evaluate(sub),
        Some(("optimize-weights", sub)) => optimize(sub),
        _ => unreachable!("subcommand required"),
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_input_error() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    init_logging(matches.get_count("verbose"));
    match dispatch(&matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
