//! Command implementations behind the `mwng` subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};

use mwng_core::analysis;
use mwng_core::engine::{EngineError, Mode};
use mwng_core::lexicon;
use mwng_core::net::{self, NetError, NetSpec};

use crate::config::{Emit, ExperimentFile, NetworkCfg, PlannedRun, SweepFile};
use crate::formats::{self, Summary, TallyJson, TallyRow};
use crate::{batch, config_err, runtime_err, CmdResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "MWNG_OUT";

/// Resolves the output directory: command-line flag, then the config file's
/// `output_dir`, then `$MWNG_OUT`, then the working directory.
fn resolve_out_dir(flag: Option<&Path>, from_config: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Some(dir) = from_config {
        return dir.to_path_buf();
    }
    if let Some(dir) = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(dir);
    }
    PathBuf::from(".")
}

/// Sorts a failed run into the exit-code taxonomy: parameter mistakes are
/// the user's (usage), everything else is the runtime's.
fn engine_failure(e: anyhow::Error) -> crate::CliError {
    let usage = matches!(
        e.downcast_ref::<EngineError>(),
        Some(EngineError::Net(NetError::InvalidParameter(_)) | EngineError::InvalidConfig(_))
    );
    if usage {
        config_err(e)
    } else {
        runtime_err(e)
    }
}

/// `gen-net`: generate one network and write it as an edge list.
pub fn gen_net(network: &NetworkCfg, seed: u64, out: &Path) -> CmdResult {
    let topology = network.topology().map_err(config_err)?;
    let spec = NetSpec { topology, seed };
    let net = net::generate(&spec).map_err(|e| match e {
        NetError::InvalidParameter(_) => config_err(anyhow!("{e}")),
        _ => runtime_err(anyhow!("{e}")),
    })?;
    let stats = net::graph_stats(&net).map_err(|e| runtime_err(anyhow!("{e}")))?;
    formats::write_atomic(out, formats::render_edge_list(&net).as_bytes()).map_err(runtime_err)?;
    println!(
        "{} nodes={} edges={} avg_degree={:.4} avg_path_length={:.4} avg_clustering={:.4}",
        spec.topology,
        net.node_count(),
        net.edge_count(),
        stats.avg_degree,
        stats.avg_path_length,
        stats.avg_clustering,
    );
    Ok(())
}

fn read_config(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// The (set name, pattern labels) identity a block's runs will report.
fn block_set_identity(planned: &[PlannedRun]) -> Vec<(String, Vec<String>)> {
    let mut seen = Vec::new();
    for run in planned {
        if run.sim == seen.len() {
            let (name, labels) = match run.config.mode {
                Mode::SingleWord => {
                    let set = lexicon::single_word();
                    (
                        set.name().to_string(),
                        set.patterns().iter().map(|p| p.label.clone()).collect(),
                    )
                }
                Mode::MultiWord => {
                    let set = run.config.pattern_set.as_ref().expect("validated");
                    (
                        set.name().to_string(),
                        set.patterns().iter().map(|p| p.label.clone()).collect(),
                    )
                }
            };
            seen.push((name, labels));
        }
    }
    seen
}

/// `run`: execute an experiment file and write the requested artifacts.
pub fn run(config_path: &Path, out_flag: Option<&Path>, jobs: usize) -> CmdResult {
    let text = read_config(config_path).map_err(config_err)?;
    let file = ExperimentFile::parse(&text)
        .with_context(|| format!("in {}", config_path.display()))
        .map_err(config_err)?;
    let planned = file.plan().map_err(config_err)?;

    // Cross-run artifacts need every block on one pattern set; reject the
    // mismatch before spending compute on the runs.
    let wants_pooling = file.emit.contains(&Emit::Summary) || file.emit.contains(&Emit::Tally);
    if wants_pooling {
        let identities = block_set_identity(&planned);
        if identities.windows(2).any(|w| w[0] != w[1]) {
            return Err(config_err(anyhow!(
                "summary/tally pool runs across blocks, but the blocks use \
                 different pattern sets; split them into separate experiments"
            )));
        }
    }

    let out_dir = resolve_out_dir(out_flag, file.output_dir.as_deref());
    fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))
        .map_err(runtime_err)?;

    let configs: Vec<_> = planned.iter().map(|p| p.config.clone()).collect();
    let results = batch::run_all(&configs, jobs).map_err(engine_failure)?;

    let mut written = Vec::new();
    if file.emit.contains(&Emit::Timeseries) {
        for (plan, result) in planned.iter().zip(&results) {
            let path = out_dir.join(format!("run_{}.csv", plan.index));
            formats::write_atomic(&path, result.series.to_csv().as_bytes())
                .map_err(runtime_err)?;
        }
        written.push(format!("{} timeseries CSVs", results.len()));
    }
    if file.emit.contains(&Emit::Summary) {
        let doc = formats::summary(&planned, &results).map_err(runtime_err)?;
        let path = out_dir.join("summary.json");
        formats::write_atomic(&path, &formats::to_json_bytes(&doc).map_err(runtime_err)?)
            .map_err(runtime_err)?;
        written.push("summary.json".into());
    }
    if file.emit.contains(&Emit::Tally) {
        let tally = analysis::tally(&results).map_err(|e| runtime_err(anyhow!("{e}")))?;
        let doc = TallyJson::from(&tally);
        let path = out_dir.join("tally.json");
        formats::write_atomic(&path, &formats::to_json_bytes(&doc).map_err(runtime_err)?)
            .map_err(runtime_err)?;
        written.push("tally.json".into());
    }

    let converged = results.iter().filter(|r| r.converged).count();
    println!(
        "{} runs ({converged} converged) -> {} [{}]",
        results.len(),
        out_dir.display(),
        written.join(", "),
    );
    Ok(())
}

/// `sweep`: run a density sweep over random graphs and write its CSV.
pub fn sweep(config_path: &Path, out_flag: Option<&Path>, jobs: usize) -> CmdResult {
    let text = read_config(config_path).map_err(config_err)?;
    let file = SweepFile::parse(&text)
        .with_context(|| format!("in {}", config_path.display()))
        .map_err(config_err)?;
    let grid = file.grid().map_err(config_err)?;
    let base = file.base().map_err(config_err)?;
    let configs = analysis::sweep_configs(&grid, file.n, file.runs_per_point, &base)
        .map_err(|e| config_err(anyhow!("{e}")))?;

    let results = batch::run_all(&configs, jobs).map_err(engine_failure)?;
    let points = analysis::aggregate_sweep(&grid, file.runs_per_point, &results)
        .map_err(|e| runtime_err(anyhow!("{e}")))?;

    let path = match out_flag {
        Some(p) => p.to_path_buf(),
        None => {
            let out_dir = resolve_out_dir(None, file.output_dir.as_deref());
            out_dir.join(file.output.as_deref().unwrap_or(Path::new("sweep.csv")))
        }
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))
            .map_err(runtime_err)?;
    }
    formats::write_atomic(&path, formats::render_sweep_csv(&points).as_bytes())
        .map_err(runtime_err)?;
    println!("{} grid points x 4 metrics -> {}", points.len(), path.display());
    Ok(())
}

/// `tally`: pool converged-pattern counts from one or more `summary.json`
/// files and emit a tally document.
pub fn tally(inputs: &[PathBuf], out: Option<&Path>) -> CmdResult {
    if inputs.is_empty() {
        return Err(config_err(anyhow!("tally needs at least one summary.json")));
    }
    let mut summaries = Vec::with_capacity(inputs.len());
    for path in inputs {
        let bytes = fs::read(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(runtime_err)?;
        let doc: Summary = serde_json::from_slice(&bytes)
            .with_context(|| format!("parsing {}", path.display()))
            .map_err(config_err)?;
        summaries.push((path, doc));
    }
    let doc = pool_summaries(&summaries).map_err(config_err)?;
    let bytes = formats::to_json_bytes(&doc).map_err(runtime_err)?;
    match out {
        Some(path) => {
            formats::write_atomic(path, &bytes).map_err(runtime_err)?;
            println!(
                "{} trials ({} converged) -> {}",
                doc.total_trials,
                doc.converged_trials,
                path.display()
            );
        }
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    Ok(())
}

fn pool_summaries(summaries: &[(&PathBuf, Summary)]) -> Result<TallyJson> {
    let (_, first) = &summaries[0];
    let mut counts = vec![0u64; first.pattern_labels.len()];
    let mut converged = 0u64;
    let mut total = 0u64;
    for (path, doc) in summaries {
        if doc.pattern_set != first.pattern_set || doc.pattern_labels != first.pattern_labels {
            bail!(
                "{} tallies pattern set {:?} but {} uses {:?}",
                summaries[0].0.display(),
                first.pattern_set,
                path.display(),
                doc.pattern_set
            );
        }
        for run in &doc.runs {
            total += 1;
            let Some(label) = &run.converged_pattern else {
                continue;
            };
            let i = doc
                .pattern_labels
                .iter()
                .position(|l| l == label)
                .with_context(|| {
                    format!("{}: run {} won unknown pattern {label:?}", path.display(), run.index)
                })?;
            counts[i] += 1;
            converged += 1;
        }
    }
    let patterns = first
        .pattern_labels
        .iter()
        .zip(&counts)
        .map(|(label, &count)| TallyRow {
            label: label.clone(),
            count,
            proportion: if converged == 0 { 0.0 } else { count as f64 / converged as f64 },
        })
        .collect();
    Ok(TallyJson {
        pattern_set: first.pattern_set.clone(),
        patterns,
        converged_trials: converged,
        non_converged_trials: total - converged,
        total_trials: total,
    })
}
