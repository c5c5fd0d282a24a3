//! On-disk artifact formats: atomic file writes, network edge lists, run
//! summaries, pattern tallies, sweep CSVs, and agent-memory snapshots.
//!
//! Every writer here is deterministic: struct fields serialize in a fixed
//! order, maps are sorted, and floats render in their shortest round-trip
//! form, so re-running a command with the same inputs reproduces its
//! outputs byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use mwng_core::agent::AgentMemory;
use mwng_core::analysis::{self, BoxStats, PatternTally, SweepPoint};
use mwng_core::engine::RunResult;
use mwng_core::lexicon::PatternSet;
use mwng_core::net::Network;

use crate::config::PlannedRun;

/// Writes a file atomically: the bytes land in a temp file in the target's
/// directory, then a rename publishes them. Readers never observe a
/// half-written artifact, and a crashed run leaves the previous version
/// intact.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let name = path
        .file_name()
        .with_context(|| format!("{} has no file name", path.display()))?;
    let mut tmp_name = name.to_os_string();
    tmp_name.push(format!(".tmp{}", process::id()));
    let tmp = match dir {
        Some(d) => d.join(&tmp_name),
        None => tmp_name.clone().into(),
    };
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| {
        let _ = fs::remove_file(&tmp);
        format!("publishing {}", path.display())
    })
}

// ---------------------------------------------------------------------------
// Edge lists
// ---------------------------------------------------------------------------

/// Renders a network as an edge list: a `# nodes=N` header, then one `u v`
/// line per edge in generation order.
pub fn render_edge_list(net: &Network) -> String {
    let mut out = format!("# nodes={}\n", net.node_count());
    for &(u, v) in net.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses the edge-list format back into a network (round-trip counterpart
/// of [`render_edge_list`]).
pub fn parse_edge_list(text: &str) -> Result<Network> {
    let mut lines = text.lines();
    let header = lines.next().context("empty edge-list file")?;
    let n: u32 = header
        .strip_prefix("# nodes=")
        .context("first line must be `# nodes=N`")?
        .trim()
        .parse()
        .context("bad node count in header")?;
    let mut edges = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let parse = |s: Option<&str>| -> Result<u32> {
            s.with_context(|| format!("edge line {} is incomplete", i + 2))?
                .parse()
                .with_context(|| format!("bad endpoint on line {}", i + 2))
        };
        let u = parse(parts.next())?;
        let v = parse(parts.next())?;
        if parts.next().is_some() {
            bail!("edge line {} has trailing fields", i + 2);
        }
        edges.push((u, v));
    }
    Network::from_edges(n, edges).map_err(|e| anyhow::anyhow!("invalid edge list: {e}"))
}

// ---------------------------------------------------------------------------
// Summary JSON
// ---------------------------------------------------------------------------

/// Box-plot statistics as serialized in summaries and sweep rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxStatsJson {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub lo: f64,
    pub hi: f64,
    pub outliers: Vec<f64>,
}

impl From<&BoxStats> for BoxStatsJson {
    fn from(s: &BoxStats) -> Self {
        Self {
            median: s.median,
            q1: s.q1,
            q3: s.q3,
            lo: s.lower_whisker,
            hi: s.upper_whisker,
            outliers: s.outliers.clone(),
        }
    }
}

/// Peak readings of one run, keyed by report group where applicable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeaksJson {
    pub total_patterns: u64,
    pub total_words: BTreeMap<String, u64>,
    pub distinct_words: BTreeMap<String, u64>,
    pub total_words_sum: u64,
    pub distinct_words_sum: u64,
}

/// One run's record in `summary.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub index: u64,
    /// Which `[[sim]]` block produced the run.
    pub sim: usize,
    pub seed: u64,
    pub net_seed: u64,
    pub converged: bool,
    pub convergence_time: Option<u64>,
    pub converged_pattern: Option<String>,
    pub words_invented: u64,
    pub final_distinct_words: BTreeMap<String, u64>,
    pub peaks: PeaksJson,
}

/// Distribution statistics across runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AggregateJson {
    pub converged: u64,
    pub non_converged: u64,
    /// Over converged runs only; absent when none converged.
    pub convergence_time: Option<BoxStatsJson>,
    pub max_total_patterns: BoxStatsJson,
    pub max_total_words: BoxStatsJson,
    pub max_distinct_words: BoxStatsJson,
}

/// The `summary.json` document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub pattern_set: String,
    pub pattern_labels: Vec<String>,
    pub group_labels: Vec<String>,
    pub runs: Vec<RunRecord>,
    pub aggregate: AggregateJson,
}

/// Builds the summary document for a batch. All runs must use the same
/// pattern set (mixed batches have no meaningful aggregate).
pub fn summary(planned: &[PlannedRun], results: &[RunResult]) -> Result<Summary> {
    if planned.len() != results.len() {
        bail!("plan and results disagree on the number of runs");
    }
    let first = results.first().context("no runs to summarize")?;
    for r in results {
        if r.pattern_set_name != first.pattern_set_name || r.pattern_labels != first.pattern_labels
        {
            bail!(
                "runs mix pattern sets ({} vs {}); split them into separate experiments",
                first.pattern_set_name,
                r.pattern_set_name
            );
        }
    }
    let groups = first.series.group_labels().to_vec();
    let runs: Vec<RunRecord> = planned
        .iter()
        .zip(results)
        .map(|(plan, result)| {
            let peaks = result.series.peaks();
            let by_group = |values: &[u64]| -> BTreeMap<String, u64> {
                groups.iter().cloned().zip(values.iter().copied()).collect()
            };
            RunRecord {
                index: plan.index,
                sim: plan.sim,
                seed: plan.config.seed,
                net_seed: plan.config.net.seed,
                converged: result.converged,
                convergence_time: result.convergence_time,
                converged_pattern: result.converged_pattern_label.clone(),
                words_invented: result.words_invented,
                final_distinct_words: by_group(&result.final_distinct_words),
                peaks: PeaksJson {
                    total_patterns: peaks.max_total_patterns,
                    total_words: by_group(&peaks.max_total_words),
                    distinct_words: by_group(&peaks.max_distinct_words),
                    total_words_sum: peaks.max_total_words_sum,
                    distinct_words_sum: peaks.max_distinct_words_sum,
                },
            }
        })
        .collect();

    let times: Vec<f64> = results
        .iter()
        .filter_map(|r| r.convergence_time)
        .map(|t| t as f64)
        .collect();
    let convergence_time = if times.is_empty() {
        None
    } else {
        Some((&analysis::box_stats(&times)?).into())
    };
    let over = |f: &dyn Fn(&RunResult) -> u64| -> Result<BoxStatsJson> {
        let samples: Vec<f64> = results.iter().map(|r| f(r) as f64).collect();
        Ok((&analysis::box_stats(&samples)?).into())
    };
    let aggregate = AggregateJson {
        converged: times.len() as u64,
        non_converged: (results.len() - times.len()) as u64,
        convergence_time,
        max_total_patterns: over(&|r| r.series.peaks().max_total_patterns)?,
        max_total_words: over(&|r| r.series.peaks().max_total_words_sum)?,
        max_distinct_words: over(&|r| r.series.peaks().max_distinct_words_sum)?,
    };
    Ok(Summary {
        pattern_set: first.pattern_set_name.clone(),
        pattern_labels: first.pattern_labels.clone(),
        group_labels: groups,
        runs,
        aggregate,
    })
}

/// Serializes a document as pretty JSON with a trailing newline.
pub fn to_json_bytes<T: Serialize>(doc: &T) -> Result<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(doc).context("serializing JSON")?;
    text.push('\n');
    Ok(text.into_bytes())
}

// ---------------------------------------------------------------------------
// Tally JSON
// ---------------------------------------------------------------------------

/// One pattern's row in `tally.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TallyRow {
    pub label: String,
    pub count: u64,
    pub proportion: f64,
}

/// The `tally.json` document: how often each pattern won.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TallyJson {
    pub pattern_set: String,
    pub patterns: Vec<TallyRow>,
    pub converged_trials: u64,
    pub non_converged_trials: u64,
    pub total_trials: u64,
}

impl From<&PatternTally> for TallyJson {
    fn from(t: &PatternTally) -> Self {
        let patterns = t
            .pattern_labels
            .iter()
            .zip(&t.counts)
            .zip(&t.proportions)
            .map(|((label, &count), &proportion)| TallyRow {
                label: label.clone(),
                count,
                proportion,
            })
            .collect();
        Self {
            pattern_set: t.set_name.clone(),
            patterns,
            converged_trials: t.converged_trials,
            non_converged_trials: t.non_converged_trials,
            total_trials: t.total_trials,
        }
    }
}

// ---------------------------------------------------------------------------
// Sweep CSV
// ---------------------------------------------------------------------------

/// Renders sweep results as CSV. Each grid point contributes four rows, one
/// per metric, each carrying the box statistics of that metric over the
/// point's runs. Outliers are semicolon-joined inside the final field.
pub fn render_sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("p,metric,median,q1,q3,lo,hi,outliers\n");
    for point in points {
        let metrics: [(&str, &BoxStats); 4] = [
            ("convergence_time", &point.convergence_time),
            ("max_total_patterns", &point.max_total_patterns),
            ("max_total_words", &point.max_total_words),
            ("max_distinct_words", &point.max_distinct_words),
        ];
        for (name, stats) in metrics {
            let outliers = stats
                .outliers
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(";");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                point.p,
                name,
                stats.median,
                stats.q1,
                stats.q3,
                stats.lower_whisker,
                stats.upper_whisker,
                outliers
            );
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Memory snapshots
// ---------------------------------------------------------------------------

/// Serializes one agent's word memory as a JSON object keyed by store label,
/// each value the sorted ids held in that store. Intended for debugging and
/// golden tests: two memories with equal contents snapshot identically.
pub fn memory_snapshot(memory: &AgentMemory, set: &PatternSet) -> Value {
    let mut doc = serde_json::Map::new();
    for (i, category) in set.categories().iter().enumerate() {
        let mut ids: Vec<u64> = memory
            .store(mwng_core::lexicon::CategoryId(i as u8))
            .iter()
            .map(|w| w.id)
            .collect();
        ids.sort_unstable();
        doc.insert(category.label.clone(), json!(ids));
    }
    Value::Object(doc)
}
