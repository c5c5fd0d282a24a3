//! Experiment and sweep configuration files (TOML), their validation, and
//! their expansion into engine run configurations.
//!
//! An experiment file drives `mwng run`:
//!
//! ```toml
//! runs = 10                  # independent runs per [[sim]] block (default 1)
//! seed = 0                   # base seed; run i uses seed + i   (default 0)
//! output_dir = "out"         # default: $MWNG_OUT, else "."
//! emit = ["timeseries", "summary", "tally"]   # default: timeseries, summary
//!
//! [[sim]]
//! mode = "multi-word"        # or "single-word"        (default multi-word)
//! pattern_set = "english5"   # builtin name, or an inline table (see below)
//! strategy = "direct"        # or "reverse"            (default direct)
//! max_steps = 20000000       # interaction budget      (default 20000000)
//! metrics_stride = 100       # sampling stride         (default 100)
//! network = { preset = "RG/0.03" }
//! ```
//!
//! A network is either one of the twelve built-in presets (`RG/0.03`,
//! `RG/0.05`, `RG/0.1`, `SW/50/0.1` … `SW/60/0.3`, `SF/25`, `SF/50`,
//! `SF/75`, all on 500 nodes) or explicit parameters:
//! `{ kind = "rg", n = 500, p = 0.03 }`,
//! `{ kind = "sw", n = 500, k_half = 50, rp = 0.1 }`,
//! `{ kind = "sf", n = 500, m = 25 }` (seed graph size `m0` defaults to
//! `m + 1`). An optional `seed` pins the topology across runs; by default
//! each run generates its network from the run's own seed.
//!
//! An inline pattern set lists categories (optionally carrying the two
//! object sub-roles) and patterns as sequences of category labels, where the
//! label `object` denotes the merged-object slot when the sub-role pair is
//! declared:
//!
//! ```toml
//! [sim.pattern_set]
//! name = "custom"
//! categories = [
//!     { label = "subject" },
//!     { label = "object.i", role = "indirect" },
//!     { label = "object.d", role = "direct" },
//! ]
//! patterns = [
//!     { label = "TP1", slots = ["subject", "object"] },
//!     { label = "TP2", slots = ["subject", "object.i", "object.d"] },
//! ]
//! ```
//!
//! A sweep file drives `mwng sweep`: a density grid over random graphs plus
//! one base `[sim]` block without a network:
//!
//! ```toml
//! n = 500
//! runs_per_point = 10
//! seed = 0
//! p = [0.05, 0.1, 0.2]       # or: p_grid = { start = 0.02, stop = 1.0, step = 0.02 }
//! output = "sweep.csv"
//!
//! [sim]
//! pattern_set = "english5"
//! ```

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use mwng_core::engine::{Mode, SimConfig, Strategy, DEFAULT_MAX_STEPS, DEFAULT_METRICS_STRIDE};
use mwng_core::analysis::SweepBase;
use mwng_core::lexicon::{self, Category, ObjectRole, Pattern, PatternSet, Slot};
use mwng_core::net::{NetSpec, Topology};

/// The twelve built-in 500-node network presets.
pub const PRESETS: [&str; 12] = [
    "RG/0.03", "RG/0.05", "RG/0.1", "SW/50/0.1", "SW/50/0.2", "SW/50/0.3",
    "SW/60/0.1", "SW/60/0.2", "SW/60/0.3", "SF/25", "SF/50", "SF/75",
];

/// Resolves a preset name to its topology.
pub fn preset(name: &str) -> Option<Topology> {
    let t = match name {
        "RG/0.03" => Topology::RandomGraph { n: 500, p: 0.03 },
        "RG/0.05" => Topology::RandomGraph { n: 500, p: 0.05 },
        "RG/0.1" => Topology::RandomGraph { n: 500, p: 0.1 },
        "SW/50/0.1" => Topology::SmallWorld { n: 500, k_half: 50, rp: 0.1 },
        "SW/50/0.2" => Topology::SmallWorld { n: 500, k_half: 50, rp: 0.2 },
        "SW/50/0.3" => Topology::SmallWorld { n: 500, k_half: 50, rp: 0.3 },
        "SW/60/0.1" => Topology::SmallWorld { n: 500, k_half: 60, rp: 0.1 },
        "SW/60/0.2" => Topology::SmallWorld { n: 500, k_half: 60, rp: 0.2 },
        "SW/60/0.3" => Topology::SmallWorld { n: 500, k_half: 60, rp: 0.3 },
        "SF/25" => Topology::ScaleFree { n: 500, m0: 26, m: 25 },
        "SF/50" => Topology::ScaleFree { n: 500, m0: 51, m: 50 },
        "SF/75" => Topology::ScaleFree { n: 500, m0: 76, m: 75 },
        _ => return None,
    };
    Some(t)
}

/// Which artifacts a `run` writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Timeseries,
    Summary,
    Tally,
}

fn default_emit() -> Vec<Emit> {
    vec![Emit::Timeseries, Emit::Summary]
}

fn default_runs() -> u64 {
    1
}

fn default_max_steps() -> u64 {
    DEFAULT_MAX_STEPS
}

fn default_stride() -> u64 {
    DEFAULT_METRICS_STRIDE
}

/// Top-level experiment file: shared settings plus one or more `[[sim]]`
/// blocks.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    #[serde(default = "default_runs")]
    pub runs: u64,
    #[serde(default)]
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_emit")]
    pub emit: Vec<Emit>,
    #[serde(rename = "sim")]
    pub sims: Vec<SimBlock>,
}

/// One simulation block.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimBlock {
    #[serde(default)]
    pub mode: ModeCfg,
    pub pattern_set: Option<PatternSetCfg>,
    #[serde(default)]
    pub strategy: StrategyCfg,
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
    #[serde(default = "default_stride")]
    pub metrics_stride: u64,
    pub network: NetworkCfg,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeCfg {
    SingleWord,
    #[default]
    MultiWord,
}

impl From<ModeCfg> for Mode {
    fn from(m: ModeCfg) -> Mode {
        match m {
            ModeCfg::SingleWord => Mode::SingleWord,
            ModeCfg::MultiWord => Mode::MultiWord,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyCfg {
    #[default]
    Direct,
    Reverse,
}

impl From<StrategyCfg> for Strategy {
    fn from(s: StrategyCfg) -> Strategy {
        match s {
            StrategyCfg::Direct => Strategy::Direct,
            StrategyCfg::Reverse => Strategy::Reverse,
        }
    }
}

/// A pattern set reference: a builtin name or an inline definition.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PatternSetCfg {
    Builtin(String),
    Inline(InlinePatternSet),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlinePatternSet {
    pub name: String,
    pub categories: Vec<CategoryCfg>,
    pub patterns: Vec<PatternCfg>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryCfg {
    pub label: String,
    pub role: Option<RoleCfg>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleCfg {
    Indirect,
    Direct,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternCfg {
    pub label: String,
    pub slots: Vec<String>,
}

/// Network selection: a preset name or explicit generator parameters.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkCfg {
    pub preset: Option<String>,
    pub kind: Option<KindCfg>,
    pub n: Option<u32>,
    pub p: Option<f64>,
    pub k_half: Option<u32>,
    pub rp: Option<f64>,
    pub m: Option<u32>,
    pub m0: Option<u32>,
    /// Fixed topology seed; defaults to each run's own seed.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindCfg {
    Rg,
    Sw,
    Sf,
}

impl NetworkCfg {
    /// Resolves the topology, rejecting ambiguous or incomplete selections.
    pub fn topology(&self) -> Result<Topology> {
        match (&self.preset, self.kind) {
            (Some(_), Some(_)) => bail!("network takes either `preset` or `kind`, not both"),
            (Some(name), None) => {
                let extras = self.n.is_some()
                    || self.p.is_some()
                    || self.k_half.is_some()
                    || self.rp.is_some()
                    || self.m.is_some()
                    || self.m0.is_some();
                if extras {
                    bail!("preset networks take no generator parameters");
                }
                preset(name).ok_or_else(|| {
                    anyhow!("unknown preset {name:?}; available: {}", PRESETS.join(", "))
                })
            }
            (None, Some(kind)) => self.explicit(kind),
            (None, None) => bail!("network needs a `preset` name or a `kind`"),
        }
    }

    fn explicit(&self, kind: KindCfg) -> Result<Topology> {
        let n = self.n.context("explicit networks need `n`")?;
        let reject = |field: &str, set: bool| {
            if set {
                bail!("parameter `{field}` does not apply to this network kind");
            }
            Ok(())
        };
        match kind {
            KindCfg::Rg => {
                reject("k_half", self.k_half.is_some())?;
                reject("rp", self.rp.is_some())?;
                reject("m", self.m.is_some())?;
                reject("m0", self.m0.is_some())?;
                let p = self.p.context("random-graph networks need `p`")?;
                Ok(Topology::RandomGraph { n, p })
            }
            KindCfg::Sw => {
                reject("p", self.p.is_some())?;
                reject("m", self.m.is_some())?;
                reject("m0", self.m0.is_some())?;
                let k_half = self.k_half.context("small-world networks need `k_half`")?;
                let rp = self.rp.context("small-world networks need `rp`")?;
                Ok(Topology::SmallWorld { n, k_half, rp })
            }
            KindCfg::Sf => {
                reject("p", self.p.is_some())?;
                reject("k_half", self.k_half.is_some())?;
                reject("rp", self.rp.is_some())?;
                let m = self.m.context("scale-free networks need `m`")?;
                let m0 = self.m0.unwrap_or(m + 1);
                Ok(Topology::ScaleFree { n, m0, m })
            }
        }
    }
}

/// Builds the core pattern set for a block: builtin lookup or inline
/// construction.
pub fn build_pattern_set(cfg: &PatternSetCfg) -> Result<PatternSet> {
    match cfg {
        PatternSetCfg::Builtin(name) => {
            lexicon::builtin(name).map_err(|e| anyhow!("pattern set {name:?}: {e}"))
        }
        PatternSetCfg::Inline(inline) => {
            let categories: Vec<Category> = inline
                .categories
                .iter()
                .map(|c| Category {
                    label: c.label.clone(),
                    object_role: c.role.map(|r| match r {
                        RoleCfg::Indirect => ObjectRole::Indirect,
                        RoleCfg::Direct => ObjectRole::Direct,
                    }),
                })
                .collect();
            let has_role_pair = categories.iter().any(|c| c.object_role.is_some());
            let patterns: Vec<Pattern> = inline
                .patterns
                .iter()
                .map(|p| {
                    let slots = p
                        .slots
                        .iter()
                        .map(|label| resolve_slot(&categories, label, has_role_pair))
                        .collect::<Result<Vec<Slot>>>()?;
                    Ok(Pattern { label: p.label.clone(), slots })
                })
                .collect::<Result<_>>()?;
            PatternSet::new(inline.name.clone(), categories, patterns)
                .map_err(|e| anyhow!("pattern set {:?}: {e}", inline.name))
        }
    }
}

/// Maps a slot label to a category or, for `object` with a declared
/// indirect/direct pair, to the merged slot.
fn resolve_slot(categories: &[Category], label: &str, has_role_pair: bool) -> Result<Slot> {
    if let Some(i) = categories.iter().position(|c| c.label == label) {
        return Ok(Slot::Category(lexicon::CategoryId(i as u8)));
    }
    if label == lexicon::OBJECT_GROUP_LABEL && has_role_pair {
        return Ok(Slot::MergedObject);
    }
    bail!("slot {label:?} names no declared category");
}

/// A fully expanded run: where it came from plus the engine configuration.
#[derive(Debug, Clone)]
pub struct PlannedRun {
    /// Global run index (block-major); names `run_<index>.csv`.
    pub index: u64,
    /// Index of the `[[sim]]` block this run belongs to.
    pub sim: usize,
    pub config: SimConfig,
}

impl ExperimentFile {
    /// Parses and validates an experiment file.
    pub fn parse(text: &str) -> Result<Self> {
        let file: ExperimentFile = toml::from_str(text)?;
        if file.runs == 0 {
            bail!("`runs` must be at least 1");
        }
        if file.sims.is_empty() {
            bail!("at least one [[sim]] block is required");
        }
        if file.emit.is_empty() {
            bail!("`emit` must list at least one artifact");
        }
        Ok(file)
    }

    /// Expands every block into engine configurations. Run `i` (numbered
    /// block-major across the whole file) uses seed `base seed + i`, and its
    /// network inherits that seed unless the block pins one.
    pub fn plan(&self) -> Result<Vec<PlannedRun>> {
        let mut planned = Vec::with_capacity(self.sims.len() * self.runs as usize);
        for (b, block) in self.sims.iter().enumerate() {
            let topology = block
                .network
                .topology()
                .with_context(|| format!("[[sim]] block {}", b + 1))?;
            let mode: Mode = block.mode.into();
            let pattern_set = match (mode, &block.pattern_set) {
                (Mode::MultiWord, Some(cfg)) => {
                    Some(build_pattern_set(cfg).with_context(|| format!("[[sim]] block {}", b + 1))?)
                }
                (Mode::MultiWord, None) => {
                    bail!("[[sim]] block {}: multi-word mode needs a pattern_set", b + 1)
                }
                (Mode::SingleWord, None) => None,
                (Mode::SingleWord, Some(_)) => {
                    bail!("[[sim]] block {}: single-word mode takes no pattern_set", b + 1)
                }
            };
            for j in 0..self.runs {
                let index = b as u64 * self.runs + j;
                let seed = self.seed + index;
                let config = SimConfig {
                    net: NetSpec {
                        topology,
                        seed: block.network.seed.unwrap_or(seed),
                    },
                    mode,
                    pattern_set: pattern_set.clone(),
                    strategy: block.strategy.into(),
                    max_steps: block.max_steps,
                    seed,
                    metrics_stride: block.metrics_stride,
                };
                config
                    .validate()
                    .map_err(|e| anyhow!("[[sim]] block {}: {e}", b + 1))?;
                planned.push(PlannedRun { index, sim: b, config });
            }
        }
        Ok(planned)
    }
}

/// Sweep file: a density grid on random graphs plus one base block.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub n: u32,
    pub runs_per_point: u64,
    #[serde(default)]
    pub seed: u64,
    pub p: Option<Vec<f64>>,
    pub p_grid: Option<GridCfg>,
    pub output: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub sim: SweepSimCfg,
}

/// The base block of a sweep: a [`SimBlock`] without a network.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSimCfg {
    #[serde(default)]
    pub mode: ModeCfg,
    pub pattern_set: Option<PatternSetCfg>,
    #[serde(default)]
    pub strategy: StrategyCfg,
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
    #[serde(default = "default_stride")]
    pub metrics_stride: u64,
}

/// An evenly spaced inclusive density grid.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCfg {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridCfg {
    /// Enumerates the grid. Endpoints are handled in integer micro-units so
    /// that decimal steps yield exactly the intended points (0.02..=1.0 by
    /// 0.02 gives 50 points, not 49 or 51 from float drift).
    pub fn points(&self) -> Result<Vec<f64>> {
        let to_micro = |x: f64, what: &str| -> Result<i64> {
            if !x.is_finite() || x.abs() > 1e6 {
                bail!("grid {what} {x} out of range");
            }
            Ok((x * 1e6).round() as i64)
        };
        let start = to_micro(self.start, "start")?;
        let stop = to_micro(self.stop, "stop")?;
        let step = to_micro(self.step, "step")?;
        if step <= 0 {
            bail!("grid step must be positive");
        }
        if stop < start {
            bail!("grid stop must not precede start");
        }
        let mut points = Vec::new();
        let mut v = start;
        while v <= stop {
            points.push(v as f64 / 1e6);
            v += step;
        }
        Ok(points)
    }
}

impl SweepFile {
    /// Parses and validates a sweep file.
    pub fn parse(text: &str) -> Result<Self> {
        let file: SweepFile = toml::from_str(text)?;
        if file.runs_per_point == 0 {
            bail!("`runs_per_point` must be at least 1");
        }
        match (&file.p, &file.p_grid) {
            (Some(_), Some(_)) => bail!("give either `p` or `p_grid`, not both"),
            (None, None) => bail!("a sweep needs a `p` list or a `p_grid`"),
            _ => {}
        }
        Ok(file)
    }

    /// The density grid, whichever way it was written.
    pub fn grid(&self) -> Result<Vec<f64>> {
        let pts = match (&self.p, &self.p_grid) {
            (Some(list), None) => list.clone(),
            (None, Some(grid)) => grid.points()?,
            _ => unreachable!("validated in parse"),
        };
        if pts.is_empty() {
            bail!("the density grid is empty");
        }
        Ok(pts)
    }

    /// The shared run settings as an engine sweep base.
    pub fn base(&self) -> Result<SweepBase> {
        let mode: Mode = self.sim.mode.into();
        let pattern_set = match (mode, &self.sim.pattern_set) {
            (Mode::MultiWord, Some(cfg)) => Some(build_pattern_set(cfg)?),
            (Mode::MultiWord, None) => bail!("multi-word mode needs a pattern_set"),
            (Mode::SingleWord, None) => None,
            (Mode::SingleWord, Some(_)) => bail!("single-word mode takes no pattern_set"),
        };
        Ok(SweepBase {
            mode,
            pattern_set,
            strategy: self.sim.strategy.into(),
            max_steps: self.sim.max_steps,
            metrics_stride: self.sim.metrics_stride,
            base_seed: self.seed,
        })
    }
}
