//! Post-run analysis: box-plot summaries, convergence-time capacity bounds,
//! converged-pattern tallies across repeated trials, and density sweeps on
//! random graphs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::engine::{self, EngineError, Mode, RunResult, SimConfig, Strategy};
use crate::lexicon::PatternSet;
use crate::net::{NetSpec, Topology};

/// Five-number summary of a sample in box-plot form.
///
/// Quartiles use linear interpolation between order statistics (the rank of
/// quantile `f` in a sorted sample of `len` values is `f * (len - 1)`).
/// Outliers are points beyond 1.5 interquartile ranges from the quartiles;
/// whiskers extend to the most extreme samples that are not outliers.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxStats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub lower_whisker: f64,
    pub upper_whisker: f64,
    /// Samples outside the whiskers, in ascending order.
    pub outliers: Vec<f64>,
}

/// Linearly interpolated quantile of an ascending-sorted slice.
fn quantile_sorted(sorted: &[f64], f: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let rank = f * (sorted.len() - 1) as f64;
    let lo = rank as usize; // truncates toward zero; rank >= 0
    let hi = if lo + 1 < sorted.len() { lo + 1 } else { lo };
    let frac = rank - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Computes the box-plot summary of `samples`.
///
/// The input order does not matter. Errors on an empty slice or on any
/// non-finite sample.
pub fn box_stats(samples: &[f64]) -> Result<BoxStats, AnalysisError> {
    if samples.is_empty() {
        return Err(AnalysisError::NoData("empty sample".into()));
    }
    if let Some(bad) = samples.iter().find(|x| !x.is_finite()) {
        return Err(AnalysisError::InvalidSamples(format!(
            "non-finite sample {bad}"
        )));
    }
    let mut sorted: Vec<f64> = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);

    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let lo_fence = q1 - 1.5 * iqr;
    let hi_fence = q3 + 1.5 * iqr;

    let mut outliers = Vec::new();
    let mut lower_whisker = q1;
    let mut upper_whisker = q3;
    let mut first_inlier = true;
    for &x in &sorted {
        if x < lo_fence || x > hi_fence {
            outliers.push(x);
        } else {
            if first_inlier {
                lower_whisker = x;
                first_inlier = false;
            }
            upper_whisker = x;
        }
    }
    Ok(BoxStats {
        median,
        q1,
        q3,
        lower_whisker,
        upper_whisker,
        outliers,
    })
}

/// Upper bound on the population-wide word count reachable during a run:
/// `n/2 * (1 + <k>/2)` for `n` agents with average degree `<k>`.
///
/// Every agent invents at most one word before its first interaction, and
/// each edge can add at most one more before the success that freezes it.
pub fn n_max(n: u64, avg_degree: f64) -> f64 {
    n as f64 / 2.0 * (1.0 + avg_degree / 2.0)
}

/// Distribution of winning patterns over repeated converged trials.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternTally {
    pub set_name: String,
    pub pattern_labels: Vec<String>,
    /// How many converged trials ended on each pattern, indexed like
    /// `pattern_labels`.
    pub counts: Vec<u64>,
    /// `counts` normalized by the number of converged trials (all zero when
    /// nothing converged).
    pub proportions: Vec<f64>,
    pub converged_trials: u64,
    pub non_converged_trials: u64,
    pub total_trials: u64,
}

/// Tallies which pattern each converged run ended on.
///
/// All results must come from the same pattern set; non-converged runs are
/// counted but excluded from the proportions.
pub fn tally(results: &[RunResult]) -> Result<PatternTally, AnalysisError> {
    let first = results
        .first()
        .ok_or_else(|| AnalysisError::NoData("no results to tally".into()))?;
    let set_name = first.pattern_set_name.clone();
    let pattern_labels = first.pattern_labels.clone();
    let mut counts = alloc::vec![0u64; pattern_labels.len()];
    let mut converged_trials = 0u64;
    let mut non_converged_trials = 0u64;
    for r in results {
        if r.pattern_set_name != set_name || r.pattern_labels != pattern_labels {
            return Err(AnalysisError::MixedSets(format!(
                "cannot tally runs of {} together with runs of {}",
                set_name, r.pattern_set_name
            )));
        }
        match r.converged_pattern {
            Some(p) => {
                converged_trials += 1;
                counts[p.index()] += 1;
            }
            None => non_converged_trials += 1,
        }
    }
    let proportions = counts
        .iter()
        .map(|&c| {
            if converged_trials == 0 {
                0.0
            } else {
                c as f64 / converged_trials as f64
            }
        })
        .collect();
    Ok(PatternTally {
        set_name,
        pattern_labels,
        counts,
        proportions,
        converged_trials,
        non_converged_trials,
        total_trials: results.len() as u64,
    })
}

/// Everything a sweep run shares besides the network: mode, pattern set,
/// strategy, step budget, sampling stride, and the seed the per-run seeds are
/// derived from.
#[derive(Debug, Clone)]
pub struct SweepBase {
    pub mode: Mode,
    pub pattern_set: Option<PatternSet>,
    pub strategy: Strategy,
    pub max_steps: u64,
    pub metrics_stride: u64,
    pub base_seed: u64,
}

/// Expands a density grid into one run configuration per (density, repeat)
/// pair.
///
/// Run `j` of grid point `i` gets seed `base_seed + i * runs_per_point + j`,
/// so every run in the sweep is independently seeded and the whole sweep is
/// reproducible from `base_seed` alone. Configurations are ordered
/// point-major: all runs of `p_grid[0]`, then all runs of `p_grid[1]`, ...
pub fn sweep_configs(
    p_grid: &[f64],
    n: u32,
    runs_per_point: u64,
    base: &SweepBase,
) -> Result<Vec<SimConfig>, AnalysisError> {
    if p_grid.is_empty() {
        return Err(AnalysisError::InvalidGrid("empty density grid".into()));
    }
    if runs_per_point == 0 {
        return Err(AnalysisError::InvalidGrid(
            "runs_per_point must be at least 1".into(),
        ));
    }
    for &p in p_grid {
        if !(p > 0.0 && p <= 1.0) {
            return Err(AnalysisError::InvalidGrid(format!(
                "edge density {p} outside (0, 1]"
            )));
        }
    }
    let mut configs = Vec::with_capacity(p_grid.len() * runs_per_point as usize);
    for (i, &p) in p_grid.iter().enumerate() {
        for j in 0..runs_per_point {
            let seed = base.base_seed + i as u64 * runs_per_point + j;
            let cfg = SimConfig {
                net: NetSpec {
                    topology: Topology::RandomGraph { n, p },
                    seed,
                },
                mode: base.mode,
                pattern_set: base.pattern_set.clone(),
                strategy: base.strategy,
                max_steps: base.max_steps,
                seed,
                metrics_stride: base.metrics_stride,
            };
            cfg.validate().map_err(AnalysisError::Engine)?;
            configs.push(cfg);
        }
    }
    Ok(configs)
}

/// Box-plot summaries of the sweep metrics at one grid density.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub p: f64,
    /// Steps until global consensus, over the converged runs.
    pub convergence_time: BoxStats,
    /// Peak population-wide pattern count per run.
    pub max_total_patterns: BoxStats,
    /// Peak population-wide word count per run (all stores summed).
    pub max_total_words: BoxStats,
    /// Peak distinct-word count per run (all stores summed).
    pub max_distinct_words: BoxStats,
}

/// Folds per-run results back into one [`SweepPoint`] per grid density.
///
/// `results` must be ordered exactly as [`sweep_configs`] ordered the
/// configurations. Errors if the lengths disagree or if any grid point has no
/// converged run to take a convergence time from.
pub fn aggregate_sweep(
    p_grid: &[f64],
    runs_per_point: u64,
    results: &[RunResult],
) -> Result<Vec<SweepPoint>, AnalysisError> {
    let expected = p_grid.len() * runs_per_point as usize;
    if results.len() != expected {
        return Err(AnalysisError::InvalidSamples(format!(
            "expected {expected} results ({} densities x {runs_per_point} runs), got {}",
            p_grid.len(),
            results.len()
        )));
    }
    let mut points = Vec::with_capacity(p_grid.len());
    for (i, &p) in p_grid.iter().enumerate() {
        let runs = &results[i * runs_per_point as usize..(i + 1) * runs_per_point as usize];
        let times: Vec<f64> = runs
            .iter()
            .filter_map(|r| r.convergence_time)
            .map(|t| t as f64)
            .collect();
        if times.is_empty() {
            return Err(AnalysisError::NoData(format!(
                "no run converged at density {p}; raise max_steps"
            )));
        }
        let peaks: Vec<_> = runs.iter().map(|r| r.series.peaks()).collect();
        let patterns: Vec<f64> = peaks.iter().map(|k| k.max_total_patterns as f64).collect();
        let words: Vec<f64> = peaks.iter().map(|k| k.max_total_words_sum as f64).collect();
        let distinct: Vec<f64> = peaks
            .iter()
            .map(|k| k.max_distinct_words_sum as f64)
            .collect();
        points.push(SweepPoint {
            p,
            convergence_time: box_stats(&times)?,
            max_total_patterns: box_stats(&patterns)?,
            max_total_words: box_stats(&words)?,
            max_distinct_words: box_stats(&distinct)?,
        });
    }
    Ok(points)
}

/// Runs a full density sweep on random graphs sequentially: expand the grid
/// with [`sweep_configs`], run every configuration, aggregate with
/// [`aggregate_sweep`].
///
/// Callers that parallelize should run the same configurations in any order,
/// then aggregate results arranged back in configuration order; the output is
/// identical because every run is independently seeded.
pub fn sweep_rg(
    p_grid: &[f64],
    n: u32,
    runs_per_point: u64,
    base: &SweepBase,
) -> Result<Vec<SweepPoint>, AnalysisError> {
    let configs = sweep_configs(p_grid, n, runs_per_point, base)?;
    let mut results = Vec::with_capacity(configs.len());
    for cfg in &configs {
        results.push(engine::run(cfg).map_err(AnalysisError::Engine)?);
    }
    aggregate_sweep(p_grid, runs_per_point, &results)
}

/// Errors from the analysis helpers.
#[derive(Debug)]
pub enum AnalysisError {
    /// Nothing to summarize (empty input, or no converged run where one is
    /// required).
    NoData(String),
    /// Results from different pattern sets were mixed in one tally.
    MixedSets(String),
    /// A sweep grid was empty or contained an out-of-range density.
    InvalidGrid(String),
    /// Samples were non-finite or shaped inconsistently with the grid.
    InvalidSamples(String),
    /// A sweep run failed inside the engine.
    Engine(EngineError),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::NoData(msg) => write!(f, "no data: {msg}"),
            AnalysisError::MixedSets(msg) => write!(f, "mixed pattern sets: {msg}"),
            AnalysisError::InvalidGrid(msg) => write!(f, "invalid sweep grid: {msg}"),
            AnalysisError::InvalidSamples(msg) => write!(f, "invalid samples: {msg}"),
            AnalysisError::Engine(e) => write!(f, "sweep run failed: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AnalysisError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            AnalysisError::Engine(e) => Some(e),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon;

    #[test]
    fn box_stats_of_a_single_sample_collapses_to_that_value() {
        let s = box_stats(&[5.0]).unwrap();
        assert_eq!(s.median, 5.0);
        assert_eq!(s.q1, 5.0);
        assert_eq!(s.q3, 5.0);
        assert_eq!(s.lower_whisker, 5.0);
        assert_eq!(s.upper_whisker, 5.0);
        assert!(s.outliers.is_empty());
    }

    #[test]
    fn box_stats_quartiles_interpolate_between_order_statistics() {
        // 1..=9 has exact quartiles at the 3rd, 5th, and 7th values.
        let v: Vec<f64> = (1..=9).map(f64::from).collect();
        let s = box_stats(&v).unwrap();
        assert_eq!(s.q1, 3.0);
        assert_eq!(s.median, 5.0);
        assert_eq!(s.q3, 7.0);
        assert_eq!(s.lower_whisker, 1.0);
        assert_eq!(s.upper_whisker, 9.0);
        assert!(s.outliers.is_empty());

        // Even length interpolates halfway: median of 1..=4 is 2.5.
        let s = box_stats(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(s.median, 2.5);
        assert_eq!(s.q1, 1.75);
        assert_eq!(s.q3, 3.25);
    }

    #[test]
    fn box_stats_flags_points_beyond_the_iqr_fences() {
        // q1 = 2, q3 = 4, iqr = 2, upper fence = 7: 100 is an outlier and the
        // upper whisker stops at the largest inlier.
        let s = box_stats(&[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert_eq!(s.q1, 2.0);
        assert_eq!(s.median, 3.0);
        assert_eq!(s.q3, 4.0);
        assert_eq!(s.outliers, alloc::vec![100.0]);
        assert_eq!(s.lower_whisker, 1.0);
        assert_eq!(s.upper_whisker, 4.0);
    }

    #[test]
    fn box_stats_ignores_sample_order() {
        let a = box_stats(&[9.0, 1.0, 5.0, 3.0, 7.0, 2.0, 8.0, 4.0, 6.0]).unwrap();
        let b = box_stats(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn box_stats_rejects_empty_and_non_finite_input() {
        assert!(matches!(box_stats(&[]), Err(AnalysisError::NoData(_))));
        assert!(matches!(
            box_stats(&[1.0, f64::NAN]),
            Err(AnalysisError::InvalidSamples(_))
        ));
        assert!(matches!(
            box_stats(&[f64::INFINITY]),
            Err(AnalysisError::InvalidSamples(_))
        ));
    }

    #[test]
    fn word_capacity_bound_matches_hand_computed_values() {
        // 500 agents at average degree 14.98: 250 * (1 + 7.49) = 2122.5,
        // i.e. at most 2123 whole words.
        let bound = n_max(500, 14.98);
        assert!((bound - 2122.5).abs() < 1e-9);
        assert_eq!(bound.ceil() as u64, 2123);

        // Degenerate cases: no edges leaves one invention per agent pair
        // member; a 4-cycle supports its own size.
        assert_eq!(n_max(2, 0.0), 1.0);
        assert_eq!(n_max(4, 2.0), 4.0);
    }

    /// Minimal converged-looking results for tally tests.
    fn fake_result(set: &lexicon::PatternSet, pattern: Option<u8>) -> RunResult {
        use crate::lexicon::PatternId;
        use crate::metrics::{MetricsRow, MetricsSeries};

        let labels: Vec<String> = set.groups().iter().map(|g| g.label.clone()).collect();
        let row = MetricsRow {
            step: 0,
            total_words: alloc::vec![0; labels.len()],
            distinct_words: alloc::vec![0; labels.len()],
            total_patterns: 0,
            success_rate: 0.0,
        };
        let series = MetricsSeries::from_rows(labels.clone(), alloc::vec![row]).unwrap();
        RunResult {
            converged: pattern.is_some(),
            convergence_time: pattern.map(|_| 10),
            converged_pattern: pattern.map(PatternId),
            converged_pattern_label: pattern
                .map(|p| set.pattern(PatternId(p)).label.clone()),
            pattern_set_name: set.name().into(),
            pattern_labels: set.patterns().iter().map(|p| p.label.clone()).collect(),
            series,
            final_distinct_words: alloc::vec![0; labels.len()],
            words_invented: 0,
        }
    }

    #[test]
    fn tally_counts_winning_patterns_and_skips_non_converged_runs() {
        let set = lexicon::english5();
        let mut results: Vec<RunResult> = (0..7).map(|_| fake_result(&set, Some(0))).collect();
        results.push(fake_result(&set, Some(2)));
        results.push(fake_result(&set, Some(2)));
        results.push(fake_result(&set, None));

        let t = tally(&results).unwrap();
        assert_eq!(t.set_name, "english5");
        assert_eq!(t.counts, alloc::vec![7, 0, 2, 0, 0]);
        assert_eq!(t.converged_trials, 9);
        assert_eq!(t.non_converged_trials, 1);
        assert_eq!(t.total_trials, 10);
        assert!((t.proportions[0] - 7.0 / 9.0).abs() < 1e-12);
        assert!((t.proportions[2] - 2.0 / 9.0).abs() < 1e-12);
        assert_eq!(t.proportions[1], 0.0);
        let sum: f64 = t.proportions.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tally_rejects_results_from_different_pattern_sets() {
        let a = fake_result(&lexicon::english5(), Some(0));
        let b = fake_result(&lexicon::single_word(), Some(0));
        assert!(matches!(
            tally(&[a, b]),
            Err(AnalysisError::MixedSets(_))
        ));
    }

    #[test]
    fn tally_with_no_converged_runs_reports_zero_proportions() {
        let set = lexicon::english5();
        let results = alloc::vec![fake_result(&set, None), fake_result(&set, None)];
        let t = tally(&results).unwrap();
        assert_eq!(t.converged_trials, 0);
        assert_eq!(t.non_converged_trials, 2);
        assert!(t.proportions.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn tally_of_nothing_errors() {
        assert!(matches!(tally(&[]), Err(AnalysisError::NoData(_))));
    }

    fn single_word_base(seed: u64) -> SweepBase {
        SweepBase {
            mode: Mode::SingleWord,
            pattern_set: None,
            strategy: Strategy::Direct,
            max_steps: 1_000_000,
            metrics_stride: 100,
            base_seed: seed,
        }
    }

    #[test]
    fn sweep_configs_assign_disjoint_consecutive_seeds() {
        let base = single_word_base(1000);
        let configs = sweep_configs(&[0.1, 0.2, 0.4], 30, 5, &base).unwrap();
        assert_eq!(configs.len(), 15);
        let seeds: Vec<u64> = configs.iter().map(|c| c.seed).collect();
        assert_eq!(seeds, (1000..1015).collect::<Vec<_>>());
        for cfg in &configs {
            assert_eq!(cfg.net.seed, cfg.seed);
        }
        match configs[7].net.topology {
            Topology::RandomGraph { n, p } => {
                assert_eq!(n, 30);
                assert_eq!(p, 0.2);
            }
            _ => panic!("sweep must build random graphs"),
        }
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let base = single_word_base(0);
        assert!(matches!(
            sweep_configs(&[], 30, 5, &base),
            Err(AnalysisError::InvalidGrid(_))
        ));
        assert!(matches!(
            sweep_configs(&[0.0], 30, 5, &base),
            Err(AnalysisError::InvalidGrid(_))
        ));
        assert!(matches!(
            sweep_configs(&[1.5], 30, 5, &base),
            Err(AnalysisError::InvalidGrid(_))
        ));
        assert!(matches!(
            sweep_configs(&[0.5], 30, 0, &base),
            Err(AnalysisError::InvalidGrid(_))
        ));
    }

    #[test]
    fn aggregate_rejects_mismatched_result_counts() {
        let err = aggregate_sweep(&[0.1, 0.2], 3, &[]);
        assert!(matches!(err, Err(AnalysisError::InvalidSamples(_))));
    }

    #[test]
    fn degenerate_sweep_boxes_collapse_to_the_single_run() {
        // One density, one run: every box statistic equals that run's value.
        let base = single_word_base(42);
        let points = sweep_rg(&[0.5], 16, 1, &base).unwrap();
        assert_eq!(points.len(), 1);
        let pt = &points[0];
        assert_eq!(pt.p, 0.5);
        assert_eq!(pt.convergence_time.median, pt.convergence_time.q1);
        assert_eq!(pt.convergence_time.median, pt.convergence_time.q3);
        assert!(pt.convergence_time.median >= 1.0);
        assert!(pt.convergence_time.outliers.is_empty());
        assert_eq!(pt.max_total_words.median, pt.max_total_words.upper_whisker);
        // A 16-agent population cannot peak above 16 total single words per
        // agent pairing bound, but must hold at least 16 at consensus.
        assert!(pt.max_total_words.median >= 16.0);
        assert!(pt.max_total_patterns.median >= 16.0);
    }

    #[test]
    fn sequential_sweep_matches_manual_config_expansion() {
        let base = single_word_base(7);
        let grid = [0.4, 0.8];
        let points = sweep_rg(&grid, 14, 3, &base).unwrap();

        let configs = sweep_configs(&grid, 14, 3, &base).unwrap();
        let results: Vec<RunResult> = configs
            .iter()
            .map(|c| engine::run(c).unwrap())
            .collect();
        let manual = aggregate_sweep(&grid, 3, &results).unwrap();
        assert_eq!(points, manual);
    }
}
