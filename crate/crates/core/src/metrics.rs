//! Population-level time series and per-run peak statistics.
//!
//! Four metric families are tracked per sample: total words per report group
//! (sum of store sizes over agents), distinct words per report group (size of
//! the union over agents), total patterns, and the success rate over the last
//! ten interactions. The two object sub-stores report folded together as one
//! `object` group; every other category reports under its own label.
//!
//! Peaks are tracked exactly, on every interaction, independent of the
//! sampling stride: maxima must not be biased by how sparsely rows are kept.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use alloc::collections::BTreeSet;

use crate::agent::AgentMemory;
use crate::lexicon::PatternSet;

/// A borrowed snapshot of the live counters, indexed by report group.
#[derive(Debug, Clone, Copy)]
pub struct Counters<'a> {
    pub step: u64,
    pub total_patterns: u64,
    pub total_words: &'a [u64],
    pub distinct_words: &'a [u64],
    pub success_rate: f64,
}

/// One sampled row of the time series.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub step: u64,
    /// Per report group.
    pub total_words: Vec<u64>,
    /// Per report group.
    pub distinct_words: Vec<u64>,
    pub total_patterns: u64,
    pub success_rate: f64,
}

impl MetricsRow {
    fn from_counters(c: &Counters<'_>) -> Self {
        Self {
            step: c.step,
            total_words: c.total_words.to_vec(),
            distinct_words: c.distinct_words.to_vec(),
            total_patterns: c.total_patterns,
            success_rate: c.success_rate,
        }
    }
}

/// Per-run maxima of the metric families.
#[derive(Debug, Clone, PartialEq)]
pub struct Peaks {
    /// Per report group.
    pub max_total_words: Vec<u64>,
    /// Per report group.
    pub max_distinct_words: Vec<u64>,
    pub max_total_patterns: u64,
    /// Peak of the sum over all groups (the population's total word load).
    pub max_total_words_sum: u64,
    /// Peak of the sum over all groups (distinct word ids are unique to
    /// their category, so the sum is the size of the overall union).
    pub max_distinct_words_sum: u64,
}

impl Peaks {
    fn zeroed(groups: usize) -> Self {
        Self {
            max_total_words: alloc::vec![0; groups],
            max_distinct_words: alloc::vec![0; groups],
            max_total_patterns: 0,
            max_total_words_sum: 0,
            max_distinct_words_sum: 0,
        }
    }

    fn observe(&mut self, c: &Counters<'_>) {
        for (peak, &v) in self.max_total_words.iter_mut().zip(c.total_words) {
            *peak = (*peak).max(v);
        }
        for (peak, &v) in self.max_distinct_words.iter_mut().zip(c.distinct_words) {
            *peak = (*peak).max(v);
        }
        self.max_total_patterns = self.max_total_patterns.max(c.total_patterns);
        let tw: u64 = c.total_words.iter().sum();
        let dw: u64 = c.distinct_words.iter().sum();
        self.max_total_words_sum = self.max_total_words_sum.max(tw);
        self.max_distinct_words_sum = self.max_distinct_words_sum.max(dw);
    }
}

/// Computes the maxima of a row list. Errors on an empty list.
///
/// This is the row-level operation; a [`MetricsSeries`] built by a
/// [`Recorder`] instead carries exact peaks observed on every interaction,
/// which dominate these sampled-row maxima.
pub fn peaks(rows: &[MetricsRow]) -> Result<Peaks, MetricsError> {
    let first = rows.first().ok_or(MetricsError::EmptySeries)?;
    let mut peaks = Peaks::zeroed(first.total_words.len());
    for row in rows {
        peaks.observe(&Counters {
            step: row.step,
            total_patterns: row.total_patterns,
            total_words: &row.total_words,
            distinct_words: &row.distinct_words,
            success_rate: row.success_rate,
        });
    }
    Ok(peaks)
}

/// The recorded time series of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSeries {
    group_labels: Vec<String>,
    rows: Vec<MetricsRow>,
    peaks: Peaks,
}

impl MetricsSeries {
    /// Builds a series from explicit rows; peaks are the row maxima.
    /// Errors on empty input.
    pub fn from_rows(
        group_labels: Vec<String>,
        rows: Vec<MetricsRow>,
    ) -> Result<Self, MetricsError> {
        let peaks = peaks(&rows)?;
        Ok(Self {
            group_labels,
            rows,
            peaks,
        })
    }

    pub fn group_labels(&self) -> &[String] {
        &self.group_labels
    }

    pub fn rows(&self) -> &[MetricsRow] {
        &self.rows
    }

    pub fn peaks(&self) -> &Peaks {
        &self.peaks
    }

    /// Renders the series as CSV: `step,tw_<group>...,dw_<group>...,tp,sr`,
    /// groups ordered as declared, success rate with six decimal places.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step");
        for label in &self.group_labels {
            let _ = write!(out, ",tw_{label}");
        }
        for label in &self.group_labels {
            let _ = write!(out, ",dw_{label}");
        }
        out.push_str(",tp,sr\n");
        for row in &self.rows {
            let _ = write!(out, "{}", row.step);
            for v in &row.total_words {
                let _ = write!(out, ",{v}");
            }
            for v in &row.distinct_words {
                let _ = write!(out, ",{v}");
            }
            let _ = writeln!(out, ",{},{:.6}", row.total_patterns, row.success_rate);
        }
        out
    }
}

/// Samples rows on a stride and tracks exact peaks every interaction.
#[derive(Debug, Clone)]
pub struct Recorder {
    stride: u64,
    group_labels: Vec<String>,
    rows: Vec<MetricsRow>,
    peaks: Peaks,
}

impl Recorder {
    /// `stride` = keep one row every so many interactions (must be ≥ 1);
    /// callers force extra rows at step 0, at convergence, and at the end.
    pub fn new(set: &PatternSet, stride: u64) -> Self {
        let group_labels: Vec<String> = set.groups().iter().map(|g| g.label.clone()).collect();
        let groups = group_labels.len();
        Self {
            stride,
            group_labels,
            rows: Vec::new(),
            peaks: Peaks::zeroed(groups),
        }
    }

    /// Observes the state after one interaction: always updates peaks,
    /// records a row when the step lands on the stride.
    pub fn track(&mut self, c: &Counters<'_>) {
        self.peaks.observe(c);
        if c.step.is_multiple_of(self.stride) {
            self.rows.push(MetricsRow::from_counters(c));
        }
    }

    /// Records a row unconditionally (unless the step is already recorded).
    pub fn force(&mut self, c: &Counters<'_>) {
        self.peaks.observe(c);
        if self.rows.last().map(|r| r.step) != Some(c.step) {
            self.rows.push(MetricsRow::from_counters(c));
        }
    }

    pub fn into_series(self) -> MetricsSeries {
        MetricsSeries {
            group_labels: self.group_labels,
            rows: self.rows,
            peaks: self.peaks,
        }
    }
}

/// A full recount of the population metrics straight from the memories.
///
/// Independent of any incremental bookkeeping — the oracle the engine's live
/// counters are property-tested against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    /// Per report group.
    pub total_words: Vec<u64>,
    /// Per report group.
    pub distinct_words: Vec<u64>,
    pub total_patterns: u64,
}

/// Recounts totals, distinct unions, and pattern counts over all memories.
pub fn census(memories: &[AgentMemory], set: &PatternSet) -> Census {
    let groups = set.groups();
    let mut total_words = alloc::vec![0u64; groups.len()];
    let mut distinct: Vec<BTreeSet<u64>> = alloc::vec![BTreeSet::new(); groups.len()];
    let mut total_patterns = 0u64;
    for mem in memories {
        total_patterns += mem.patterns().len() as u64;
        for (g, group) in groups.iter().enumerate() {
            for &c in &group.categories {
                let store = mem.store(c);
                total_words[g] += store.len() as u64;
                distinct[g].extend(store.iter().map(|w| w.id));
            }
        }
    }
    Census {
        total_words,
        distinct_words: distinct.iter().map(|s| s.len() as u64).collect(),
        total_patterns,
    }
}

/// Errors from series construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricsError {
    /// Peaks of nothing are undefined.
    EmptySeries,
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::EmptySeries => write!(f, "metrics series is empty"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MetricsError {}
