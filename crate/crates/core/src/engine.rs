//! The simulation engine: pair selection, the interaction loop, convergence
//! detection, and deterministic seeding.
//!
//! One iteration is one pair-wise interaction. The engine keeps incremental
//! population counters (totals, distinct-word counts via per-word holder
//! counts, pattern counts) so sampling and peak tracking cost O(1) per
//! interaction; [`metrics::census`] recounts the same numbers from scratch
//! and is used to property-test the bookkeeping.
//!
//! A run is strictly sequential — the interaction order defines the process —
//! and fully determined by its config: the network comes from the net-gen
//! stream of `net.seed`, the loop from the interaction stream of `seed`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::agent::{AgentMemory, HearOutcome};
use crate::lexicon::{self, CategoryId, PatternId, PatternSet, Slot, Word, WordCounter};
use crate::metrics::{Counters, MetricsRow, MetricsSeries, Recorder};
use crate::net::{self, NetError, NetSpec, Network};
use crate::rng::{self, SimRng, Stream};

/// Default iteration budget: comfortably 20× beyond observed convergence
/// times at the 500-node scale.
pub const DEFAULT_MAX_STEPS: u64 = 20_000_000;

/// Default sampling stride for the metrics time series.
pub const DEFAULT_METRICS_STRIDE: u64 = 100;

/// Which game is played.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Classic naming game: one category, single-slot utterances.
    SingleWord,
    /// Sentence game over a configured pattern set.
    MultiWord,
}

/// How the interacting pair is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Speaker uniform over nodes, hearer uniform over the speaker's
    /// neighbors.
    Direct,
    /// Hearer uniform over nodes, speaker uniform over the hearer's
    /// neighbors.
    Reverse,
}

/// Full description of one reproducible run.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub net: NetSpec,
    pub mode: Mode,
    /// Required in multi-word mode, forbidden in single-word mode.
    pub pattern_set: Option<PatternSet>,
    pub strategy: Strategy,
    pub max_steps: u64,
    /// Seed of the interaction loop (the network has its own in `net`).
    pub seed: u64,
    pub metrics_stride: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.max_steps == 0 {
            return Err(EngineError::InvalidConfig("max_steps must be >= 1".into()));
        }
        if self.metrics_stride == 0 {
            return Err(EngineError::InvalidConfig(
                "metrics_stride must be >= 1".into(),
            ));
        }
        if self.net.topology.node_count() < 2 {
            return Err(EngineError::InvalidConfig(
                "population needs at least 2 agents".into(),
            ));
        }
        match (self.mode, &self.pattern_set) {
            (Mode::MultiWord, None) => Err(EngineError::InvalidConfig(
                "multi-word mode requires a pattern set".into(),
            )),
            (Mode::SingleWord, Some(_)) => Err(EngineError::InvalidConfig(
                "single-word mode takes no pattern set".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Draws an ordered (speaker, hearer) pair of adjacent nodes.
///
/// Requires a connected network with at least 2 nodes (so every node has a
/// neighbor); the two nodes always differ because there are no self-loops.
pub fn select_pair(net: &Network, strategy: Strategy, rng: &mut SimRng) -> (u32, u32) {
    let n = net.node_count();
    debug_assert!(n >= 2);
    let anchor = rng.random_range(0..n);
    let neighbors = net.neighbors(anchor);
    let other = neighbors[rng.random_range(0..neighbors.len())];
    match strategy {
        Strategy::Direct => (anchor, other),
        Strategy::Reverse => (other, anchor),
    }
}

/// Outcome of one interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteractionRecord {
    pub success: bool,
}

/// Ring buffer over the outcomes of the last (up to) 10 interactions.
#[derive(Debug, Clone, Default)]
struct SuccessWindow {
    ring: [bool; 10],
    len: u8,
    head: u8,
    successes: u8,
}

impl SuccessWindow {
    fn push(&mut self, success: bool) {
        if self.len < 10 {
            self.len += 1;
        } else if self.ring[self.head as usize] {
            self.successes -= 1;
        }
        self.ring[self.head as usize] = success;
        self.head = (self.head + 1) % 10;
        if success {
            self.successes += 1;
        }
    }

    /// Successes over window length; 0 before the first interaction.
    fn rate(&self) -> f64 {
        if self.len == 0 {
            0.0
        } else {
            self.successes as f64 / self.len as f64
        }
    }
}

/// The live state of one run.
#[derive(Debug, Clone)]
pub struct SimState {
    network: Network,
    memories: Vec<AgentMemory>,
    counter: WordCounter,
    step: u64,
    window: SuccessWindow,
    /// Category index -> report group index.
    group_of: Vec<usize>,
    /// Live totals per report group.
    group_totals: Vec<u64>,
    /// Live distinct-word counts per report group.
    group_distinct: Vec<u64>,
    total_patterns: u64,
    /// Word id -> number of agents currently holding it. Indexed densely by
    /// the monotone id counter; a word's distinct-count contribution starts
    /// when its holder count leaves 0 and ends when it returns there.
    holders: Vec<u32>,
}

impl SimState {
    /// Fresh state: empty memories everywhere.
    pub fn new(network: Network, set: &PatternSet) -> Self {
        let n = network.node_count() as usize;
        let mut group_of = alloc::vec![0usize; set.num_categories()];
        for (g, group) in set.groups().iter().enumerate() {
            for &c in &group.categories {
                group_of[c.index()] = g;
            }
        }
        let groups = set.groups().len();
        Self {
            network,
            memories: alloc::vec![AgentMemory::new(set); n],
            counter: WordCounter::new(),
            step: 0,
            window: SuccessWindow::default(),
            group_of,
            group_totals: alloc::vec![0; groups],
            group_distinct: alloc::vec![0; groups],
            total_patterns: 0,
            holders: Vec::new(),
        }
    }

    /// Builds a state around existing memories (for tests and oracles),
    /// recounting all incremental bookkeeping from scratch.
    pub fn from_memories(
        network: Network,
        set: &PatternSet,
        memories: Vec<AgentMemory>,
        counter: WordCounter,
    ) -> Result<Self, EngineError> {
        if network.node_count() < 2 {
            return Err(EngineError::InvalidState(
                "population needs at least 2 agents".into(),
            ));
        }
        if memories.len() != network.node_count() as usize {
            return Err(EngineError::InvalidState(format!(
                "{} memories for {} nodes",
                memories.len(),
                network.node_count()
            )));
        }
        let mut state = Self::new(network, set);
        state.memories = memories;
        state.counter = counter;
        let mut stored_words: Vec<Word> = Vec::new();
        for mem in &state.memories {
            if mem.num_stores() != set.num_categories() {
                return Err(EngineError::InvalidState(
                    "memory shaped for a different pattern set".into(),
                ));
            }
            state.total_patterns += mem.patterns().len() as u64;
            for c in 0..set.num_categories() {
                stored_words.extend_from_slice(mem.store(CategoryId(c as u8)));
            }
        }
        for w in stored_words {
            if w.id >= state.counter.issued() {
                return Err(EngineError::InvalidState(format!(
                    "word id {} not issued by the counter",
                    w.id
                )));
            }
            state.note_word_added(w);
        }
        Ok(state)
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn memories(&self) -> &[AgentMemory] {
        &self.memories
    }

    /// Interactions executed so far.
    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// Total words invented since the start.
    pub fn words_invented(&self) -> u64 {
        self.counter.issued()
    }

    /// Live distinct-word counts per report group.
    pub fn distinct_words(&self) -> &[u64] {
        &self.group_distinct
    }

    /// Borrowed snapshot of the live metric counters.
    pub fn counters(&self) -> Counters<'_> {
        Counters {
            step: self.step,
            total_patterns: self.total_patterns,
            total_words: &self.group_totals,
            distinct_words: &self.group_distinct,
            success_rate: self.window.rate(),
        }
    }

    /// One owned time-series row for the current step.
    pub fn sample(&self) -> MetricsRow {
        let c = self.counters();
        MetricsRow {
            step: c.step,
            total_words: c.total_words.to_vec(),
            distinct_words: c.distinct_words.to_vec(),
            total_patterns: c.total_patterns,
            success_rate: c.success_rate,
        }
    }

    fn note_word_added(&mut self, w: Word) {
        self.group_totals[self.group_of[w.category.index()]] += 1;
        let id = w.id as usize;
        if id >= self.holders.len() {
            self.holders.resize(id + 1, 0);
        }
        if self.holders[id] == 0 {
            self.group_distinct[self.group_of[w.category.index()]] += 1;
        }
        self.holders[id] += 1;
    }

    fn note_word_removed(&mut self, w: Word) {
        self.group_totals[self.group_of[w.category.index()]] -= 1;
        let id = w.id as usize;
        self.holders[id] -= 1;
        if self.holders[id] == 0 {
            self.group_distinct[self.group_of[w.category.index()]] -= 1;
        }
    }

    /// Executes one interaction: select a pair, utter, hear, and on local
    /// consensus collapse both memories onto the agreed sentence.
    pub fn step(&mut self, set: &PatternSet, strategy: Strategy, rng: &mut SimRng) -> InteractionRecord {
        let (speaker, hearer) = select_pair(&self.network, strategy, rng);

        let utterance = self.memories[speaker as usize].utter(set, &mut self.counter, rng);
        if utterance.adopted_pattern.is_some() {
            self.total_patterns += 1;
        }
        for i in 0..utterance.invented.len() {
            self.note_word_added(utterance.invented[i]);
        }

        let outcome = self.memories[hearer as usize]
            .hear(&utterance.sentence, set)
            .expect("engine utterances are well-formed");
        let success = match outcome {
            HearOutcome::Consensus => {
                for agent in [speaker, hearer] {
                    let dropped = self.memories[agent as usize].collapse(&utterance.sentence);
                    self.total_patterns -= dropped.dropped_patterns as u64;
                    for &w in &dropped.dropped_words {
                        self.note_word_removed(w);
                    }
                }
                true
            }
            HearOutcome::Learned { pattern, words } => {
                if pattern {
                    self.total_patterns += 1;
                }
                for &w in &words {
                    self.note_word_added(w);
                }
                false
            }
        };

        self.window.push(success);
        self.step += 1;
        InteractionRecord { success }
    }

    /// Whether the population sits in the absorbing state, using the cheap
    /// counter gate before the full scan: exact agreement requires every
    /// agent to hold 1 pattern and one word per slot, so the incremental
    /// totals must equal those of N copies of the candidate sentence.
    pub fn is_global_consensus(&self, set: &PatternSet) -> bool {
        let n = self.network.node_count() as u64;
        if self.total_patterns != n {
            return false;
        }
        let first = &self.memories[0];
        if first.patterns().len() != 1 {
            return false;
        }
        let q = first.patterns()[0];
        let mut expected = alloc::vec![0u64; self.group_totals.len()];
        for &slot in &set.pattern(q).slots {
            let g = match slot {
                Slot::Category(c) => self.group_of[c.index()],
                Slot::MergedObject => {
                    let (ci, _) = set.merged_pair().expect("validated set");
                    self.group_of[ci.index()]
                }
            };
            expected[g] += n;
        }
        if self.group_totals != expected {
            return false;
        }
        is_global_consensus(&self.memories, set)
    }
}

/// The literal absorbing-state test: every agent holds the same single
/// pattern, exactly one identical word per slot store of that pattern
/// (merged-object slots count the union of the two sub-stores), and all
/// other stores empty.
pub fn is_global_consensus(memories: &[AgentMemory], set: &PatternSet) -> bool {
    let Some(first) = memories.first() else {
        return true;
    };
    if first.patterns().len() != 1 {
        return false;
    }
    let q = first.patterns()[0];

    let ncats = set.num_categories();
    let mut plain_used = alloc::vec![false; ncats];
    let mut merged_used = false;
    for &slot in &set.pattern(q).slots {
        match slot {
            Slot::Category(c) => plain_used[c.index()] = true,
            Slot::MergedObject => merged_used = true,
        }
    }

    let shape_ok = |m: &AgentMemory| -> bool {
        for (c, &used) in plain_used.iter().enumerate() {
            let id = CategoryId(c as u8);
            let len = m.store(id).len();
            let in_pair = set.merged_pair().is_some_and(|(i, d)| id == i || id == d);
            if in_pair && merged_used {
                // Handled jointly below; a plain slot on a sub-store still
                // needs its word there.
                if used && len != 1 {
                    return false;
                }
                continue;
            }
            if len != used as usize {
                return false;
            }
        }
        if merged_used {
            let (i, d) = set.merged_pair().expect("validated set");
            if m.store(i).len() + m.store(d).len() != 1 {
                return false;
            }
        }
        true
    };

    if !shape_ok(first) {
        return false;
    }
    memories[1..].iter().all(|m| {
        m.patterns() == first.patterns()
            && (0..ncats).all(|c| {
                let id = CategoryId(c as u8);
                m.store(id) == first.store(id)
            })
    })
}

/// The completed outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub converged: bool,
    /// Interaction count at which global consensus first held.
    pub convergence_time: Option<u64>,
    /// Winning pattern (multi-word converged runs only).
    pub converged_pattern: Option<PatternId>,
    pub converged_pattern_label: Option<String>,
    /// Name of the pattern set the run used.
    pub pattern_set_name: String,
    /// Pattern labels of that set, in declaration order.
    pub pattern_labels: Vec<String>,
    pub series: MetricsSeries,
    /// Distinct words per report group at the end of the run.
    pub final_distinct_words: Vec<u64>,
    /// Total fresh words invented over the run.
    pub words_invented: u64,
}

/// Runs one simulation to global consensus or budget exhaustion.
///
/// Memories start empty. The consensus check runs only after successful
/// interactions — failures cannot create consensus. Hitting the budget is a
/// regular result with `converged = false`, not an error.
pub fn run(cfg: &SimConfig) -> Result<RunResult, EngineError> {
    cfg.validate()?;
    let single;
    let set: &PatternSet = match cfg.mode {
        Mode::MultiWord => cfg.pattern_set.as_ref().expect("validated above"),
        Mode::SingleWord => {
            single = lexicon::single_word();
            &single
        }
    };
    let network = net::generate(&cfg.net)?;
    let mut state = SimState::new(network, set);
    let mut rng = rng::seeded(cfg.seed, Stream::Interactions);
    let mut recorder = Recorder::new(set, cfg.metrics_stride);
    recorder.force(&state.counters());

    let mut convergence_time = None;
    while state.step < cfg.max_steps {
        let record = state.step(set, cfg.strategy, &mut rng);
        recorder.track(&state.counters());
        if record.success && state.is_global_consensus(set) {
            convergence_time = Some(state.step);
            recorder.force(&state.counters());
            break;
        }
    }
    if convergence_time.is_none() {
        recorder.force(&state.counters());
    }

    let converged_pattern = match (convergence_time.is_some(), cfg.mode) {
        (true, Mode::MultiWord) => Some(state.memories[0].patterns()[0]),
        _ => None,
    };
    Ok(RunResult {
        converged: convergence_time.is_some(),
        convergence_time,
        converged_pattern,
        converged_pattern_label: converged_pattern.map(|q| set.pattern(q).label.clone()),
        pattern_set_name: set.name().into(),
        pattern_labels: set.patterns().iter().map(|p| p.label.clone()).collect(),
        series: recorder.into_series(),
        final_distinct_words: state.group_distinct.clone(),
        words_invented: state.counter.issued(),
    })
}

/// Errors from configuration and state construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    Net(NetError),
    InvalidConfig(String),
    InvalidState(String),
}

impl From<NetError> for EngineError {
    fn from(e: NetError) -> Self {
        EngineError::Net(e)
    }
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Net(e) => write!(f, "{e}"),
            EngineError::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
            EngineError::InvalidState(msg) => write!(f, "invalid state: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EngineError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            EngineError::Net(e) => Some(e),
            _ => None,
        }
    }
}
