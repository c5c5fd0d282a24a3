//! Agent memory and the local speaker/hearer interaction semantics.
//!
//! A memory is an ordered, duplicate-free pattern store plus one word store
//! per category. Speakers compose sentences by drawing a pattern and then one
//! word per slot, inventing fresh items where a store is empty. Hearers
//! either recognize the whole sentence (local consensus) or learn its missing
//! parts. After a consensus both sides collapse: they keep exactly the agreed
//! sentence and drop everything else, in every category.
//!
//! [`consensus_probability`] and its fixed-pattern factors are diagnostic
//! oracles for property-testing the stochastic path; the engine never calls
//! them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::lexicon::{
    LexiconError, PatternId, PatternSet, Sentence, Slot, Word, WordCounter,
};
use crate::rng::SimRng;

/// One agent's memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentMemory {
    /// Duplicate-free, in acquisition order.
    patterns: Vec<PatternId>,
    /// One duplicate-free store per category, in acquisition order.
    stores: Vec<Vec<Word>>,
}

impl AgentMemory {
    /// An empty memory shaped for `set` (one store per category).
    pub fn new(set: &PatternSet) -> Self {
        Self {
            patterns: Vec::new(),
            stores: alloc::vec![Vec::new(); set.num_categories()],
        }
    }

    /// Builds a memory with given contents, validating the store invariants:
    /// duplicate-free stores, known pattern ids, and every word in the store
    /// of its own category.
    pub fn from_parts(
        set: &PatternSet,
        patterns: Vec<PatternId>,
        stores: Vec<Vec<Word>>,
    ) -> Result<Self, AgentError> {
        if stores.len() != set.num_categories() {
            return Err(AgentError::Inconsistent(format!(
                "expected {} stores, got {}",
                set.num_categories(),
                stores.len()
            )));
        }
        for (i, &q) in patterns.iter().enumerate() {
            if q.index() >= set.num_patterns() {
                return Err(AgentError::Inconsistent(format!(
                    "unknown pattern id {}",
                    q.0
                )));
            }
            if patterns[..i].contains(&q) {
                return Err(AgentError::Inconsistent(format!(
                    "duplicate pattern id {}",
                    q.0
                )));
            }
        }
        for (c, store) in stores.iter().enumerate() {
            for (i, w) in store.iter().enumerate() {
                if w.category.index() != c {
                    return Err(AgentError::Inconsistent(format!(
                        "word {} of category {} stored under category {c}",
                        w.id, w.category.0
                    )));
                }
                if store[..i].contains(w) {
                    return Err(AgentError::Inconsistent(format!(
                        "duplicate word {} in store {c}",
                        w.id
                    )));
                }
            }
        }
        Ok(Self { patterns, stores })
    }

    pub fn patterns(&self) -> &[PatternId] {
        &self.patterns
    }

    pub fn store(&self, category: crate::lexicon::CategoryId) -> &[Word] {
        &self.stores[category.index()]
    }

    pub fn num_stores(&self) -> usize {
        self.stores.len()
    }

    pub fn has_pattern(&self, q: PatternId) -> bool {
        self.patterns.contains(&q)
    }

    /// Total stored words across all categories.
    pub fn total_words(&self) -> usize {
        self.stores.iter().map(Vec::len).sum()
    }

    /// Patterns plus words.
    pub fn total_items(&self) -> usize {
        self.patterns.len() + self.total_words()
    }

    /// Whether the whole sentence is already in memory: its pattern, and
    /// every word in the store of the word's own category. (A word can only
    /// ever live in that store, so for merged-object slots this is the same
    /// as checking the union of the two sub-stores.)
    pub fn knows(&self, s: &Sentence) -> bool {
        self.has_pattern(s.pattern)
            && s.words
                .iter()
                .all(|w| self.stores[w.category.index()].contains(w))
    }

    /// Composes a sentence to utter, inventing where memory is silent.
    ///
    /// An empty pattern store adopts a uniform draw from the whole set; an
    /// empty slot store invents a fresh word (merged-object slots invent into
    /// the direct sub-store) and keeps it. Draw order is fixed — pattern
    /// first, then slot words left to right, merged unions indexed indirect
    /// store first — so a given rng state always yields the same utterance.
    /// The speaker's memory may grow here, never shrink.
    pub fn utter(
        &mut self,
        set: &PatternSet,
        counter: &mut WordCounter,
        rng: &mut SimRng,
    ) -> Utterance {
        let adopted_pattern = if self.patterns.is_empty() {
            let q = PatternId(rng.random_range(0..set.num_patterns() as u8));
            self.patterns.push(q);
            Some(q)
        } else {
            None
        };
        let q = match adopted_pattern {
            Some(q) => q,
            None => self.patterns[rng.random_range(0..self.patterns.len())],
        };

        let slots = &set.pattern(q).slots;
        let mut words = Vec::with_capacity(slots.len());
        let mut invented = Vec::new();
        for &slot in slots {
            let word = match slot {
                Slot::Category(c) => {
                    let store = &self.stores[c.index()];
                    if store.is_empty() {
                        let w = counter.invent(c);
                        self.stores[c.index()].push(w);
                        invented.push(w);
                        w
                    } else {
                        store[rng.random_range(0..store.len())]
                    }
                }
                Slot::MergedObject => {
                    let (ci, cd) = set
                        .merged_pair()
                        .expect("validated set: merged slot implies declared pair");
                    let li = self.stores[ci.index()].len();
                    let ld = self.stores[cd.index()].len();
                    if li + ld == 0 {
                        let w = counter.invent(cd);
                        self.stores[cd.index()].push(w);
                        invented.push(w);
                        w
                    } else {
                        let k = rng.random_range(0..li + ld);
                        if k < li {
                            self.stores[ci.index()][k]
                        } else {
                            self.stores[cd.index()][k - li]
                        }
                    }
                }
            };
            words.push(word);
        }

        Utterance {
            sentence: Sentence { pattern: q, words },
            invented,
            adopted_pattern,
        }
    }

    /// Processes a received sentence.
    ///
    /// Consensus iff the whole sentence is already known; the memory is not
    /// touched in that case (collapse is a separate step). Otherwise the
    /// missing pattern and words are learned, each at most once, and the
    /// outcome reports exactly what was added.
    pub fn hear(&mut self, s: &Sentence, set: &PatternSet) -> Result<HearOutcome, LexiconError> {
        set.validate_sentence(s)?;
        if self.knows(s) {
            return Ok(HearOutcome::Consensus);
        }
        let pattern = if self.has_pattern(s.pattern) {
            false
        } else {
            self.patterns.push(s.pattern);
            true
        };
        let mut words = Vec::new();
        for &w in &s.words {
            let store = &mut self.stores[w.category.index()];
            if !store.contains(&w) {
                store.push(w);
                words.push(w);
            }
        }
        Ok(HearOutcome::Learned { pattern, words })
    }

    /// Collapses the memory onto an agreed sentence: keep `s.pattern` and
    /// exactly the words of `s`, drop everything else in every category
    /// (stores of categories `s` does not use become empty). Returns what was
    /// dropped so callers can maintain incremental counts.
    ///
    /// # Panics
    ///
    /// If the sentence is not fully known — the interaction protocol only
    /// collapses after a consensus, so that is an engine bug.
    pub fn collapse(&mut self, s: &Sentence) -> Collapsed {
        assert!(
            self.knows(s),
            "collapse precondition violated (engine bug): sentence not fully known"
        );
        let dropped_patterns = self.patterns.len() - 1;
        self.patterns.clear();
        self.patterns.push(s.pattern);

        let mut dropped_words = Vec::new();
        for store in &mut self.stores {
            // Keeps acquisition order; `s`'s words are a subset of what is
            // stored, so what remains is exactly `s` restricted to this store.
            let mut kept = Vec::new();
            for &w in store.iter() {
                if s.words.contains(&w) {
                    kept.push(w);
                } else {
                    dropped_words.push(w);
                }
            }
            *store = kept;
        }
        Collapsed {
            dropped_patterns,
            dropped_words,
        }
    }
}

/// A composed utterance plus what composing it added to the speaker.
#[derive(Debug, Clone)]
pub struct Utterance {
    pub sentence: Sentence,
    /// Fresh words invented (and kept) while composing.
    pub invented: Vec<Word>,
    /// Pattern adopted from the global set by an empty pattern store.
    pub adopted_pattern: Option<PatternId>,
}

/// What hearing a sentence did to the hearer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HearOutcome {
    /// The hearer already knew the whole sentence; nothing was changed.
    Consensus,
    /// Something was missing; the gaps were learned.
    Learned {
        /// Whether the pattern itself was new.
        pattern: bool,
        /// The words that were actually added (absent ones only).
        words: Vec<Word>,
    },
}

impl HearOutcome {
    pub fn is_consensus(&self) -> bool {
        matches!(self, HearOutcome::Consensus)
    }

    pub fn pattern_learned(&self) -> bool {
        matches!(self, HearOutcome::Learned { pattern: true, .. })
    }

    pub fn words_learned(&self) -> usize {
        match self {
            HearOutcome::Consensus => 0,
            HearOutcome::Learned { words, .. } => words.len(),
        }
    }
}

/// What a collapse removed from a memory.
#[derive(Debug, Clone)]
pub struct Collapsed {
    pub dropped_patterns: usize,
    pub dropped_words: Vec<Word>,
}

/// Number of `a`'s words also present in `b` (both duplicate-free).
fn overlap(a: &[Word], b: &[Word]) -> usize {
    a.iter().filter(|w| b.contains(w)).count()
}

/// Probability that one utterance by `speaker` is an exact consensus with
/// `hearer`, marginalized over the speaker's uniform pattern draw:
///
/// sum over speaker patterns q of (1/L^P) · [hearer has q] · rho(q),
///
/// where rho(q) is [`word_agreement_probability`]. For single-store memories
/// this reduces to the shared-word ratio whenever the hearer's store is
/// non-empty (see [`single_word_consensus_probability`]).
pub fn consensus_probability(
    speaker: &AgentMemory,
    hearer: &AgentMemory,
    set: &PatternSet,
) -> Result<f64, AgentError> {
    if speaker.patterns.is_empty() {
        return Err(AgentError::EmptySpeaker);
    }
    let mut total = 0.0;
    for &q in &speaker.patterns {
        if hearer.has_pattern(q) {
            total += word_agreement_probability(speaker, hearer, set, q);
        }
    }
    Ok(total / speaker.patterns.len() as f64)
}

/// The word factor rho for a fixed pattern `q`: the product over `q`'s slots
/// of (shared words / speaker store size), with merged-object slots using the
/// union of the two sub-stores on both counts. A slot whose speaker store is
/// empty contributes factor 0 (the speaker would invent, which can never be
/// an exact match).
pub fn word_agreement_probability(
    speaker: &AgentMemory,
    hearer: &AgentMemory,
    set: &PatternSet,
    q: PatternId,
) -> f64 {
    let mut rho = 1.0;
    for &slot in &set.pattern(q).slots {
        let (shared, len) = match slot {
            Slot::Category(c) => (
                overlap(speaker.store(c), hearer.store(c)),
                speaker.store(c).len(),
            ),
            Slot::MergedObject => {
                let (ci, cd) = set
                    .merged_pair()
                    .expect("validated set: merged slot implies declared pair");
                (
                    overlap(speaker.store(ci), hearer.store(ci))
                        + overlap(speaker.store(cd), hearer.store(cd)),
                    speaker.store(ci).len() + speaker.store(cd).len(),
                )
            }
        };
        if len == 0 {
            return 0.0;
        }
        rho *= shared as f64 / len as f64;
    }
    rho
}

/// Shared patterns over speaker pattern-store size.
pub fn pattern_overlap_ratio(
    speaker: &AgentMemory,
    hearer: &AgentMemory,
) -> Result<f64, AgentError> {
    if speaker.patterns.is_empty() {
        return Err(AgentError::EmptySpeaker);
    }
    let shared = speaker
        .patterns
        .iter()
        .filter(|q| hearer.has_pattern(**q))
        .count();
    Ok(shared as f64 / speaker.patterns.len() as f64)
}

/// Single-word consensus probability: shared names over the speaker's store
/// size. Both memories must have exactly one store and the speaker's must be
/// non-empty.
pub fn single_word_consensus_probability(
    speaker: &AgentMemory,
    hearer: &AgentMemory,
) -> Result<f64, AgentError> {
    if speaker.num_stores() != 1 || hearer.num_stores() != 1 {
        return Err(AgentError::NotSingleStore);
    }
    let store = &speaker.stores[0];
    if store.is_empty() {
        return Err(AgentError::EmptySpeaker);
    }
    Ok(overlap(store, &hearer.stores[0]) as f64 / store.len() as f64)
}

/// Errors from memory construction and the probability oracles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AgentError {
    /// The probability oracles need a speaker with something to say.
    EmptySpeaker,
    /// The single-word oracle applies to one-store memories only.
    NotSingleStore,
    /// Externally supplied memory contents violate the store invariants.
    Inconsistent(String),
}

impl fmt::Display for AgentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentError::EmptySpeaker => write!(f, "speaker memory is empty"),
            AgentError::NotSingleStore => {
                write!(f, "operation requires single-store (single-word) memories")
            }
            AgentError::Inconsistent(msg) => write!(f, "inconsistent memory: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AgentError {}
