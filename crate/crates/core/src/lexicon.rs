//! Word categories, sentence patterns, and pattern sets.
//!
//! A [`PatternSet`] fixes the grammar of a game: the word categories agents
//! keep separate stores for, and the patterns (ordered slot sequences) that
//! form valid sentences. Two categories may be declared as the indirect and
//! direct object sub-roles; patterns can then use a merged object slot that
//! accepts words of either sub-category, while other patterns keep addressing
//! the sub-stores independently.
//!
//! Words are opaque: a [`Word`] is a globally unique id tagged with its
//! category, handed out by a [`WordCounter`]. A [`Sentence`] is a pattern id
//! plus one word per slot.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Index of a category within its [`PatternSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CategoryId(pub u8);

impl CategoryId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of a pattern within its [`PatternSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternId(pub u8);

impl PatternId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Object sub-role of a category, if it has one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectRole {
    Indirect,
    Direct,
}

/// A word category: one memory store per agent.
#[derive(Debug, Clone)]
pub struct Category {
    pub label: String,
    /// Set on exactly the two object sub-categories, `None` elsewhere.
    pub object_role: Option<ObjectRole>,
}

/// One position in a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// Accepts words of exactly this category.
    Category(CategoryId),
    /// Accepts words of either object sub-category.
    MergedObject,
}

/// A grammatical pattern: a labelled, ordered sequence of slots.
///
/// Equality is defined by the slot sequence alone; labels are display names.
#[derive(Debug, Clone, Eq)]
pub struct Pattern {
    pub label: String,
    pub slots: Vec<Slot>,
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.slots == other.slots
    }
}

/// A reporting group: the categories folded into one column of the
/// population metrics. Every category forms its own group except the two
/// object sub-categories, which report together under the label `object`.
#[derive(Debug, Clone)]
pub struct ReportGroup {
    pub label: String,
    pub categories: Vec<CategoryId>,
}

/// Label under which the two object sub-categories report together.
pub const OBJECT_GROUP_LABEL: &str = "object";

/// A validated set of categories and patterns.
#[derive(Debug, Clone)]
pub struct PatternSet {
    name: String,
    categories: Vec<Category>,
    patterns: Vec<Pattern>,
    groups: Vec<ReportGroup>,
    /// `(indirect, direct)` ids when the object sub-roles are declared.
    merged: Option<(CategoryId, CategoryId)>,
}

impl PatternSet {
    /// Validates and builds a pattern set.
    ///
    /// Rejects duplicate or empty labels, object roles that do not come as
    /// one indirect + one direct pair, merged slots without that pair,
    /// empty or duplicate patterns, and any pair of patterns a sentence
    /// could match simultaneously (same length, overlapping accepted
    /// categories at every position).
    pub fn new(
        name: impl Into<String>,
        categories: Vec<Category>,
        patterns: Vec<Pattern>,
    ) -> Result<Self, LexiconError> {
        let name = name.into();
        if categories.is_empty() || categories.len() > u8::MAX as usize {
            return Err(LexiconError::InvalidSet(format!(
                "need between 1 and {} categories, got {}",
                u8::MAX,
                categories.len()
            )));
        }
        if patterns.is_empty() || patterns.len() > u8::MAX as usize {
            return Err(LexiconError::InvalidSet(format!(
                "need between 1 and {} patterns, got {}",
                u8::MAX,
                patterns.len()
            )));
        }
        for (i, c) in categories.iter().enumerate() {
            if c.label.is_empty() {
                return Err(LexiconError::InvalidSet("empty category label".into()));
            }
            if categories[..i].iter().any(|o| o.label == c.label) {
                return Err(LexiconError::InvalidSet(format!(
                    "duplicate category label `{}`",
                    c.label
                )));
            }
        }

        let indirect: Vec<usize> = (0..categories.len())
            .filter(|&i| categories[i].object_role == Some(ObjectRole::Indirect))
            .collect();
        let direct: Vec<usize> = (0..categories.len())
            .filter(|&i| categories[i].object_role == Some(ObjectRole::Direct))
            .collect();
        let merged = match (indirect.as_slice(), direct.as_slice()) {
            ([], []) => None,
            ([i], [d]) => Some((CategoryId(*i as u8), CategoryId(*d as u8))),
            _ => {
                return Err(LexiconError::InvalidSet(
                    "object roles must be declared as exactly one indirect + one direct category"
                        .into(),
                ))
            }
        };
        if merged.is_some()
            && categories
                .iter()
                .any(|c| c.object_role.is_none() && c.label == OBJECT_GROUP_LABEL)
        {
            return Err(LexiconError::InvalidSet(format!(
                "category label `{OBJECT_GROUP_LABEL}` collides with the merged object group"
            )));
        }

        for (i, p) in patterns.iter().enumerate() {
            if p.label.is_empty() {
                return Err(LexiconError::InvalidSet("empty pattern label".into()));
            }
            if patterns[..i].iter().any(|o| o.label == p.label) {
                return Err(LexiconError::InvalidSet(format!(
                    "duplicate pattern label `{}`",
                    p.label
                )));
            }
            if p.slots.is_empty() {
                return Err(LexiconError::InvalidSet(format!(
                    "pattern `{}` has no slots",
                    p.label
                )));
            }
            for slot in &p.slots {
                match slot {
                    Slot::Category(c) if c.index() >= categories.len() => {
                        return Err(LexiconError::InvalidSet(format!(
                            "pattern `{}` references unknown category {}",
                            p.label, c.0
                        )));
                    }
                    Slot::MergedObject if merged.is_none() => {
                        return Err(LexiconError::InvalidSet(format!(
                            "pattern `{}` uses a merged object slot but no object \
                             sub-categories are declared",
                            p.label
                        )));
                    }
                    _ => {}
                }
            }
        }
        // A sentence is classified by its word categories alone, so no two
        // patterns of equal length may accept a common category at every
        // position (equal slot sequences are the degenerate case).
        for i in 0..patterns.len() {
            for j in i + 1..patterns.len() {
                let (a, b) = (&patterns[i], &patterns[j]);
                if a.slots.len() != b.slots.len() {
                    continue;
                }
                let overlap_everywhere = a
                    .slots
                    .iter()
                    .zip(&b.slots)
                    .all(|(x, y)| slots_overlap(*x, *y, merged));
                if overlap_everywhere {
                    return Err(LexiconError::InvalidSet(format!(
                        "patterns `{}` and `{}` are indistinguishable by word categories",
                        a.label, b.label
                    )));
                }
            }
        }

        let mut groups: Vec<ReportGroup> = Vec::new();
        for (i, c) in categories.iter().enumerate() {
            match c.object_role {
                None => groups.push(ReportGroup {
                    label: c.label.clone(),
                    categories: alloc::vec![CategoryId(i as u8)],
                }),
                Some(_) => {
                    // Both sub-categories report as one `object` group,
                    // placed where the first of them is declared.
                    if !groups.iter().any(|g| g.label == OBJECT_GROUP_LABEL) {
                        let (mi, md) = merged.expect("object role implies merged pair");
                        groups.push(ReportGroup {
                            label: OBJECT_GROUP_LABEL.to_string(),
                            categories: alloc::vec![mi, md],
                        });
                    }
                }
            }
        }

        Ok(Self {
            name,
            categories,
            patterns,
            groups,
            merged,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn num_categories(&self) -> usize {
        self.categories.len()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn num_patterns(&self) -> usize {
        self.patterns.len()
    }

    pub fn pattern(&self, id: PatternId) -> &Pattern {
        &self.patterns[id.index()]
    }

    pub fn category(&self, id: CategoryId) -> &Category {
        &self.categories[id.index()]
    }

    /// `(indirect, direct)` sub-category ids, when declared.
    pub fn merged_pair(&self) -> Option<(CategoryId, CategoryId)> {
        self.merged
    }

    /// The reporting groups, in category declaration order.
    pub fn groups(&self) -> &[ReportGroup] {
        &self.groups
    }

    pub fn category_by_label(&self, label: &str) -> Option<CategoryId> {
        self.categories
            .iter()
            .position(|c| c.label == label)
            .map(|i| CategoryId(i as u8))
    }

    pub fn pattern_by_label(&self, label: &str) -> Option<PatternId> {
        self.patterns
            .iter()
            .position(|p| p.label == label)
            .map(|i| PatternId(i as u8))
    }

    /// Whether `slot` accepts words of `category`.
    pub fn slot_accepts(&self, slot: Slot, category: CategoryId) -> bool {
        match slot {
            Slot::Category(c) => c == category,
            Slot::MergedObject => self.categories[category.index()].object_role.is_some(),
        }
    }

    /// Classifies a word sequence by its categories alone.
    ///
    /// Set validation guarantees at most one pattern matches; a sequence
    /// matching none is malformed for this set.
    pub fn pattern_of(&self, sentence: &Sentence) -> Result<PatternId, LexiconError> {
        for (i, p) in self.patterns.iter().enumerate() {
            if p.slots.len() == sentence.words.len()
                && p.slots
                    .iter()
                    .zip(&sentence.words)
                    .all(|(&slot, w)| self.slot_accepts(slot, w.category))
            {
                return Ok(PatternId(i as u8));
            }
        }
        Err(LexiconError::MalformedSentence(
            "word categories match no pattern".into(),
        ))
    }

    /// Checks that a sentence is well-formed: its pattern id exists and each
    /// word's category is accepted by the corresponding slot.
    pub fn validate_sentence(&self, sentence: &Sentence) -> Result<(), LexiconError> {
        let Some(pattern) = self.patterns.get(sentence.pattern.index()) else {
            return Err(LexiconError::MalformedSentence(format!(
                "unknown pattern id {}",
                sentence.pattern.0
            )));
        };
        if pattern.slots.len() != sentence.words.len() {
            return Err(LexiconError::MalformedSentence(format!(
                "pattern `{}` has {} slots but the sentence carries {} words",
                pattern.label,
                pattern.slots.len(),
                sentence.words.len()
            )));
        }
        for (i, (&slot, w)) in pattern.slots.iter().zip(&sentence.words).enumerate() {
            if !self.slot_accepts(slot, w.category) {
                return Err(LexiconError::MalformedSentence(format!(
                    "word {} of pattern `{}` has category `{}`, not accepted at that position",
                    i + 1,
                    pattern.label,
                    self.categories[w.category.index()].label
                )));
            }
        }
        Ok(())
    }
}

fn slots_overlap(a: Slot, b: Slot, merged: Option<(CategoryId, CategoryId)>) -> bool {
    let accepts = |s: Slot, c: CategoryId| match s {
        Slot::Category(x) => x == c,
        Slot::MergedObject => {
            let (i, d) = merged.expect("merged slot implies declared pair");
            c == i || c == d
        }
    };
    match (a, b) {
        (Slot::Category(x), _) => accepts(b, x),
        (_, Slot::Category(y)) => accepts(a, y),
        (Slot::MergedObject, Slot::MergedObject) => true,
    }
}

/// A word: globally unique id plus the category it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub id: u64,
    pub category: CategoryId,
}

/// Hands out fresh word ids, monotonically increasing from zero.
///
/// One counter serves a whole population, so ids double as invention order.
#[derive(Debug, Clone, Default)]
pub struct WordCounter {
    next: u64,
}

impl WordCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Resumes issuing at `next`, for restoring externally stored state.
    /// Every word id already in circulation must be below `next`.
    pub fn starting_at(next: u64) -> Self {
        Self { next }
    }

    pub fn invent(&mut self, category: CategoryId) -> Word {
        let id = self.next;
        self.next += 1;
        Word { id, category }
    }

    /// Number of words invented so far (also the next id to be issued).
    pub fn issued(&self) -> u64 {
        self.next
    }
}

/// An utterable sentence: a pattern plus one word per slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub pattern: PatternId,
    pub words: Vec<Word>,
}

impl Sentence {
    /// Builds a sentence, validating it against `set`.
    pub fn new(set: &PatternSet, pattern: PatternId, words: Vec<Word>) -> Result<Self, LexiconError> {
        let s = Self { pattern, words };
        set.validate_sentence(&s)?;
        Ok(s)
    }
}

/// Errors raised by pattern-set construction and sentence validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconError {
    /// The categories/patterns do not form a valid set.
    InvalidSet(String),
    /// A sentence does not fit the set it was interpreted against.
    MalformedSentence(String),
    /// No built-in pattern set has this name.
    UnknownSet(String),
}

impl fmt::Display for LexiconError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconError::InvalidSet(msg) => write!(f, "invalid pattern set: {msg}"),
            LexiconError::MalformedSentence(msg) => write!(f, "malformed sentence: {msg}"),
            LexiconError::UnknownSet(name) => write!(f, "unknown pattern set `{name}`"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LexiconError {}

fn cat(label: &str) -> Category {
    Category {
        label: label.to_string(),
        object_role: None,
    }
}

fn pattern(label: &str, slots: Vec<Slot>) -> Pattern {
    Pattern {
        label: label.to_string(),
        slots,
    }
}

/// The five-pattern English sentence grammar.
///
/// Categories: subject, verb, the two object sub-roles, complement. Patterns:
/// subject+verb; subject+verb+object (merged); subject+verb+complement;
/// subject+verb+indirect object+direct object; subject+verb+object (merged)
/// +complement.
pub fn english5() -> PatternSet {
    use Slot::{Category as C, MergedObject as M};
    let s = CategoryId(0);
    let v = CategoryId(1);
    let oi = CategoryId(2);
    let od = CategoryId(3);
    let c = CategoryId(4);
    PatternSet::new(
        "english5",
        alloc::vec![
            cat("subject"),
            cat("verb"),
            Category {
                label: "object.i".to_string(),
                object_role: Some(ObjectRole::Indirect),
            },
            Category {
                label: "object.d".to_string(),
                object_role: Some(ObjectRole::Direct),
            },
            cat("complement"),
        ],
        alloc::vec![
            pattern("P1", alloc::vec![C(s), C(v)]),
            pattern("P2", alloc::vec![C(s), C(v), M]),
            pattern("P3", alloc::vec![C(s), C(v), C(c)]),
            pattern("P4", alloc::vec![C(s), C(v), C(oi), C(od)]),
            pattern("P5", alloc::vec![C(s), C(v), M, C(c)]),
        ],
    )
    .expect("built-in set is valid")
}

/// The degenerate single-word grammar: one category, one single-slot pattern.
///
/// With it the sentence game reduces exactly to the classic naming game.
pub fn single_word() -> PatternSet {
    PatternSet::new(
        "single-word",
        alloc::vec![cat("name")],
        alloc::vec![pattern("N", alloc::vec![Slot::Category(CategoryId(0))])],
    )
    .expect("built-in set is valid")
}

/// The five structural test sets used to probe which patterns can win.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestSet {
    A,
    B,
    C,
    D,
    E,
}

/// Builds one of the structural test sets.
///
/// All use plain categories `Tc1..TcN` (no object roles) and patterns
/// `TP1..TPn` given as category sequences:
///
/// * A — 2 categories; TP1 = Tc1+Tc2, TP2 = Tc2+Tc1.
/// * B — 3 categories; all six orderings of (Tc1,Tc2,Tc3).
/// * C — 4 categories; TP1 = Tc1+Tc2, TP2 = Tc2+Tc3, TP3 = Tc3+Tc1,
///   TP4 = Tc2+Tc1+Tc4+Tc3 — none of TP1..TP3 appears in TP4 as a
///   contiguous run.
/// * D — like C but TP4 = Tc1+Tc2+Tc3+Tc4, so TP1 is TP4's prefix.
/// * E — 5 categories; TP1 = Tc1+Tc2, TP2 = Tc2+Tc1, TP3 = Tc3+Tc4+Tc5 —
///   TP3 shares no category with TP1/TP2.
pub fn test_set(which: TestSet) -> PatternSet {
    let (name, ncats, seqs): (&str, usize, &[&[u8]]) = match which {
        TestSet::A => ("A", 2, &[&[0, 1], &[1, 0]]),
        TestSet::B => (
            "B",
            3,
            &[
                &[0, 1, 2],
                &[0, 2, 1],
                &[1, 0, 2],
                &[1, 2, 0],
                &[2, 0, 1],
                &[2, 1, 0],
            ],
        ),
        TestSet::C => ("C", 4, &[&[0, 1], &[1, 2], &[2, 0], &[1, 0, 3, 2]]),
        TestSet::D => ("D", 4, &[&[0, 1], &[1, 2], &[2, 0], &[0, 1, 2, 3]]),
        TestSet::E => ("E", 5, &[&[0, 1], &[1, 0], &[2, 3, 4]]),
    };
    let categories = (1..=ncats).map(|i| cat(&format!("Tc{i}"))).collect();
    let patterns = seqs
        .iter()
        .enumerate()
        .map(|(i, seq)| {
            pattern(
                &format!("TP{}", i + 1),
                seq.iter().map(|&c| Slot::Category(CategoryId(c))).collect(),
            )
        })
        .collect();
    PatternSet::new(name, categories, patterns).expect("built-in set is valid")
}

/// Looks up a built-in pattern set by name: `english5`, `single-word`, or a
/// test-set letter `A`..`E`.
pub fn builtin(name: &str) -> Result<PatternSet, LexiconError> {
    match name {
        "english5" => Ok(english5()),
        "single-word" => Ok(single_word()),
        "A" | "a" => Ok(test_set(TestSet::A)),
        "B" | "b" => Ok(test_set(TestSet::B)),
        "C" | "c" => Ok(test_set(TestSet::C)),
        "D" | "d" => Ok(test_set(TestSet::D)),
        "E" | "e" => Ok(test_set(TestSet::E)),
        _ => Err(LexiconError::UnknownSet(name.into())),
    }
}
