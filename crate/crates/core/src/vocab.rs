use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::unit::TreePieceUnit;

/// Slack allowed on the simplex sum when a vocabulary is built from
/// externally supplied probabilities.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// Bare vocabularies key units by plain shape; decorated ones by the shape
/// including placeholder positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Bare,
    Decorated,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Bare => "bare",
            Phase::Decorated => "decorated",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "bare" => Some(Phase::Bare),
            "decorated" => Some(Phase::Decorated),
            _ => None,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitId(pub u32);

impl UnitId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VocabEntry {
    pub unit: TreePieceUnit,
    pub freq: u64,
    pub prob: f64,
}

/// Unit set with frequencies and a probability simplex. Entries are kept
/// sorted by canonical string, so ids are stable for a given unit set.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    phase: Phase,
    entries: Vec<VocabEntry>,
    index: HashMap<String, UnitId>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.phase == other.phase && self.entries == other.entries
    }
}

impl Vocabulary {
    pub fn new(phase: Phase, mut entries: Vec<VocabEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        entries.sort_by(|a, b| a.unit.canonical().cmp(b.unit.canonical()));
        let mut index = HashMap::with_capacity(entries.len());
        let mut sum = 0.0;
        for (i, e) in entries.iter().enumerate() {
            if phase == Phase::Bare && !e.unit.is_bare() {
                return Err(Error::CorruptVocabFile(format!(
                    "placeholder unit {} in a bare vocabulary",
                    e.unit
                )));
            }
            if !(e.prob.is_finite() && e.prob >= 0.0) {
                return Err(Error::CorruptVocabFile(format!(
                    "invalid probability {} for {}",
                    e.prob, e.unit
                )));
            }
            sum += e.prob;
            if index
                .insert(e.unit.canonical().to_string(), UnitId(i as u32))
                .is_some()
            {
                return Err(Error::CorruptVocabFile(format!(
                    "duplicate unit {}",
                    e.unit
                )));
            }
        }
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::CorruptVocabFile(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(Vocabulary {
            phase,
            entries,
            index,
        })
    }

    /// Builds a vocabulary whose simplex is the normalized frequency.
    pub fn from_frequencies(
        phase: Phase,
        counts: impl IntoIterator<Item = (TreePieceUnit, u64)>,
    ) -> Result<Self> {
        let counts: Vec<(TreePieceUnit, u64)> = counts.into_iter().collect();
        if counts.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let total: u64 = counts.iter().map(|(_, f)| f).sum();
        if total == 0 {
            return Err(Error::EmptyCorpus);
        }
        let entries = counts
            .into_iter()
            .map(|(unit, freq)| VocabEntry {
                unit,
                freq,
                prob: freq as f64 / total as f64,
            })
            .collect();
        Self::new(phase, entries)
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn entry(&self, id: UnitId) -> &VocabEntry {
        &self.entries[id.index()]
    }

    pub fn unit(&self, id: UnitId) -> &TreePieceUnit {
        &self.entries[id.index()].unit
    }

    pub fn prob(&self, id: UnitId) -> f64 {
        self.entries[id.index()].prob
    }

    pub fn freq(&self, id: UnitId) -> u64 {
        self.entries[id.index()].freq
    }

    pub fn id(&self, canonical: &str) -> Option<UnitId> {
        self.index.get(canonical).copied()
    }

    pub fn contains(&self, unit: &TreePieceUnit) -> bool {
        self.index.contains_key(unit.canonical())
    }

    /// Vocabulary id of a decorated partition unit under this phase.
    pub fn id_of(&self, unit: &TreePieceUnit) -> Option<UnitId> {
        match self.phase {
            Phase::Decorated => self.id(unit.canonical()),
            Phase::Bare => self.id(unit.bare().canonical()),
        }
    }

    pub fn ids(&self) -> impl Iterator<Item = UnitId> {
        (0..self.entries.len() as u32).map(UnitId)
    }

    pub fn simplex_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.prob).sum()
    }

    /// Replaces frequencies and simplex together, indexed by id.
    pub(crate) fn set_counts(&mut self, freq: &[u64], prob: &[f64]) {
        debug_assert_eq!(freq.len(), self.entries.len());
        for ((e, &f), &p) in self.entries.iter_mut().zip(freq).zip(prob) {
            e.freq = f;
            e.prob = p;
        }
    }
}
