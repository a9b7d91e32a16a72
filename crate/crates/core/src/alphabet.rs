//! Event alphabets with controllability and observability attributes.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

/// Index of an event inside its [`Alphabet`].
pub type EventId = usize;

/// A string over an alphabet, as a sequence of event indices.
pub type Word = Vec<EventId>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    pub name: String,
    pub controllable: bool,
    pub observable: bool,
}

/// Ordered event list. Two alphabets are equal only if names, attribute bits
/// and order all coincide.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    events: Vec<Event>,
    index: HashMap<String, EventId>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.events == other.events
    }
}

impl Eq for Alphabet {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphabetError {
    #[error("event name must be a nonempty token without whitespace: {0:?}")]
    BadName(String),
    #[error("duplicate event `{0}`")]
    Duplicate(String),
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alphabet from `(name, controllable, observable)` triples.
    pub fn from_events<I, S>(events: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = (S, bool, bool)>,
        S: Into<String>,
    {
        let mut alphabet = Self::new();
        for (name, c, o) in events {
            alphabet.push(name, c, o)?;
        }
        Ok(alphabet)
    }

    pub fn push(
        &mut self,
        name: impl Into<String>,
        controllable: bool,
        observable: bool,
    ) -> Result<EventId, AlphabetError> {
        let name = name.into();
        if name.is_empty() || name.chars().any(char::is_whitespace) || name.starts_with('#') {
            return Err(AlphabetError::BadName(name));
        }
        if self.index.contains_key(&name) {
            return Err(AlphabetError::Duplicate(name));
        }
        let id = self.events.len();
        self.index.insert(name.clone(), id);
        self.events.push(Event {
            name,
            controllable,
            observable,
        });
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id]
    }

    pub fn name(&self, id: EventId) -> &str {
        &self.events[id].name
    }

    pub fn id(&self, name: &str) -> Option<EventId> {
        self.index.get(name).copied()
    }

    pub fn ids(&self) -> std::ops::Range<EventId> {
        0..self.events.len()
    }

    pub fn is_controllable(&self, id: EventId) -> bool {
        self.events[id].controllable
    }

    pub fn is_observable(&self, id: EventId) -> bool {
        self.events[id].observable
    }

    pub fn controllable(&self) -> EventSet {
        self.filter(|e| e.controllable)
    }

    pub fn uncontrollable(&self) -> EventSet {
        self.filter(|e| !e.controllable)
    }

    pub fn observable(&self) -> EventSet {
        self.filter(|e| e.observable)
    }

    pub fn unobservable(&self) -> EventSet {
        self.filter(|e| !e.observable)
    }

    fn filter(&self, pred: impl Fn(&Event) -> bool) -> EventSet {
        let mut set = EventSet::empty(self.len());
        for (id, e) in self.events.iter().enumerate() {
            if pred(e) {
                set.insert(id);
            }
        }
        set
    }

    /// Same names, order and controllability; observability may differ.
    pub fn same_up_to_observation(&self, other: &Alphabet) -> bool {
        self.events.len() == other.events.len()
            && self
                .events
                .iter()
                .zip(&other.events)
                .all(|(a, b)| a.name == b.name && a.controllable == b.controllable)
    }

    /// Copy of this alphabet with every event observable.
    pub fn fully_observed(&self) -> Alphabet {
        let mut out = self.clone();
        for e in &mut out.events {
            e.observable = true;
        }
        out
    }

    /// Copy of this alphabet with the observability of `id` replaced.
    pub fn with_observable(&self, id: EventId, observable: bool) -> Alphabet {
        let mut out = self.clone();
        out.events[id].observable = observable;
        out
    }

    /// Renders a word as space-separated event names, `ε` for the empty word.
    pub fn format_word(&self, word: &[EventId]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        word.iter().map(|&e| self.name(e)).collect::<Vec<_>>().join(" ")
    }

    pub fn format_set(&self, set: &EventSet) -> String {
        let names: Vec<&str> = set.iter().map(|e| self.name(e)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Parses a space-separated list of event names; `ε` or the empty string
    /// is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, String> {
        text.split_whitespace()
            .filter(|t| *t != "ε")
            .map(|t| self.id(t).ok_or_else(|| t.to_string()))
            .collect()
    }
}

/// Set of events of a fixed alphabet, ordered by event index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EventSet(FixedBitSet);

impl EventSet {
    pub fn empty(alphabet_len: usize) -> Self {
        EventSet(FixedBitSet::with_capacity(alphabet_len))
    }

    pub fn from_ids(alphabet_len: usize, ids: impl IntoIterator<Item = EventId>) -> Self {
        let mut set = Self::empty(alphabet_len);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn insert(&mut self, id: EventId) {
        self.0.insert(id);
    }

    pub fn contains(&self, id: EventId) -> bool {
        self.0.contains(id)
    }

    pub fn is_empty(&self) -> bool {
        self.0.count_ones(..) == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn iter(&self) -> impl Iterator<Item = EventId> + '_ {
        self.0.ones()
    }

    pub fn union_with(&mut self, other: &EventSet) {
        self.0.union_with(&other.0);
    }

    pub fn is_subset(&self, other: &EventSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &EventSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Smallest event in both sets.
    pub fn first_common(&self, other: &EventSet) -> Option<EventId> {
        self.0.intersection(&other.0).next()
    }

    /// Smallest event in `self` but not in `other`.
    pub fn first_missing_from(&self, other: &EventSet) -> Option<EventId> {
        self.0.difference(&other.0).next()
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
