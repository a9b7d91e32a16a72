//! Deterministic finite automata with a partial transition map.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, EventId, EventSet};

/// Index of a state inside its [`Automaton`].
pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("state name must be a nonempty token without whitespace: {0:?}")]
    BadStateName(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("nondeterministic transitions from `{state}` on `{event}`")]
    Nondeterministic { state: String, event: String },
}

/// Deterministic automaton `(states, alphabet, transitions, initial, marked)`.
///
/// Transitions are stored densely as `state × event → Option<state>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    initial: StateId,
    marked: Vec<bool>,
    delta: Vec<Vec<Option<StateId>>>,
}

impl Automaton {
    /// One-state automaton with no transitions, unmarked.
    pub fn new(name: impl Into<String>, alphabet: Alphabet, initial: impl Into<String>) -> Self {
        let mut a = Automaton {
            name: name.into(),
            alphabet,
            states: Vec::new(),
            initial: 0,
            marked: Vec::new(),
            delta: Vec::new(),
        };
        a.push_state_unchecked(initial.into());
        a
    }

    pub(crate) fn push_state_unchecked(&mut self, name: String) -> StateId {
        let id = self.states.len();
        self.states.push(name);
        self.marked.push(false);
        self.delta.push(vec![None; self.alphabet.len()]);
        id
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> Result<StateId, AutomatonError> {
        let name = name.into();
        if name.is_empty() || name.chars().any(char::is_whitespace) || name.starts_with('#') {
            return Err(AutomatonError::BadStateName(name));
        }
        if self.states.contains(&name) {
            return Err(AutomatonError::DuplicateState(name));
        }
        Ok(self.push_state_unchecked(name))
    }

    /// Adds `src --event--> dst`; re-adding the same edge is a no-op.
    pub fn add_transition(&mut self, src: StateId, event: EventId, dst: StateId) -> Result<(), AutomatonError> {
        match self.delta[src][event] {
            Some(existing) if existing != dst => Err(AutomatonError::Nondeterministic {
                state: self.states[src].clone(),
                event: self.alphabet.name(event).to_string(),
            }),
            _ => {
                self.delta[src][event] = Some(dst);
                Ok(())
            }
        }
    }

    pub fn set_marked(&mut self, state: StateId, marked: bool) {
        self.marked[state] = marked;
    }

    pub fn set_initial(&mut self, state: StateId) {
        self.initial = state;
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.states.len()
    }

    pub fn state_name(&self, state: StateId) -> &str {
        &self.states[state]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_marked(&self, state: StateId) -> bool {
        self.marked[state]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states().filter(|&s| self.marked[s])
    }

    pub fn next(&self, state: StateId, event: EventId) -> Option<StateId> {
        self.delta[state][event]
    }

    /// Iterates `(event, target)` pairs leaving `state`, in event order.
    pub fn successors(&self, state: StateId) -> impl Iterator<Item = (EventId, StateId)> + '_ {
        self.delta[state]
            .iter()
            .enumerate()
            .filter_map(|(e, t)| t.map(|t| (e, t)))
    }

    /// Iterates all transitions `(src, event, dst)` in state then event order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        self.states()
            .flat_map(move |s| self.successors(s).map(move |(e, t)| (s, e, t)))
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions().count()
    }

    /// Events with a defined transition at `state`.
    pub fn enabled(&self, state: StateId) -> EventSet {
        EventSet::from_ids(self.alphabet.len(), self.successors(state).map(|(e, _)| e))
    }

    /// Runs `word` from `from`; `None` if some step is undefined.
    pub fn run_from(&self, from: StateId, word: &[EventId]) -> Option<StateId> {
        word.iter().try_fold(from, |s, &e| self.next(s, e))
    }

    pub fn run(&self, word: &[EventId]) -> Option<StateId> {
        self.run_from(self.initial, word)
    }

    pub fn accepts(&self, word: &[EventId]) -> bool {
        self.run(word).is_some_and(|s| self.marked[s])
    }

    /// Same automaton over an alphabet that differs at most in attribute
    /// bits (names and order must match).
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Automaton {
        assert_eq!(alphabet.len(), self.alphabet.len());
        debug_assert!(self
            .alphabet
            .events()
            .iter()
            .zip(alphabet.events())
            .all(|(a, b)| a.name == b.name));
        Automaton {
            alphabet,
            ..self.clone()
        }
    }

    /// Renames states through `f`; the caller keeps names unique.
    pub fn rename_states(&self, mut f: impl FnMut(StateId, &str) -> String) -> Automaton {
        let mut out = self.clone();
        for (i, n) in out.states.iter_mut().enumerate() {
            *n = f(i, n);
        }
        out
    }

    /// Returns true if every state is reachable from the initial state.
    pub fn is_reachable(&self) -> bool {
        reachable_order(self).len() == self.num_states()
    }

    pub(crate) fn name_index(&self) -> HashMap<&str, StateId> {
        self.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
    }
}

/// Breadth-first discovery order from the initial state, events in alphabet
/// order.
pub(crate) fn reachable_order(a: &Automaton) -> Vec<StateId> {
    let mut seen = vec![false; a.num_states()];
    let mut order = vec![a.initial()];
    seen[a.initial()] = true;
    let mut head = 0;
    while head < order.len() {
        let s = order[head];
        head += 1;
        for (_, t) in a.successors(s) {
            if !seen[t] {
                seen[t] = true;
                order.push(t);
            }
        }
    }
    order
}
