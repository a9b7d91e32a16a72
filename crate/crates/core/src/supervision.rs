//! Feasibility checks, per-state control data, the compatibility relation,
//! control equivalence and normality.
//!
//! Everything that depends on the plant is read off the reachable part of
//! the synchronous product `G||S`: a supervisor state `z` collects data from
//! every product state `(x, z)`.

use std::fmt::Write as _;

use crate::alphabet::{Alphabet, EventId, EventSet};
use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};
use crate::morphism::{language_equivalent, Verdict};
use crate::ops::{require_same_alphabet, sync_product_pairs};
use crate::search::Bfs;

/// Structural control existence: every state enables all uncontrollable
/// events. The witness is the first violating state.
pub fn check_control_existence(s: &Automaton) -> Verdict<StateId> {
    let uc = s.alphabet().uncontrollable();
    match s.states().find(|&z| !uc.is_subset(&s.enabled(z))) {
        Some(z) => Verdict::no(z),
        None => Verdict::yes(),
    }
}

/// Control existence relative to a plant: along every string of `L(G||S)`,
/// an uncontrollable event the plant can execute is also enabled by `s`.
/// The witness is a shortest string `tσ` with `t ∈ L(G||S)`, `σ`
/// uncontrollable, `tσ ∈ L(G)` and `tσ ∉ L(S)`.
pub fn check_control_existence_under(g: &Automaton, s: &Automaton) -> Result<Verdict> {
    require_same_alphabet(g, s)?;
    let uc = g.alphabet().uncontrollable();
    let mut bfs = Bfs::new((g.initial(), s.initial()));
    while let Some((i, (x, z))) = bfs.pop() {
        for e in g.alphabet().ids() {
            match (g.next(x, e), s.next(z, e)) {
                (Some(x2), Some(z2)) => {
                    bfs.visit(i, e, (x2, z2));
                }
                (Some(_), None) if uc.contains(e) => return Ok(Verdict::no(bfs.word_then(i, e))),
                _ => {}
            }
        }
    }
    Ok(Verdict::yes())
}

/// Structural control feasibility: unobservable events occur only as
/// selfloops. For a deterministic supervisor this is equivalent to sending
/// observation-equivalent strings to the same state. The witness is the first
/// offending transition `(state, event)`.
pub fn check_control_feasibility(s: &Automaton) -> Verdict<(StateId, EventId)> {
    let alpha = s.alphabet();
    match s.transitions().find(|&(z, e, t)| !alpha.is_observable(e) && z != t) {
        Some((z, e, _)) => Verdict::no((z, e)),
        None => Verdict::yes(),
    }
}

/// Fails with [`Error::Infeasible`] unless `s` is a feasible supervisor of
/// `g` (plant-relative control existence and control feasibility).
pub fn require_feasible(g: &Automaton, s: &Automaton) -> Result<()> {
    let existence = check_control_existence_under(g, s)?;
    if let Some(w) = existence.witness {
        let e = *w.last().expect("witness ends in the disabled event");
        return Err(Error::Infeasible {
            name: s.name().to_string(),
            reason: format!(
                "uncontrollable `{}` disabled after `{}`",
                s.alphabet().name(e),
                s.alphabet().format_word(&w[..w.len() - 1])
            ),
        });
    }
    if let Some((z, e)) = check_control_feasibility(s).witness {
        return Err(Error::Infeasible {
            name: s.name().to_string(),
            reason: format!(
                "unobservable `{}` leaves state `{}`",
                s.alphabet().name(e),
                s.state_name(z)
            ),
        });
    }
    Ok(())
}

/// Per-state control information of a supervisor with respect to a plant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlData {
    alphabet: Alphabet,
    state_names: Vec<String>,
    enabled: Vec<EventSet>,
    disabled: Vec<EventSet>,
    marked_s: Vec<bool>,
    marked_g: Vec<bool>,
    visited: Vec<bool>,
}

impl ControlData {
    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_name(&self, z: StateId) -> &str {
        &self.state_names[z]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name)
    }

    /// `En(z)`: events with a transition at `z`.
    pub fn enabled(&self, z: StateId) -> &EventSet {
        &self.enabled[z]
    }

    /// `D(z)`: events undefined at `z` that the plant can execute after some
    /// closed-loop string leading to `z`.
    pub fn disabled(&self, z: StateId) -> &EventSet {
        &self.disabled[z]
    }

    /// `M(z)`: some string of `Lm(G||S)` leads to `z`.
    pub fn marked_s(&self, z: StateId) -> bool {
        self.marked_s[z]
    }

    /// `T(z)`: some string of `Lm(G)` (and `L(S)`) leads to `z`.
    pub fn marked_g(&self, z: StateId) -> bool {
        self.marked_g[z]
    }

    /// Whether `z` occurs in the reachable closed loop at all.
    pub fn reachable_in_loop(&self, z: StateId) -> bool {
        self.visited[z]
    }

    /// One line per state: `z En={..} D={..} M=bool T=bool`, events in
    /// alphabet order.
    pub fn table(&self) -> String {
        let width = self.state_names.iter().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        for z in 0..self.num_states() {
            let _ = writeln!(
                out,
                "{:<width$} En={} D={} M={} T={}",
                self.state_names[z],
                self.alphabet.format_set(&self.enabled[z]),
                self.alphabet.format_set(&self.disabled[z]),
                self.marked_s[z],
                self.marked_g[z],
            );
        }
        out
    }
}

/// Extracts `(En, D, M, T)` for every state of `s` from the reachable part
/// of `g||s`. States of `s` never visited by the closed loop get empty
/// `D` and false `M`/`T`.
pub fn control_data(g: &Automaton, s: &Automaton) -> Result<ControlData> {
    let (product, pairs) = sync_product_pairs(g, s)?;
    let n = s.num_states();
    let len = s.alphabet().len();
    let mut data = ControlData {
        alphabet: s.alphabet().clone(),
        state_names: s.state_names().to_vec(),
        enabled: s.states().map(|z| s.enabled(z)).collect(),
        disabled: vec![EventSet::empty(len); n],
        marked_s: vec![false; n],
        marked_g: vec![false; n],
        visited: vec![false; n],
    };
    for (p, &(x, z)) in pairs.iter().enumerate() {
        data.visited[z] = true;
        for e in g.alphabet().ids() {
            if g.next(x, e).is_some() && s.next(z, e).is_none() {
                data.disabled[z].insert(e);
            }
        }
        if g.is_marked(x) {
            data.marked_g[z] = true;
            if product.is_marked(p) {
                data.marked_s[z] = true;
            }
        }
    }
    Ok(data)
}

/// Copy of `s` that keeps a state marked only if some string of `Lm(G||S)`
/// ends there. The closed-loop languages are unchanged.
pub fn restrict_marking(g: &Automaton, s: &Automaton) -> Result<Automaton> {
    let data = control_data(g, s)?;
    let mut out = s.clone();
    for z in s.marked_states() {
        if !data.marked_s[z] {
            out.set_marked(z, false);
        }
    }
    Ok(out)
}

/// The relation `R`: no enabled/disabled conflict in either direction, and
/// equal `T` values force equal `M` values.
pub fn compatible(data: &ControlData, z: StateId, z2: StateId) -> Result<bool> {
    for q in [z, z2] {
        if q >= data.num_states() {
            return Err(Error::UnknownState(format!("#{q}")));
        }
    }
    Ok(compatible_unchecked(data, z, z2))
}

pub(crate) fn compatible_unchecked(data: &ControlData, z: StateId, z2: StateId) -> bool {
    data.enabled[z].is_disjoint(&data.disabled[z2])
        && data.enabled[z2].is_disjoint(&data.disabled[z])
        && (data.marked_g[z] != data.marked_g[z2] || data.marked_s[z] == data.marked_s[z2])
}

/// Symmetric, reflexive and generally non-transitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityRelation {
    n: usize,
    matrix: Vec<bool>,
}

impl CompatibilityRelation {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, z: StateId, z2: StateId) -> bool {
        self.matrix[z * self.n + z2]
    }

    /// Unordered compatible pairs `(z, z2)` with `z < z2`.
    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        (0..self.n).flat_map(move |a| ((a + 1)..self.n).filter(move |&b| self.get(a, b)).map(move |b| (a, b)))
    }
}

pub fn compatibility_relation(data: &ControlData) -> CompatibilityRelation {
    let n = data.num_states();
    let mut matrix = vec![false; n * n];
    for a in 0..n {
        for b in a..n {
            let c = compatible_unchecked(data, a, b);
            matrix[a * n + b] = c;
            matrix[b * n + a] = c;
        }
    }
    CompatibilityRelation { n, matrix }
}

/// `L(G||S1) = L(G||S2)` and `Lm(G||S1) = Lm(G||S2)`, with a shortest
/// distinguishing string otherwise.
pub fn control_equivalent(g: &Automaton, s1: &Automaton, s2: &Automaton) -> Result<Verdict> {
    require_same_alphabet(g, s1)?;
    require_same_alphabet(g, s2)?;
    let (l1, _) = sync_product_pairs(g, s1)?;
    let (l2, _) = sync_product_pairs(g, s2)?;
    language_equivalent(&l1, &l2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalityViolation {
    /// A transition of the candidate never exercised by the closed loop.
    UnusedTransition { state: StateId, event: EventId },
    /// A marked state of the candidate reached by no closed-loop marked string.
    UnreachedMarked { state: StateId },
}

impl NormalityViolation {
    pub fn describe(&self, candidate: &Automaton) -> String {
        match *self {
            NormalityViolation::UnusedTransition { state, event } => format!(
                "transition `{}` --{}--> is never exercised",
                candidate.state_name(state),
                candidate.alphabet().name(event)
            ),
            NormalityViolation::UnreachedMarked { state } => format!(
                "marked state `{}` is not reached by any closed-loop marked string",
                candidate.state_name(state)
            ),
        }
    }
}

/// Whether `candidate` is normal with respect to `s`: each of its
/// transitions is used by some closed-loop string of `G||S`, and each of its
/// marked states is reached by some closed-loop marked string.
pub fn is_normal(g: &Automaton, s: &Automaton, candidate: &Automaton) -> Result<Verdict<NormalityViolation>> {
    require_same_alphabet(g, s)?;
    require_same_alphabet(g, candidate)?;
    let mut used = vec![vec![false; g.alphabet().len()]; candidate.num_states()];
    let mut marked_hit = vec![false; candidate.num_states()];
    let mut bfs = Bfs::new((g.initial(), s.initial(), candidate.initial()));
    while let Some((i, (x, z, y))) = bfs.pop() {
        if g.is_marked(x) && s.is_marked(z) {
            marked_hit[y] = true;
        }
        for e in g.alphabet().ids() {
            let (Some(x2), Some(z2)) = (g.next(x, e), s.next(z, e)) else {
                continue;
            };
            if let Some(y2) = candidate.next(y, e) {
                used[y][e] = true;
                bfs.visit(i, e, (x2, z2, y2));
            }
        }
    }
    for (y, e, _) in candidate.transitions() {
        if !used[y][e] {
            return Ok(Verdict::no(NormalityViolation::UnusedTransition { state: y, event: e }));
        }
    }
    if let Some(y) = candidate.marked_states().find(|&y| !marked_hit[y]) {
        return Ok(Verdict::no(NormalityViolation::UnreachedMarked { state: y }));
    }
    Ok(Verdict::yes())
}
