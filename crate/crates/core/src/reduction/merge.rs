//! Pairwise cell merging with closure, shared by the congruence heuristic and
//! the random supervisor generator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{induce_quotient, observer::build_super, Cover, ReductionMode, ReductionReport};
use crate::automaton::{Automaton, StateId};
use crate::error::Result;
use crate::supervision::{
    compatibility_relation, control_data, require_feasible, restrict_marking, CompatibilityRelation,
};

/// A partition of the states of `s` that stays a control congruence: every
/// committed merge is closed under successors and keeps cells compatible.
pub(crate) struct Merger<'a> {
    s: &'a Automaton,
    rel: &'a CompatibilityRelation,
    cell_of: Vec<usize>,
    members: Vec<Vec<StateId>>,
    steps: u64,
}

impl<'a> Merger<'a> {
    pub fn new(s: &'a Automaton, rel: &'a CompatibilityRelation) -> Self {
        let n = s.num_states();
        Merger {
            s,
            rel,
            cell_of: (0..n).collect(),
            members: (0..n).map(|z| vec![z]).collect(),
            steps: 0,
        }
    }

    pub fn same_cell(&self, a: StateId, b: StateId) -> bool {
        self.cell_of[a] == self.cell_of[b]
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Merges the cells of `a` and `b` together with everything the closure
    /// forces; on an incompatible pair nothing changes and `false` is
    /// returned.
    pub fn try_merge(&mut self, a: StateId, b: StateId) -> bool {
        let mut cell_of = self.cell_of.clone();
        let mut members = self.members.clone();
        let mut pending = vec![(a, b)];
        while let Some((p, q)) = pending.pop() {
            let (cp, cq) = (cell_of[p], cell_of[q]);
            if cp == cq {
                continue;
            }
            for &u in &members[cp] {
                for &v in &members[cq] {
                    self.steps += 1;
                    if !self.rel.get(u, v) {
                        return false;
                    }
                }
            }
            let (keep, gone) = (cp.min(cq), cp.max(cq));
            let moved = std::mem::take(&mut members[gone]);
            for &z in &moved {
                cell_of[z] = keep;
            }
            members[keep].extend(moved);
            for e in self.s.alphabet().ids() {
                let mut first: Option<StateId> = None;
                for &z in &members[keep] {
                    self.steps += 1;
                    let Some(t) = self.s.next(z, e) else { continue };
                    match first {
                        None => first = Some(t),
                        Some(f) if cell_of[f] != cell_of[t] => pending.push((f, t)),
                        Some(_) => {}
                    }
                }
            }
        }
        self.cell_of = cell_of;
        self.members = members;
        true
    }

    pub fn cover(&self) -> Cover {
        Cover::from_labels(&self.cell_of)
    }
}

/// Worst-case step count of [`reduce_heuristic`] on `n` states and `m`
/// events: at most `n²/2` attempts, each doing at most `n²/2` compatibility
/// lookups and `n` closure rounds over `n·m` successors.
pub fn heuristic_step_bound(n: usize, m: usize) -> u64 {
    let (n, m) = (n as u64, m as u64);
    let attempts = n * n.saturating_sub(1) / 2;
    attempts.max(1) * (n * n / 2 + n * n * m + 1)
}

/// Greedy control-congruence reduction: tries to merge every state pair in
/// index order, keeping each merge whose closure stays compatible. Marked
/// states no marked closed-loop string reaches are unmarked first, see
/// [`restrict_marking`].
pub fn reduce_heuristic(g: &Automaton, s: &Automaton) -> Result<(Automaton, ReductionReport)> {
    require_feasible(g, s)?;
    let s = &restrict_marking(g, s)?;
    let data = control_data(g, s)?;
    let rel = compatibility_relation(&data);
    let n = s.num_states();
    let mut merger = Merger::new(s, &rel);
    for a in 0..n {
        for b in a + 1..n {
            merger.steps += 1;
            if !merger.same_cell(a, b) && rel.get(a, b) {
                merger.try_merge(a, b);
            }
        }
    }
    let cover = merger.cover();
    let (q, _) = induce_quotient(s, &data, &cover)?;
    let report = ReductionReport {
        input_size: n,
        output_size: q.num_states(),
        cover,
        steps: merger.steps(),
        mode: ReductionMode::Heuristic,
    };
    Ok((q, report))
}

/// A random member of the control-equivalent family of `s`: the quotient of
/// `SUPER` by a congruence built from a seeded random sequence of merges.
///
/// The seed fixes both the order of merge attempts and how many successful
/// merges are kept, so small seeds also produce lightly reduced outputs.
pub fn generate_equivalent_supervisor(g: &Automaton, s: &Automaton, seed: u64) -> Result<Automaton> {
    let sup = build_super(g, s)?;
    let data = control_data(g, &sup)?;
    let rel = compatibility_relation(&data);
    let n = sup.num_states();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(StateId, StateId)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.shuffle(&mut rng);
    let budget = rng.gen_range(0..=n.saturating_sub(1));
    let mut merger = Merger::new(&sup, &rel);
    let mut merged = 0;
    for (a, b) in pairs {
        if merged == budget {
            break;
        }
        if !merger.same_cell(a, b) && rel.get(a, b) && merger.try_merge(a, b) {
            merged += 1;
        }
    }
    let (mut q, _) = induce_quotient(&sup, &data, &merger.cover())?;
    q.set_name(format!("{}.gen{seed}", s.name()));
    Ok(q)
}
