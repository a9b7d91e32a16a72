//! Minimum control covers by iterative deepening over the number of cells.

use std::fmt;
use std::str::FromStr;

use super::merge::Merger;
use super::{induce_quotient, Cover, ReductionMode, ReductionReport};
use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};
use crate::supervision::{
    compatibility_relation, control_data, require_feasible, restrict_marking, CompatibilityRelation,
};

/// Default state limit for [`reduce_exact_minimum`].
pub const DEFAULT_CAP: usize = 10;

/// Hard limit on the states an exact search can handle, whatever the cap.
pub const MAX_EXACT_STATES: usize = 64;

/// Which family of covers the exact search ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    /// Disjoint cells only.
    Partition,
    /// Cells may overlap.
    Cover,
}

impl fmt::Display for CoverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoverMode::Partition => "partition",
            CoverMode::Cover => "cover",
        })
    }
}

impl FromStr for CoverMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "partition" => Ok(CoverMode::Partition),
            "cover" => Ok(CoverMode::Cover),
            other => Err(format!("unknown cover mode `{other}` (expected partition or cover)")),
        }
    }
}

/// Smallest control cover of `s` in the chosen family, and its quotient.
///
/// Supervisors with more than `cap` states are refused with
/// [`Error::CapExceeded`]. Marking is restricted first as in
/// [`reduce_heuristic`](super::reduce_heuristic).
pub fn reduce_exact_minimum(
    g: &Automaton,
    s: &Automaton,
    mode: CoverMode,
    cap: usize,
) -> Result<(Automaton, ReductionReport)> {
    let n = s.num_states();
    if n > cap.min(MAX_EXACT_STATES) {
        return Err(Error::CapExceeded {
            states: n,
            cap: cap.min(MAX_EXACT_STATES),
        });
    }
    require_feasible(g, s)?;
    let s = &restrict_marking(g, s)?;
    let data = control_data(g, s)?;
    let rel = compatibility_relation(&data);

    let mut merger = Merger::new(s, &rel);
    for a in 0..n {
        for b in a + 1..n {
            if !merger.same_cell(a, b) && rel.get(a, b) {
                merger.try_merge(a, b);
            }
        }
    }
    let mut best = merger.cover();
    let mut search = Search::new(s, &rel, mode);
    search.steps = merger.steps();
    for k in clique_lower_bound(&rel)..best.len() {
        if let Some(found) = search.run(k) {
            best = found;
            break;
        }
    }
    let (q, _) = induce_quotient(s, &data, &best)?;
    let report = ReductionReport {
        input_size: n,
        output_size: q.num_states(),
        cover: best,
        steps: search.steps,
        mode: match mode {
            CoverMode::Partition => ReductionMode::ExactPartition,
            CoverMode::Cover => ReductionMode::ExactCover,
        },
    };
    Ok((q, report))
}

/// Size of a greedily grown set of pairwise incompatible states.
fn clique_lower_bound(rel: &CompatibilityRelation) -> usize {
    let n = rel.len();
    let degree = |z: StateId| (0..n).filter(|&w| !rel.get(z, w)).count();
    let mut order: Vec<StateId> = (0..n).collect();
    order.sort_by_key(|&z| std::cmp::Reverse(degree(z)));
    let mut clique: Vec<StateId> = Vec::new();
    for z in order {
        if clique.iter().all(|&w| !rel.get(z, w)) {
            clique.push(z);
        }
    }
    clique.len().max(1)
}

/// Backtracking over assignments of states to cells. States are placed in
/// index order; a state either joins existing cells or opens the next ones,
/// so cell labels are never permuted.
struct Search<'a> {
    s: &'a Automaton,
    mode: CoverMode,
    n: usize,
    /// Bitmask of states incompatible with each state.
    incompatible: Vec<u64>,
    /// Bitmask of cells each placed state belongs to.
    cells_of: Vec<u64>,
    /// Bitmask of states in each cell.
    members: Vec<u64>,
    k: usize,
    steps: u64,
}

impl<'a> Search<'a> {
    fn new(s: &'a Automaton, rel: &CompatibilityRelation, mode: CoverMode) -> Self {
        let n = s.num_states();
        let incompatible = (0..n)
            .map(|z| (0..n).filter(|&w| !rel.get(z, w)).fold(0u64, |m, w| m | 1 << w))
            .collect();
        Search {
            s,
            mode,
            n,
            incompatible,
            cells_of: vec![0; n],
            members: Vec::new(),
            k: 0,
            steps: 0,
        }
    }

    fn run(&mut self, k: usize) -> Option<Cover> {
        self.k = k;
        self.cells_of = vec![0; self.n];
        self.members = vec![0; k];
        if !self.place(0, 0) {
            return None;
        }
        let cells = self
            .members
            .iter()
            .filter(|&&m| m != 0)
            .map(|&m| (0..self.n).filter(|&z| m >> z & 1 == 1).collect())
            .collect();
        Some(Cover::new(self.n, cells).expect("every state is placed"))
    }

    fn place(&mut self, z: StateId, opened: usize) -> bool {
        if z == self.n {
            return true;
        }
        let fresh = self.k - opened;
        for mask in self.candidate_masks(opened, fresh) {
            self.steps += 1;
            let mut ok = true;
            for c in bits(mask) {
                if self.members[c] & self.incompatible[z] != 0 {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            for c in bits(mask) {
                self.members[c] |= 1 << z;
            }
            self.cells_of[z] = mask;
            let top = 64 - mask.leading_zeros() as usize;
            if self.targets_fit(z) && self.place(z + 1, opened.max(top)) {
                return true;
            }
            for c in bits(mask) {
                self.members[c] &= !(1 << z);
            }
            self.cells_of[z] = 0;
        }
        false
    }

    /// Cell sets state `z` may join: any nonempty subset of the opened cells
    /// plus a prefix of the unopened ones (a single cell in partition mode).
    fn candidate_masks(&self, opened: usize, fresh: usize) -> Vec<u64> {
        let mut out = Vec::new();
        match self.mode {
            CoverMode::Partition => {
                out.extend((0..opened).map(|c| 1u64 << c));
                if fresh > 0 {
                    out.push(1 << opened);
                }
            }
            CoverMode::Cover => {
                let existing = (1u64 << opened) - 1;
                for extra in 0..=fresh {
                    let new_cells = ((1u64 << extra) - 1) << opened;
                    let mut sub = existing;
                    loop {
                        let mask = sub | new_cells;
                        if mask != 0 {
                            out.push(mask);
                        }
                        if sub == 0 {
                            break;
                        }
                        sub = (sub - 1) & existing;
                    }
                }
                out.sort_by_key(|m| m.count_ones());
            }
        }
        out
    }

    /// Whether, for every cell and event, the successors of placed members
    /// that are themselves placed still share some cell. Placing more states
    /// can only shrink these intersections, so a failure here is final.
    fn targets_fit(&mut self, upto: StateId) -> bool {
        for c in 0..self.k {
            let m = self.members[c];
            if m == 0 {
                continue;
            }
            for e in self.s.alphabet().ids() {
                let mut common = u64::MAX;
                for z in bits(m) {
                    self.steps += 1;
                    if let Some(t) = self.s.next(z, e) {
                        if t <= upto {
                            common &= self.cells_of[t];
                        }
                    }
                }
                if common == 0 {
                    return false;
                }
            }
        }
        true
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(b)
    })
}
