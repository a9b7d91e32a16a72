//! Control covers, induced quotient supervisors, `SUPER`, and reduction.

mod exact;
mod merge;
mod observer;

use std::collections::HashMap;
use std::fmt;

use crate::alphabet::EventId;
use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};
use crate::morphism::Verdict;
use crate::supervision::{compatible_unchecked, ControlData};

pub use exact::{reduce_exact_minimum, CoverMode, DEFAULT_CAP, MAX_EXACT_STATES};
pub use merge::{generate_equivalent_supervisor, heuristic_step_bound, reduce_heuristic};
pub use observer::{build_super, characterize_super_state, extract_cover_from_simsup, ExtractedCover};

/// A family of nonempty state sets whose union is the whole state set.
///
/// Members are kept sorted and cells are kept in canonical order (by smallest
/// member, then lexicographically). Repeated cells are allowed, which keeps
/// families indexed by another automaton's states intact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    num_states: usize,
    cells: Vec<Vec<StateId>>,
}

impl Cover {
    pub fn new(num_states: usize, cells: Vec<Vec<StateId>>) -> Result<Cover> {
        Ok(Self::new_indexed(num_states, cells)?.0)
    }

    /// Like [`Cover::new`], also returning where each input cell ended up in
    /// canonical order.
    pub fn new_indexed(num_states: usize, cells: Vec<Vec<StateId>>) -> Result<(Cover, Vec<usize>)> {
        let mut covered = vec![false; num_states];
        let mut keyed = Vec::with_capacity(cells.len());
        for (i, mut cell) in cells.into_iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::MalformedCover(format!("cell {i} is empty")));
            }
            cell.sort_unstable();
            cell.dedup();
            for &z in &cell {
                if z >= num_states {
                    return Err(Error::MalformedCover(format!("cell {i} names unknown state #{z}")));
                }
                covered[z] = true;
            }
            keyed.push((cell, i));
        }
        if let Some(z) = covered.iter().position(|c| !c) {
            return Err(Error::MalformedCover(format!("state #{z} is not covered")));
        }
        keyed.sort();
        let mut position = vec![0; keyed.len()];
        for (pos, (_, original)) in keyed.iter().enumerate() {
            position[*original] = pos;
        }
        let cells = keyed.into_iter().map(|(c, _)| c).collect();
        Ok((Cover { num_states, cells }, position))
    }

    /// Builds a cover of `s` from cells of state names.
    pub fn from_names<S: AsRef<str>>(s: &Automaton, cells: &[Vec<S>]) -> Result<Cover> {
        let index = s.name_index();
        let cells = cells
            .iter()
            .map(|cell| {
                cell.iter()
                    .map(|n| {
                        index
                            .get(n.as_ref())
                            .copied()
                            .ok_or_else(|| Error::UnknownState(n.as_ref().to_string()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Cover::new(s.num_states(), cells)
    }

    /// Reads a cover from text: one cell per line, state names separated by
    /// whitespace, `#` comments.
    pub fn parse(s: &Automaton, text: &str) -> Result<Cover> {
        let cells: Vec<Vec<&str>> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>())
            .filter(|c| !c.is_empty())
            .collect();
        Self::from_names(s, &cells)
    }

    pub fn singletons(num_states: usize) -> Cover {
        Cover {
            num_states,
            cells: (0..num_states).map(|z| vec![z]).collect(),
        }
    }

    /// Partition cover from a block label per state.
    pub fn from_labels(labels: &[usize]) -> Cover {
        let mut blocks: HashMap<usize, Vec<StateId>> = HashMap::new();
        for (z, &l) in labels.iter().enumerate() {
            blocks.entry(l).or_default().push(z);
        }
        Cover::new(labels.len(), blocks.into_values().collect()).expect("labels cover every state")
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn cells(&self) -> &[Vec<StateId>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Whether the cells are pairwise disjoint.
    pub fn is_partition(&self) -> bool {
        self.cells.iter().map(Vec::len).sum::<usize>() == self.num_states
    }

    /// Cells rendered as `{a,b} {c}` with the state names of `s`.
    pub fn display<'a>(&'a self, s: &'a Automaton) -> impl fmt::Display + 'a {
        CoverDisplay { cover: self, s }
    }

    fn cell_name(&self, s: &Automaton, i: usize) -> String {
        let names: Vec<&str> = self.cells[i].iter().map(|&z| s.state_name(z)).collect();
        format!("{{{}}}", names.join(","))
    }
}

struct CoverDisplay<'a> {
    cover: &'a Cover,
    s: &'a Automaton,
}

impl fmt::Display for CoverDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.cover.len()).map(|i| self.cover.cell_name(self.s, i)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The first reason a cover fails to be a control cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverViolation {
    /// Two members of one cell are not compatible.
    Incompatible { cell: usize, a: StateId, b: StateId },
    /// The `event`-successors of a cell fit in no single cell.
    NoTargetCell { cell: usize, event: EventId },
}

impl CoverViolation {
    pub fn describe(&self, s: &Automaton, cover: &Cover) -> String {
        match *self {
            CoverViolation::Incompatible { cell, a, b } => format!(
                "cell {} holds incompatible states `{}` and `{}`",
                cover.cell_name(s, cell),
                s.state_name(a),
                s.state_name(b)
            ),
            CoverViolation::NoTargetCell { cell, event } => format!(
                "`{}`-successors of cell {} lie in no single cell",
                s.alphabet().name(event),
                cover.cell_name(s, cell)
            ),
        }
    }
}

fn check_shapes(s: &Automaton, data: &ControlData, c: &Cover) -> Result<()> {
    if c.num_states() != s.num_states() {
        return Err(Error::MalformedCover(format!(
            "cover is over {} states, `{}` has {}",
            c.num_states(),
            s.name(),
            s.num_states()
        )));
    }
    if data.num_states() != s.num_states() {
        return Err(Error::Precondition(format!(
            "control data describes {} states, `{}` has {}",
            data.num_states(),
            s.name(),
            s.num_states()
        )));
    }
    Ok(())
}

/// Cells that contain every `event`-successor of `cell`'s members, or `None`
/// when no member defines `event`.
fn target_cells(s: &Automaton, c: &Cover, cell: usize, event: EventId) -> Option<Vec<usize>> {
    let targets: Vec<StateId> = c.cells[cell].iter().filter_map(|&z| s.next(z, event)).collect();
    if targets.is_empty() {
        return None;
    }
    Some(
        (0..c.len())
            .filter(|&j| targets.iter().all(|t| c.cells[j].binary_search(t).is_ok()))
            .collect(),
    )
}

/// Checks that `c` is a control cover on `s`: members of a cell are pairwise
/// compatible, and for each cell and event the successors fit in one cell.
pub fn validate_cover(s: &Automaton, data: &ControlData, c: &Cover) -> Result<Verdict<CoverViolation>> {
    check_shapes(s, data, c)?;
    for (i, cell) in c.cells.iter().enumerate() {
        for (k, &a) in cell.iter().enumerate() {
            for &b in &cell[k + 1..] {
                if !compatible_unchecked(data, a, b) {
                    return Ok(Verdict::no(CoverViolation::Incompatible { cell: i, a, b }));
                }
            }
        }
    }
    for i in 0..c.len() {
        for e in s.alphabet().ids() {
            if let Some(js) = target_cells(s, c, i, e) {
                if js.is_empty() {
                    return Ok(Verdict::no(CoverViolation::NoTargetCell { cell: i, event: e }));
                }
            }
        }
    }
    Ok(Verdict::yes())
}

/// Which target cell the quotient took for each `(cell, event)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuotientChoice {
    pub entries: Vec<ChoiceEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChoiceEntry {
    pub cell: usize,
    pub event: EventId,
    pub target: usize,
    /// More than one cell would have been a valid target.
    pub had_alternatives: bool,
}

impl QuotientChoice {
    pub fn target(&self, cell: usize, event: EventId) -> Option<usize> {
        self.entries
            .iter()
            .find(|c| c.cell == cell && c.event == event)
            .map(|c| c.target)
    }

    pub fn any_alternatives(&self) -> bool {
        self.entries.iter().any(|c| c.had_alternatives)
    }
}

/// Builds the supervisor induced by a control cover: one state per cell,
/// initial state the first cell holding the initial state of `s`, marked
/// cells those meeting a marked state, and for each `(cell, event)` with a
/// defined successor the lowest-index cell containing all successors. An
/// unobservable event stays a selfloop whenever the cell itself qualifies.
pub fn induce_quotient(s: &Automaton, data: &ControlData, c: &Cover) -> Result<(Automaton, QuotientChoice)> {
    let alphabet = s.alphabet();
    induce_quotient_guided(s, data, c, |i, e, candidates| {
        if !alphabet.is_observable(e) && candidates.contains(&i) {
            i
        } else {
            candidates[0]
        }
    })
}

/// [`induce_quotient`] with a caller-supplied choice among valid target
/// cells. `choose(cell, event, candidates)` must return one of `candidates`.
pub fn induce_quotient_guided(
    s: &Automaton,
    data: &ControlData,
    c: &Cover,
    mut choose: impl FnMut(usize, EventId, &[usize]) -> usize,
) -> Result<(Automaton, QuotientChoice)> {
    if let Some(v) = validate_cover(s, data, c)?.witness {
        return Err(Error::InvalidCover(v.describe(s, c)));
    }
    let mut names: Vec<String> = (0..c.len()).map(|i| c.cell_name(s, i)).collect();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for n in names.iter_mut() {
        let k = seen.entry(n.clone()).or_insert(0);
        if *k > 0 {
            n.push_str(&format!("~{k}"));
        }
        *k += 1;
    }
    let initial = (0..c.len())
        .find(|&i| c.cells[i].binary_search(&s.initial()).is_ok())
        .expect("a cover contains the initial state");
    let mut q = Automaton::new(format!("{}.quotient", s.name()), s.alphabet().clone(), names[0].clone());
    for n in &names[1..] {
        q.push_state_unchecked(n.clone());
    }
    q.set_initial(initial);
    let mut choice = QuotientChoice::default();
    for i in 0..c.len() {
        q.set_marked(i, c.cells[i].iter().any(|&z| s.is_marked(z)));
        for e in s.alphabet().ids() {
            let Some(candidates) = target_cells(s, c, i, e) else {
                continue;
            };
            let target = choose(i, e, &candidates);
            if !candidates.contains(&target) {
                return Err(Error::Precondition(format!(
                    "chosen target {target} is not valid for cell {i} on `{}`",
                    s.alphabet().name(e)
                )));
            }
            q.add_transition(i, e, target).expect("one target per (cell, event)");
            choice.entries.push(ChoiceEntry {
                cell: i,
                event: e,
                target,
                had_alternatives: candidates.len() > 1,
            });
        }
    }
    Ok((q, choice))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionMode {
    Heuristic,
    ExactPartition,
    ExactCover,
}

impl fmt::Display for ReductionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionMode::Heuristic => "heuristic",
            ReductionMode::ExactPartition => "exact-partition",
            ReductionMode::ExactCover => "exact-cover",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub input_size: usize,
    pub output_size: usize,
    pub cover: Cover,
    /// Elementary steps (compatibility lookups and successor scans).
    pub steps: u64,
    pub mode: ReductionMode,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_automaton;
    use crate::supervision::control_data;

    fn pair() -> (Automaton, Automaton) {
        let g = parse_automaton(
            "automaton G\nevents 2\na c o\nb u o\nstates 2 0 1\ninitial 0\nmarked 2 0 1\ntrans 3\n0 a 1\n1 b 0\n1 a 1\nend\n",
        )
        .unwrap();
        let s = parse_automaton(
            "automaton S\nevents 2\na c o\nb u o\nstates 3 p q r\ninitial p\nmarked 2 q r\ntrans 5\np a q\nq b p\nq a r\nr b p\nr a r\nend\n",
        )
        .unwrap();
        (g, s)
    }

    #[test]
    fn malformed_covers() {
        assert!(matches!(Cover::new(3, vec![vec![0, 1]]), Err(Error::MalformedCover(_))));
        assert!(matches!(
            Cover::new(2, vec![vec![0, 1], vec![]]),
            Err(Error::MalformedCover(_))
        ));
        assert!(matches!(Cover::new(2, vec![vec![0, 5]]), Err(Error::MalformedCover(_))));
        let (_, s) = pair();
        assert!(matches!(
            Cover::from_names(&s, &[vec!["p", "zz"]]),
            Err(Error::UnknownState(_))
        ));
    }

    #[test]
    fn canonical_order_keeps_index_map() {
        let (c, pos) = Cover::new_indexed(4, vec![vec![3, 2], vec![1, 0], vec![0, 2]]).unwrap();
        assert_eq!(c.cells(), &[vec![0, 1], vec![0, 2], vec![2, 3]]);
        assert_eq!(pos, vec![2, 0, 1]);
        assert!(!c.is_partition());
        assert!(Cover::from_labels(&[1, 0, 1]).is_partition());
    }

    #[test]
    fn singleton_cover_is_valid_and_identity() {
        let (g, s) = pair();
        let data = control_data(&g, &s).unwrap();
        let c = Cover::singletons(3);
        assert!(validate_cover(&s, &data, &c).unwrap().holds);
        let (q, choice) = induce_quotient(&s, &data, &c).unwrap();
        assert!(crate::is_des_isomorphic(&q, &s).unwrap().verdict);
        assert!(!choice.any_alternatives());
    }

    #[test]
    fn quotient_merges_equivalent_states() {
        let (g, s) = pair();
        let data = control_data(&g, &s).unwrap();
        let c = Cover::from_names(&s, &[vec!["p"], vec!["q", "r"]]).unwrap();
        assert!(validate_cover(&s, &data, &c).unwrap().holds);
        let (q, _) = induce_quotient(&s, &data, &c).unwrap();
        assert_eq!(q.num_states(), 2);
        assert_eq!(q.state_name(1), "{q,r}");
        assert!(crate::control_equivalent(&g, &s, &q).unwrap().holds);
        // p is an unmarked supervisor state over a marked plant state, q is marked
        let bad = Cover::from_names(&s, &[vec!["p", "q", "r"]]).unwrap();
        let v = validate_cover(&s, &data, &bad).unwrap();
        assert!(matches!(v.witness, Some(CoverViolation::Incompatible { .. })));
        assert!(matches!(induce_quotient(&s, &data, &bad), Err(Error::InvalidCover(_))));
    }

    #[test]
    fn cover_text_format() {
        let (_, s) = pair();
        let c = Cover::parse(&s, "# cells\nq r\np\n").unwrap();
        assert_eq!(c.display(&s).to_string(), "{p} {q,r}");
    }
}
