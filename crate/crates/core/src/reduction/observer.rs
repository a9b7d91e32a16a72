//! `SUPER`, its per-state control sets, and recovering a control cover on
//! `SUPER` from an arbitrary normal control-equivalent supervisor.

use std::collections::{HashSet, VecDeque};

use super::{induce_quotient_guided, Cover, QuotientChoice};
use crate::alphabet::EventSet;
use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};
use crate::morphism::is_des_isomorphic;
use crate::ops::{require_same_alphabet, subset_construction_members, sync_product_pairs};
use crate::supervision::{control_equivalent, is_normal, require_feasible, ControlData};

/// The finest control-equivalent supervisor: the observer of the closed loop
/// `trim(g||s)`.
pub fn build_super(g: &Automaton, s: &Automaton) -> Result<Automaton> {
    require_same_alphabet(g, s)?;
    require_feasible(g, s)?;
    let (closed_loop, _) = sync_product_pairs(g, s)?;
    let (mut sup, _) = subset_construction_members(&closed_loop);
    sup.set_name(format!("{}.super", s.name()));
    Ok(sup)
}

/// `(En(z), D(z))` of `SUPER`-state `z`, read off the closed-loop states that
/// make up the subset: events enabled at some member, and plant events
/// disabled by `s` at some member.
pub fn characterize_super_state(
    g: &Automaton,
    s: &Automaton,
    sup: &Automaton,
    z: StateId,
) -> Result<(EventSet, EventSet)> {
    if z >= sup.num_states() {
        return Err(Error::UnknownState(format!("#{z}")));
    }
    require_feasible(g, s)?;
    let (closed_loop, pairs) = sync_product_pairs(g, s)?;
    let (rebuilt, members) = subset_construction_members(&closed_loop);
    let iso = is_des_isomorphic(sup, &rebuilt)?;
    let Some(mapping) = iso.mapping else {
        return Err(Error::Precondition(format!(
            "`{}` is not the SUPER of `{}` ({})",
            sup.name(),
            s.name(),
            iso.reason.unwrap_or_default()
        )));
    };
    let len = g.alphabet().len();
    let mut en = EventSet::empty(len);
    let mut dis = EventSet::empty(len);
    for &p in &members[mapping[z]] {
        en.union_with(&closed_loop.enabled(p));
        let (x, zs) = pairs[p];
        for e in g.alphabet().ids() {
            if g.next(x, e).is_some() && s.next(zs, e).is_none() {
                dis.insert(e);
            }
        }
    }
    Ok((en, dis))
}

/// A cover of `SUPER` indexed by the states of another supervisor, with the
/// cell chosen for each of its states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedCover {
    pub cover: Cover,
    /// `cell_of[y]` is the cell built for state `y` of the source supervisor.
    pub cell_of: Vec<usize>,
    source: Automaton,
}

impl ExtractedCover {
    /// The induced quotient of `sup`, following the source supervisor's
    /// transitions wherever several target cells are valid.
    pub fn quotient(&self, sup: &Automaton, data: &ControlData) -> Result<(Automaton, QuotientChoice)> {
        let mut source_of = vec![0; self.cover.len()];
        for (y, &i) in self.cell_of.iter().enumerate() {
            source_of[i] = y;
        }
        induce_quotient_guided(sup, data, &self.cover, |i, e, candidates| {
            self.source
                .next(source_of[i], e)
                .map(|y2| self.cell_of[y2])
                .unwrap_or(candidates[0])
        })
    }
}

/// Builds the cover `{Z(y)}` of `sup` where `Z(y)` holds the `SUPER`-states
/// reached by closed-loop strings that drive `simsup` to `y`.
///
/// `simsup` must be feasible, control-equivalent to `s` and normal with
/// respect to `s`; each failing hypothesis is reported by name.
pub fn extract_cover_from_simsup(
    sup: &Automaton,
    simsup: &Automaton,
    g: &Automaton,
    s: &Automaton,
) -> Result<ExtractedCover> {
    require_same_alphabet(g, s)?;
    require_same_alphabet(g, sup)?;
    require_same_alphabet(g, simsup)?;
    require_feasible(g, simsup).map_err(|e| Error::Precondition(format!("simsup is not feasible: {e}")))?;
    if let Some(w) = control_equivalent(g, s, simsup)?.witness {
        return Err(Error::Precondition(format!(
            "simsup is not control-equivalent to `{}` (witness `{}`)",
            s.name(),
            g.alphabet().format_word(&w)
        )));
    }
    if let Some(v) = is_normal(g, s, simsup)?.witness {
        return Err(Error::Precondition(format!(
            "simsup is not normal: {}",
            v.describe(simsup)
        )));
    }

    let mut cells: Vec<Vec<StateId>> = vec![Vec::new(); simsup.num_states()];
    let start = (g.initial(), s.initial(), sup.initial(), simsup.initial());
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((x, zs, z, y)) = queue.pop_front() {
        cells[y].push(z);
        for e in g.alphabet().ids() {
            let (Some(x2), Some(zs2)) = (g.next(x, e), s.next(zs, e)) else {
                continue;
            };
            let (Some(z2), Some(y2)) = (sup.next(z, e), simsup.next(y, e)) else {
                return Err(Error::Precondition(format!(
                    "`{}` or simsup blocks a closed-loop string",
                    sup.name()
                )));
            };
            let next = (x2, zs2, z2, y2);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    if let Some(y) = cells.iter().position(Vec::is_empty) {
        return Err(Error::Precondition(format!(
            "simsup state `{}` is never reached in the closed loop",
            simsup.state_name(y)
        )));
    }
    let (cover, cell_of) = Cover::new_indexed(sup.num_states(), cells)?;
    Ok(ExtractedCover {
        cover,
        cell_of,
        source: simsup.clone(),
    })
}
