//! Structural operations: synchronous product, reachability trimming,
//! natural projection and subset construction.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, EventId, Word};
use crate::automaton::{reachable_order, Automaton, StateId};
use crate::error::{Error, Result};

pub(crate) fn require_same_alphabet(a: &Automaton, b: &Automaton) -> Result<()> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: a.name().to_string(),
            right: b.name().to_string(),
        });
    }
    Ok(())
}

/// Reachable part of the synchronous product over a shared alphabet.
///
/// A transition exists iff both components define it. Product states are
/// named `(x,z)` and numbered in breadth-first discovery order.
pub fn sync_product(a: &Automaton, b: &Automaton) -> Result<Automaton> {
    Ok(sync_product_pairs(a, b)?.0)
}

/// Like [`sync_product`], also returning the component pair of each state.
pub fn sync_product_pairs(a: &Automaton, b: &Automaton) -> Result<(Automaton, Vec<(StateId, StateId)>)> {
    require_same_alphabet(a, b)?;
    let pair_name = |p: (StateId, StateId)| format!("({},{})", a.state_name(p.0), b.state_name(p.1));
    let start = (a.initial(), b.initial());
    let mut out = Automaton::new(
        format!("{}||{}", a.name(), b.name()),
        a.alphabet().clone(),
        pair_name(start),
    );
    let mut pairs = vec![start];
    let mut index = HashMap::from([(start, 0)]);
    let mut head = 0;
    while head < pairs.len() {
        let (x, z) = pairs[head];
        let src = head;
        head += 1;
        for e in a.alphabet().ids() {
            let (Some(x2), Some(z2)) = (a.next(x, e), b.next(z, e)) else {
                continue;
            };
            let dst = *index.entry((x2, z2)).or_insert_with(|| {
                pairs.push((x2, z2));
                out.push_state_unchecked(pair_name((x2, z2)))
            });
            out.add_transition(src, e, dst)
                .expect("product of deterministic automata is deterministic");
        }
    }
    for (i, &(x, z)) in pairs.iter().enumerate() {
        out.set_marked(i, a.is_marked(x) && b.is_marked(z));
    }
    Ok((out, pairs))
}

/// Restricts `a` to the states reachable from its initial state, renumbered
/// in breadth-first discovery order.
pub fn trim_reachable(a: &Automaton) -> Automaton {
    let order = reachable_order(a);
    let mut new_id = vec![usize::MAX; a.num_states()];
    for (i, &s) in order.iter().enumerate() {
        new_id[s] = i;
    }
    let mut out = Automaton::new(a.name(), a.alphabet().clone(), a.state_name(order[0]));
    for &s in &order[1..] {
        out.push_state_unchecked(a.state_name(s).to_string());
    }
    for (i, &s) in order.iter().enumerate() {
        out.set_marked(i, a.is_marked(s));
        for (e, t) in a.successors(s) {
            out.add_transition(i, e, new_id[t]).expect("copied from a DFA");
        }
    }
    out
}

/// Natural projection onto the observable events of `alphabet`.
pub fn project_string(word: &[EventId], alphabet: &Alphabet) -> Result<Word> {
    word.iter()
        .filter_map(|&e| {
            if e >= alphabet.len() {
                Some(Err(Error::UnknownEvent(format!("#{e}"))))
            } else if alphabet.is_observable(e) {
                Some(Ok(e))
            } else {
                None
            }
        })
        .collect()
}

/// Observer automaton of `a` with respect to its observable events.
///
/// Subset states are closed under unobservable moves. An unobservable event
/// is selflooped at every subset containing a state where it is defined in
/// `a`; a subset is marked iff it contains a marked state. Subset states are
/// named by their sorted member names joined with `+`.
pub fn subset_construction(a: &Automaton) -> Automaton {
    subset_construction_members(a).0
}

/// Like [`subset_construction`], also returning each subset's members
/// (sorted state indices of `a`).
pub fn subset_construction_members(a: &Automaton) -> (Automaton, Vec<Vec<StateId>>) {
    let alphabet = a.alphabet();
    let unobs: Vec<EventId> = alphabet.unobservable().iter().collect();
    let obs: Vec<EventId> = alphabet.observable().iter().collect();

    let closure = |seed: &mut Vec<bool>| {
        let mut stack: Vec<StateId> = (0..seed.len()).filter(|&s| seed[s]).collect();
        while let Some(s) = stack.pop() {
            for &e in &unobs {
                if let Some(t) = a.next(s, e) {
                    if !seed[t] {
                        seed[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        (0..seed.len()).filter(|&s| seed[s]).collect::<Vec<_>>()
    };
    let subset_name = |members: &[StateId]| {
        let mut names: Vec<&str> = members.iter().map(|&s| a.state_name(s)).collect();
        names.sort_unstable();
        names.join("+")
    };

    let mut seed = vec![false; a.num_states()];
    seed[a.initial()] = true;
    let first = closure(&mut seed);
    let mut out = Automaton::new(a.name(), alphabet.clone(), subset_name(&first));
    let mut subsets = vec![first.clone()];
    let mut index = HashMap::from([(first, 0usize)]);
    let mut head = 0;
    while head < subsets.len() {
        let src = head;
        head += 1;
        let members = subsets[src].clone();
        for &e in &obs {
            let mut seed = vec![false; a.num_states()];
            let mut any = false;
            for &s in &members {
                if let Some(t) = a.next(s, e) {
                    seed[t] = true;
                    any = true;
                }
            }
            if !any {
                continue;
            }
            let target = closure(&mut seed);
            let dst = match index.get(&target) {
                Some(&d) => d,
                None => {
                    let d = out.push_state_unchecked(subset_name(&target));
                    index.insert(target.clone(), d);
                    subsets.push(target);
                    d
                }
            };
            out.add_transition(src, e, dst)
                .expect("subset construction is deterministic");
        }
        for &e in &unobs {
            if members.iter().any(|&s| a.next(s, e).is_some()) {
                out.add_transition(src, e, src).expect("selfloop");
            }
        }
        out.set_marked(src, members.iter().any(|&s| a.is_marked(s)));
    }
    (out, subsets)
}
