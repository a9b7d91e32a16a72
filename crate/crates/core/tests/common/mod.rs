//! Fixture loading, instance generators and brute-force oracles shared by the
//! integration tests. The oracles work from raw transition lookups and string
//! enumeration only.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use supred::{control_data, sync_product, validate_cover, Automaton, ControlData, Cover, EventId, StateId, Word};

pub fn fixture_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(file)
}

pub fn fixture(file: &str, name: &str) -> Automaton {
    let text = std::fs::read_to_string(fixture_path(file)).unwrap();
    supred::parse_automata(&text)
        .unwrap()
        .into_iter()
        .find(|a| a.name() == name)
        .unwrap_or_else(|| panic!("{file} has no automaton {name}"))
}

pub fn tank() -> (Automaton, Automaton) {
    (fixture("tank.aut", "G"), fixture("tank.aut", "S"))
}

pub fn finer() -> (Automaton, Automaton, Automaton) {
    (
        fixture("finer.aut", "G"),
        fixture("finer.aut", "S1"),
        fixture("finer.aut", "S2"),
    )
}

pub fn ids(a: &Automaton, names: &[&str]) -> BTreeSet<EventId> {
    names.iter().map(|n| a.alphabet().id(n).unwrap()).collect()
}

pub fn set(e: &supred::EventSet) -> BTreeSet<EventId> {
    e.iter().collect()
}

/// Runs `word` from the initial state by repeated single-step lookups.
pub fn run(a: &Automaton, word: &[EventId]) -> Option<StateId> {
    let mut q = a.initial();
    for &e in word {
        q = a.next(q, e)?;
    }
    Some(q)
}

/// Every string of `L(g) ∩ L(s)` up to `max_len`, with the states reached.
pub fn closed_loop_strings(g: &Automaton, s: &Automaton, max_len: usize) -> Vec<(Word, StateId, StateId)> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), g.initial(), s.initial())];
    while let Some((w, x, z)) = stack.pop() {
        if w.len() < max_len {
            for e in g.alphabet().ids() {
                if let (Some(x2), Some(z2)) = (g.next(x, e), s.next(z, e)) {
                    let mut w2 = w.clone();
                    w2.push(e);
                    stack.push((w2, x2, z2));
                }
            }
        }
        out.push((w, x, z));
    }
    out
}

/// Control data evaluated from its existential definitions over all
/// closed-loop strings of length at most `|states(g||s)| + 1`.
pub struct DataOracle {
    pub enabled: Vec<BTreeSet<EventId>>,
    pub disabled: Vec<BTreeSet<EventId>>,
    pub marked_s: Vec<bool>,
    pub marked_g: Vec<bool>,
}

pub fn data_oracle(g: &Automaton, s: &Automaton) -> DataOracle {
    let n = s.num_states();
    let bound = sync_product(g, s).unwrap().num_states() + 1;
    let mut o = DataOracle {
        enabled: (0..n)
            .map(|z| g.alphabet().ids().filter(|&e| s.next(z, e).is_some()).collect())
            .collect(),
        disabled: vec![BTreeSet::new(); n],
        marked_s: vec![false; n],
        marked_g: vec![false; n],
    };
    for (w, _, _) in closed_loop_strings(g, s, bound) {
        let z = run(s, &w).unwrap();
        for e in g.alphabet().ids() {
            let mut we = w.clone();
            we.push(e);
            if s.next(z, e).is_none() && run(g, &we).is_some() {
                o.disabled[z].insert(e);
            }
        }
        let in_lm_g = g.is_marked(run(g, &w).unwrap());
        if in_lm_g {
            o.marked_g[z] = true;
            if s.is_marked(z) {
                o.marked_s[z] = true;
            }
        }
    }
    o
}

pub fn oracle_compatible(o: &DataOracle, a: StateId, b: StateId) -> bool {
    o.enabled[a].is_disjoint(&o.disabled[b])
        && o.enabled[b].is_disjoint(&o.disabled[a])
        && (o.marked_g[a] != o.marked_g[b] || o.marked_s[a] == o.marked_s[b])
}

/// All strings over the alphabet of `a` up to `max_len`, in shortlex order.
pub fn all_strings(alphabet_len: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for e in 0..alphabet_len {
                let mut w2: Word = w.clone();
                w2.push(e);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Shortest string (shortlex) on which `a` and `b` differ in closed or
/// marked language membership, among strings up to `max_len`.
pub fn language_oracle(a: &Automaton, b: &Automaton, max_len: usize) -> Option<Word> {
    all_strings(a.alphabet().len(), max_len).into_iter().find(|w| {
        let (x, y) = (run(a, w), run(b, w));
        x.is_some() != y.is_some() || x.map(|q| a.is_marked(q)) != y.map(|q| b.is_marked(q))
    })
}

/// Searches every map `A → B` for one satisfying the four morphism
/// conditions.
pub fn epimorphism_oracle(a: &Automaton, b: &Automaton) -> bool {
    let (na, nb) = (a.num_states(), b.num_states());
    let mut theta = vec![0usize; na];
    loop {
        if theta[a.initial()] == b.initial() && is_epimorphism(a, b, &theta) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == na {
                return false;
            }
            theta[i] += 1;
            if theta[i] < nb {
                break;
            }
            theta[i] = 0;
            i += 1;
        }
    }
}

fn is_epimorphism(a: &Automaton, b: &Automaton, theta: &[StateId]) -> bool {
    let image: HashSet<StateId> = theta.iter().copied().collect();
    if image.len() != b.num_states() {
        return false;
    }
    let marked_image: HashSet<StateId> = a.marked_states().map(|x| theta[x]).collect();
    let marked_b: HashSet<StateId> = b.marked_states().collect();
    if marked_image != marked_b {
        return false;
    }
    for x in a.states() {
        for e in a.alphabet().ids() {
            if let Some(x2) = a.next(x, e) {
                if b.next(theta[x], e) != Some(theta[x2]) {
                    return false;
                }
            }
        }
    }
    for y in b.states() {
        for e in b.alphabet().ids() {
            if b.next(y, e).is_some() && !a.states().any(|x| theta[x] == y && a.next(x, e).is_some()) {
                return false;
            }
        }
    }
    true
}

/// `(En, D)` of each observer state by enumerating closed-loop strings whose
/// projection is an observed word reaching that state. Strings are
/// enumerated up to length `(|w|+1)·N`, `N` the closed-loop size, keeping
/// the set of reached `(plant, supervisor, matched)` configurations per
/// length.
pub fn observer_oracle(g: &Automaton, s: &Automaton, sup: &Automaton) -> Vec<(BTreeSet<EventId>, BTreeSet<EventId>)> {
    let alpha = g.alphabet();
    let n_loop = sync_product(g, s).unwrap().num_states();
    let mut word_to: Vec<Option<Word>> = vec![None; sup.num_states()];
    word_to[sup.initial()] = Some(Vec::new());
    let mut queue = VecDeque::from([sup.initial()]);
    while let Some(y) = queue.pop_front() {
        for e in alpha.ids().filter(|&e| alpha.is_observable(e)) {
            if let Some(y2) = sup.next(y, e) {
                if word_to[y2].is_none() {
                    let mut w = word_to[y].clone().unwrap();
                    w.push(e);
                    word_to[y2] = Some(w);
                    queue.push_back(y2);
                }
            }
        }
    }
    word_to
        .into_iter()
        .map(|w| {
            let w = w.expect("observer states are reachable by observed words");
            let bound = (w.len() + 1) * n_loop;
            let mut layer: HashSet<(StateId, StateId, usize)> = HashSet::from([(g.initial(), s.initial(), 0)]);
            let mut ends: HashSet<(StateId, StateId)> = HashSet::new();
            for _ in 0..=bound {
                let mut next = HashSet::new();
                for &(x, z, k) in &layer {
                    if k == w.len() {
                        ends.insert((x, z));
                    }
                    for e in alpha.ids() {
                        let (Some(x2), Some(z2)) = (g.next(x, e), s.next(z, e)) else {
                            continue;
                        };
                        if alpha.is_observable(e) {
                            if k < w.len() && w[k] == e {
                                next.insert((x2, z2, k + 1));
                            }
                        } else {
                            next.insert((x2, z2, k));
                        }
                    }
                }
                layer = next;
            }
            let mut en = BTreeSet::new();
            let mut dis = BTreeSet::new();
            for (x, z) in ends {
                for e in alpha.ids() {
                    match (g.next(x, e).is_some(), s.next(z, e).is_some()) {
                        (true, true) => {
                            en.insert(e);
                        }
                        (true, false) => {
                            dis.insert(e);
                        }
                        _ => {}
                    }
                }
            }
            (en, dis)
        })
        .collect()
}

/// Control-cover check written from the definition, against oracle data.
pub fn oracle_valid_cover(s: &Automaton, o: &DataOracle, cells: &[Vec<StateId>]) -> bool {
    for cell in cells {
        for &a in cell {
            for &b in cell {
                if !oracle_compatible(o, a, b) {
                    return false;
                }
            }
        }
        for e in s.alphabet().ids() {
            let targets: Vec<StateId> = cell.iter().filter_map(|&z| s.next(z, e)).collect();
            if !targets.is_empty() && !cells.iter().any(|c| targets.iter().all(|t| c.contains(t))) {
                return false;
            }
        }
    }
    true
}

/// Smallest number of cells of a control cover, by enumerating families of
/// distinct nonempty subsets (or set partitions when `partition`).
pub fn min_cover_oracle(s: &Automaton, o: &DataOracle, partition: bool) -> usize {
    let n = s.num_states();
    let subsets: Vec<Vec<StateId>> = (1u32..1 << n)
        .map(|m| (0..n).filter(|&z| m >> z & 1 == 1).collect())
        .collect();
    for k in 1..=n {
        let mut pick = Vec::new();
        if search_family(s, o, &subsets, k, 0, &mut pick, partition, n) {
            return k;
        }
    }
    n
}

#[allow(clippy::too_many_arguments)]
fn search_family(
    s: &Automaton,
    o: &DataOracle,
    subsets: &[Vec<StateId>],
    k: usize,
    from: usize,
    pick: &mut Vec<usize>,
    partition: bool,
    n: usize,
) -> bool {
    if pick.len() == k {
        let cells: Vec<Vec<StateId>> = pick.iter().map(|&i| subsets[i].clone()).collect();
        let covered: HashSet<StateId> = cells.iter().flatten().copied().collect();
        if covered.len() != n {
            return false;
        }
        if partition && cells.iter().map(Vec::len).sum::<usize>() != n {
            return false;
        }
        return oracle_valid_cover(s, o, &cells);
    }
    for i in from..subsets.len() {
        pick.push(i);
        if search_family(s, o, subsets, k, i + 1, pick, partition, n) {
            return true;
        }
        pick.pop();
    }
    false
}

/// A random control cover of `s`, possibly with overlapping cells: cells
/// start as singletons, absorb random states while the cover stays valid,
/// and cells contained in other cells are dropped.
pub fn random_cover(s: &Automaton, data: &ControlData, rng: &mut impl Rng) -> Cover {
    let n = s.num_states();
    let mut cells: Vec<Vec<StateId>> = (0..n).map(|z| vec![z]).collect();
    let attempts = rng.gen_range(0..=2 * n);
    for _ in 0..attempts {
        let c = rng.gen_range(0..cells.len());
        let z = rng.gen_range(0..n);
        if cells[c].contains(&z) {
            continue;
        }
        let mut trial = cells.clone();
        trial[c].push(z);
        let cover = Cover::new(n, trial.clone()).unwrap();
        if validate_cover(s, data, &cover).unwrap().holds {
            cells = trial;
        }
    }
    cells.shuffle(rng);
    let mut kept: Vec<Vec<StateId>> = Vec::new();
    for (i, c) in cells.iter().enumerate() {
        let contained = cells
            .iter()
            .enumerate()
            .any(|(j, d)| j != i && c.iter().all(|z| d.contains(z)) && (d.len() > c.len() || j < i));
        if !contained {
            kept.push(c.clone());
        }
    }
    let cover = Cover::new(n, kept).unwrap();
    debug_assert!(validate_cover(s, data, &cover).unwrap().holds);
    cover
}

pub fn data(g: &Automaton, s: &Automaton) -> ControlData {
    control_data(g, s).unwrap()
}
