//! Seeded generators of plants and feasible supervisors for property tests
//! and scale checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Alphabet;
use crate::automaton::Automaton;
use crate::ops::trim_reachable;

/// Alphabet of `len` events `e0, e1, ...` with random attributes. At least
/// one event is observable.
pub fn random_alphabet(rng: &mut impl Rng, len: usize) -> Alphabet {
    let observable_pick = rng.gen_range(0..len);
    let events: Vec<(String, bool, bool)> = (0..len)
        .map(|i| {
            (
                format!("e{i}"),
                rng.gen_bool(0.5),
                i == observable_pick || rng.gen_bool(0.6),
            )
        })
        .collect();
    Alphabet::from_events(events).expect("generated names are distinct")
}

/// Reachable plant with at most `states` states over `alphabet`; each
/// transition is present with probability `density`.
pub fn random_plant(rng: &mut impl Rng, alphabet: &Alphabet, states: usize, density: f64) -> Automaton {
    let n = states.max(1);
    let mut g = Automaton::new("G", alphabet.clone(), "x0");
    for i in 1..n {
        g.push_state_unchecked(format!("x{i}"));
    }
    for x in 0..n {
        g.set_marked(x, rng.gen_bool(0.4));
        for e in alphabet.ids() {
            if rng.gen_bool(density) {
                let t = rng.gen_range(0..n);
                g.add_transition(x, e, t).expect("fresh slot");
            }
        }
    }
    trim_reachable(&g)
}

/// Random supervisor over `alphabet` that is feasible against any plant:
/// uncontrollable events are never disabled, and unobservable events only
/// occur as selfloops.
pub fn random_supervisor(rng: &mut impl Rng, alphabet: &Alphabet, states: usize) -> Automaton {
    let n = states.max(1);
    let mut s = Automaton::new("S", alphabet.clone(), "z0");
    for i in 1..n {
        s.push_state_unchecked(format!("z{i}"));
    }
    for z in 0..n {
        s.set_marked(z, rng.gen_bool(0.6));
        for e in alphabet.ids() {
            let enabled = !alphabet.is_controllable(e) || rng.gen_bool(0.7);
            if !enabled {
                continue;
            }
            let t = if alphabet.is_observable(e) {
                rng.gen_range(0..n)
            } else {
                z
            };
            s.add_transition(z, e, t).expect("fresh slot");
        }
    }
    trim_reachable(&s)
}

/// Random unfolding of `base` into `states` states: every state copies some
/// base state, and each transition leads to a random copy of the base
/// target. The result maps onto `base` by a DES-epimorphism, so it is
/// control-equivalent to it while carrying redundant states.
pub fn random_unfolding(rng: &mut impl Rng, base: &Automaton, states: usize) -> Automaton {
    let k = base.num_states();
    let n = states.max(k);
    let copy_of: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.gen_range(0..k) }).collect();
    let mut copies = vec![Vec::new(); k];
    for (i, &b) in copy_of.iter().enumerate() {
        copies[b].push(i);
    }
    let mut s = Automaton::new(base.name(), base.alphabet().clone(), "u0");
    for i in 1..n {
        s.push_state_unchecked(format!("u{i}"));
    }
    s.set_initial(base.initial());
    for (i, &b) in copy_of.iter().enumerate() {
        s.set_marked(i, base.is_marked(b));
        for (e, t) in base.successors(b) {
            let target = if t == b && !base.alphabet().is_observable(e) {
                i
            } else {
                copies[t][rng.gen_range(0..copies[t].len())]
            };
            s.add_transition(i, e, target).expect("fresh slot");
        }
    }
    trim_reachable(&s)
}

/// A plant and a feasible supervisor drawn from `seed`, with at most
/// `max_plant` plant states, `max_sup` supervisor states and `max_events`
/// events.
pub fn random_instance(seed: u64, max_plant: usize, max_sup: usize, max_events: usize) -> (Automaton, Automaton) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let events = rng.gen_range(1..=max_events.max(1));
    let alphabet = random_alphabet(&mut rng, events);
    let plant_states = rng.gen_range(1..=max_plant.max(1));
    let g = random_plant(&mut rng, &alphabet, plant_states, 0.55);
    let sup_states = rng.gen_range(1..=max_sup.max(1));
    let s = random_supervisor(&mut rng, &alphabet, sup_states);
    (g, s)
}
