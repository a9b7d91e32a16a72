use std::collections::HashMap;
use std::hash::Hash;

use crate::alphabet::{EventId, Word};

/// Breadth-first exploration with parent links.
///
/// Nodes are popped in discovery order. When successors are expanded in
/// event order, the first access path of every node is shortlex-minimal,
/// so the first violation met while expanding is the shortest witness with
/// alphabet-order tie-breaking.
pub(crate) struct Bfs<K> {
    nodes: Vec<K>,
    parent: Vec<Option<(usize, EventId)>>,
    index: HashMap<K, usize>,
    head: usize,
}

impl<K: Clone + Eq + Hash> Bfs<K> {
    pub fn new(start: K) -> Self {
        Bfs {
            nodes: vec![start.clone()],
            parent: vec![None],
            index: HashMap::from([(start, 0)]),
            head: 0,
        }
    }

    /// Next node to expand, with its index.
    pub fn pop(&mut self) -> Option<(usize, K)> {
        let i = self.head;
        let k = self.nodes.get(i)?.clone();
        self.head += 1;
        Some((i, k))
    }

    /// Records `to` as reached from `from` by `event`; returns its index and
    /// whether it is new.
    pub fn visit(&mut self, from: usize, event: EventId, to: K) -> (usize, bool) {
        if let Some(&i) = self.index.get(&to) {
            return (i, false);
        }
        let i = self.nodes.len();
        self.nodes.push(to.clone());
        self.parent.push(Some((from, event)));
        self.index.insert(to, i);
        (i, true)
    }

    pub fn word(&self, mut i: usize) -> Word {
        let mut w = Vec::new();
        while let Some((p, e)) = self.parent[i] {
            w.push(e);
            i = p;
        }
        w.reverse();
        w
    }

    pub fn word_then(&self, i: usize, event: EventId) -> Word {
        let mut w = self.word(i);
        w.push(event);
        w
    }
}
