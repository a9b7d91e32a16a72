//! DES-epimorphism, DES-isomorphism and language equivalence.

use crate::alphabet::Word;
use crate::automaton::{Automaton, StateId};
use crate::error::Result;
use crate::ops::require_same_alphabet;
use crate::search::Bfs;

/// A yes/no answer with an optional witness for the "no" case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<W = Word> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    pub fn yes() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn no(witness: W) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismResult {
    pub verdict: bool,
    /// `mapping[x]` is the image of A-state `x`, present when `verdict` holds.
    pub mapping: Option<Vec<StateId>>,
    /// Which condition failed, when `verdict` is false.
    pub reason: Option<String>,
}

impl MorphismResult {
    fn fail(reason: impl Into<String>) -> Self {
        MorphismResult {
            verdict: false,
            mapping: None,
            reason: Some(reason.into()),
        }
    }
}

/// Decides whether `a` is DES-epimorphic to `b`.
///
/// For deterministic reachable automata the only candidate map is the one
/// obtained by running both automata in lockstep from their initial states,
/// so one traversal builds it and the remaining conditions are then checked
/// on that map.
pub fn is_des_epimorphic(a: &Automaton, b: &Automaton) -> Result<MorphismResult> {
    require_same_alphabet(a, b)?;
    let mut theta: Vec<Option<StateId>> = vec![None; a.num_states()];
    theta[a.initial()] = Some(b.initial());
    let mut stack = vec![a.initial()];
    while let Some(x) = stack.pop() {
        let y = theta[x].expect("assigned before push");
        for (e, x2) in a.successors(x) {
            let Some(y2) = b.next(y, e) else {
                return Ok(MorphismResult::fail(format!(
                    "transition preservation: `{}` has `{}` but `{}` does not",
                    a.state_name(x),
                    a.alphabet().name(e),
                    b.state_name(y)
                )));
            };
            match theta[x2] {
                None => {
                    theta[x2] = Some(y2);
                    stack.push(x2);
                }
                Some(prev) if prev != y2 => {
                    return Ok(MorphismResult::fail(format!(
                        "transition preservation: `{}` would map to both `{}` and `{}`",
                        a.state_name(x2),
                        b.state_name(prev),
                        b.state_name(y2)
                    )));
                }
                Some(_) => {}
            }
        }
    }
    let Some(theta): Option<Vec<StateId>> = theta.into_iter().collect() else {
        return Ok(MorphismResult::fail("source automaton is not reachable"));
    };

    let mut hit = vec![false; b.num_states()];
    for &y in &theta {
        hit[y] = true;
    }
    if let Some(y) = hit.iter().position(|h| !h) {
        return Ok(MorphismResult::fail(format!(
            "surjectivity: `{}` has no preimage",
            b.state_name(y)
        )));
    }

    let mut marked_image = vec![false; b.num_states()];
    for x in a.marked_states() {
        marked_image[theta[x]] = true;
    }
    for y in b.states() {
        if marked_image[y] != b.is_marked(y) {
            return Ok(MorphismResult::fail(format!(
                "marker preservation: `{}` is {} in the target but {} by the image",
                b.state_name(y),
                if b.is_marked(y) { "marked" } else { "unmarked" },
                if marked_image[y] { "marked" } else { "unmarked" },
            )));
        }
    }

    for (y, e, _) in b.transitions() {
        let witnessed = a.states().any(|x| theta[x] == y && a.next(x, e).is_some());
        if !witnessed {
            return Ok(MorphismResult::fail(format!(
                "transition reflection: no preimage of `{}` has `{}`",
                b.state_name(y),
                a.alphabet().name(e)
            )));
        }
    }

    Ok(MorphismResult {
        verdict: true,
        mapping: Some(theta),
        reason: None,
    })
}

/// DES-epimorphism with a bijective map.
pub fn is_des_isomorphic(a: &Automaton, b: &Automaton) -> Result<MorphismResult> {
    require_same_alphabet(a, b)?;
    if a.num_states() != b.num_states() {
        return Ok(MorphismResult::fail(format!(
            "state counts differ ({} vs {})",
            a.num_states(),
            b.num_states()
        )));
    }
    // surjective between equal finite sets is bijective
    is_des_epimorphic(a, b)
}

/// Decides `L(a) = L(b)` and `Lm(a) = Lm(b)` by a lockstep traversal.
///
/// On inequality the witness is a shortest string in the symmetric
/// difference of the closed or marked languages, ties broken by alphabet
/// order.
pub fn language_equivalent(a: &Automaton, b: &Automaton) -> Result<Verdict> {
    require_same_alphabet(a, b)?;
    let start = (a.initial(), b.initial());
    if a.is_marked(start.0) != b.is_marked(start.1) {
        return Ok(Verdict::no(Vec::new()));
    }
    let mut bfs = Bfs::new(start);
    while let Some((i, (x, y))) = bfs.pop() {
        for e in a.alphabet().ids() {
            match (a.next(x, e), b.next(y, e)) {
                (None, None) => {}
                (Some(x2), Some(y2)) => {
                    let (_, new) = bfs.visit(i, e, (x2, y2));
                    if new && a.is_marked(x2) != b.is_marked(y2) {
                        return Ok(Verdict::no(bfs.word_then(i, e)));
                    }
                }
                _ => return Ok(Verdict::no(bfs.word_then(i, e))),
            }
        }
    }
    Ok(Verdict::yes())
}
