//! The fineness order between control-equivalent supervisors and the size
//! comparisons it predicts.

use std::fmt;

use crate::alphabet::Word;
use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::morphism::is_des_isomorphic;
use crate::ops::{require_same_alphabet, subset_construction, sync_product};
use crate::reduction::{build_super, reduce_exact_minimum, CoverMode, DEFAULT_CAP};
use crate::search::Bfs;
use crate::supervision::{control_data, control_equivalent, is_normal, require_feasible};

/// One of the four conditions of `S1 ⪯ S2` at a reached state pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    /// `En1(z1) ⊆ En2(z2)`
    Enabled,
    /// `D1(z1) ⊆ D2(z2)`
    Disabled,
    /// `M1(z1) ⇒ M2(z2)`
    MarkedS,
    /// `T1(z1) ⇒ T2(z2)`
    MarkedG,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Enabled => "enabled",
            Clause::Disabled => "disabled",
            Clause::MarkedS => "markedS",
            Clause::MarkedG => "markedG",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderWitness {
    pub verdict: bool,
    /// Shortest closed-loop string reaching a violating pair, with every
    /// clause that fails there.
    pub counterexample: Option<(Word, Vec<Clause>)>,
}

fn require_member(g: &Automaton, s: &Automaton, other: &Automaton) -> Result<()> {
    if let Some(w) = control_equivalent(g, s, other)?.witness {
        return Err(Error::Precondition(format!(
            "`{}` is not control-equivalent to `{}` (witness `{}`)",
            other.name(),
            s.name(),
            g.alphabet().format_word(&w)
        )));
    }
    Ok(())
}

/// Decides `s1 ⪯ s2` by walking the closed loop `g||s` alongside both
/// supervisors. Both must be control-equivalent to `s`.
pub fn finer_than(g: &Automaton, s: &Automaton, s1: &Automaton, s2: &Automaton) -> Result<OrderWitness> {
    require_same_alphabet(g, s)?;
    require_same_alphabet(g, s1)?;
    require_same_alphabet(g, s2)?;
    require_member(g, s, s1)?;
    require_member(g, s, s2)?;
    let d1 = control_data(g, s1)?;
    let d2 = control_data(g, s2)?;

    let failing = |z1, z2| {
        let mut out = Vec::new();
        if !d1.enabled(z1).is_subset(d2.enabled(z2)) {
            out.push(Clause::Enabled);
        }
        if !d1.disabled(z1).is_subset(d2.disabled(z2)) {
            out.push(Clause::Disabled);
        }
        if d1.marked_s(z1) && !d2.marked_s(z2) {
            out.push(Clause::MarkedS);
        }
        if d1.marked_g(z1) && !d2.marked_g(z2) {
            out.push(Clause::MarkedG);
        }
        out
    };

    let start = (g.initial(), s.initial(), s1.initial(), s2.initial());
    let mut bfs = Bfs::new(start);
    while let Some((i, (x, z, z1, z2))) = bfs.pop() {
        let clauses = failing(z1, z2);
        if !clauses.is_empty() {
            return Ok(OrderWitness {
                verdict: false,
                counterexample: Some((bfs.word(i), clauses)),
            });
        }
        for e in g.alphabet().ids() {
            let (Some(x2), Some(zn)) = (g.next(x, e), s.next(z, e)) else {
                continue;
            };
            let (Some(n1), Some(n2)) = (s1.next(z1, e), s2.next(z2, e)) else {
                unreachable!("control-equivalent supervisors follow every closed-loop string");
            };
            bfs.visit(i, e, (x2, zn, n1, n2));
        }
    }
    Ok(OrderWitness {
        verdict: true,
        counterexample: None,
    })
}

/// Checks `SUPER ⪯ s_prime`, which must hold for every member of the
/// control-equivalent family of `s`.
pub fn verify_theorem3(g: &Automaton, s: &Automaton, s_prime: &Automaton) -> Result<OrderWitness> {
    let sup = build_super(g, s)?;
    finer_than(g, s, &sup, s_prime)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeComparison {
    pub size1: usize,
    pub size2: usize,
    /// `size1 <= size2`.
    pub ordered: bool,
}

/// Minimum control-cover sizes of `s1` and `s2`, where `s1 ⪯ s2` are both
/// normal members of the control-equivalent family of `s`.
pub fn compare_reductions(g: &Automaton, s: &Automaton, s1: &Automaton, s2: &Automaton) -> Result<SizeComparison> {
    for (label, t) in [("s1", s1), ("s2", s2)] {
        require_feasible(g, t).map_err(|e| Error::Precondition(format!("{label} is not feasible: {e}")))?;
        require_member(g, s, t).map_err(|e| Error::Precondition(format!("{label}: {e}")))?;
        if let Some(v) = is_normal(g, s, t)?.witness {
            return Err(Error::Precondition(format!("{label} is not normal: {}", v.describe(t))));
        }
    }
    let order = finer_than(g, s, s1, s2)?;
    if let Some((w, clauses)) = order.counterexample {
        let names: Vec<String> = clauses.iter().map(Clause::to_string).collect();
        return Err(Error::Precondition(format!(
            "s1 is not finer than s2: clause {} fails after `{}`",
            names.join(","),
            g.alphabet().format_word(&w)
        )));
    }
    let (q1, _) = reduce_exact_minimum(g, s1, CoverMode::Cover, DEFAULT_CAP)?;
    let (q2, _) = reduce_exact_minimum(g, s2, CoverMode::Cover, DEFAULT_CAP)?;
    Ok(SizeComparison {
        size1: q1.num_states(),
        size2: q2.num_states(),
        ordered: q1.num_states() <= q2.num_states(),
    })
}

/// Minimum control-cover sizes of a full-observation supervisor and a
/// partial-observation one that is control-equivalent to it.
///
/// The two supervisors' alphabets may differ only in observability; `g` is
/// read under each supervisor's alphabet in turn. `s_full` must be
/// isomorphic to its closed loop with `g` and `s_partial` to the observer of
/// its closed loop.
pub fn compare_full_vs_partial(g: &Automaton, s_full: &Automaton, s_partial: &Automaton) -> Result<SizeComparison> {
    for t in [s_full, s_partial] {
        if !g.alphabet().same_up_to_observation(t.alphabet()) {
            return Err(Error::AlphabetMismatch {
                left: g.name().to_string(),
                right: t.name().to_string(),
            });
        }
    }
    let g_full = g.with_alphabet(s_full.alphabet().clone());
    let g_partial = g.with_alphabet(s_partial.alphabet().clone());
    require_feasible(&g_full, s_full)?;
    require_feasible(&g_partial, s_partial)?;

    let full_loop = sync_product(&g_full, s_full)?;
    let iso = is_des_isomorphic(s_full, &full_loop)?;
    if !iso.verdict {
        return Err(Error::Precondition(format!(
            "`{}` is not isomorphic to its closed loop: {}",
            s_full.name(),
            iso.reason.unwrap_or_default()
        )));
    }
    let observer = subset_construction(&sync_product(&g_partial, s_partial)?);
    let iso = is_des_isomorphic(s_partial, &observer)?;
    if !iso.verdict {
        return Err(Error::Precondition(format!(
            "`{}` is not isomorphic to the observer of its closed loop: {}",
            s_partial.name(),
            iso.reason.unwrap_or_default()
        )));
    }
    let partial_as_full = s_partial.with_alphabet(s_full.alphabet().clone());
    if let Some(w) = control_equivalent(&g_full, s_full, &partial_as_full)?.witness {
        return Err(Error::Precondition(format!(
            "`{}` and `{}` are not control-equivalent (witness `{}`)",
            s_full.name(),
            s_partial.name(),
            g.alphabet().format_word(&w)
        )));
    }
    let (qf, _) = reduce_exact_minimum(&g_full, s_full, CoverMode::Cover, DEFAULT_CAP)?;
    let (qp, _) = reduce_exact_minimum(&g_partial, s_partial, CoverMode::Cover, DEFAULT_CAP)?;
    Ok(SizeComparison {
        size1: qf.num_states(),
        size2: qp.num_states(),
        ordered: qf.num_states() <= qp.num_states(),
    })
}
