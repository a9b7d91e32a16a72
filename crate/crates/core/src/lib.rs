//! Supervisor reduction for discrete-event systems.
//!
//! Given a plant `G` and a feasible supervisor `S` (both deterministic
//! automata over one [`Alphabet`]), this crate extracts the per-state control
//! data `(En, D, M, T)` of `S`, validates control covers and builds the
//! induced quotient supervisors, constructs the finest control-equivalent
//! supervisor `SUPER` by subset construction on `G||S`, reduces supervisors
//! heuristically or exactly, and decides the fineness order between
//! control-equivalent supervisors.
//!
//! Automata are read and written in the `.aut` text format, see [`format`].

pub mod alphabet;
pub mod automaton;
pub mod cli;
mod error;
pub mod format;
pub mod morphism;
pub mod ops;
pub mod ordering;
pub mod random;
pub mod reduction;
mod search;
pub mod supervision;

pub use alphabet::{Alphabet, Event, EventId, EventSet, Word};
pub use automaton::{Automaton, StateId};
pub use error::{Error, Result};
pub use format::{parse_automata, parse_automaton, serialize_automata, serialize_automaton, ParseError};
pub use morphism::{is_des_epimorphic, is_des_isomorphic, language_equivalent, MorphismResult, Verdict};
pub use ops::{project_string, subset_construction, sync_product, trim_reachable};
pub use ordering::{
    compare_full_vs_partial, compare_reductions, finer_than, verify_theorem3, Clause, OrderWitness, SizeComparison,
};
pub use reduction::{
    build_super, characterize_super_state, extract_cover_from_simsup, generate_equivalent_supervisor, induce_quotient,
    reduce_exact_minimum, reduce_heuristic, validate_cover, Cover, CoverMode, CoverViolation, ExtractedCover,
    QuotientChoice, ReductionMode, ReductionReport, DEFAULT_CAP,
};
pub use supervision::{
    check_control_existence, check_control_existence_under, check_control_feasibility, compatibility_relation,
    compatible, control_data, control_equivalent, is_normal, require_feasible, restrict_marking, CompatibilityRelation,
    ControlData, NormalityViolation,
};
