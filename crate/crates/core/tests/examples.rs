//! Behaviour on the two hand-built fixtures: the tank system (`tank.aut`)
//! and the pair of supervisors of different fineness (`finer.aut`).

mod common;

use common::{finer, fixture, ids, set, tank};
use supred::reduction::induce_quotient_guided;
use supred::*;

const TANK_TABLE: &str = "\
z0 En={hL,hM} D={} M=false T=false
z1 En={qo0,qo1,hL,hM} D={} M=false T=false
z2 En={qo0,qo1,hL,hM,hH} D={} M=true T=true
z3 En={qo1,hM,hH} D={qo0} M=false T=false
";

#[test]
fn tank_fixture_shape() {
    let (g, s) = tank();
    assert_eq!(g.num_states(), 10);
    let marked: Vec<&str> = g.marked_states().map(|x| g.state_name(x)).collect();
    assert_eq!(marked, ["idleM", "idleEH"]);
    assert_eq!(s.state_names(), ["z0", "z1", "z2", "z3"]);
    assert_eq!(sync_product(&g, &s).unwrap().num_states(), 8);
}

#[test]
fn tank_control_data_table() {
    let (g, s) = tank();
    let d = control_data(&g, &s).unwrap();
    assert_eq!(d.table(), TANK_TABLE);
    let z3 = s.state_id("z3").unwrap();
    assert_eq!(set(d.disabled(z3)), ids(&g, &["qo0"]));
}

#[test]
fn tank_feasibility() {
    let (g, s) = tank();
    assert!(check_control_feasibility(&s).holds);
    assert!(check_control_existence_under(&g, &s).unwrap().holds);
    // z0 does not enable hH or hEH, so the plant-free check refuses it
    assert_eq!(check_control_existence(&s).witness, Some(0));
    assert!(require_feasible(&g, &s).is_ok());
}

#[test]
fn tank_relation_and_non_transitivity() {
    let (g, s) = tank();
    let r = compatibility_relation(&control_data(&g, &s).unwrap());
    let (z0, z1, z2, z3) = (0, 1, 2, 3);
    for (a, b) in [(z0, z1), (z0, z2), (z1, z2), (z0, z3)] {
        assert!(r.get(a, b) && r.get(b, a), "({a},{b})");
    }
    assert!(!r.get(z2, z3));
    assert!(!r.get(z1, z3));
    // z1 R z0 and z0 R z3, but not z1 R z3
    assert!(r.get(z1, z0) && r.get(z0, z3) && !r.get(z1, z3));
}

#[test]
fn tank_cover_and_quotient() {
    let (g, s) = tank();
    let d = control_data(&g, &s).unwrap();
    let cover = Cover::from_names(&s, &[vec!["z0", "z1", "z2"], vec!["z3"]]).unwrap();
    assert!(validate_cover(&s, &d, &cover).unwrap().holds);
    let (q, _) = induce_quotient(&s, &d, &cover).unwrap();
    assert_eq!(q.num_states(), 2);
    assert!(require_feasible(&g, &q).is_ok());
    assert!(control_equivalent(&g, &s, &q).unwrap().holds);
    assert!(is_des_isomorphic(&q, &fixture("tank.aut", "SC")).unwrap().verdict);

    let whole = Cover::from_names(&s, &[vec!["z0", "z1", "z2", "z3"]]).unwrap();
    let v = validate_cover(&s, &d, &whole).unwrap();
    assert!(matches!(
        v.witness,
        Some(CoverViolation::Incompatible { a: 1, b: 3, .. } | CoverViolation::Incompatible { a: 2, b: 3, .. })
    ));
}

#[test]
fn tank_heuristic_finds_two_states() {
    let (g, s) = tank();
    let (q, report) = reduce_heuristic(&g, &s).unwrap();
    assert_eq!(report.output_size, 2);
    assert!(is_des_isomorphic(&q, &fixture("tank.aut", "SC")).unwrap().verdict);
}

/// SUPER subset whose members all carry supervisor state `z`.
fn super_state_of(sup: &Automaton, z: &str) -> StateId {
    sup.states()
        .find(|&q| {
            sup.state_name(q)
                .split('+')
                .all(|m| m.trim_end_matches(')').ends_with(&format!(",{z}")))
        })
        .unwrap()
}

#[test]
fn tank_super() {
    let (g, s) = tank();
    let sup = build_super(&g, &s).unwrap();
    assert_eq!(sup.num_states(), 4);
    assert!(require_feasible(&g, &sup).is_ok());
    assert!(control_equivalent(&g, &s, &sup).unwrap().holds);
    assert!(verify_theorem3(&g, &s, &s).unwrap().verdict);
    // S carries transitions the closed loop never uses, so SUPER is strictly smaller in edges
    assert!(!is_des_isomorphic(&sup, &s).unwrap().verdict);
    assert!(sup.num_transitions() < s.num_transitions());

    let d = control_data(&g, &s).unwrap();
    for (zi, z) in ["z0", "z1", "z2", "z3"].iter().enumerate() {
        let q = super_state_of(&sup, z);
        let (en, dis) = characterize_super_state(&g, &s, &sup, q).unwrap();
        assert_eq!(set(&dis), set(d.disabled(zi)), "{z}");
        assert!(set(&en).is_subset(&set(d.enabled(zi))), "{z}");
    }
}

#[test]
fn tank_extraction_from_reduced_super() {
    let (g, s) = tank();
    let sup = build_super(&g, &s).unwrap();
    let sd = control_data(&g, &sup).unwrap();
    let (z0, z1, z2, z3) = (
        super_state_of(&sup, "z0"),
        super_state_of(&sup, "z1"),
        super_state_of(&sup, "z2"),
        super_state_of(&sup, "z3"),
    );
    let cover = Cover::new(sup.num_states(), vec![vec![z0, z1, z2], vec![z3]]).unwrap();
    let (simsup, _) = induce_quotient(&sup, &sd, &cover).unwrap();
    assert!(is_normal(&g, &s, &simsup).unwrap().holds);

    let ext = extract_cover_from_simsup(&sup, &simsup, &g, &s).unwrap();
    assert_eq!(ext.cover, cover);
    let (q, _) = ext.quotient(&sup, &sd).unwrap();
    assert!(is_des_isomorphic(&q, &simsup).unwrap().verdict);

    // the quotient of S itself keeps an hH selfloop the closed loop never uses
    let sc = fixture("tank.aut", "SC");
    let v = is_normal(&g, &s, &sc).unwrap();
    assert!(!v.holds);
    assert!(matches!(
        extract_cover_from_simsup(&sup, &sc, &g, &s),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn extraction_from_super_itself_gives_singletons() {
    let (g, s) = tank();
    let sup = build_super(&g, &s).unwrap();
    let ext = extract_cover_from_simsup(&sup, &sup, &g, &s).unwrap();
    assert_eq!(ext.cover, Cover::singletons(sup.num_states()));
    let (q, _) = ext.quotient(&sup, &control_data(&g, &sup).unwrap()).unwrap();
    assert!(is_des_isomorphic(&q, &sup).unwrap().verdict);
}

#[test]
fn finer_fixture_shape() {
    let (g, _, _) = finer();
    let a = g.alphabet();
    assert_eq!(a.len(), 6);
    assert_eq!(
        a.controllable().iter().map(|e| a.name(e)).collect::<Vec<_>>(),
        ["d1", "d2"]
    );
    assert_eq!(a.observable().len(), 6);
}

#[test]
fn finer_order() {
    let (g, s1, s2) = finer();
    assert!(control_equivalent(&g, &s1, &s2).unwrap().holds);
    let w = finer_than(&g, &s1, &s1, &s2).unwrap();
    assert!(w.verdict, "{w:?}");
    assert!(finer_than(&g, &s1, &s1, &s1).unwrap().verdict);

    let back = finer_than(&g, &s1, &s2, &s1).unwrap();
    assert!(!back.verdict);
    let (word, clauses) = back.counterexample.unwrap();
    assert!(word.is_empty());
    assert!(clauses.contains(&Clause::MarkedS));
    let (d1, d2) = (control_data(&g, &s1).unwrap(), control_data(&g, &s2).unwrap());
    assert!(d2.marked_s(0) && !d1.marked_s(0));
}

#[test]
fn finer_exact_sizes() {
    let (g, s1, s2) = finer();
    let (q1, r1) = reduce_exact_minimum(&g, &s1, CoverMode::Cover, DEFAULT_CAP).unwrap();
    let (q2, r2) = reduce_exact_minimum(&g, &s2, CoverMode::Cover, DEFAULT_CAP).unwrap();
    assert_eq!((q1.num_states(), q2.num_states()), (2, 3));
    assert_eq!(r1.mode, ReductionMode::ExactCover);
    assert_eq!(r2.output_size, r2.cover.len());
    assert!(control_equivalent(&g, &s1, &q1).unwrap().holds);
    assert!(control_equivalent(&g, &s2, &q2).unwrap().holds);
    let (p1, _) = reduce_exact_minimum(&g, &s1, CoverMode::Partition, DEFAULT_CAP).unwrap();
    assert_eq!(p1.num_states(), 2);

    let cmp = compare_reductions(&g, &s1, &s1, &s2).unwrap();
    assert_eq!((cmp.size1, cmp.size2, cmp.ordered), (2, 3, true));
    let same = compare_reductions(&g, &s1, &s2, &s2).unwrap();
    assert_eq!(same.size1, same.size2);
}

#[test]
fn finer_full_versus_partial() {
    let (g, s1, s2) = finer();
    let s2p = fixture("finer.aut", "S2p");
    let g_partial = g.with_alphabet(s2p.alphabet().clone());
    assert!(
        is_des_isomorphic(&s1, &trim_reachable(&sync_product(&g, &s1).unwrap()))
            .unwrap()
            .verdict
    );
    let observer = subset_construction(&sync_product(&g_partial, &s2p).unwrap());
    assert!(is_des_isomorphic(&s2p, &observer).unwrap().verdict);

    let cmp = compare_full_vs_partial(&g, &s1, &s2p).unwrap();
    assert_eq!((cmp.size1, cmp.size2, cmp.ordered), (2, 3, true));
    // S2 is not isomorphic to its own closed loop, so it cannot stand as the full-observation side
    assert!(matches!(
        compare_full_vs_partial(&g, &s2, &s2p),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn guided_quotient_rejects_invalid_choice() {
    let (g, s) = tank();
    let d = control_data(&g, &s).unwrap();
    let cover = Cover::from_names(&s, &[vec!["z0", "z1", "z2"], vec!["z3"]]).unwrap();
    let r = induce_quotient_guided(&s, &d, &cover, |_, _, _| 7);
    assert!(matches!(r, Err(Error::Precondition(_))));
}
