use fuglede_core::constructions::appendix::{verify_appendix, verify_appendix_with, AppendixInputs};
use fuglede_core::constructions::lift::grid_lift_tiling;
use fuglede_core::constructions::prop_usc::{verify_prop_usc, verify_prop_usc_with, PropUscInputs};
use fuglede_core::cover::replay_tree;
use fuglede_core::spectral::UscRoute;
use fuglede_core::tiling::{enumerate_complements_with, Branching};
use fuglede_core::transcript::{self, Verdict};
use fuglede_core::{Error, Group, PointSet};

#[test]
fn prop_usc_certificate() {
    let p = verify_prop_usc().unwrap();
    let c = &p.certificate;
    assert_eq!(c.hadamard.pairs_checked, 15);
    assert!(c.decomposition_t1.accepted() && c.decomposition_t.accepted());
    assert!(c.spectrum_t1 && c.spectrum_t);
    assert_eq!(c.difference_rows, 18);
    assert_eq!(c.rows_covered, 18);
    assert_eq!(c.p_matrix.rank_mod3, 3);
    assert_eq!(c.pairs.len(), 30);
    assert!(c.pairs.iter().all(|r| r.surjective && r.injective && r.audited && r.nonzero));
    assert!(c.pairs.iter().all(|r| r.complement_size == 2304));
    assert_eq!((c.spectrum_size, c.obstruction_order), (6, 512));
    assert!(matches!(p.no_universal_spectrum.route(), UscRoute::SpectrumDuality { .. }));

    let spot = c.pairs.iter().find(|r| (r.i, r.j) == (3, 1)).unwrap();
    assert_eq!(spot.y.y, vec![9, 8, 0]);
    assert_eq!(spot.y.mod3, vec![0, 2, 0]);
    assert_eq!(spot.y.mod8, vec![1, 0, 0]);
    assert_eq!(spot.multiplier, 576);
    assert_eq!(spot.rho_exponents, vec![0, 3, 6, 9]);
    assert_eq!(spot.rho_form, "576*(ρ^0+ρ^3+ρ^6+ρ^9)");
}

#[test]
fn tampered_tile_is_refused() {
    let mut inputs = PropUscInputs::builtin().unwrap();
    inputs.t[0][1] += 1;
    match verify_prop_usc_with(&inputs) {
        Err(Error::Verification(step)) => assert!(step.starts_with("24K = LT"), "{step}"),
        other => panic!("expected a refusal, got {:?}", other.map(|_| ())),
    }
}

#[test]
fn appendix_certificate() {
    let a = verify_appendix().unwrap();
    let c = &a.certificate;
    assert_eq!((c.u_size, c.u_difference_closed), (216, true));
    assert_eq!(c.u0.len(), 6);
    assert_eq!(c.fact1_point, vec![4, 4, 4, 4]);
    assert_eq!(c.fact1_candidates, vec![vec![3, 4, 4, 4], vec![4, 3, 4, 4], vec![4, 4, 3, 4], vec![4, 4, 4, 3]]);
    assert_eq!(c.fact2.len(), 4);
    assert!(c.fact2.iter().all(|s| s.closed && s.nodes <= 100_000));
    assert_eq!(c.fact3.len(), 6);
    assert!(c.fact3.iter().all(|p| p.immediate_contradiction));
    assert_eq!((c.inner_sums, c.inner_sums_vanish), (24, true));
    assert_eq!(c.duality.subgroup_order, 81);
    assert_eq!(c.corroborating_complements, vec![216; 3]);
    for tree in &a.trees {
        let file = tree.to_file();
        let text = serde_json::to_string(&file).unwrap();
        let back = serde_json::from_str(&text).unwrap();
        assert!(replay_tree(&back).unwrap().closed);
    }
}

#[test]
fn appendix_refuses_a_wrong_p_set() {
    let mut inputs = AppendixInputs::builtin().unwrap();
    let g = inputs.tile.group().clone();
    inputs.p_set = PointSet::from_coords(&g, &[[3, 4, 4, 4], [4, 3, 4, 4], [4, 4, 3, 4], [2, 2, 2, 2]]).unwrap();
    assert!(matches!(verify_appendix_with(&inputs), Err(Error::Verification(_))));
}

#[test]
fn builtin_transcripts_replay() {
    let t = transcript::hadamard().unwrap();
    assert_eq!(t.verdict, Verdict::Accepted);
    assert!(transcript::replay(&t.to_json()).unwrap().identical);
    let (t, _) = transcript::prop_usc().unwrap();
    assert_eq!(t.verdict, Verdict::Accepted);
    let text = t.to_json();
    assert!(text.contains("\"schema_version\": 1"));
    assert!(transcript::replay(&text).unwrap().identical);
}

#[test]
fn lift_of_the_prop_usc_tile() {
    let inputs = PropUscInputs::builtin().unwrap();
    let g = Group::uniform(24, 3).unwrap();
    let t = PointSet::from_columns(&g, &inputs.t).unwrap();
    let c = enumerate_complements_with(&t, 1, Branching::FewestCandidates).unwrap().complements.remove(0);
    let (b, _) = grid_lift_tiling(&t, &c, 2).unwrap();
    assert_eq!(b.len(), 48);
    assert_eq!(b.group().moduli(), &[48, 48, 48]);
}
