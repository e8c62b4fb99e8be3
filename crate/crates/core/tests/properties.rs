mod oracle;

use fuglede_core::constructions::lift::grid_lift_tiling;
use fuglede_core::cover::{propagate, refute_by_branching, DeductionKind, PartialCover, Propagation, Refutation};
use fuglede_core::spectral::{
    build_witness_table, find_spectrum, is_spectrum, lagarias_szabo_search, SearchOutcome,
};
use fuglede_core::tiling::{enumerate_complements, is_tiling_pair, CheckMode};
use fuglede_core::{Group, PointSet};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

/// A genuine tiling pair in a group of order at most `max`, with `T'` containing 0.
fn tiling_pair(seed: u64, max: usize) -> (PointSet, PointSet) {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let (t, tp) = oracle::random_pair(&mut rng, max);
        if oracle::tiles_by_counting(&t, &tp) {
            let shift = tp.min().unwrap();
            let tp = tp.translate(t.group().neg(shift));
            return (t, tp);
        }
    }
}

fn pick(set: &PointSet, mask: u64) -> Vec<usize> {
    set.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, p)| p).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Every deduction from a partial complement holds for a complement extending it.
    #[test]
    fn propagation_is_sound(seed in any::<u64>(), in_mask in any::<u64>(), out_mask in any::<u64>()) {
        let (t, c) = tiling_pair(seed, 36);
        let g = t.group();
        let inside = PointSet::new(g, std::iter::once(0).chain(pick(&c, in_mask)));
        let rest = PointSet::new(g, (0..g.order()).filter(|&x| !c.contains(x)));
        let outside = PointSet::new(g, pick(&rest, out_mask));
        let state = PartialCover::new(&t, &inside, &outside).unwrap();
        match propagate(&state) {
            Propagation::Contradiction { .. } => prop_assert!(false, "contradiction on an extendable state"),
            Propagation::Fixpoint { deductions, .. } => {
                for d in deductions {
                    match d.kind {
                        DeductionKind::ForcedIn => prop_assert!(c.contains(d.subject)),
                        DeductionKind::ForcedOut => prop_assert!(!c.contains(d.subject)),
                        DeductionKind::Contradiction => prop_assert!(false),
                    }
                }
            }
        }
        let closed = matches!(refute_by_branching(&state, 64), Refutation::Closed(_));
        prop_assert!(!closed);
    }

    #[test]
    fn grid_lift_preserves_tiling(seed in any::<u64>(), k in 1u32..=3) {
        let (a, c) = tiling_pair(seed, 36);
        let (b, lifted) = grid_lift_tiling(&a, &c, k).unwrap();
        prop_assert_eq!(b.len(), a.len() * (k as usize).pow(a.group().rank() as u32));
        prop_assert!(oracle::tiles_by_counting(&b, &lifted));
    }

    #[test]
    fn spectra_are_translation_and_negation_invariant(seed in any::<u64>(), c in any::<usize>(), d in any::<usize>()) {
        let (t, _) = tiling_pair(seed, 48);
        let g = t.group();
        if let SearchOutcome::Found(l) = find_spectrum(&t, 1_000_000).unwrap().outcome {
            let (c, d) = (c % g.order(), d % g.order());
            prop_assert!(is_spectrum(&t, &l).unwrap().accepted);
            prop_assert!(is_spectrum(&t, &l.translate(c)).unwrap().accepted);
            prop_assert!(is_spectrum(&t.translate(d), &l).unwrap().accepted);
            prop_assert!(is_spectrum(&t.negate(), &l.negate()).unwrap().accepted);
        }
    }
}

/// Both halves of the Lagarias–Szabó property on every set found in small cyclic groups.
#[test]
fn lagarias_szabo_sets_are_universal() {
    for n in 1..=12u32 {
        for t in oracle::cyclic_classes(n) {
            if n as usize % t.len() != 0 {
                continue;
            }
            let SearchOutcome::Found(cert) = lagarias_szabo_search(&t, u64::MAX).unwrap().outcome else { continue };
            let s = &cert.set;
            let e = enumerate_complements(&t, usize::MAX).unwrap();
            for c in &e.complements {
                assert!(is_spectrum(c, s).unwrap().accepted, "Z_{n} {:?}", t.indices());
            }
            if let SearchOutcome::Found(l) = find_spectrum(&t, u64::MAX).unwrap().outcome {
                assert!(is_tiling_pair(&l, s, CheckMode::Audit).unwrap().is_accepted());
            }
        }
    }
}

#[test]
fn witness_rows_never_vanish() {
    for n in [4u32, 6, 8, 9, 10, 12] {
        for t in oracle::cyclic_classes(n) {
            if n as usize % t.len() != 0 {
                continue;
            }
            let e = enumerate_complements(&t, usize::MAX).unwrap();
            if e.complements.is_empty() {
                continue;
            }
            let table = build_witness_table(&t, &e.complements).unwrap();
            assert!(table.rows_nonvanishing());
            for (row, &v) in table.witnesses.iter().enumerate() {
                let any = e.complements.iter().any(|c| !oracle::vanishes_numerically(c, v));
                assert!(any && (0..table.columns()).any(|j| !table.entry(row, j).is_zero()));
            }
        }
    }
}

#[test]
fn toy_group_z6() {
    let g = Group::cyclic(6).unwrap();
    let t = PointSet::new(&g, [0, 3]);
    let e = enumerate_complements(&t, usize::MAX).unwrap();
    assert_eq!(e.complements.len(), oracle::complements_by_scan(&t).len());
}
