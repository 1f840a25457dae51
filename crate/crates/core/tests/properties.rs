use proptest::prelude::*;

use btd_core::approx::{btd_approx, is_sorted};
use btd_core::elim::validate_ranking;
use btd_core::exact::{exact_btd, exact_td_line, ExactOptions};
use btd_core::minrank::optimal_elimination_forest;
use btd_core::reduction::{
    certify_hitting_set, compute_params_with, extract_hitting_set, mhs_to_btd_with, MhsInstance,
};
use btd_core::{Forest, TreeKind};

fn tree(n: usize, seed: u64) -> Forest {
    Forest::generate(TreeKind::Random { n, seed }).unwrap()
}

/// Random sets over `1..=n` together with a hitting set built by taking the
/// smallest member of every set.
fn mhs_case() -> impl Strategy<Value = (MhsInstance, Vec<usize>)> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(1..=n, 1..=n.min(3)), 1..=3).prop_map(
            move |sets| {
                let mut hs: Vec<usize> = sets.iter().map(|s| *s.iter().next().unwrap()).collect();
                hs.sort();
                hs.dedup();
                let sets = sets.into_iter().map(|s| s.into_iter().collect()).collect();
                let inst = MhsInstance::new(n, sets, hs.len()).unwrap();
                (inst, hs)
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn optimal_ranking_is_valid_and_matches_exact(n in 2usize..12, seed in any::<u64>()) {
        let f = tree(n, seed);
        let ef = optimal_elimination_forest(&f);
        prop_assert!(validate_ranking(&f, &ef.ranking()).unwrap().is_ok());
        prop_assert_eq!(ef.height(), exact_td_line(&f, ExactOptions::default()).unwrap());
    }

    #[test]
    fn approx_is_bounded_and_within_2b(n in 2usize..12, seed in any::<u64>(), b in 1usize..5) {
        let f = tree(n, seed);
        let run = btd_approx(&f, b).unwrap();
        let r = &run.result;
        prop_assert!(validate_ranking(&f, &r.ranking()).unwrap().is_ok());
        prop_assert!(r.is_b_bounded(b));
        let opt = exact_btd(&f, b, ExactOptions::default()).unwrap().height;
        prop_assert!(r.height() >= opt);
        prop_assert!(r.height() <= opt + 2 * b as u32);
        prop_assert!(is_sorted(&run.initial));
    }

    #[test]
    fn exact_witness_is_bounded(n in 2usize..11, seed in any::<u64>(), b in 1usize..4) {
        let f = tree(n, seed);
        let sol = exact_btd(&f, b, ExactOptions::default()).unwrap();
        prop_assert!(validate_ranking(&f, &sol.witness.ranking()).unwrap().is_ok());
        prop_assert!(sol.witness.width() <= b);
        prop_assert_eq!(sol.witness.height(), sol.height);
    }

    #[test]
    fn schedule_replays_elimination(n in 2usize..14, seed in any::<u64>()) {
        let f = tree(n, seed);
        let ef = optimal_elimination_forest(&f);
        let rep = ef.to_merge_schedule().simulate(&f).unwrap();
        prop_assert_eq!(rep.steps, ef.height() as usize);
        prop_assert_eq!(rep.max_step, ef.width());
        prop_assert_eq!(rep.final_vertices, rep.components);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn certify_then_extract_round_trips((inst, hs) in mhs_case(), big_m in 1u32..3) {
        let params = compute_params_with(&inst, Some(big_m)).unwrap();
        let bi = mhs_to_btd_with(&inst, params).unwrap();
        let mat = bi.materialize().unwrap();
        let ef = certify_hitting_set(&bi, &mat, &hs).unwrap();
        prop_assert!(validate_ranking(&mat.forest, &ef.ranking()).unwrap().is_ok());
        prop_assert!(ef.height() <= bi.k);
        prop_assert!(ef.width() <= bi.b);
        let x = extract_hitting_set(&bi, &mat, &ef).unwrap();
        prop_assert_eq!(x.set, hs);
        prop_assert!(x.hits_all && x.within_budget);
    }
}
