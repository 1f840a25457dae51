//! Gadget behaviour checked by exhaustive search at small sizes.

mod common;

use btd_core::elim::{validate_ranking, visible_levels, EdgeRanking, Level};
use btd_core::reduction::{build_g_alpha, build_tbar, tbar_witness, GadgetParams};
use btd_core::Forest;
use common::{feasible, mask_of, Oracle};

#[test]
fn oracle_matches_exact_solver() {
    use btd_core::exact::{exact_td_line, ExactOptions};
    for seed in 0..40 {
        let f = Forest::generate(btd_core::TreeKind::Random { n: 10, seed }).unwrap();
        let td = exact_td_line(&f, ExactOptions::default()).unwrap();
        assert!(feasible(&f, 0, td, &[]).is_some());
        assert!(feasible(&f, 0, td - 1, &[]).is_none());
    }
}

#[test]
fn g_alpha_height_without_outside_pressure() {
    for alpha in [3, 4] {
        let g = build_g_alpha(alpha, Some(2)).unwrap();
        let w1 = g.vertices.w1;
        assert!(
            feasible(&g.forest, w1, alpha + 2, &[]).is_none(),
            "α = {alpha}"
        );
        let ef = feasible(&g.forest, w1, alpha + 3, &[]).expect("height α+3");
        assert_eq!(ef.height(), alpha + 3);
        assert!(validate_ranking(&g.forest, &ef.ranking()).unwrap().is_ok());
    }
}

#[test]
fn g_alpha_leaves_only_top_three_visible() {
    for alpha in [3, 4] {
        let g = build_g_alpha(alpha, Some(2)).unwrap();
        let w1 = g.vertices.w1;
        let below: Vec<Level> = (1..=alpha).collect();
        let ef = feasible(&g.forest, w1, alpha + 3, &below).expect("witness");
        let vis = visible_levels(&g.forest, &ef.ranking(), w1).unwrap();
        assert!(vis.iter().all(|&q| q > alpha && q <= alpha + 3), "{vis:?}");
        // the variant used for picked elements shows all three
        let o = Oracle::new(&g.forest, w1, alpha + 3);
        let full = mask_of(&[alpha + 1, alpha + 2, alpha + 3]);
        assert!(o.root_family(w1).contains(&full));
    }
}

#[test]
fn g_alpha_blocked_by_outside_levels() {
    for alpha in [3, 4] {
        let g = build_g_alpha(alpha, Some(2)).unwrap();
        let w1 = g.vertices.w1;
        for x in [vec![alpha + 2], vec![alpha + 3], vec![alpha + 2, alpha + 3]] {
            assert!(
                feasible(&g.forest, w1, alpha + 3, &x).is_none(),
                "α = {alpha}, X = {x:?}"
            );
        }
        // α+1 visible from outside still leaves height α+3
        assert!(feasible(&g.forest, w1, alpha + 3, &[alpha + 1]).is_some());
    }
}

fn tiny_params(big_m: u32, k: Level) -> GadgetParams {
    GadgetParams {
        big_m,
        k,
        b: usize::MAX,
        m_bar: 0,
        phi: Vec::new(),
        eta: Vec::new(),
        tbar: Vec::new(),
        scaled: true,
    }
}

fn all_rankings(f: &Forest, h: Level) -> impl Iterator<Item = Vec<Level>> + '_ {
    let m = f.edge_count() as u32;
    (0..(h as u64).pow(m)).filter_map(move |mut code| {
        let mut levels = Vec::with_capacity(m as usize);
        for _ in 0..m {
            levels.push((code % h as u64) as Level + 1);
            code /= h as u64;
        }
        validate_ranking(f, &EdgeRanking::new(levels.clone()))
            .unwrap()
            .is_ok()
            .then_some(levels)
    })
}

#[test]
fn tbar_witness_keeps_path_under_d() {
    for (m, d, k) in [(2, 3, 4), (2, 4, 6), (3, 3, 5)] {
        let p = tiny_params(m, k);
        let t = build_tbar(d, &p).unwrap();
        let ef = tbar_witness(&t, &p).unwrap();
        assert_eq!(ef.height(), k);
        assert!(t.path.iter().all(|&e| ef.level(e) <= d));
    }
}

/// Without a width bound, minimum-height rankings of `T̄_d` can put path
/// edges below `d - M + 1`; the lower clause needs the width pressure of the
/// full instance.
#[test]
fn tbar_lower_clause_by_enumeration() {
    for (m, d, k) in [(2u32, 3, 4), (2, 4, 5)] {
        let p = tiny_params(m, k);
        let t = build_tbar(d, &p).unwrap();
        let root = t.root;
        assert!(feasible(&t.forest, root, k - 1, &[]).is_none());
        let lowest = d - m + 1;
        let mut total = 0;
        let mut below = 0;
        for levels in all_rankings(&t.forest, k) {
            total += 1;
            if t.path.iter().any(|&e| levels[e] < lowest) {
                below += 1;
            }
        }
        assert!(total > 0);
        assert!(
            below > 0,
            "d = {d}: every minimum-height ranking keeps the path high"
        );
    }
}
