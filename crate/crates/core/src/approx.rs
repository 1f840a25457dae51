//! Additive-`2b` approximation of `btd(L(T), b)` for trees.
//!
//! Pipeline: a minimum-height ranking is made compact, stretched and
//! sorted. The main loop then repeatedly takes the highest level with more
//! than `b` nodes and lowers the node on it whose subtree is shortest.
//!
//! Every transformation is a change of levels; the tree shape either stays
//! the same (lowering, stretching, compactifying) or is rebuilt from the
//! new levels and revalidated (switching).

use serde::Serialize;

use crate::elim::{EliminationForest, Level};
use crate::error::{Error, Result};
use crate::forest::{EdgeId, Forest};
use crate::minrank::optimal_elimination_forest;

/// Per-node subtree summaries, indexed by edge id.
#[derive(Clone, Debug)]
pub struct SubtreeStats {
    pub min_level: Vec<Level>,
    pub size: Vec<usize>,
    pub min_edge: Vec<EdgeId>,
}

impl SubtreeStats {
    pub fn of(ef: &EliminationForest) -> Self {
        let n = ef.len();
        let mut min_level = ef.levels().to_vec();
        let mut size = vec![1; n];
        let mut min_edge: Vec<EdgeId> = (0..n).collect();
        for v in ef.postorder() {
            if let Some(p) = ef.parent(v) {
                min_level[p] = min_level[p].min(min_level[v]);
                size[p] += size[v];
                min_edge[p] = min_edge[p].min(min_edge[v]);
            }
        }
        SubtreeStats {
            min_level,
            size,
            min_edge,
        }
    }

    pub fn height(&self, ef: &EliminationForest, v: EdgeId) -> Level {
        ef.level(v) - self.min_level[v] + 1
    }
}

/// Moves `ET[v]` one level down; if that reaches level 0 the whole forest
/// is raised by one instead of leaving the subtree below level 1.
pub fn lower(ef: &EliminationForest, v: EdgeId) -> EliminationForest {
    let mut levels = ef.levels().to_vec();
    let sub = ef.subtree(v);
    let mut hit_zero = false;
    for &x in &sub {
        levels[x] -= 1;
        hit_zero |= levels[x] == 0;
    }
    if hit_zero {
        for l in levels.iter_mut() {
            *l += 1;
        }
    }
    ef.relevel(levels)
        .expect("lowering keeps the level function monotone")
}

pub fn is_thin_subtree(ef: &EliminationForest, v: EdgeId) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    ef.subtree(v).into_iter().all(|x| seen.insert(ef.level(x)))
}

pub fn is_thin(ef: &EliminationForest) -> bool {
    ef.level_sizes().into_iter().all(|s| s <= 1)
}

pub fn is_small(ef: &EliminationForest, v: EdgeId, b: usize) -> bool {
    ef.subtree_size(v) <= b
}

/// A level is full when it holds at least `b` nodes.
pub fn is_full(ef: &EliminationForest, level: Level, b: usize) -> bool {
    level >= 1
        && (level as usize) <= ef.height() as usize
        && ef.level_sizes()[level as usize - 1] >= b
}

pub fn is_b_bounded(ef: &EliminationForest, b: usize) -> bool {
    ef.width() <= b
}

/// Full levels outside the highest `b - 1` levels form either a subset of
/// the lowest prefix level, or a consecutive run ending at it.
///
/// The prefix is the `b` highest levels, so the only prefix level that can
/// appear in the list is `h - b + 1`; levels `h - b + 2..=h` are excluded
/// as the definition states.
pub fn is_structured(ef: &EliminationForest, b: usize) -> bool {
    let h = ef.height() as i64;
    let edge = h - b as i64 + 1;
    let sizes = ef.level_sizes();
    let full: Vec<i64> = (1..=edge.min(h))
        .filter(|&l| sizes[l as usize - 1] >= b)
        .collect();
    if full.iter().all(|&l| l == edge) {
        return true;
    }
    full.last() == Some(&edge) && full.windows(2).all(|w| w[1] == w[0] + 1)
}

/// A root-to-bottom path of a subtree together with the off-path child at
/// each path node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrunkDecomposition {
    /// From the subtree root down to a leaf on its lowest occupied level.
    pub trunk: Vec<EdgeId>,
    /// `branches[i]` is the off-trunk child of `trunk[i]`, if any. The last
    /// trunk node is a leaf and has none.
    pub branches: Vec<Option<EdgeId>>,
}

/// All trunks of `ET[v]`. The lowest occupied level of the subtree plays
/// the role of level 1.
pub fn trunks(ef: &EliminationForest, v: EdgeId) -> Vec<TrunkDecomposition> {
    let stats = SubtreeStats::of(ef);
    let target = stats.min_level[v];
    let mut out = Vec::new();
    let mut path = vec![v];
    collect_trunks(ef, &stats, target, &mut path, &mut out);
    out
}

fn collect_trunks(
    ef: &EliminationForest,
    stats: &SubtreeStats,
    target: Level,
    path: &mut Vec<EdgeId>,
    out: &mut Vec<TrunkDecomposition>,
) {
    let v = *path.last().expect("nonempty path");
    if ef.is_leaf(v) {
        let branches = path
            .windows(2)
            .map(|w| ef.children(w[0]).iter().copied().find(|&c| c != w[1]))
            .chain(std::iter::once(None))
            .collect();
        out.push(TrunkDecomposition {
            trunk: path.clone(),
            branches,
        });
        return;
    }
    for &c in ef.children(v) {
        if stats.min_level[c] == target {
            path.push(c);
            collect_trunks(ef, stats, target, path, out);
            path.pop();
        }
    }
}

fn branch_height(ef: &EliminationForest, stats: &SubtreeStats, b: Option<EdgeId>) -> Level {
    b.map_or(0, |x| stats.height(ef, x))
}

/// Reversed pairs `(z1, z2)`: `z2` is a non-leaf child of `z1` lying on a
/// trunk of `ET[z1]`, and for some continuation of that trunk the branch at
/// `z2` is taller than the branch at `z1`.
pub fn reversed_pairs(ef: &EliminationForest) -> Vec<(EdgeId, EdgeId)> {
    let stats = SubtreeStats::of(ef);
    let mut out = Vec::new();
    for z1 in 0..ef.len() {
        for &z2 in ef.children(z1) {
            if reversed_branch(ef, &stats, z1, z2).is_some() {
                out.push((z1, z2));
            }
        }
    }
    out
}

/// For a reversed pair returns the tallest offending branch at `z2`.
fn reversed_branch(
    ef: &EliminationForest,
    stats: &SubtreeStats,
    z1: EdgeId,
    z2: EdgeId,
) -> Option<EdgeId> {
    if stats.min_level[z2] != stats.min_level[z1] || ef.is_leaf(z2) {
        return None;
    }
    let at_z1 = branch_height(
        ef,
        stats,
        ef.children(z1).iter().copied().find(|&c| c != z2),
    );
    let mut best: Option<(Level, EdgeId)> = None;
    for &t in ef.children(z2) {
        if stats.min_level[t] != stats.min_level[z2] {
            continue;
        }
        if let Some(b) = ef.children(z2).iter().copied().find(|&c| c != t) {
            let h = stats.height(ef, b);
            if h > at_z1 && best.is_none_or(|(bh, _)| h > bh) {
                best = Some((h, b));
            }
        }
    }
    best.map(|(_, b)| b)
}

pub fn is_sorted(ef: &EliminationForest) -> bool {
    reversed_pairs(ef).is_empty()
}

/// Sum over reversed pairs of the distance of `z1` from its root.
pub fn sort_potential(ef: &EliminationForest) -> usize {
    reversed_pairs(ef)
        .into_iter()
        .map(|(z1, _)| ef.depth(z1))
        .sum()
}

/// Exchanges the levels of `z1` and its child `z2` and rebuilds. Fails with
/// `Infeasible` when the swapped levels are not a valid ranking.
pub fn switch(
    forest: &Forest,
    ef: &EliminationForest,
    z1: EdgeId,
    z2: EdgeId,
) -> Result<EliminationForest> {
    if ef.parent(z2) != Some(z1) {
        return Err(Error::Precondition(format!(
            "edge {z2} is not a child of {z1}"
        )));
    }
    let mut levels = ef.levels().to_vec();
    levels.swap(z1, z2);
    EliminationForest::from_levels(forest, levels).map_err(|e| match e {
        Error::InvalidRanking(v) => Error::Infeasible(format!(
            "switching {z1} and {z2} breaks the ranking: {}",
            v.first().map(|x| x.to_string()).unwrap_or_default()
        )),
        other => other,
    })
}

/// Switch used by sorting: when the other child `z3` of `z1` sits too high
/// to fit below `z1`'s new level, `ET[z3]` is first moved down just enough.
/// On a reversed pair this never leaves level 1, because `ET[z3]` is
/// shorter than a branch hanging below `z2`.
fn sort_switch(
    forest: &Forest,
    ef: &EliminationForest,
    z1: EdgeId,
    z2: EdgeId,
) -> Result<EliminationForest> {
    let mut levels = ef.levels().to_vec();
    let l2 = levels[z2];
    if let Some(z3) = ef.children(z1).iter().copied().find(|&c| c != z2) {
        if levels[z3] >= l2 {
            let delta = levels[z3] - l2 + 1;
            for x in ef.subtree(z3) {
                if levels[x] <= delta {
                    return Err(Error::Invariant(format!(
                        "moving ET[{z3}] below {z1} would leave level 1"
                    )));
                }
                levels[x] -= delta;
            }
        }
    }
    levels.swap(z1, z2);
    EliminationForest::from_levels(forest, levels).map_err(|e| {
        Error::Invariant(format!(
            "switch of {z1} and {z2} produced an invalid tree: {e}"
        ))
    })
}

/// Postorder stretching of a compact forest.
pub fn stretch(ef: &EliminationForest, b: usize) -> Result<EliminationForest> {
    if !ef.is_compact() {
        return Err(Error::Precondition(
            "stretch needs a compact elimination forest".into(),
        ));
    }
    let mut cur = ef.clone();
    for v in ef.postorder() {
        let stats = SubtreeStats::of(&cur);
        if is_thin_subtree(&cur, v) || stats.height(&cur, v) as usize >= b {
            continue;
        }
        let &[u1, u2] = cur.children(v) else { continue };
        let l = cur.level(v);
        if cur.level(u1) != l - 1 || cur.level(u2) != l - 1 {
            continue;
        }
        if !is_thin_subtree(&cur, u1) || !is_thin_subtree(&cur, u2) {
            continue;
        }
        // Count the lowerings against the levels before any of them, so
        // normalisation shifts do not change the amount.
        let times = l - stats.min_level[u1];
        for _ in 0..times {
            cur = lower(&cur, u2);
        }
    }
    Ok(cur)
}

/// One sorting step on the lowest reversed pair `(z1, z2)`. `lifted` is set
/// when the step raised a child of `z2` by one level instead of switching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwitchRecord {
    pub z1: EdgeId,
    pub z2: EdgeId,
    pub lifted: Option<EdgeId>,
    pub potential_before: usize,
    pub potential_after: usize,
}

#[derive(Clone, Debug)]
pub struct SortOutcome {
    pub forest: EliminationForest,
    pub switches: Vec<SwitchRecord>,
}

/// When both children of `z2` reach the bottom of `ET[z2]` and only one of
/// the two trunk choices is reversed, raising the trunk child of that choice
/// by one level removes it. Returns that child.
fn liftable_child(
    ef: &EliminationForest,
    stats: &SubtreeStats,
    z1: EdgeId,
    z2: EdgeId,
) -> Option<EdgeId> {
    let &[a, b] = ef.children(z2) else {
        return None;
    };
    let bottom = stats.min_level[z2];
    if stats.min_level[a] != bottom || stats.min_level[b] != bottom {
        return None;
    }
    let at_z1 = branch_height(
        ef,
        stats,
        ef.children(z1).iter().copied().find(|&c| c != z2),
    );
    let (ha, hb) = (stats.height(ef, a), stats.height(ef, b));
    // Trunk through `x` is reversed when the other child is taller than `at_z1`.
    let x = match (hb > at_z1, ha > at_z1) {
        (true, false) => a,
        (false, true) => b,
        _ => return None,
    };
    (ef.level(x) + 1 < ef.level(z2)).then_some(x)
}

/// Top-down, in every subtree that is not thin, moves the off-trunk child
/// up to directly below its parent. Subtree heights and the lowest level of
/// every subtree containing a trunk stay the same, so sortedness, validity
/// and compactness are kept.
fn raise_branches(ef: &EliminationForest) -> EliminationForest {
    let mut cur = ef.clone();
    let order: Vec<EdgeId> = ef.roots().iter().flat_map(|&r| ef.subtree(r)).collect();
    for x in order {
        let &[a, b] = cur.children(x) else { continue };
        if is_thin_subtree(&cur, x) {
            continue;
        }
        let stats = SubtreeStats::of(&cur);
        let (ha, hb) = (stats.height(&cur, a), stats.height(&cur, b));
        let y = match (
            stats.min_level[a] == stats.min_level[x],
            stats.min_level[b] == stats.min_level[x],
        ) {
            (true, false) => b,
            (false, true) => a,
            _ if ha > hb => b,
            _ if hb > ha => a,
            _ => continue,
        };
        let target = cur.level(x) - 1;
        if cur.level(y) < target {
            let delta = target - cur.level(y);
            let mut levels = cur.levels().to_vec();
            for z in cur.subtree(y) {
                levels[z] += delta;
            }
            cur = cur
                .relevel(levels)
                .expect("raising a branch keeps levels monotone");
        }
    }
    cur
}

/// Repeatedly repairs the lowest reversed pair until none is left, either by
/// lifting a child of `z2` off the bottom level or by switching.
pub fn sort(forest: &Forest, ef: &EliminationForest) -> Result<SortOutcome> {
    let n = ef.len();
    let guard = (n * n).max(4);
    let mut cur = ef.clone();
    let mut switches = Vec::new();
    loop {
        let stats = SubtreeStats::of(&cur);
        let pairs = reversed_pairs(&cur);
        let Some(&(z1, z2)) = pairs
            .iter()
            .min_by_key(|&&(z1, z2)| (cur.level(z1), z1, z2))
        else {
            break;
        };
        if switches.len() >= guard {
            return Err(Error::Invariant(format!("sorting exceeded {guard} steps")));
        }
        debug_assert!(reversed_branch(&cur, &stats, z1, z2).is_some());
        let before: usize = pairs.iter().map(|&(a, _)| cur.depth(a)).sum();
        let lifted = liftable_child(&cur, &stats, z1, z2);
        let next = match lifted {
            Some(x) => {
                let mut levels = cur.levels().to_vec();
                for y in cur.subtree(x) {
                    levels[y] += 1;
                }
                cur.relevel(levels)?
            }
            None => sort_switch(forest, &cur, z1, z2)?,
        };
        if next.height() != cur.height() {
            return Err(Error::Invariant(format!(
                "sorting step at {z1} and {z2} changed the height"
            )));
        }
        let after = sort_potential(&next);
        switches.push(SwitchRecord {
            z1,
            z2,
            lifted,
            potential_before: before,
            potential_after: after,
        });
        cur = next;
    }
    Ok(SortOutcome {
        forest: raise_branches(&cur),
        switches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub t: usize,
    pub l_t: Level,
    pub lowered_edge: EdgeId,
    /// Height after the lowering.
    pub height: Level,
    #[serde(skip)]
    pub sizes_before: Vec<usize>,
    #[serde(skip)]
    pub sizes_after: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct BtdRun {
    pub b: usize,
    /// Minimum-height compact elimination tree.
    pub minimum: EliminationForest,
    pub stretched: EliminationForest,
    pub switches: Vec<SwitchRecord>,
    /// Stretched and sorted tree the loop starts from.
    pub initial: EliminationForest,
    pub trace: Vec<TraceStep>,
    /// Tree left by the main loop.
    pub looped: EliminationForest,
    /// Returned tree: the minimum-height tree when it already has width at
    /// most `b`, otherwise `looped`.
    pub result: EliminationForest,
}

impl BtdRun {
    pub fn height(&self) -> Level {
        self.result.height()
    }

    /// One JSON object per line.
    pub fn trace_jsonl(&self) -> String {
        let mut out = String::new();
        for s in &self.trace {
            out.push_str(&serde_json::to_string(s).expect("trace step serializes"));
            out.push('\n');
        }
        out
    }
}

/// Runs the approximation on a tree.
///
/// The preprocessing and the main loop always run so their invariants can
/// be inspected, but if the minimum-height tree is already `b`-bounded it is
/// returned as is: it is optimal, while stretching may have made it taller.
pub fn btd_approx(tree: &Forest, b: usize) -> Result<BtdRun> {
    if b == 0 {
        return Err(Error::InvalidSize("b must be at least 1".into()));
    }
    if tree.vertex_count() == 0 || tree.component_count() != 1 {
        return Err(Error::Precondition(
            "the approximation needs a connected tree".into(),
        ));
    }
    let minimum = optimal_elimination_forest(tree).compactify();
    let stretched = stretch(&minimum, b)?;
    let sorted = sort(tree, &stretched)?;
    let initial = sorted.forest;
    let m = tree.edge_count();
    let guard = 4 * m * m;
    let mut cur = initial.clone();
    let mut trace = Vec::new();
    while !is_b_bounded(&cur, b) {
        if trace.len() >= guard {
            return Err(Error::Invariant(format!(
                "main loop exceeded {guard} lowerings"
            )));
        }
        let sizes = cur.level_sizes();
        let l_t = (1..=sizes.len())
            .rev()
            .find(|&l| sizes[l - 1] > b)
            .expect("an over-full level") as Level;
        let stats = SubtreeStats::of(&cur);
        let v = (0..cur.len())
            .filter(|&u| cur.level(u) == l_t)
            .min_by_key(|&u| (stats.height(&cur, u), stats.size[u], stats.min_edge[u]))
            .expect("level is nonempty");
        let next = lower(&cur, v);
        trace.push(TraceStep {
            t: trace.len(),
            l_t,
            lowered_edge: v,
            height: next.height(),
            sizes_after: next.level_sizes(),
            sizes_before: sizes,
        });
        cur = next;
    }
    let result = if is_b_bounded(&minimum, b) {
        minimum.clone()
    } else {
        cur.clone()
    };
    Ok(BtdRun {
        b,
        minimum,
        stretched,
        switches: sorted.switches,
        initial,
        trace,
        looped: cur,
        result,
    })
}

fn size_at_distance(sizes: &[usize], d: usize) -> usize {
    if d < sizes.len() {
        sizes[sizes.len() - 1 - d]
    } else {
        0
    }
}

/// Checks, for each iteration and each distance from the top level, that a
/// full level stays full and that a level becoming full has a full level
/// directly above it. Returns human-readable violations.
pub fn correct_filling_violations(run: &BtdRun) -> Vec<String> {
    let b = run.b;
    let mut out = Vec::new();
    for step in &run.trace {
        let depth = step.sizes_before.len().max(step.sizes_after.len());
        for d in 0..depth {
            let before = size_at_distance(&step.sizes_before, d);
            let after = size_at_distance(&step.sizes_after, d);
            if before >= b && after < b {
                out.push(format!(
                    "t={}: level at distance {d} stopped being full ({before} -> {after})",
                    step.t
                ));
            }
            if before < b && after >= b {
                let above = if d == 0 {
                    0
                } else {
                    size_at_distance(&step.sizes_after, d - 1)
                };
                if above < b {
                    out.push(format!(
                        "t={}: level at distance {d} became full but the level above holds {above}",
                        step.t
                    ));
                }
            }
        }
    }
    out
}

/// If the loop raised the height, at most `b` levels of the result may be
/// non-full.
pub fn almost_all_full_holds(run: &BtdRun) -> bool {
    if run.looped.height() <= run.initial.height() {
        return true;
    }
    run.looped
        .level_sizes()
        .into_iter()
        .filter(|&s| s < run.b)
        .count()
        <= run.b
}

/// Consecutive iterations aimed at the same distance from the top must see
/// that level shrink.
pub fn progress_violations(run: &BtdRun) -> Vec<String> {
    let mut out = Vec::new();
    for w in run.trace.windows(2) {
        let d0 = w[0].sizes_before.len() - w[0].l_t as usize;
        let d1 = w[1].sizes_before.len() - w[1].l_t as usize;
        if d0 == d1 {
            let s0 = w[0].sizes_before[w[0].l_t as usize - 1];
            let s1 = w[1].sizes_before[w[1].l_t as usize - 1];
            if s1 >= s0 {
                out.push(format!(
                    "t={}: level at distance {d0} did not shrink ({s0} -> {s1})",
                    w[1].t
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elim::validate_ranking;
    use crate::forest::TreeKind;
    use crate::minrank::full_binary_ranking;

    fn gen(kind: TreeKind) -> Forest {
        Forest::generate(kind).unwrap()
    }

    #[test]
    fn lower_examples() {
        let f = gen(TreeKind::Path(2));
        let ef = EliminationForest::from_levels(&f, vec![1]).unwrap();
        assert_eq!(lower(&ef, 0).levels(), &[1]);
        let p4 = gen(TreeKind::Path(4));
        let ef = EliminationForest::from_levels(&p4, vec![1, 2, 1]).unwrap();
        let low = lower(&ef, 2);
        assert_eq!(low.levels(), &[2, 3, 1]);
        assert_eq!(low.height(), 3);
        let p8 = gen(TreeKind::Path(8));
        let ef = full_binary_ranking(&p8).unwrap();
        let mut raised = ef.levels().to_vec();
        for l in raised.iter_mut() {
            *l += 1;
        }
        let ef = ef.relevel(raised).unwrap();
        let low = lower(&ef, 1);
        for e in [3, 4, 5, 6] {
            assert_eq!(low.level(e), ef.level(e));
        }
    }

    #[test]
    fn stretch_examples() {
        let star = gen(TreeKind::Star(5));
        let thin = optimal_elimination_forest(&star).compactify();
        assert_eq!(stretch(&thin, 3).unwrap(), thin);
        let p8 = gen(TreeKind::Path(8));
        let fb = full_binary_ranking(&p8).unwrap();
        assert_eq!(stretch(&fb, 2).unwrap(), fb);
        let p6 = gen(TreeKind::Path(6));
        let ef = EliminationForest::from_levels(&p6, vec![1, 2, 1, 3, 1])
            .unwrap()
            .compactify();
        let s = stretch(&ef, 4).unwrap();
        assert_eq!(s.levels(), &[2, 3, 1, 4, 3]);
        assert!(s.height() <= ef.height() + 8);
        assert!(s.is_compact());
        assert!(validate_ranking(&p6, &s.ranking()).unwrap().is_ok());
        let p4 = gen(TreeKind::Path(4));
        let gap = EliminationForest::from_levels(&p4, vec![1, 3, 1]).unwrap();
        assert!(matches!(stretch(&gap, 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn switch_examples() {
        let p5 = gen(TreeKind::Path(5));
        let ef = EliminationForest::from_levels(&p5, vec![1, 2, 1, 3]).unwrap();
        let sw = switch(&p5, &ef, 3, 1).unwrap();
        assert_eq!(sw.levels(), &[1, 3, 1, 2]);
        assert!(validate_ranking(&p5, &sw.ranking()).unwrap().is_ok());
        let back = switch(&p5, &sw, 1, 3).unwrap();
        assert_eq!(back, ef);
        let p4 = gen(TreeKind::Path(4));
        let ef = EliminationForest::from_levels(&p4, vec![2, 3, 2]).unwrap();
        assert!(matches!(switch(&p4, &ef, 1, 2), Err(Error::Infeasible(_))));
    }

    #[test]
    fn structured_examples() {
        let p8 = gen(TreeKind::Path(8));
        let fb = full_binary_ranking(&p8).unwrap();
        assert!(is_full(&fb, 1, 4));
        assert!(is_b_bounded(&fb, 4));
        assert!(is_structured(&fb, 4));
        let star = gen(TreeKind::Star(6));
        let chain = optimal_elimination_forest(&star);
        assert!(is_thin(&chain));
        assert!(is_b_bounded(&chain, 1));
    }

    #[test]
    fn approx_examples() {
        let p8 = gen(TreeKind::Path(8));
        let run = btd_approx(&p8, 4).unwrap();
        assert_eq!(run.height(), 3);
        let run = btd_approx(&p8, 1).unwrap();
        assert!(run.result.width() <= 1);
        assert!((7..=9).contains(&run.height()));
        for k in 1..7 {
            let star = gen(TreeKind::Star(k + 1));
            for b in 1..=k {
                let run = btd_approx(&star, b).unwrap();
                assert_eq!(run.height() as usize, k);
                assert!(run.trace.is_empty());
            }
        }
    }

    #[test]
    fn sort_fixes_random_trees() {
        for seed in 0..200 {
            let f = gen(TreeKind::Random { n: 12, seed });
            let ef = optimal_elimination_forest(&f).compactify();
            let out = sort(&f, &ef).unwrap();
            assert!(is_sorted(&out.forest), "seed {seed}");
            assert_eq!(out.forest.height(), ef.height());
        }
    }
}
