//! Minimum-height edge rankings of forests (tree-depth of `L(G)`).
//!
//! Each component is rooted at its first vertex and processed bottom-up.
//! For a vertex `v` we keep the set of levels visible from `v` inside its
//! subtree. Sets are compared as binary numbers (level `q` is bit `q`); a
//! smaller visible set never hurts the ancestors, so one set per vertex
//! suffices.
//!
//! At a vertex with child sets `S_1..S_d` every child edge gets a level
//! `x_i` outside `S_i`. The levels it leaves visible upward are
//! `B_i = {x_i} ∪ {q ∈ S_i : q > x_i}`, and the `B_i` must be pairwise
//! disjoint. The union of the `B_i` is minimised by starting from a large
//! admissible set and dropping levels from the top while some assignment
//! still fits.

use std::cmp::Ordering;

use crate::elim::{EliminationForest, Level};
use crate::error::{Error, Result};
use crate::forest::{EdgeId, Forest, VertexId};

/// Small bitset over levels `1..`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LevelSet {
    words: Vec<u64>,
}

impl LevelSet {
    pub fn new() -> Self {
        LevelSet::default()
    }

    pub fn range(lo: Level, hi: Level) -> Self {
        let mut s = LevelSet::new();
        for q in lo..=hi {
            s.insert(q);
        }
        s
    }

    pub fn contains(&self, q: Level) -> bool {
        let (w, b) = (q as usize / 64, q % 64);
        self.words.get(w).is_some_and(|x| x >> b & 1 == 1)
    }

    pub fn insert(&mut self, q: Level) {
        let (w, b) = (q as usize / 64, q % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
    }

    pub fn remove(&mut self, q: Level) {
        let (w, b) = (q as usize / 64, q % 64);
        if let Some(x) = self.words.get_mut(w) {
            *x &= !(1 << b);
        }
        self.trim();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn top(&self) -> Option<Level> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| (i * 64 + 63 - w.leading_zeros() as usize) as Level)
    }

    pub fn iter(&self) -> impl Iterator<Item = Level> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| (i * 64 + b) as Level)
        })
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Elements strictly above `q`.
    pub fn above(&self, q: Level) -> impl Iterator<Item = Level> + '_ {
        self.iter().filter(move |&x| x > q)
    }
}

impl PartialOrd for LevelSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Numeric order: the set with the larger top differing element is larger.
impl Ord for LevelSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.words.len().max(other.words.len());
        for i in (0..n).rev() {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

/// Chooses child-edge levels for one vertex. Returns the visible set of the
/// vertex and the chosen level per child, in input order.
fn combine(children: &[&LevelSet]) -> (LevelSet, Vec<Level>) {
    if children.is_empty() {
        return (LevelSet::new(), Vec::new());
    }
    let top = children.iter().filter_map(|s| s.top()).max().unwrap_or(0) + children.len() as Level;
    let mut target = LevelSet::range(1, top);
    let mut best = assign(children, &target).expect("the full range always admits an assignment");
    for q in (1..=top).rev() {
        target.remove(q);
        match assign(children, &target) {
            Some(a) => best = a,
            None => target.insert(q),
        }
    }
    (target, best)
}

/// Finds levels `x_i` with every `B_i` inside `target` and pairwise disjoint.
fn assign(children: &[&LevelSet], target: &LevelSet) -> Option<Vec<Level>> {
    let mut order: Vec<usize> = (0..children.len())
        .filter(|&i| !children[i].is_empty())
        .collect();
    order.sort_by_key(|&i| std::cmp::Reverse((children[i].top(), children[i].len())));
    let leaves: Vec<usize> = (0..children.len())
        .filter(|&i| children[i].is_empty())
        .collect();
    let mut used = LevelSet::new();
    let mut out = vec![0; children.len()];
    if search(children, target, &order, 0, &mut used, &mut out, &leaves) {
        Some(out)
    } else {
        None
    }
}

fn search(
    children: &[&LevelSet],
    target: &LevelSet,
    order: &[usize],
    at: usize,
    used: &mut LevelSet,
    out: &mut [Level],
    leaves: &[usize],
) -> bool {
    if at == order.len() {
        let free: Vec<Level> = target
            .iter()
            .filter(|&q| !used.contains(q))
            .take(leaves.len())
            .collect();
        if free.len() < leaves.len() {
            return false;
        }
        for (&i, &q) in leaves.iter().zip(&free) {
            out[i] = q;
        }
        return true;
    }
    let i = order[at];
    let s = children[i];
    let candidates: Vec<Level> = target
        .iter()
        .filter(|&x| !used.contains(x) && !s.contains(x))
        .collect();
    for x in candidates {
        let rest: Vec<Level> = s.above(x).collect();
        if rest
            .iter()
            .any(|&q| !target.contains(q) || used.contains(q))
        {
            continue;
        }
        used.insert(x);
        for &q in &rest {
            used.insert(q);
        }
        out[i] = x;
        if search(children, target, order, at + 1, used, out, leaves) {
            return true;
        }
        used.remove(x);
        for &q in &rest {
            used.remove(q);
        }
    }
    false
}

/// Minimum-height ranking of every component of `forest`.
pub fn optimal_levels(forest: &Forest) -> Vec<Level> {
    let n = forest.vertex_count();
    let mut levels = vec![0; forest.edge_count()];
    let mut visited = vec![false; n];
    let mut sets: Vec<LevelSet> = vec![LevelSet::new(); n];
    for root in 0..n {
        if visited[root] {
            continue;
        }
        // Preorder with parent edges, then process in reverse.
        let mut order: Vec<(VertexId, Option<EdgeId>)> = Vec::new();
        let mut stack = vec![(root, None)];
        visited[root] = true;
        while let Some((v, pe)) = stack.pop() {
            order.push((v, pe));
            for &e in forest.incident(v) {
                let u = forest.other_end(e, v);
                if !visited[u] {
                    visited[u] = true;
                    stack.push((u, Some(e)));
                }
            }
        }
        for &(v, pe) in order.iter().rev() {
            let child_edges: Vec<EdgeId> = forest
                .incident(v)
                .iter()
                .copied()
                .filter(|&e| Some(e) != pe)
                .collect();
            let child_sets: Vec<&LevelSet> = child_edges
                .iter()
                .map(|&e| &sets[forest.other_end(e, v)])
                .collect();
            let (set, chosen) = combine(&child_sets);
            for (&e, &x) in child_edges.iter().zip(&chosen) {
                levels[e] = x;
            }
            sets[v] = set;
        }
    }
    levels
}

pub fn optimal_elimination_forest(forest: &Forest) -> EliminationForest {
    let levels = optimal_levels(forest);
    EliminationForest::from_levels(forest, levels).expect("optimal ranking is valid")
}

/// Edges of a path in walking order, or `None` if `forest` is not a path.
pub fn path_order(forest: &Forest) -> Option<Vec<EdgeId>> {
    let m = forest.edge_count();
    if m == 0 || !forest.is_tree() || (0..forest.vertex_count()).any(|v| forest.degree(v) > 2) {
        return None;
    }
    let start = (0..forest.vertex_count()).find(|&v| forest.degree(v) == 1)?;
    let mut out = Vec::with_capacity(m);
    let (mut v, mut prev) = (start, None);
    while out.len() < m {
        let e = *forest.incident(v).iter().find(|&&e| Some(e) != prev)?;
        out.push(e);
        prev = Some(e);
        v = forest.other_end(e, v);
    }
    Some(out)
}

/// Full binary elimination tree of a path with `2^M - 1` edges: the middle
/// edge on level `M`, each half handled recursively.
pub fn full_binary_ranking(forest: &Forest) -> Result<EliminationForest> {
    let m = forest.edge_count();
    let order = path_order(forest).ok_or_else(|| Error::Shape("input is not a path".into()))?;
    if !(m + 1).is_power_of_two() {
        return Err(Error::Shape(format!(
            "{m} edges is not of the form 2^M - 1"
        )));
    }
    let mut levels = vec![0; m];
    for (i, &e) in order.iter().enumerate() {
        levels[e] = (i + 1).trailing_zeros() + 1;
    }
    EliminationForest::from_levels(forest, levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elim::validate_ranking;
    use crate::forest::TreeKind;

    fn gen(kind: TreeKind) -> Forest {
        Forest::generate(kind).unwrap()
    }

    #[test]
    fn level_set_order() {
        let a = LevelSet::range(1, 3);
        let mut b = LevelSet::new();
        b.insert(4);
        assert!(a < b);
        assert_eq!(b.top(), Some(4));
        let mut c = LevelSet::new();
        c.insert(100);
        assert!(c > b);
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![100]);
    }

    #[test]
    fn examples() {
        assert_eq!(
            optimal_elimination_forest(&gen(TreeKind::Star(5))).height(),
            4
        );
        assert_eq!(
            optimal_elimination_forest(&gen(TreeKind::Path(8))).height(),
            3
        );
        assert_eq!(
            optimal_elimination_forest(&gen(TreeKind::Path(5))).height(),
            3
        );
        assert_eq!(
            optimal_elimination_forest(&gen(TreeKind::Path(2))).height(),
            1
        );
    }

    #[test]
    fn path_heights_are_logarithmic() {
        for n in 2..70usize {
            let f = gen(TreeKind::Path(n));
            let ef = optimal_elimination_forest(&f);
            let want = usize::BITS - (n - 1).leading_zeros();
            assert_eq!(ef.height(), want, "P{n}");
        }
    }

    #[test]
    fn outputs_validate() {
        for seed in 0..50 {
            let f = gen(TreeKind::Random { n: 30, seed });
            let levels = optimal_levels(&f);
            let r = crate::elim::EdgeRanking::new(levels);
            assert!(validate_ranking(&f, &r).unwrap().is_ok());
        }
    }

    #[test]
    fn full_binary() {
        for mm in 1..=5u32 {
            let f = gen(TreeKind::Path(1 << mm));
            let ef = full_binary_ranking(&f).unwrap();
            assert_eq!(ef.height(), mm);
            assert_eq!(ef.level_sizes()[0], 1 << (mm - 1));
        }
        let f = gen(TreeKind::Path(4));
        assert_eq!(full_binary_ranking(&f).unwrap().levels(), &[1, 2, 1]);
        assert!(matches!(
            full_binary_ranking(&gen(TreeKind::Path(5))),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            full_binary_ranking(&gen(TreeKind::Star(5))),
            Err(Error::Shape(_))
        ));
    }
}
