//! Exhaustive solver for `btd(L(F), b)` on small forests.
//!
//! The top level of any ranking holds at most one edge per connected
//! component of the remaining edge set, and removing it leaves a ranking of
//! the rest. So with `g(S)` the optimum for an edge set `S`,
//! `g(S) = 1 + min_C g(S \ C)` over such top sets `C` with `|C| <= b`.
//! `g` is monotone under inclusion, which lets the search consider only
//! top sets that are as large as the capacity allows.

use std::collections::HashMap;

use crate::elim::{EliminationForest, Level};
use crate::error::{Error, Result};
use crate::forest::{DisjointSets, Forest};

pub const DEFAULT_EDGE_GUARD: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactOptions {
    pub edge_guard: usize,
    pub force: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            edge_guard: DEFAULT_EDGE_GUARD,
            force: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub height: Level,
    pub witness: EliminationForest,
}

struct Solver<'a> {
    forest: &'a Forest,
    b: usize,
    memo: HashMap<u64, (Level, u64)>,
}

impl Solver<'_> {
    /// Edge sets of the components of `s`, as masks.
    fn components(&self, s: u64) -> Vec<u64> {
        let mut dsu = DisjointSets::new(self.forest.vertex_count());
        let mut bits = s;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let [u, v] = self.forest.endpoints(e);
            dsu.union(u, v);
        }
        let mut by_root: Vec<(usize, u64)> = Vec::new();
        let mut bits = s;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let r = dsu.find(self.forest.endpoints(e)[0]);
            match by_root.iter_mut().find(|(x, _)| *x == r) {
                Some((_, m)) => *m |= 1 << e,
                None => by_root.push((r, 1 << e)),
            }
        }
        by_root.into_iter().map(|(_, m)| m).collect()
    }

    fn lower_bound(&self, s: u64) -> Level {
        let count = s.count_ones() as usize;
        let by_width = count.div_ceil(self.b);
        let mut degree = vec![0usize; self.forest.vertex_count()];
        let mut bits = s;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            for v in self.forest.endpoints(e) {
                degree[v] += 1;
            }
        }
        by_width.max(degree.into_iter().max().unwrap_or(0)) as Level
    }

    fn solve(&mut self, s: u64) -> Level {
        if s == 0 {
            return 0;
        }
        if let Some(&(h, _)) = self.memo.get(&s) {
            return h;
        }
        let comps = self.components(s);
        let lb = self.lower_bound(s);
        let mut best: Option<(Level, u64)> = None;
        let take = comps.len().min(self.b);
        let mut chosen = Vec::with_capacity(take);
        self.choose_components(&comps, 0, take, &mut chosen, s, lb, &mut best);
        let best = best.expect("some top set exists");
        self.memo.insert(s, best);
        best.0
    }

    /// Picks `take` of the components, then one edge from each.
    #[allow(clippy::too_many_arguments)]
    fn choose_components(
        &mut self,
        comps: &[u64],
        from: usize,
        take: usize,
        chosen: &mut Vec<u64>,
        s: u64,
        lb: Level,
        best: &mut Option<(Level, u64)>,
    ) {
        if best.is_some_and(|(h, _)| h <= lb) {
            return;
        }
        if chosen.len() == take {
            let picked = chosen.clone();
            self.choose_edges(&picked, 0, 0, s, lb, best);
            return;
        }
        if comps.len() - from < take - chosen.len() {
            return;
        }
        for i in from..comps.len() {
            chosen.push(comps[i]);
            self.choose_components(comps, i + 1, take, chosen, s, lb, best);
            chosen.pop();
        }
    }

    fn choose_edges(
        &mut self,
        comps: &[u64],
        at: usize,
        top: u64,
        s: u64,
        lb: Level,
        best: &mut Option<(Level, u64)>,
    ) {
        if best.is_some_and(|(h, _)| h <= lb) {
            return;
        }
        if at == comps.len() {
            let h = 1 + self.solve(s & !top);
            if best.is_none_or(|(b, _)| h < b) {
                *best = Some((h, top));
            }
            return;
        }
        let mut bits = comps[at];
        while bits != 0 {
            let e = bits & bits.wrapping_neg();
            bits &= bits - 1;
            self.choose_edges(comps, at + 1, top | e, s, lb, best);
        }
    }
}

/// Exact `btd(L(F), b)` with a witness of that height and width `<= b`.
pub fn exact_btd(forest: &Forest, b: usize, opts: ExactOptions) -> Result<ExactSolution> {
    let m = forest.edge_count();
    if b == 0 {
        return Err(Error::InvalidSize("b must be at least 1".into()));
    }
    if m > opts.edge_guard && !opts.force {
        return Err(Error::GuardExceeded {
            edges: m,
            guard: opts.edge_guard,
        });
    }
    if m > 63 {
        return Err(Error::InvalidSize(format!(
            "{m} edges is beyond the exact solver"
        )));
    }
    let mut solver = Solver {
        forest,
        b: b.min(m.max(1)),
        memo: HashMap::new(),
    };
    let all = if m == 0 { 0 } else { (1u64 << m) - 1 };
    let height = solver.solve(all);
    let mut levels = vec![0; m];
    let mut s = all;
    while s != 0 {
        let (h, top) = solver.memo[&s];
        let mut bits = top;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            levels[e] = h;
        }
        s &= !top;
    }
    let witness = EliminationForest::from_levels(forest, levels)?;
    debug_assert_eq!(witness.height(), height);
    debug_assert!(witness.width() <= b);
    Ok(ExactSolution { height, witness })
}

/// Tree-depth of `L(F)`: the exact optimum with unbounded width.
pub fn exact_td_line(forest: &Forest, opts: ExactOptions) -> Result<Level> {
    Ok(exact_btd(forest, forest.edge_count().max(1), opts)?.height)
}
