//! Test oracles shared by the integration targets.
#![allow(dead_code)]

use std::collections::HashMap;

use btd_core::elim::Level;
use btd_core::{EliminationForest, Forest};

/// Visible-set families of a rooted tree with levels in `1..=h`.
///
/// Sets are masks with bit `q` for level `q`. Folding the children of `v`
/// one at a time, `steps[v]` keeps a back-pointer for every reachable set.
/// Mask after a fold -> (mask before, level, child mask).
type Steps = HashMap<u64, (u64, Level, u64)>;

pub struct Oracle {
    /// Children of each vertex as `(edge, child)`.
    kids: Vec<Vec<(usize, usize)>>,
    /// `steps[v][c]`: mask after folding child `c` -> (mask before, level, child mask).
    steps: Vec<Vec<Steps>>,
}

impl Oracle {
    pub fn new(f: &Forest, root: usize, h: Level) -> Self {
        let n = f.vertex_count();
        let mut kids = vec![Vec::new(); n];
        let mut order = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut at = 0;
        while at < order.len() {
            let v = order[at];
            at += 1;
            for &e in f.incident(v) {
                let u = f.other_end(e, v);
                if !seen[u] {
                    seen[u] = true;
                    kids[v].push((e, u));
                    order.push(u);
                }
            }
        }
        let mut o = Oracle {
            kids,
            steps: vec![Vec::new(); n],
        };
        let mut fam: Vec<Vec<u64>> = vec![Vec::new(); n];
        for &v in order.iter().rev() {
            let mut cur: Vec<u64> = vec![0];
            let mut steps = Vec::new();
            for &(_, c) in &o.kids[v] {
                let mut next: HashMap<u64, (u64, Level, u64)> = HashMap::new();
                for &s in &fam[c] {
                    for x in 1..=h {
                        if s >> x & 1 == 1 {
                            continue;
                        }
                        let b = (1u64 << x) | (s & !((1u64 << (x + 1)) - 1));
                        for &m in &cur {
                            if m & b == 0 {
                                next.entry(m | b).or_insert((m, x, s));
                            }
                        }
                    }
                }
                cur = next.keys().copied().collect();
                steps.push(next);
            }
            fam[v] = cur;
            o.steps[v] = steps;
        }
        o
    }

    pub fn root_family(&self, root: usize) -> Vec<u64> {
        match self.steps[root].last() {
            Some(m) => m.keys().copied().collect(),
            None => vec![0],
        }
    }

    /// Levels realising `mask` at `v`.
    pub fn witness(&self, v: usize, mask: u64, levels: &mut [Level]) {
        let mut m = mask;
        for c in (0..self.kids[v].len()).rev() {
            let (prev, x, s) = self.steps[v][c][&m];
            let (e, child) = self.kids[v][c];
            levels[e] = x;
            self.witness(child, s, levels);
            m = prev;
        }
    }
}

pub fn mask_of(levels: &[Level]) -> u64 {
    levels.iter().fold(0, |m, &q| m | 1 << q)
}

/// A ranking of the gadget within `1..=h` whose root-visible set avoids `x`.
pub fn feasible(f: &Forest, root: usize, h: Level, x: &[Level]) -> Option<EliminationForest> {
    let o = Oracle::new(f, root, h);
    let avoid = mask_of(x);
    let s = o
        .root_family(root)
        .into_iter()
        .filter(|s| s & avoid == 0)
        .min()?;
    let mut levels = vec![0; f.edge_count()];
    o.witness(root, s, &mut levels);
    let ef = EliminationForest::from_levels(f, levels).expect("oracle witness is a ranking");
    Some(ef)
}

/// AHU encoding minimised over roots: equal strings iff isomorphic trees.
pub fn canon(f: &Forest) -> String {
    (0..f.vertex_count())
        .map(|r| encode(f, r, usize::MAX))
        .min()
        .unwrap_or_default()
}

fn encode(f: &Forest, v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = f
        .incident(v)
        .iter()
        .map(|&e| f.other_end(e, v))
        .filter(|&u| u != parent)
        .map(|u| encode(f, u, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}
