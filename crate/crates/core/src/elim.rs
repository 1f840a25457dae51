//! Edge rankings and the elimination forests they induce on `L(G)`.
//!
//! A ranking is stored as a dense vector indexed by edge id. The
//! elimination forest is rebuilt from the ranking with a Kruskal-style
//! sweep: edges are inserted by increasing level and each new edge becomes
//! the parent of the current top edges of the two vertex components it
//! joins.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forest::{escape, DisjointSets, EdgeId, Forest, VertexId};

pub type Level = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeRanking {
    levels: Vec<Level>,
}

impl EdgeRanking {
    pub fn new(levels: Vec<Level>) -> Self {
        EdgeRanking { levels }
    }

    pub fn level(&self, e: EdgeId) -> Level {
        self.levels[e]
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn height(&self) -> Level {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    pub fn into_levels(self) -> Vec<Level> {
        self.levels
    }

    /// Builds a ranking from an edge-id keyed map, checking that it covers
    /// exactly `0..edge_count`.
    pub fn from_map(map: &BTreeMap<usize, Level>, edge_count: usize) -> Result<Self> {
        let missing: Vec<usize> = (0..edge_count).filter(|e| !map.contains_key(e)).collect();
        let extra: Vec<usize> = map.keys().copied().filter(|&e| e >= edge_count).collect();
        if !missing.is_empty() || !extra.is_empty() {
            return Err(Error::Coverage { missing, extra });
        }
        Ok(EdgeRanking {
            levels: map.values().copied().collect(),
        })
    }

    /// Accepts a bare array, `{"levels": [...]}`, `{"levels": {"id": level}}`,
    /// an id-keyed object, or an exported elimination-forest document.
    pub fn from_json(value: &Value, edge_count: usize) -> Result<Self> {
        let map = json_level_map(value)?;
        EdgeRanking::from_map(&map, edge_count)
    }

    pub fn to_json(&self) -> Value {
        json!({ "levels": self.levels })
    }
}

fn json_level_map(value: &Value) -> Result<BTreeMap<usize, Level>> {
    let level_of = |v: &Value| -> Result<Level> {
        v.as_u64()
            .and_then(|x| Level::try_from(x).ok())
            .ok_or_else(|| Error::Format(format!("level must be a non-negative integer, got {v}")))
    };
    match value {
        Value::Array(items) => {
            let mut map = BTreeMap::new();
            for (i, item) in items.iter().enumerate() {
                map.insert(i, level_of(item)?);
            }
            Ok(map)
        }
        Value::Object(obj) => {
            if let Some(inner) = obj.get("levels") {
                return json_level_map(inner);
            }
            if let Some(Value::Array(edges)) = obj.get("edges") {
                let mut map = BTreeMap::new();
                for e in edges {
                    let id = e
                        .get("id")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| Error::Format("edge entry without id".into()))?;
                    let lvl = e
                        .get("level")
                        .ok_or_else(|| Error::Format("edge entry without level".into()))?;
                    map.insert(id as usize, level_of(lvl)?);
                }
                return Ok(map);
            }
            let mut map = BTreeMap::new();
            for (k, v) in obj {
                let id: usize = k
                    .parse()
                    .map_err(|_| Error::Format(format!("edge key {k:?} is not an edge id")))?;
                map.insert(id, level_of(v)?);
            }
            Ok(map)
        }
        other => Err(Error::Format(format!("cannot read levels from {other}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// Levels must be positive.
    ZeroLevel { edge: EdgeId },
    /// Two edges sharing an endpoint carry the same level.
    Adjacent { a: EdgeId, b: EdgeId, level: Level },
    /// Two equal-level edges are joined by a path with no higher edge.
    Unseparated { a: EdgeId, b: EdgeId, level: Level },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroLevel { edge } => write!(f, "edge {edge} has level 0"),
            Violation::Adjacent { a, b, level } => {
                write!(f, "adjacent edges {a} and {b} share level {level}")
            }
            Violation::Unseparated { a, b, level } => {
                write!(
                    f,
                    "edges {a} and {b} on level {level} are not separated by a higher edge"
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_coverage(forest: &Forest, ranking: &EdgeRanking) -> Result<()> {
    let m = forest.edge_count();
    let n = ranking.len();
    if n != m {
        return Err(Error::Coverage {
            missing: (n..m).collect(),
            extra: (m..n).collect(),
        });
    }
    Ok(())
}

/// Checks the two edge-ranking conditions. Every offending edge is reported
/// once, paired with the first edge of its level found in the same component.
pub fn validate_ranking(forest: &Forest, ranking: &EdgeRanking) -> Result<ValidationReport> {
    check_coverage(forest, ranking)?;
    let mut report = ValidationReport::default();
    let mut order: Vec<EdgeId> = (0..forest.edge_count()).collect();
    order.sort_by_key(|&e| (ranking.level(e), e));
    let mut dsu = DisjointSets::new(forest.vertex_count());
    let mut i = 0;
    while i < order.len() {
        let level = ranking.level(order[i]);
        let mut j = i;
        while j < order.len() && ranking.level(order[j]) == level {
            j += 1;
        }
        let group = &order[i..j];
        if level == 0 {
            for &e in group {
                report.violations.push(Violation::ZeroLevel { edge: e });
            }
        }
        // Components of G restricted to levels <= `level`; each may hold at
        // most one edge of this level.
        for &e in group {
            let [u, v] = forest.endpoints(e);
            dsu.union(u, v);
        }
        let mut first: BTreeMap<usize, EdgeId> = BTreeMap::new();
        for &e in group {
            let root = dsu.find(forest.endpoints(e)[0]);
            match first.get(&root) {
                None => {
                    first.insert(root, e);
                }
                Some(&a) => {
                    let shared = forest
                        .endpoints(a)
                        .iter()
                        .any(|x| forest.endpoints(e).contains(x));
                    report.violations.push(if shared {
                        Violation::Adjacent { a, b: e, level }
                    } else {
                        Violation::Unseparated { a, b: e, level }
                    });
                }
            }
        }
        i = j;
    }
    Ok(report)
}

/// Elimination forest of `L(G)`: one node per edge of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationForest {
    levels: Vec<Level>,
    parent: Vec<Option<EdgeId>>,
    children: Vec<Vec<EdgeId>>,
    roots: Vec<EdgeId>,
}

impl EliminationForest {
    /// Builds the forest for a valid ranking, rejecting invalid ones with
    /// the full validation report.
    pub fn build(forest: &Forest, ranking: &EdgeRanking) -> Result<Self> {
        let report = validate_ranking(forest, ranking)?;
        if !report.is_ok() {
            return Err(Error::InvalidRanking(report.violations));
        }
        Ok(Self::build_unchecked(forest, ranking.levels().to_vec()))
    }

    pub fn from_levels(forest: &Forest, levels: Vec<Level>) -> Result<Self> {
        Self::build(forest, &EdgeRanking::new(levels))
    }

    fn build_unchecked(forest: &Forest, levels: Vec<Level>) -> Self {
        let m = forest.edge_count();
        let mut order: Vec<EdgeId> = (0..m).collect();
        order.sort_by_key(|&e| (levels[e], e));
        let mut dsu = DisjointSets::new(forest.vertex_count());
        let mut top: Vec<Option<EdgeId>> = vec![None; forest.vertex_count()];
        let mut parent = vec![None; m];
        for &e in &order {
            let [u, v] = forest.endpoints(e);
            let (ru, rv) = (dsu.find(u), dsu.find(v));
            for t in [top[ru], top[rv]].into_iter().flatten() {
                parent[t] = Some(e);
            }
            dsu.union(ru, rv);
            let r = dsu.find(ru);
            top[r] = Some(e);
        }
        Self::from_parts(levels, parent)
    }

    fn from_parts(levels: Vec<Level>, parent: Vec<Option<EdgeId>>) -> Self {
        let m = levels.len();
        let mut children: Vec<Vec<EdgeId>> = vec![Vec::new(); m];
        let mut roots = Vec::new();
        for (e, p) in parent.iter().enumerate() {
            match *p {
                Some(p) => children[p].push(e),
                None => roots.push(e),
            }
        }
        let mut ef = EliminationForest {
            levels,
            parent,
            children,
            roots,
        };
        let min_id = ef.subtree_min_edge();
        for c in ef.children.iter_mut() {
            c.sort_by_key(|&x| min_id[x]);
        }
        ef.roots.sort_by_key(|&x| min_id[x]);
        ef
    }

    /// Same tree with a different level function. The new levels must
    /// still decrease strictly from parent to child.
    pub fn relevel(&self, levels: Vec<Level>) -> Result<Self> {
        if levels.len() != self.levels.len() {
            return Err(Error::Coverage {
                missing: (levels.len()..self.levels.len()).collect(),
                extra: (self.levels.len()..levels.len()).collect(),
            });
        }
        for e in 0..levels.len() {
            if levels[e] == 0 {
                return Err(Error::Invariant(format!("edge {e} would get level 0")));
            }
            if let Some(p) = self.parent[e] {
                if levels[e] >= levels[p] {
                    return Err(Error::Invariant(format!(
                        "edge {e} at level {} is not below its parent {p} at level {}",
                        levels[e], levels[p]
                    )));
                }
            }
        }
        Ok(EliminationForest {
            levels,
            parent: self.parent.clone(),
            children: self.children.clone(),
            roots: self.roots.clone(),
        })
    }

    fn subtree_min_edge(&self) -> Vec<EdgeId> {
        let mut min_id: Vec<EdgeId> = (0..self.levels.len()).collect();
        for v in self.postorder() {
            if let Some(p) = self.parent[v] {
                min_id[p] = min_id[p].min(min_id[v]);
            }
        }
        min_id
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, e: EdgeId) -> Level {
        self.levels[e]
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn ranking(&self) -> EdgeRanking {
        EdgeRanking::new(self.levels.clone())
    }

    pub fn parent(&self, e: EdgeId) -> Option<EdgeId> {
        self.parent[e]
    }

    pub fn children(&self, e: EdgeId) -> &[EdgeId] {
        &self.children[e]
    }

    pub fn roots(&self) -> &[EdgeId] {
        &self.roots
    }

    pub fn is_leaf(&self, e: EdgeId) -> bool {
        self.children[e].is_empty()
    }

    pub fn height(&self) -> Level {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    /// `sizes[i]` is the number of nodes on level `i + 1`; empty levels
    /// are kept.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.height() as usize];
        for &l in &self.levels {
            sizes[l as usize - 1] += 1;
        }
        sizes
    }

    pub fn width(&self) -> usize {
        self.level_sizes().into_iter().max().unwrap_or(0)
    }

    pub fn is_b_bounded(&self, b: usize) -> bool {
        self.width() <= b
    }

    /// Nodes grouped by level, index `i` holding level `i + 1`.
    pub fn level_sets(&self) -> Vec<Vec<EdgeId>> {
        let mut sets = vec![Vec::new(); self.height() as usize];
        for (e, &l) in self.levels.iter().enumerate() {
            sets[l as usize - 1].push(e);
        }
        sets
    }

    /// All nodes, children before parents.
    pub fn postorder(&self) -> Vec<EdgeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack: Vec<(EdgeId, bool)> = self.roots.iter().rev().map(|&r| (r, false)).collect();
        while let Some((v, done)) = stack.pop() {
            if done {
                out.push(v);
                continue;
            }
            stack.push((v, true));
            for &c in self.children[v].iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    /// Nodes of the subtree rooted at `v`, in preorder.
    pub fn subtree(&self, v: EdgeId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            out.push(x);
            for &c in self.children[x].iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    pub fn subtree_size(&self, v: EdgeId) -> usize {
        self.subtree(v).len()
    }

    pub fn subtree_min_level(&self, v: EdgeId) -> Level {
        self.subtree(v)
            .into_iter()
            .map(|x| self.levels[x])
            .min()
            .unwrap_or(0)
    }

    /// Number of levels spanned by the subtree rooted at `v`.
    pub fn subtree_height(&self, v: EdgeId) -> Level {
        self.levels[v] - self.subtree_min_level(v) + 1
    }

    /// Distance from the root of the containing tree.
    pub fn depth(&self, mut v: EdgeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent[v] {
            v = p;
            d += 1;
        }
        d
    }

    pub fn root_of(&self, mut v: EdgeId) -> EdgeId {
        while let Some(p) = self.parent[v] {
            v = p;
        }
        v
    }

    pub fn is_ancestor(&self, a: EdgeId, mut v: EdgeId) -> bool {
        while let Some(p) = self.parent[v] {
            if p == a {
                return true;
            }
            v = p;
        }
        false
    }

    /// True if every subtree occupies a consecutive range of levels.
    pub fn is_compact(&self) -> bool {
        let mut occupied: Vec<BTreeSet<Level>> = vec![BTreeSet::new(); self.len()];
        for v in self.postorder() {
            let mut set = BTreeSet::new();
            set.insert(self.levels[v]);
            for &c in &self.children[v] {
                let child = std::mem::take(&mut occupied[c]);
                if set.len() < child.len() {
                    let mut child = child;
                    child.append(&mut set);
                    set = child;
                } else {
                    set.extend(child);
                }
            }
            let lo = *set.iter().next().expect("nonempty");
            let hi = *set.iter().next_back().expect("nonempty");
            if (hi - lo + 1) as usize != set.len() {
                return false;
            }
            occupied[v] = set;
        }
        true
    }

    /// Raises each child to sit directly below its parent, then shifts the
    /// whole forest down if level 1 ended up empty.
    pub fn compactify(&self) -> EliminationForest {
        let mut levels = self.levels.clone();
        let mut stack: Vec<EdgeId> = self.roots.clone();
        while let Some(v) = stack.pop() {
            for &c in &self.children[v] {
                levels[c] = levels[v] - 1;
                stack.push(c);
            }
        }
        let low = levels.iter().copied().min().unwrap_or(1);
        if low > 1 {
            for l in levels.iter_mut() {
                *l -= low - 1;
            }
        }
        self.relevel(levels)
            .expect("compactify keeps parent levels above children")
    }

    pub fn to_merge_schedule(&self) -> MergeSchedule {
        MergeSchedule {
            steps: self.level_sets(),
        }
    }

    /// `{"edges":[{"id","u","v","level","parent"}],"height","width"}`.
    pub fn to_json(&self, forest: &Forest) -> Value {
        let edges: Vec<Value> = (0..self.len())
            .map(|e| {
                let [u, v] = forest.endpoints(e);
                json!({
                    "id": e,
                    "u": crate::forest::label_value(forest.label(u)),
                    "v": crate::forest::label_value(forest.label(v)),
                    "level": self.levels[e],
                    "parent": self.parent[e],
                })
            })
            .collect();
        json!({ "edges": edges, "height": self.height(), "width": self.width() })
    }

    pub fn to_dot(&self, forest: &Forest) -> String {
        let mut out = String::from("digraph elimination {\n  rankdir=BT;\n");
        for e in 0..self.len() {
            let [u, v] = forest.endpoints(e);
            let label = format!(
                "{}–{} @ {}",
                forest.label(u),
                forest.label(v),
                self.levels[e]
            );
            out.push_str(&format!("  e{e} [label=\"{}\"];\n", escape(&label)));
        }
        for e in 0..self.len() {
            if let Some(p) = self.parent[e] {
                out.push_str(&format!("  e{e} -> e{p};\n"));
            }
        }
        for (i, set) in self.level_sets().iter().enumerate() {
            if set.len() > 1 {
                let ids: Vec<String> = set.iter().map(|e| format!("e{e}")).collect();
                out.push_str(&format!(
                    "  {{ rank=same; {} }} // level {}\n",
                    ids.join("; "),
                    i + 1
                ));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_text(&self, forest: &Forest) -> String {
        let mut out = format!("height {} width {}\n", self.height(), self.width());
        for (i, set) in self.level_sets().iter().enumerate().rev() {
            let names: Vec<String> = set
                .iter()
                .map(|&e| {
                    let [u, v] = forest.endpoints(e);
                    format!("{}-{}", forest.label(u), forest.label(v))
                })
                .collect();
            out.push_str(&format!("{:>4}: {}\n", i + 1, names.join(" ")));
        }
        out
    }
}

/// Levels visible from `v` under a partial ranking. Unranked edges and the
/// optional `skip` edge are treated as absent.
///
/// In a forest the path from `v` to any edge is unique, so level `p` is
/// visible exactly when some edge of level `p` has no higher edge on its
/// path from `v`.
pub fn visible_levels_partial(
    forest: &Forest,
    levels: &[Option<Level>],
    v: VertexId,
    skip: Option<EdgeId>,
) -> BTreeSet<Level> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<(VertexId, Option<EdgeId>, Level)> = vec![(v, None, 0)];
    while let Some((x, via, max)) = stack.pop() {
        for &e in forest.incident(x) {
            if Some(e) == via || Some(e) == skip {
                continue;
            }
            let Some(l) = levels[e] else { continue };
            if l >= max {
                out.insert(l);
            }
            stack.push((forest.other_end(e, x), Some(e), max.max(l)));
        }
    }
    out
}

pub fn visible_levels(
    forest: &Forest,
    ranking: &EdgeRanking,
    v: VertexId,
) -> Result<BTreeSet<Level>> {
    check_coverage(forest, ranking)?;
    if v >= forest.vertex_count() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    let partial: Vec<Option<Level>> = ranking.levels().iter().map(|&l| Some(l)).collect();
    Ok(visible_levels_partial(forest, &partial, v, None))
}

/// `{1..max_level}` minus the levels visible from either endpoint of `e`
/// in `G - e`.
///
/// This is the local rule for a single unranked edge. When several edges
/// are still unranked, a level may pass this test and still clash with two
/// equal higher levels on opposite sides of `e`; callers assigning levels
/// bottom-up never hit that case.
pub fn admissible_levels(
    forest: &Forest,
    levels: &[Option<Level>],
    e: EdgeId,
    max_level: Level,
) -> Result<BTreeSet<Level>> {
    if e >= forest.edge_count() || levels.len() != forest.edge_count() {
        return Err(Error::UnknownEdge(e));
    }
    if levels[e].is_some() {
        return Err(Error::AlreadyRanked(e));
    }
    let [u1, u2] = forest.endpoints(e);
    let mut seen = visible_levels_partial(forest, levels, u1, Some(e));
    seen.extend(visible_levels_partial(forest, levels, u2, Some(e)));
    Ok((1..=max_level).filter(|p| !seen.contains(p)).collect())
}

/// Parallel contraction plan: step `i` contracts the edges on level `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeSchedule {
    pub steps: Vec<Vec<EdgeId>>,
}

/// Outcome of replaying a schedule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionReport {
    pub steps: usize,
    pub max_step: usize,
    pub final_vertices: usize,
    pub components: usize,
}

impl MergeSchedule {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn max_step(&self) -> usize {
        self.steps.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// One line per step listing edge ids.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let ids: Vec<String> = step.iter().map(|e| e.to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
        out
    }

    /// Contracts the steps in order, checking that each one is a matching
    /// of the current contracted forest and that every edge is used once.
    pub fn simulate(&self, forest: &Forest) -> Result<ContractionReport> {
        let m = forest.edge_count();
        let mut used = vec![false; m];
        let mut dsu = DisjointSets::new(forest.vertex_count());
        for (i, step) in self.steps.iter().enumerate() {
            let mut touched: BTreeMap<usize, EdgeId> = BTreeMap::new();
            for &e in step {
                if e >= m {
                    return Err(Error::UnknownEdge(e));
                }
                if used[e] {
                    return Err(Error::Schedule(format!(
                        "edge {e} contracted twice (step {})",
                        i + 1
                    )));
                }
                used[e] = true;
                let [u, v] = forest.endpoints(e);
                for x in [dsu.find(u), dsu.find(v)] {
                    if let Some(&a) = touched.get(&x) {
                        return Err(Error::ScheduleInvalid {
                            step: i + 1,
                            a,
                            b: e,
                        });
                    }
                    touched.insert(x, e);
                }
            }
            for &e in step {
                let [u, v] = forest.endpoints(e);
                dsu.union(u, v);
            }
        }
        if let Some(e) = used.iter().position(|&u| !u) {
            return Err(Error::Schedule(format!("edge {e} is never contracted")));
        }
        let final_vertices = (0..forest.vertex_count())
            .map(|v| dsu.find(v))
            .collect::<BTreeSet<_>>()
            .len();
        let components = forest.component_count();
        if final_vertices != components {
            return Err(Error::Schedule(format!(
                "{final_vertices} vertices remain for {components} components"
            )));
        }
        Ok(ContractionReport {
            steps: self.steps.len(),
            max_step: self.max_step(),
            final_vertices,
            components,
        })
    }
}

pub fn simulate_contraction(
    forest: &Forest,
    schedule: &MergeSchedule,
) -> Result<ContractionReport> {
    schedule.simulate(forest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::TreeKind;

    fn path(n: usize) -> Forest {
        Forest::generate(TreeKind::Path(n)).unwrap()
    }

    fn rank(v: &[Level]) -> EdgeRanking {
        EdgeRanking::new(v.to_vec())
    }

    #[test]
    fn validate_examples() {
        let p3 = path(3);
        let r = validate_ranking(&p3, &rank(&[1, 1])).unwrap();
        assert_eq!(
            r.violations,
            vec![Violation::Adjacent {
                a: 0,
                b: 1,
                level: 1
            }]
        );
        let p4 = path(4);
        assert!(validate_ranking(&p4, &rank(&[1, 2, 1])).unwrap().is_ok());
        assert!(validate_ranking(&p4, &rank(&[1, 3, 1])).unwrap().is_ok());
        let r = validate_ranking(&path(5), &rank(&[2, 1, 2, 3])).unwrap();
        assert_eq!(
            r.violations,
            vec![Violation::Unseparated {
                a: 0,
                b: 2,
                level: 2
            }]
        );
        assert!(matches!(
            validate_ranking(&p4, &rank(&[1, 2])),
            Err(Error::Coverage { .. })
        ));
        let r = validate_ranking(&p3, &rank(&[0, 1])).unwrap();
        assert_eq!(r.violations, vec![Violation::ZeroLevel { edge: 0 }]);
    }

    #[test]
    fn build_examples() {
        let p4 = path(4);
        let ef = EliminationForest::from_levels(&p4, vec![1, 2, 1]).unwrap();
        assert_eq!(ef.roots(), &[1]);
        assert_eq!(ef.children(1), &[0, 2]);
        assert_eq!(
            (ef.height(), ef.width(), ef.level_sizes()),
            (2, 2, vec![2, 1])
        );
        let ef = EliminationForest::from_levels(&p4, vec![1, 3, 1]).unwrap();
        assert_eq!(
            (ef.height(), ef.width(), ef.level_sizes()),
            (3, 2, vec![2, 0, 1])
        );
        let single = path(2);
        let ef = EliminationForest::from_levels(&single, vec![1]).unwrap();
        assert_eq!((ef.roots(), ef.height()), (&[0][..], 1));
        assert!(matches!(
            EliminationForest::from_levels(&p4, vec![1, 1, 2]),
            Err(Error::InvalidRanking(_))
        ));
    }

    #[test]
    fn visibility_examples() {
        let p4 = path(4);
        let vis = visible_levels(&p4, &rank(&[1, 2, 1]), 0).unwrap();
        assert_eq!(vis.into_iter().collect::<Vec<_>>(), vec![1, 2]);
        let vis = visible_levels(&p4, &rank(&[1, 3, 1]), 0).unwrap();
        assert_eq!(vis.into_iter().collect::<Vec<_>>(), vec![1, 3]);
        let mut f = path(2);
        let iso = f.add_vertex("iso");
        assert!(visible_levels(&f, &rank(&[1]), iso).unwrap().is_empty());
        // The far edge at level 1 is hidden behind level 2.
        let vis = visible_levels(&p4, &rank(&[2, 1, 3]), 3).unwrap();
        assert_eq!(vis.into_iter().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn admissible_examples() {
        let p4 = path(4);
        let adm = admissible_levels(&p4, &[Some(1), None, Some(1)], 1, 3).unwrap();
        assert_eq!(adm.into_iter().collect::<Vec<_>>(), vec![2, 3]);
        let adm = admissible_levels(&path(2), &[None], 0, 2).unwrap();
        assert_eq!(adm.into_iter().collect::<Vec<_>>(), vec![1, 2]);
        let star = Forest::generate(TreeKind::Star(5)).unwrap();
        let adm = admissible_levels(&star, &[Some(1), Some(2), Some(3), None], 3, 4).unwrap();
        assert_eq!(adm.into_iter().collect::<Vec<_>>(), vec![4]);
        assert!(matches!(
            admissible_levels(&p4, &[Some(1), None, Some(1)], 0, 3),
            Err(Error::AlreadyRanked(0))
        ));
    }

    #[test]
    fn compactify_examples() {
        let p4 = path(4);
        let gap = EliminationForest::from_levels(&p4, vec![1, 3, 1]).unwrap();
        assert!(!gap.is_compact());
        let ef = gap.compactify();
        assert_eq!(ef.levels(), &[1, 2, 1]);
        assert!(ef.is_compact());
        let same = EliminationForest::from_levels(&p4, vec![1, 2, 1]).unwrap();
        assert_eq!(same.compactify(), same);
        let p6 = path(6);
        let ef = EliminationForest::from_levels(&p6, vec![1, 2, 1, 3, 1]).unwrap();
        let c = ef.compactify();
        assert_eq!(c.levels(), &[1, 2, 1, 3, 2]);
        assert!(c.is_compact());
        assert!(validate_ranking(&p6, &c.ranking()).unwrap().is_ok());
    }

    #[test]
    fn schedule_examples() {
        let p4 = path(4);
        let ef = EliminationForest::from_levels(&p4, vec![1, 2, 1]).unwrap();
        let s = ef.to_merge_schedule();
        assert_eq!(s.steps, vec![vec![0, 2], vec![1]]);
        let rep = s.simulate(&p4).unwrap();
        assert_eq!(rep.final_vertices, 1);
        let bad = MergeSchedule {
            steps: vec![vec![0, 1], vec![2]],
        };
        assert!(matches!(
            bad.simulate(&p4),
            Err(Error::ScheduleInvalid {
                step: 1,
                a: 0,
                b: 1
            })
        ));
        // Equal levels separated only by lower edges collide after contraction.
        let bad = MergeSchedule {
            steps: vec![vec![1], vec![0, 2]],
        };
        assert!(matches!(
            bad.simulate(&p4),
            Err(Error::ScheduleInvalid { step: 2, .. })
        ));
    }

    #[test]
    fn json_levels_forms() {
        let v: Value = serde_json::from_str("[1,2,1]").unwrap();
        assert_eq!(EdgeRanking::from_json(&v, 3).unwrap(), rank(&[1, 2, 1]));
        let v: Value = serde_json::from_str(r#"{"levels":{"0":1,"2":1,"1":2}}"#).unwrap();
        assert_eq!(EdgeRanking::from_json(&v, 3).unwrap(), rank(&[1, 2, 1]));
        let v: Value = serde_json::from_str(r#"{"0":1,"1":2,"5":1}"#).unwrap();
        match EdgeRanking::from_json(&v, 3) {
            Err(Error::Coverage { missing, extra }) => {
                assert_eq!((missing, extra), (vec![2], vec![5]));
            }
            other => panic!("unexpected {other:?}"),
        }
        let p4 = path(4);
        let ef = EliminationForest::from_levels(&p4, vec![1, 2, 1]).unwrap();
        let back = EdgeRanking::from_json(&ef.to_json(&p4), 3).unwrap();
        assert_eq!(back, ef.ranking());
    }
}
