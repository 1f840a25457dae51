//! Undirected forests with stable edge ids.
//!
//! Vertices carry opaque labels and are indexed densely in order of first
//! appearance. Edge ids are dense indices as well; every structure further
//! down the pipeline (rankings, elimination forests, schedules) is keyed by
//! them.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, ParseError, ParseErrorKind};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<[VertexId; 2]>,
    adjacency: Vec<Vec<EdgeId>>,
}

/// A vertex together with its pendant edges (edges to degree-1 neighbours).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendantStar {
    pub center: VertexId,
    pub leaf_edges: Vec<EdgeId>,
}

/// Generator families for test and benchmark instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeKind {
    /// Path on `n` vertices.
    Path(usize),
    /// Star on `n` vertices (center of degree `n - 1`).
    Star(usize),
    /// Spine of `spine` vertices, each carrying `legs` pendant leaves.
    Caterpillar { spine: usize, legs: usize },
    /// Uniform random labeled tree on `n` vertices.
    Random { n: usize, seed: u64 },
    /// `legs` paths of `len` edges hanging from a common center.
    Spider { legs: usize, len: usize },
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn grow(&mut self, n: usize) {
        while self.parent.len() < n {
            let i = self.parent.len();
            self.parent.push(i);
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

impl Default for Forest {
    fn default() -> Self {
        Self::new()
    }
}

impl Forest {
    pub fn new() -> Self {
        Forest {
            labels: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            adjacency: Vec::new(),
        }
    }

    /// Forest on `n` isolated vertices labeled `0..n`.
    pub fn with_vertices(n: usize) -> Self {
        let mut f = Forest::new();
        for i in 0..n {
            f.add_vertex(i.to_string());
        }
        f
    }

    /// Returns the id of the vertex with this label, creating it if needed.
    pub fn add_vertex(&mut self, label: impl Into<String>) -> VertexId {
        let label = label.into();
        if let Some(&v) = self.index.get(&label) {
            return v;
        }
        let v = self.labels.len();
        self.index.insert(label.clone(), v);
        self.labels.push(label);
        self.adjacency.push(Vec::new());
        v
    }

    /// Adds a fresh vertex with a generated label that is not in use yet.
    pub fn add_fresh_vertex(&mut self) -> VertexId {
        let mut n = self.labels.len();
        while self.index.contains_key(&n.to_string()) {
            n += 1;
        }
        self.add_vertex(n.to_string())
    }

    /// Appends an edge without checking for cycles; callers constructing
    /// gadgets attach only to fresh vertices. `try_add_edge` checks.
    pub(crate) fn push_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        debug_assert_ne!(u, v);
        let id = self.edges.len();
        self.edges.push([u, v]);
        self.adjacency[u].push(id);
        self.adjacency[v].push(id);
        id
    }

    /// Adds an edge, rejecting self-loops, duplicates and cycles.
    pub fn try_add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, ParseErrorKind> {
        if u == v {
            return Err(ParseErrorKind::SelfLoop);
        }
        if self.edge_between(u, v).is_some() {
            return Err(ParseErrorKind::DuplicateEdge);
        }
        if self.connected(u, v) {
            return Err(ParseErrorKind::Cycle);
        }
        Ok(self.push_edge(u, v))
    }

    fn connected(&self, u: VertexId, v: VertexId) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![u];
        seen[u] = true;
        while let Some(x) = stack.pop() {
            if x == v {
                return true;
            }
            for &e in &self.adjacency[x] {
                let y = self.other_end(e, x);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    /// Looks up a vertex by label, failing with a lookup error.
    pub fn require_vertex(&self, label: &str) -> Result<VertexId, Error> {
        self.vertex(label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        self.edges[e]
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let [a, b] = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (small, other) = if self.adjacency[u].len() <= self.adjacency[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[small]
            .iter()
            .copied()
            .find(|&e| self.other_end(e, small) == other)
    }

    /// Edge ids sharing an endpoint with `e`.
    pub fn adjacent_edges(&self, e: EdgeId) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges[e]
            .into_iter()
            .flat_map(move |v| self.adjacency[v].iter().copied())
            .filter(move |&f| f != e)
    }

    /// Per-vertex component index, numbered by smallest vertex id.
    pub fn component_of_vertices(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.vertex_count()];
        let mut count = 0;
        for s in 0..self.vertex_count() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &e in &self.adjacency[x] {
                    let y = self.other_end(e, x);
                    if comp[y] == usize::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn component_count(&self) -> usize {
        self.component_of_vertices().1
    }

    /// Edge sets of the components that contain at least one edge, ordered
    /// by smallest edge id. Each list is sorted.
    pub fn edge_components(&self) -> Vec<Vec<EdgeId>> {
        let (comp, count) = self.component_of_vertices();
        let mut buckets: Vec<Vec<EdgeId>> = vec![Vec::new(); count];
        for (e, [u, _]) in self.edges.iter().enumerate() {
            buckets[comp[*u]].push(e);
        }
        let mut out: Vec<Vec<EdgeId>> = buckets.into_iter().filter(|b| !b.is_empty()).collect();
        out.sort_by_key(|b| b[0]);
        out
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count() > 0 && self.component_count() == 1
    }

    /// Subforest induced by an edge subset; vertex labels are preserved.
    /// Returns the subforest and the map new edge id -> old edge id.
    pub fn edge_subforest(&self, edges: &[EdgeId]) -> (Forest, Vec<EdgeId>) {
        let mut f = Forest::new();
        let mut map = Vec::with_capacity(edges.len());
        for &e in edges {
            let [u, v] = self.edges[e];
            let a = f.add_vertex(self.labels[u].clone());
            let b = f.add_vertex(self.labels[v].clone());
            f.push_edge(a, b);
            map.push(e);
        }
        (f, map)
    }

    /// Disjoint union; vertices of `other` are relabeled when labels clash.
    pub fn disjoint_union(&self, other: &Forest) -> Forest {
        let mut f = self.clone();
        let mut remap = Vec::with_capacity(other.vertex_count());
        for label in &other.labels {
            let v = if f.index.contains_key(label) {
                f.add_fresh_vertex()
            } else {
                f.add_vertex(label.clone())
            };
            remap.push(v);
        }
        for &[u, v] in &other.edges {
            f.push_edge(remap[u], remap[v]);
        }
        f
    }

    pub fn pendant_star(&self, v: VertexId) -> Result<PendantStar, Error> {
        if v >= self.vertex_count() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        let leaf_edges = self.adjacency[v]
            .iter()
            .copied()
            .filter(|&e| self.degree(self.other_end(e, v)) == 1)
            .collect();
        Ok(PendantStar {
            center: v,
            leaf_edges,
        })
    }

    pub fn generate(kind: TreeKind) -> Result<Forest, Error> {
        match kind {
            TreeKind::Path(n) => {
                nonzero(n)?;
                let mut f = Forest::with_vertices(n);
                for i in 1..n {
                    f.push_edge(i - 1, i);
                }
                Ok(f)
            }
            TreeKind::Star(n) => {
                nonzero(n)?;
                let mut f = Forest::with_vertices(n);
                for i in 1..n {
                    f.push_edge(0, i);
                }
                Ok(f)
            }
            TreeKind::Caterpillar { spine, legs } => {
                nonzero(spine)?;
                let mut f = Forest::with_vertices(spine);
                for i in 1..spine {
                    f.push_edge(i - 1, i);
                }
                for s in 0..spine {
                    for _ in 0..legs {
                        let leaf = f.add_fresh_vertex();
                        f.push_edge(s, leaf);
                    }
                }
                Ok(f)
            }
            TreeKind::Random { n, seed } => {
                nonzero(n)?;
                if n <= 2 {
                    return Forest::generate(TreeKind::Path(n));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
                Ok(prufer_decode(n, &seq))
            }
            TreeKind::Spider { legs, len } => {
                let mut f = Forest::with_vertices(1);
                for _ in 0..legs {
                    let mut prev = 0;
                    for _ in 0..len {
                        let next = f.add_fresh_vertex();
                        f.push_edge(prev, next);
                        prev = next;
                    }
                }
                Ok(f)
            }
        }
    }

    /// Parses the edge-list format: one `u v` pair per line, `#` comments,
    /// blank lines ignored.
    pub fn parse_edge_list(text: &str) -> Result<Forest, ParseError> {
        let mut f = Forest::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |kind| ParseError {
                line: lineno + 1,
                text: raw.to_string(),
                kind,
            };
            let mut parts = line.split_whitespace();
            let (Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err(ParseErrorKind::Malformed));
            };
            let a = f.add_vertex(u);
            let b = f.add_vertex(v);
            f.try_add_edge(a, b).map_err(err)?;
        }
        Ok(f)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &[u, v] in &self.edges {
            out.push_str(&self.labels[u]);
            out.push(' ');
            out.push_str(&self.labels[v]);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let doc = ForestDoc {
            vertices: self.labels.iter().map(|l| label_value(l)).collect(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(id, &[u, v])| EdgeDoc {
                    id,
                    u: label_value(&self.labels[u]),
                    v: label_value(&self.labels[v]),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("forest document serializes")
    }

    /// Reads the JSON form. Edge ids must be a permutation of `0..|E|`.
    pub fn from_json(value: &Value) -> Result<Forest, Error> {
        let doc: ForestDoc = serde_json::from_value(value.clone())?;
        let mut f = Forest::new();
        for v in &doc.vertices {
            f.add_vertex(value_label(v)?);
        }
        let mut edges = doc.edges;
        edges.sort_by_key(|e| e.id);
        for (expected, e) in edges.iter().enumerate() {
            let bad = |kind| {
                Error::Parse(ParseError {
                    line: expected + 1,
                    text: format!("edge {}", e.id),
                    kind,
                })
            };
            if e.id != expected {
                return Err(bad(ParseErrorKind::EdgeIds));
            }
            let a = f.add_vertex(value_label(&e.u)?);
            let b = f.add_vertex(value_label(&e.v)?);
            f.try_add_edge(a, b).map_err(bad)?;
        }
        Ok(f)
    }

    /// Parses either format, picking JSON when the text starts with `{`.
    pub fn parse_any(text: &str) -> Result<Forest, Error> {
        if text.trim_start().starts_with('{') {
            let v: Value = serde_json::from_str(text)?;
            Forest::from_json(&v)
        } else {
            Ok(Forest::parse_edge_list(text)?)
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph forest {\n");
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("  v{i} [label=\"{}\"];\n", escape(l)));
        }
        for (e, &[u, v]) in self.edges.iter().enumerate() {
            out.push_str(&format!("  v{u} -- v{v} [label=\"e{e}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

fn nonzero(n: usize) -> Result<(), Error> {
    if n == 0 {
        Err(Error::InvalidSize("size must be at least 1".into()))
    } else {
        Ok(())
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Serialize, Deserialize)]
struct ForestDoc {
    vertices: Vec<Value>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    id: usize,
    u: Value,
    v: Value,
}

/// Labels that are canonical non-negative integers are emitted as JSON
/// numbers, everything else as strings.
pub(crate) fn label_value(label: &str) -> Value {
    match label.parse::<u64>() {
        Ok(n) if n.to_string() == label => Value::from(n),
        _ => Value::from(label),
    }
}

fn value_label(v: &Value) -> Result<String, Error> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_u64() => Ok(n.to_string()),
        other => Err(Error::Format(format!("bad vertex label {other}"))),
    }
}

/// Decodes a Prüfer sequence over labels `0..n` (`seq.len() == n - 2`).
pub fn prufer_decode(n: usize, seq: &[usize]) -> Forest {
    assert!(
        n >= 2 && seq.len() == n - 2,
        "Prüfer sequence length must be n - 2"
    );
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut f = Forest::with_vertices(n);
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| degree[v] == 1).collect();
    for &s in seq {
        let leaf = *leaves.iter().next().expect("a leaf exists");
        leaves.remove(&leaf);
        f.push_edge(leaf, s);
        degree[s] -= 1;
        if degree[s] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    f.push_edge(rest[0], rest[1]);
    f
}

/// Iterates over every labeled tree on `n` vertices (`n^(n-2)` of them).
pub fn all_labeled_trees(n: usize) -> impl Iterator<Item = Forest> {
    let len = n.saturating_sub(2);
    let total = if n < 2 { 0 } else { n.pow(len as u32) };
    (0..total).map(move |mut code| {
        let mut seq = vec![0; len];
        for s in seq.iter_mut() {
            *s = code % n;
            code /= n;
        }
        prufer_decode(n, &seq)
    })
}

/// A random tree with `edges` edges, drawn from a seeded generator.
pub fn random_tree_with_rng<R: Rng>(rng: &mut R, vertices: usize) -> Forest {
    if vertices <= 2 {
        return Forest::generate(TreeKind::Path(vertices.max(1))).expect("nonzero");
    }
    let seq: Vec<usize> = (0..vertices - 2)
        .map(|_| rng.gen_range(0..vertices))
        .collect();
    prufer_decode(vertices, &seq)
}

/// The union-find used for level sweeps elsewhere in the crate.
pub(crate) struct DisjointSets(Dsu);

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets(Dsu::new(n))
    }
    pub(crate) fn find(&mut self, x: usize) -> usize {
        self.0.find(x)
    }
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        self.0.union(a, b)
    }
    #[allow(dead_code)]
    pub(crate) fn grow(&mut self, n: usize) {
        self.0.grow(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn parse_path() {
        let f = Forest::parse_edge_list("1 2\n2 3").unwrap();
        assert_eq!(f.vertex_count(), 3);
        assert_eq!(f.edge_count(), 2);
        assert_eq!(f.endpoints(1), [1, 2]);
    }

    #[test]
    fn parse_rejects_duplicate() {
        let err = Forest::parse_edge_list("1 2\n1 2").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateEdge);
        assert_eq!(err.line, 2);
        let err = Forest::parse_edge_list("1 2\n2 1").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateEdge);
    }

    #[test]
    fn parse_rejects_cycle_and_loop() {
        let err = Forest::parse_edge_list("1 2\n2 3\n3 1").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Cycle);
        assert_eq!(err.line, 3);
        let err = Forest::parse_edge_list("# c\n\n4 4").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::SelfLoop);
        assert_eq!(err.line, 3);
    }

    #[test]
    fn comments_and_blank_lines() {
        let f = Forest::parse_edge_list("# header\n\na b # trailing\n  b c\n").unwrap();
        assert_eq!(f.edge_count(), 2);
        assert_eq!(f.label(0), "a");
    }

    #[test]
    fn generators() {
        let p = Forest::generate(TreeKind::Path(8)).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count()), (8, 7));
        let s = Forest::generate(TreeKind::Star(5)).unwrap();
        assert_eq!(s.degree(0), 4);
        assert_eq!(s.edge_count(), 4);
        let c = Forest::generate(TreeKind::Caterpillar { spine: 3, legs: 2 }).unwrap();
        assert_eq!(c.edge_count(), 2 + 6);
        let sp = Forest::generate(TreeKind::Spider { legs: 3, len: 2 }).unwrap();
        assert_eq!(sp.edge_count(), 6);
        assert_eq!(sp.degree(0), 3);
        assert!(matches!(
            Forest::generate(TreeKind::Path(0)),
            Err(Error::InvalidSize(_))
        ));
        assert!(matches!(
            Forest::generate(TreeKind::Random { n: 0, seed: 1 }),
            Err(Error::InvalidSize(_))
        ));
    }

    #[test]
    fn random_is_deterministic() {
        let a = Forest::generate(TreeKind::Random { n: 10, seed: 42 }).unwrap();
        let b = Forest::generate(TreeKind::Random { n: 10, seed: 42 }).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert!(a.is_tree());
        assert_eq!(a.edge_count(), 9);
    }

    #[test]
    fn pendant_stars() {
        let s = Forest::generate(TreeKind::Star(5)).unwrap();
        assert_eq!(s.pendant_star(0).unwrap().leaf_edges.len(), 4);
        let p4 = Forest::generate(TreeKind::Path(4)).unwrap();
        assert_eq!(p4.pendant_star(1).unwrap().leaf_edges, vec![0]);
        let p6 = Forest::generate(TreeKind::Path(6)).unwrap();
        assert!(p6.pendant_star(2).unwrap().leaf_edges.is_empty());
        assert!(matches!(p6.pendant_star(99), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn exhaustive_prufer_hits_every_tree() {
        for n in 2..=6 {
            let trees: BTreeSet<Vec<[usize; 2]>> = all_labeled_trees(n)
                .map(|t| {
                    let mut e: Vec<[usize; 2]> = t
                        .edges()
                        .iter()
                        .map(|&[a, b]| [a.min(b), a.max(b)])
                        .collect();
                    e.sort();
                    e
                })
                .collect();
            assert_eq!(trees.len(), n.pow(n as u32 - 2), "n = {n}");
        }
    }

    #[test]
    fn json_round_trip_keeps_ids() {
        let f = Forest::parse_edge_list("x y\n3 y\n3 7").unwrap();
        let g = Forest::from_json(&f.to_json()).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.to_json()["vertices"][2], Value::from(3));
    }
}
