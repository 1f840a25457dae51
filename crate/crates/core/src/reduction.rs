//! Instances of bounded tree-depth built from minimum hitting set instances.
//!
//! A hitting set instance has a universe `{1..n}`, sets `A_1..A_m` and a
//! budget `t`. The generated forest has one main component (a root `r`
//! joined to a gadget `T(a_i)` per element) and a number of padding
//! components `T̄_d`. Every component carries pendant paths with `2^M`
//! vertices; those paths are kept symbolic in [`BtdInstance`] and only
//! expanded by [`BtdInstance::materialize`], since for honest parameters
//! `M` is in the thirties.
//!
//! Gadget shapes follow one rule wherever the drawings leave sizes open: a
//! vertex that has to push level `p` onto its parent edge gets a pendant
//! star with `p - 1` leaves. Each element gadget also has a vertex `y_j` per
//! set, hung from `u_i`, that fills level `φ(j) + 1` below `u_i`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::elim::{EliminationForest, Level};
use crate::error::{Error, Result};
use crate::forest::{EdgeId, Forest, VertexId};

/// Refuse to expand instances with more edges than this.
pub const MATERIALIZE_LIMIT: u64 = 5_000_000;

/// Largest path exponent accepted anywhere in this module.
pub const MAX_PATH_EXP: u32 = 62;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MhsInstance {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
    pub t: usize,
}

impl MhsInstance {
    /// Checks the instance and normalises every set to sorted, distinct
    /// elements.
    pub fn new(n: usize, sets: Vec<Vec<usize>>, t: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("universe is empty".into()));
        }
        if sets.is_empty() {
            return Err(Error::Parameter("no sets given".into()));
        }
        let mut out = Vec::with_capacity(sets.len());
        for (j, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::Parameter(format!("set {} is empty", j + 1)));
            }
            if let Some(&x) = s.iter().find(|&&x| x == 0 || x > n) {
                return Err(Error::Parameter(format!(
                    "set {} has element {x} outside 1..{n}",
                    j + 1
                )));
            }
            out.push(s);
        }
        Ok(MhsInstance { n, sets: out, t })
    }

    /// `A = {a_1..a_6}`, sets `{1,2,6}, {2,4,5,6}, {1,3,4}, {3,5}`, `t = 2`.
    pub fn sample() -> Self {
        MhsInstance::new(
            6,
            vec![vec![1, 2, 6], vec![2, 4, 5, 6], vec![1, 3, 4], vec![3, 5]],
            2,
        )
        .unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: MhsInstance = serde_json::from_str(text)?;
        MhsInstance::new(raw.n, raw.sets, raw.t)
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "sets": self.sets, "t": self.t })
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    /// Whether element `i` lies in set `j` (both 1-based).
    pub fn contains(&self, j: usize, i: usize) -> bool {
        self.sets[j - 1].binary_search(&i).is_ok()
    }

    /// Sets containing `i`, 1-based.
    pub fn sets_of(&self, i: usize) -> Vec<usize> {
        (1..=self.m()).filter(|&j| self.contains(j, i)).collect()
    }

    pub fn is_hitting_set(&self, chosen: &[usize]) -> bool {
        self.sets
            .iter()
            .all(|s| s.iter().any(|x| chosen.contains(x)))
    }
}

/// Multiplicity of one padding template `T̄_d`, `d = φ(j) + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TbarGroup {
    pub j: usize,
    pub offset: i32,
    pub d: Level,
    pub copies: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetParams {
    /// Attached paths have `2^big_m` vertices.
    pub big_m: u32,
    pub k: Level,
    pub b: usize,
    /// Edges outside the attached paths.
    pub m_bar: usize,
    /// `phi[j - 1] = φ(j)`.
    pub phi: Vec<Level>,
    /// `eta[j - 1]`: target number of path roots on level `φ(j) - 1`.
    pub eta: Vec<usize>,
    pub tbar: Vec<TbarGroup>,
    /// True when `2^M > 4 m̄²` fails, which only happens with an override.
    pub scaled: bool,
}

impl GadgetParams {
    pub fn phi(&self, j: usize) -> Level {
        self.phi[j - 1]
    }

    pub fn path_vertices(&self) -> u64 {
        1u64 << self.big_m
    }

    pub fn path_edges(&self) -> u64 {
        self.path_vertices() - 1
    }

    /// `2^M > 4 m̄²`.
    pub fn size_bound_holds(&self) -> bool {
        (1u128 << self.big_m) > 4 * (self.m_bar as u128).pow(2)
    }

    /// `M >= 2 ⌈log₂ m̄⌉ + 1`.
    pub fn log_bound_holds(&self) -> bool {
        let ceil_log = if self.m_bar <= 1 {
            0
        } else {
            usize::BITS - (self.m_bar - 1).leading_zeros()
        };
        self.big_m > 2 * ceil_log
    }
}

/// Parameters for the smallest `M` with `2^M > 4 m̄(M)²`.
pub fn compute_params(inst: &MhsInstance) -> GadgetParams {
    for m in 1..=MAX_PATH_EXP {
        let p = params_for(inst, m).expect("small exponents fit");
        if p.size_bound_holds() {
            return p;
        }
    }
    unreachable!("m̄ grows linearly in M")
}

/// Parameters with `M` fixed by the caller. Small values give scaled
/// instances that can be materialised; `scaled` records the bound failing.
pub fn compute_params_with(inst: &MhsInstance, big_m: Option<u32>) -> Result<GadgetParams> {
    match big_m {
        None => Ok(compute_params(inst)),
        Some(m) => params_for(inst, m),
    }
}

fn params_for(inst: &MhsInstance, big_m: u32) -> Result<GadgetParams> {
    if big_m == 0 || big_m > MAX_PATH_EXP {
        return Err(Error::Parameter(format!(
            "M = {big_m} is outside 1..={MAX_PATH_EXP}"
        )));
    }
    let (n, m, t) = (inst.n, inst.m(), inst.t);
    let k = big_m as usize + 1 + 3 * m + 2 * n + t;
    let k = Level::try_from(k).map_err(|_| Error::Parameter("k does not fit".into()))?;
    let phi: Vec<Level> = (0..m as Level).map(|j| big_m + 3 * j + 1).collect();
    let eta: Vec<usize> = (1..=m).map(|j| if j == 1 { 2 * n } else { n }).collect();
    let mut tbar = Vec::with_capacity(3 * m);
    for j in 1..=m {
        let f = phi[j - 1];
        let size = inst.sets[j - 1].len();
        tbar.push(TbarGroup {
            j,
            offset: -1,
            d: f - 1,
            copies: eta[j - 1] - size + 1,
        });
        tbar.push(TbarGroup {
            j,
            offset: 0,
            d: f,
            copies: n - 1,
        });
        tbar.push(TbarGroup {
            j,
            offset: 1,
            d: f + 1,
            copies: n,
        });
    }
    let mut p = GadgetParams {
        big_m,
        k,
        b: 0,
        m_bar: 0,
        phi,
        eta,
        tbar,
        scaled: false,
    };
    p.m_bar = w_edge_count(inst, &p);
    let b = (n as u128) << big_m;
    p.b = usize::try_from(b + p.m_bar as u128)
        .map_err(|_| Error::Parameter("b does not fit".into()))?;
    p.scaled = !p.size_bound_holds();
    Ok(p)
}

fn range_sum(lo: usize, hi: usize) -> usize {
    if lo > hi {
        0
    } else {
        (lo + hi) * (hi - lo + 1) / 2
    }
}

/// Edges of `G_α`.
pub fn g_alpha_edge_count(alpha: Level) -> usize {
    5 * alpha as usize + 4
}

/// Edges of `T̄_d` without its path.
pub fn tbar_edge_count(d: Level, k: Level) -> usize {
    range_sum(d as usize + 1, k as usize)
}

fn z_range(params: &GadgetParams, i: usize) -> std::ops::RangeInclusive<Level> {
    let lo = params.phi.last().copied().unwrap_or(params.big_m) + 4;
    lo..=params.k - 2 * i as Level
}

/// Counted from the stated shapes, independently of the builders.
fn w_edge_count(inst: &MhsInstance, p: &GadgetParams) -> usize {
    let k = p.k as usize;
    let gadgets: usize = p.phi.iter().map(|&a| g_alpha_edge_count(a)).sum();
    let ys: usize = p.phi.iter().map(|&a| a as usize + 1).sum();
    let mut total = k - 2 * inst.n - inst.t;
    for i in 1..=inst.n {
        let z = z_range(p, i);
        total += 2
            + 2 * (k - 2 * i + 1)
            + range_sum(*z.start() as usize, *z.end() as usize)
            + ys
            + gadgets;
    }
    for g in &p.tbar {
        total += g.copies * tbar_edge_count(g.d, p.k);
    }
    total
}

/// Edge roles inside `G_α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    W1W1p,
    W1W3,
    W3W2,
    W3W3p,
    W2W2p,
    /// Leaf `x` of `S(w2)`, `x` in `1..=α`; leaf `α` carries the path.
    W2Leaf(Level),
}

/// What fixes the level of a skeleton edge during certification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Fixed(Level),
    Gadget { i: usize, alpha: Level, part: Part },
    RootU(usize),
    UV(usize),
    RootPendant(usize),
    Lift(Level),
}

struct Builder<'a> {
    f: &'a mut Forest,
    roles: &'a mut Vec<Role>,
}

impl Builder<'_> {
    fn vertex(&mut self, label: String) -> VertexId {
        let before = self.f.vertex_count();
        let v = self.f.add_vertex(label);
        debug_assert_eq!(v, before, "labels are unique");
        v
    }

    fn edge(&mut self, u: VertexId, v: VertexId, role: Role) -> EdgeId {
        self.roles.push(role);
        self.f.push_edge(u, v)
    }

    /// Hangs leaves on `center` with fixed levels `1..=count`.
    fn star(&mut self, center: VertexId, prefix: &str, count: Level) {
        for x in 1..=count {
            let l = self.vertex(format!("{prefix}.{x}"));
            self.edge(center, l, Role::Fixed(x));
        }
    }

    /// `x` with an edge to `at` at level `p` and `p - 1` leaves.
    fn forcing(&mut self, at: VertexId, label: String, p: Level) -> VertexId {
        let x = self.vertex(label.clone());
        self.edge(at, x, Role::Fixed(p));
        self.star(x, &label, p - 1);
        x
    }

    fn g_alpha(&mut self, prefix: &str, w1: VertexId, alpha: Level, i: usize) -> GAlphaVertices {
        let g = |part| Role::Gadget { i, alpha, part };
        let w1p = self.vertex(format!("{prefix}w1'"));
        let w3 = self.vertex(format!("{prefix}w3"));
        let w3p = self.vertex(format!("{prefix}w3'"));
        let w2 = self.vertex(format!("{prefix}w2"));
        let w2p = self.vertex(format!("{prefix}w2'"));
        self.edge(w1, w1p, g(Part::W1W1p));
        self.star(w1p, &format!("{prefix}w1'"), alpha + 1);
        self.edge(w1, w3, g(Part::W1W3));
        self.edge(w3, w2, g(Part::W3W2));
        self.edge(w3, w3p, g(Part::W3W3p));
        self.star(w3p, &format!("{prefix}w3'"), alpha - 1);
        self.star(w3, &format!("{prefix}w3"), alpha - 1);
        self.edge(w2, w2p, g(Part::W2W2p));
        self.star(w2p, &format!("{prefix}w2'"), alpha);
        let mut attach = w2;
        for x in 1..=alpha {
            let l = self.vertex(format!("{prefix}w2.{x}"));
            self.edge(w2, l, g(Part::W2Leaf(x)));
            attach = l;
        }
        GAlphaVertices {
            w1,
            w1p,
            w2,
            w2p,
            w3,
            w3p,
            attach,
        }
    }

    /// `G(a_i)` hung from an existing root `r`, plus its set gadgets.
    fn element(
        &mut self,
        inst: &MhsInstance,
        p: &GadgetParams,
        i: usize,
        r: VertexId,
    ) -> (ElementEdges, Vec<(usize, VertexId)>) {
        let k = p.k;
        let top = k - 2 * i as Level;
        let u = self.vertex(format!("u{i}"));
        let v = self.vertex(format!("v{i}"));
        let r_u = self.edge(r, u, Role::RootU(i));
        let u_v = self.edge(u, v, Role::UV(i));
        let up = self.vertex(format!("u'{i}"));
        let r_u_prime = self.edge(r, up, Role::Fixed(top + 1));
        self.star(up, &format!("u'{i}"), top);
        let vp = self.vertex(format!("v'{i}"));
        let v_v_prime = self.edge(v, vp, Role::Fixed(top + 1));
        self.star(vp, &format!("v'{i}"), top);
        for q in z_range(p, i) {
            self.forcing(v, format!("z{i}.{q}"), q);
        }
        for j in 1..=inst.m() {
            self.forcing(u, format!("y{i}.{j}"), p.phi(j) + 1);
        }
        let mut attach = Vec::new();
        for j in 1..=inst.m() {
            let g = self.g_alpha(&format!("g{i}.{j}."), v, p.phi(j), i);
            if inst.contains(j, i) {
                attach.push((j, g.attach));
            }
        }
        (
            ElementEdges {
                i,
                u,
                v,
                r_u,
                u_v,
                r_u_prime,
                v_v_prime,
            },
            attach,
        )
    }

    fn tbar(&mut self, prefix: &str, d: Level, k: Level) -> VertexId {
        let root = self.vertex(format!("{prefix}r"));
        for q in d + 1..=k {
            self.forcing(root, format!("{prefix}x{q}"), q);
        }
        root
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GAlphaVertices {
    pub w1: VertexId,
    pub w1p: VertexId,
    pub w2: VertexId,
    pub w2p: VertexId,
    pub w3: VertexId,
    pub w3p: VertexId,
    /// Leaf of `S(w2)` carrying the path.
    pub attach: VertexId,
}

/// Stand-alone `G_α`, optionally with its path of `2^path_exp` vertices.
#[derive(Clone, Debug)]
pub struct GAlpha {
    pub forest: Forest,
    pub alpha: Level,
    pub vertices: GAlphaVertices,
    pub path: Vec<EdgeId>,
}

pub fn build_g_alpha(alpha: Level, path_exp: Option<u32>) -> Result<GAlpha> {
    if alpha == 0 {
        return Err(Error::Parameter("α must be at least 1".into()));
    }
    let mut forest = Forest::new();
    let mut roles = Vec::new();
    let mut bld = Builder {
        f: &mut forest,
        roles: &mut roles,
    };
    let w1 = bld.vertex("w1".into());
    let vertices = bld.g_alpha("", w1, alpha, 0);
    let path = match path_exp {
        Some(e) => attach_path(&mut forest, vertices.attach, e, "P")?,
        None => Vec::new(),
    };
    Ok(GAlpha {
        forest,
        alpha,
        vertices,
        path,
    })
}

/// Stand-alone `T̄_d` with its path; the path root edge lies at `r̄`.
#[derive(Clone, Debug)]
pub struct Tbar {
    pub forest: Forest,
    pub d: Level,
    pub root: VertexId,
    pub path: Vec<EdgeId>,
    roles: Vec<Role>,
}

pub fn build_tbar(d: Level, params: &GadgetParams) -> Result<Tbar> {
    if d < params.big_m || d >= params.k {
        return Err(Error::Parameter(format!(
            "d = {d} is outside {}..{}",
            params.big_m, params.k
        )));
    }
    let mut forest = Forest::new();
    let mut roles = Vec::new();
    let root = Builder {
        f: &mut forest,
        roles: &mut roles,
    }
    .tbar("", d, params.k);
    let path = attach_path(&mut forest, root, params.big_m, "P")?;
    Ok(Tbar {
        forest,
        d,
        root,
        path,
        roles,
    })
}

/// Levels of the `T̄_d` certificate: spokes at their forced level, path
/// full binary with its top at `d`.
pub fn tbar_witness(t: &Tbar, params: &GadgetParams) -> Result<EliminationForest> {
    let mut levels = vec![0; t.forest.edge_count()];
    for (e, role) in t.roles.iter().enumerate() {
        if let Role::Fixed(l) = role {
            levels[e] = *l;
        }
    }
    for (idx, &e) in t.path.iter().enumerate() {
        levels[e] = path_level(idx, t.d, params.big_m);
    }
    EliminationForest::from_levels(&t.forest, levels)
}

/// Full binary ranking of a path walked from its attachment: the `idx`-th
/// edge (from 0) gets `tz(idx + 1) + 1`, shifted so the top lands on `root`.
fn path_level(idx: usize, root: Level, big_m: u32) -> Level {
    (idx + 1).trailing_zeros() + 1 + root - big_m
}

fn attach_path(f: &mut Forest, at: VertexId, exp: u32, prefix: &str) -> Result<Vec<EdgeId>> {
    if exp == 0 || exp > 30 {
        return Err(Error::InvalidSize(format!(
            "path of 2^{exp} vertices is not materialisable"
        )));
    }
    let edges = (1usize << exp) - 1;
    let mut out = Vec::with_capacity(edges);
    let mut prev = at;
    for s in 1..=edges {
        let v = f.add_vertex(format!("{prefix}.{s}"));
        out.push(f.push_edge(prev, v));
        prev = v;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ElementEdges {
    pub i: usize,
    pub u: VertexId,
    pub v: VertexId,
    pub r_u: EdgeId,
    pub u_v: EdgeId,
    pub r_u_prime: EdgeId,
    pub v_v_prime: EdgeId,
}

/// Stand-alone `G(a_i)` with root `r_i`, or `T(a_i)` when built with its
/// set gadgets; `attach` lists the path slots `(j, vertex)`.
#[derive(Clone, Debug)]
pub struct ElementGadget {
    pub forest: Forest,
    pub r: VertexId,
    pub edges: ElementEdges,
    pub attach: Vec<(usize, VertexId)>,
}

fn check_element(inst: &MhsInstance, i: usize) -> Result<()> {
    if i == 0 || i > inst.n {
        return Err(Error::Parameter(format!(
            "element {i} is outside 1..={}",
            inst.n
        )));
    }
    Ok(())
}

pub fn build_t_ai(i: usize, inst: &MhsInstance, params: &GadgetParams) -> Result<ElementGadget> {
    check_element(inst, i)?;
    let mut forest = Forest::new();
    let mut roles = Vec::new();
    let mut bld = Builder {
        f: &mut forest,
        roles: &mut roles,
    };
    let r = bld.vertex(format!("r{i}"));
    let (edges, attach) = bld.element(inst, params, i, r);
    Ok(ElementGadget {
        forest,
        r,
        edges,
        attach,
    })
}

/// `G(a_i)` alone: `T(a_i)` without the `G_φ(j)` gadgets at `v_i`.
pub fn build_g_ai(i: usize, inst: &MhsInstance, params: &GadgetParams) -> Result<ElementGadget> {
    let full = build_t_ai(i, inst, params)?;
    let keep: Vec<EdgeId> = (0..full.forest.edge_count())
        .filter(|&e| {
            full.forest
                .endpoints(e)
                .iter()
                .all(|&x| !full.forest.label(x).starts_with('g'))
        })
        .collect();
    let (sub, map) = full.forest.edge_subforest(&keep);
    let find = |v: VertexId| sub.vertex(full.forest.label(v)).expect("kept vertex");
    let pos = |e: EdgeId| map.iter().position(|&x| x == e).expect("kept edge");
    let edges = ElementEdges {
        i,
        u: find(full.edges.u),
        v: find(full.edges.v),
        r_u: pos(full.edges.r_u),
        u_v: pos(full.edges.u_v),
        r_u_prime: pos(full.edges.r_u_prime),
        v_v_prime: pos(full.edges.v_v_prime),
    };
    Ok(ElementGadget {
        r: find(full.r),
        forest: sub,
        edges,
        attach: Vec::new(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ComponentKind {
    Main,
    Tbar {
        j: usize,
        offset: i32,
        d: Level,
        copy: usize,
    },
    /// The root `q` added by [`forest_to_tree`].
    Lift,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub root: VertexId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PathHost {
    /// Gadget `G_φ(j)` of element `i`.
    Main {
        i: usize,
    },
    Tbar {
        component: usize,
    },
}

/// A symbolic path of `2^M` vertices hanging at `attach`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PathSlot {
    pub attach: VertexId,
    pub j: usize,
    pub host: PathHost,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeLift {
    pub q: VertexId,
    /// `links[s - 1]` joins `q` to the root of component `s`.
    pub links: Vec<EdgeId>,
    pub star_centers: Vec<VertexId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeClass {
    /// Gadget edges, counted by `m̄`.
    W,
    Path,
    Lift,
}

/// Generated instance: skeleton forest plus symbolic paths.
#[derive(Clone, Debug)]
pub struct BtdInstance {
    pub mhs: MhsInstance,
    pub params: GadgetParams,
    /// Skeleton without the attached paths.
    pub forest: Forest,
    pub k: Level,
    pub b: usize,
    pub components: Vec<Component>,
    pub elements: Vec<ElementEdges>,
    pub paths: Vec<PathSlot>,
    pub lift: Option<TreeLift>,
    roles: Vec<Role>,
}

pub fn mhs_to_btd(inst: &MhsInstance) -> Result<BtdInstance> {
    mhs_to_btd_with(inst, compute_params(inst))
}

pub fn mhs_to_btd_with(inst: &MhsInstance, params: GadgetParams) -> Result<BtdInstance> {
    let mut forest = Forest::new();
    let mut roles = Vec::new();
    let mut components = Vec::new();
    let mut elements = Vec::new();
    let mut paths = Vec::new();
    {
        let mut bld = Builder {
            f: &mut forest,
            roles: &mut roles,
        };
        let r = bld.vertex("r".into());
        components.push(Component {
            kind: ComponentKind::Main,
            root: r,
        });
        for i in 1..=inst.n {
            let (edges, attach) = bld.element(inst, &params, i, r);
            elements.push(edges);
            paths.extend(attach.into_iter().map(|(j, at)| PathSlot {
                attach: at,
                j,
                host: PathHost::Main { i },
            }));
        }
        for x in 0..params.k as usize - 2 * inst.n - inst.t {
            let l = bld.vertex(format!("r.{}", x + 1));
            bld.edge(r, l, Role::RootPendant(x));
        }
        for g in &params.tbar {
            for copy in 0..g.copies {
                let c = components.len();
                let root = bld.tbar(&format!("t{c}."), g.d, params.k);
                components.push(Component {
                    kind: ComponentKind::Tbar {
                        j: g.j,
                        offset: g.offset,
                        d: g.d,
                        copy,
                    },
                    root,
                });
                paths.push(PathSlot {
                    attach: root,
                    j: g.j,
                    host: PathHost::Tbar { component: c },
                });
            }
        }
    }
    if forest.edge_count() != params.m_bar {
        return Err(Error::Invariant(format!(
            "built {} gadget edges, counted {}",
            forest.edge_count(),
            params.m_bar
        )));
    }
    Ok(BtdInstance {
        mhs: inst.clone(),
        k: params.k,
        b: params.b,
        params,
        forest,
        components,
        elements,
        paths,
        lift: None,
        roles,
    })
}

/// Paths the construction should carry: one per (set, member) plus one
/// per padding component.
pub fn expected_path_count(inst: &MhsInstance, params: &GadgetParams) -> usize {
    inst.sets.iter().map(Vec::len).sum::<usize>()
        + params.tbar.iter().map(|g| g.copies).sum::<usize>()
}

/// The instance with every path expanded.
#[derive(Clone, Debug)]
pub struct Materialized {
    pub forest: Forest,
    /// Per slot, path edges walked from the attachment vertex.
    pub path_edges: Vec<Vec<EdgeId>>,
}

impl Materialized {
    /// Highest edge of path `slot` under `ef`.
    pub fn root_edge(&self, slot: usize, ef: &EliminationForest) -> EdgeId {
        *self.path_edges[slot]
            .iter()
            .max_by_key(|&&e| ef.level(e))
            .expect("paths are non-empty")
    }
}

impl BtdInstance {
    pub fn edge_class(&self, e: EdgeId) -> EdgeClass {
        if e >= self.roles.len() {
            EdgeClass::Path
        } else if matches!(self.roles[e], Role::Lift(_)) {
            EdgeClass::Lift
        } else {
            EdgeClass::W
        }
    }

    /// Gadget edges in the skeleton, recounted.
    pub fn w_edges(&self) -> usize {
        (0..self.forest.edge_count())
            .filter(|&e| self.edge_class(e) == EdgeClass::W)
            .count()
    }

    pub fn total_edges(&self) -> u128 {
        self.forest.edge_count() as u128
            + self.paths.len() as u128 * self.params.path_edges() as u128
    }

    pub fn materialize(&self) -> Result<Materialized> {
        let total = self.total_edges();
        if total > MATERIALIZE_LIMIT as u128 {
            return Err(Error::InvalidSize(format!(
                "{total} edges exceed the materialisation limit of {MATERIALIZE_LIMIT}; use a smaller M"
            )));
        }
        let mut forest = self.forest.clone();
        let mut path_edges = Vec::with_capacity(self.paths.len());
        for (idx, slot) in self.paths.iter().enumerate() {
            path_edges.push(attach_path(
                &mut forest,
                slot.attach,
                self.params.big_m,
                &format!("P{idx}"),
            )?);
        }
        Ok(Materialized { forest, path_edges })
    }

    /// Copies of `T̄_d` per `d`, ascending.
    pub fn tbar_multiset(&self) -> Vec<(Level, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for c in &self.components {
            if let ComponentKind::Tbar { d, .. } = c.kind {
                *counts.entry(d).or_insert(0) += 1;
            }
        }
        counts.into_iter().collect()
    }

    /// Sidecar describing parameters and edge annotations.
    pub fn sidecar(&self) -> Value {
        let f = &self.forest;
        let label = |v: VertexId| f.label(v).to_string();
        json!({
            "k": self.k,
            "b": self.b,
            "mhs": self.mhs.to_json(),
            "params": self.params,
            "skeleton_edges": f.edge_count(),
            "w_edges": self.w_edges(),
            "path_vertices": self.params.path_vertices(),
            "total_edges": self.total_edges().to_string(),
            "tbar_multiset": self.tbar_multiset().into_iter().map(|(d, c)| json!({ "d": d, "copies": c })).collect::<Vec<_>>(),
            "components": self.components.iter().map(|c| {
                let mut v = serde_json::to_value(c.kind).expect("plain data");
                v["root"] = json!(label(c.root));
                v
            }).collect::<Vec<_>>(),
            "elements": self.elements.iter().map(|e| json!({
                "i": e.i,
                "u": label(e.u),
                "v": label(e.v),
                "r_u": e.r_u,
                "u_v": e.u_v,
                "r_u_prime": e.r_u_prime,
                "v_v_prime": e.v_v_prime,
            })).collect::<Vec<_>>(),
            "paths": self.paths.iter().map(|p| {
                let mut v = serde_json::to_value(p.host).expect("plain data");
                v["attach"] = json!(label(p.attach));
                v["set"] = json!(p.j);
                v
            }).collect::<Vec<_>>(),
            "lift": self.lift.as_ref().map(|l| json!({
                "q": label(l.q),
                "links": l.links,
                "star_centers": l.star_centers.len(),
            })),
        })
    }
}

/// Joins the components into one tree under a new root `q`: `k` pendant
/// edges at `q`, a link to every component root, and at the root of the
/// `s`-th component stars with `k + 1, .., k + s - 1` edges, one leaf of
/// each identified with that root.
pub fn forest_to_tree(inst: &BtdInstance) -> Result<BtdInstance> {
    if inst.lift.is_some() {
        return Err(Error::Precondition("instance is already a tree".into()));
    }
    let p = inst.components.len();
    let k = inst.k;
    let mut out = inst.clone();
    let mut bld = Builder {
        f: &mut out.forest,
        roles: &mut out.roles,
    };
    let q = bld.vertex("q".into());
    for x in 1..=k {
        let l = bld.vertex(format!("q.{x}"));
        bld.edge(q, l, Role::Lift(x));
    }
    let mut links = Vec::with_capacity(p);
    let mut star_centers = vec![q];
    for (s0, c) in inst.components.iter().enumerate() {
        let s = s0 as Level + 1;
        links.push(bld.edge(q, c.root, Role::Lift(k + s)));
        for x in 1..s {
            let center = bld.vertex(format!("c{s}.{x}"));
            bld.edge(center, c.root, Role::Lift(k + x));
            for y in 1..k + x {
                let l = bld.vertex(format!("c{s}.{x}.{y}"));
                bld.edge(center, l, Role::Lift(y));
            }
            star_centers.push(center);
        }
    }
    out.components.push(Component {
        kind: ComponentKind::Lift,
        root: q,
    });
    out.k = k + p as Level;
    out.b = inst.b + p * (p - 1) / 2 + 1;
    out.lift = Some(TreeLift {
        q,
        links,
        star_centers,
    });
    Ok(out)
}

/// Elements picked by a ranking: `a_i` is in when `{u_i, v_i}` sits on
/// level `k - 2i + 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub set: Vec<usize>,
    pub within_budget: bool,
    pub hits_all: bool,
}

pub fn extract_hitting_set(
    inst: &BtdInstance,
    mat: &Materialized,
    ef: &EliminationForest,
) -> Result<Extraction> {
    if ef.len() != mat.forest.edge_count() {
        return Err(Error::Precondition(format!(
            "elimination forest has {} edges, instance has {}",
            ef.len(),
            mat.forest.edge_count()
        )));
    }
    if ef.height() > inst.k {
        return Err(Error::Precondition(format!(
            "height {} exceeds k = {}",
            ef.height(),
            inst.k
        )));
    }
    if ef.width() > inst.b {
        return Err(Error::Precondition(format!(
            "width {} exceeds b = {}",
            ef.width(),
            inst.b
        )));
    }
    let set = pick_elements(inst, ef.levels());
    Ok(Extraction {
        within_budget: set.len() <= inst.mhs.t,
        hits_all: inst.mhs.is_hitting_set(&set),
        set,
    })
}

fn pick_elements(inst: &BtdInstance, levels: &[Level]) -> Vec<usize> {
    let k = inst.params.k;
    inst.elements
        .iter()
        .filter(|e| levels[e.u_v] == k - 2 * e.i as Level + 2)
        .map(|e| e.i)
        .collect()
}

/// Level of a `G_α` edge with the element in (`picked`) or out.
fn gadget_level(alpha: Level, part: Part, picked: bool) -> Level {
    match (part, picked) {
        (Part::W1W1p, _) => alpha + 2,
        (Part::W1W3, true) => alpha + 1,
        (Part::W1W3, false) => alpha + 3,
        (Part::W3W2, true) => alpha + 3,
        (Part::W3W2, false) => alpha + 2,
        (Part::W3W3p, _) => alpha,
        (Part::W2W2p, true) => alpha + 2,
        (Part::W2W2p, false) => alpha + 1,
        (Part::W2Leaf(x), true) => x + 1,
        (Part::W2Leaf(x), false) => x,
    }
}

/// Builds a ranking of height at most `k` and width at most `b` from a
/// hitting set of size at most `t`.
pub fn certify_hitting_set(
    inst: &BtdInstance,
    mat: &Materialized,
    chosen: &[usize],
) -> Result<EliminationForest> {
    let mhs = &inst.mhs;
    let mut chosen: Vec<usize> = chosen.to_vec();
    chosen.sort_unstable();
    chosen.dedup();
    if chosen.iter().any(|&i| i == 0 || i > mhs.n) {
        return Err(Error::Precondition(
            "hitting set has elements outside the universe".into(),
        ));
    }
    if !mhs.is_hitting_set(&chosen) {
        return Err(Error::Precondition("not a hitting set".into()));
    }
    if chosen.len() > mhs.t {
        return Err(Error::Precondition(format!(
            "{} elements exceed the budget {}",
            chosen.len(),
            mhs.t
        )));
    }
    let p = &inst.params;
    let k = p.k;
    let top_free = k - 2 * mhs.n as Level;
    let picked = |i: usize| chosen.binary_search(&i).is_ok();
    // Picked elements take the highest levels of 1..=k-2n for {r, u_i};
    // the pendants at r fill the rest from the bottom.
    let q_level: Vec<Option<Level>> = (0..=mhs.n)
        .map(|i| {
            chosen
                .iter()
                .position(|&c| c == i)
                .map(|pos| top_free - pos as Level)
        })
        .collect();
    let free: Vec<Level> = (1..=top_free)
        .filter(|l| !q_level.contains(&Some(*l)))
        .collect();

    let mut levels = vec![0; mat.forest.edge_count()];
    for (e, role) in inst.roles.iter().enumerate() {
        levels[e] = match *role {
            Role::Fixed(l) | Role::Lift(l) => l,
            Role::Gadget { i, alpha, part } => gadget_level(alpha, part, picked(i)),
            Role::RootU(i) => q_level[i].unwrap_or(k - 2 * i as Level + 2),
            Role::UV(i) => {
                if picked(i) {
                    k - 2 * i as Level + 2
                } else {
                    1
                }
            }
            Role::RootPendant(x) => *free.get(x).ok_or_else(|| {
                Error::CertificationIncomplete(format!("no free level left for pendant {x} at r"))
            })?,
        };
    }
    // One path per set goes up to φ(j): the one at the smallest picked
    // member. Other main paths stop at φ(j) - 1.
    let lifted: Vec<usize> = (1..=mhs.m())
        .map(|j| {
            *mhs.sets[j - 1]
                .iter()
                .find(|&&i| picked(i))
                .expect("hitting set")
        })
        .collect();
    for (slot, path) in inst.paths.iter().zip(&mat.path_edges) {
        let root = match slot.host {
            PathHost::Main { i } if lifted[slot.j - 1] == i => p.phi(slot.j),
            PathHost::Main { .. } => p.phi(slot.j) - 1,
            PathHost::Tbar { component } => match inst.components[component].kind {
                ComponentKind::Tbar { d, .. } => d,
                _ => {
                    return Err(Error::Invariant(
                        "path host is not a padding component".into(),
                    ))
                }
            },
        };
        for (idx, &e) in path.iter().enumerate() {
            levels[e] = path_level(idx, root, p.big_m);
        }
    }
    let ef = EliminationForest::from_levels(&mat.forest, levels).map_err(|err| match err {
        Error::InvalidRanking(v) => Error::CertificationIncomplete(format!(
            "assembled levels are not a ranking: {}",
            Error::InvalidRanking(v)
        )),
        other => other,
    })?;
    if ef.height() > inst.k {
        return Err(Error::CertificationIncomplete(format!(
            "height {} exceeds k = {}",
            ef.height(),
            inst.k
        )));
    }
    if ef.width() > inst.b {
        return Err(Error::CertificationIncomplete(format!(
            "width {} exceeds b = {}",
            ef.width(),
            inst.b
        )));
    }
    Ok(ef)
}
