//! Structure of `H + C`.
//!
//! Contracting every component of `H` to a node turns each component `K`
//! of `H + C` into an isolated node, an edge or a star. The star's center is
//! the center element `K_c`, the leaves are satellite elements, each hanging
//! off one anchor of `K_c` by its rescue-edge. On top of that structure this
//! module computes `s(K)`, an exact `opt(K)`, and the critical and
//! responsible flags, all by direct computation.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::exact::{exact_opt, ExactConfig};
use crate::graph::{Edge, EdgeSet, Graph, Vertex};
use crate::phase1::{HKind, HStructure, Workspace};
use crate::ratio::is_critical_ratio;
use crate::solution::{Path, Solution};

/// `H` with its components and per-component edges. Fixed while `C` moves.
#[derive(Clone, Debug)]
pub struct Frame<'g> {
    pub g: &'g Graph,
    pub hs: HStructure,
    h_edges_of: Vec<Vec<Edge>>,
    matching_size: usize,
}

impl<'g> Frame<'g> {
    pub fn new(ws: &Workspace<'g>, hs: HStructure) -> Self {
        let mut h_edges_of = vec![Vec::new(); hs.comps.len()];
        for e in ws.h_edges().sorted() {
            let c = hs.comp_of[e.u()].expect("H edge inside a component");
            h_edges_of[c].push(e);
        }
        Frame {
            g: ws.graph(),
            hs,
            h_edges_of,
            matching_size: ws.matching().len(),
        }
    }

    pub fn h_edges_of(&self, hcomp: usize) -> &[Edge] {
        &self.h_edges_of[hcomp]
    }

    pub fn matching_size(&self) -> usize {
        self.matching_size
    }

    /// `|V(M) ∩ V(B)|` for a component `B` of `H`.
    pub fn matched_in(&self, hcomp: usize) -> usize {
        2 * self.hs.comps[hcomp].m_edges.len()
    }

    /// Longest path inside the component of `H` holding `x`, starting at `x`.
    pub fn longest_from(&self, x: Vertex) -> Vec<Vertex> {
        let c = &self.hs.comps[self.hs.comp_of[x].expect("x in H")];
        match c.kind {
            HKind::Edge => vec![x, *c.vertices.iter().find(|&&w| w != x).expect("two ends")],
            HKind::Triangle => {
                let mut p = vec![x];
                p.extend(c.vertices.iter().copied().filter(|&w| w != x));
                p
            }
            HKind::Star { center } if x == center => {
                vec![x, *c.vertices.iter().find(|&&w| w != center).expect("leaf")]
            }
            HKind::Star { center } => {
                vec![
                    x,
                    center,
                    *c.vertices
                        .iter()
                        .find(|&&w| w != center && w != x)
                        .expect("second leaf"),
                ]
            }
            HKind::FivePath => {
                let i = c.order.iter().position(|&w| w == x).expect("on path");
                if i >= 2 {
                    c.order[..=i].iter().rev().copied().collect()
                } else {
                    c.order[i..].to_vec()
                }
            }
        }
    }
}

/// Vertex bound after pendant pruning, by center kind.
pub fn pruned_bound(kind: HKind) -> usize {
    match kind {
        HKind::FivePath => 35,
        HKind::Edge => 10,
        HKind::Star { .. } => 6,
        HKind::Triangle => usize::MAX,
    }
}

/// Keeps one pendant vertex per neighbor. Paths use at most one pendant of
/// any vertex (two would close a useless 3-path), and pendants of the same
/// vertex are interchangeable, so the optimum is unchanged.
pub fn prune_pendants(edges: &[Edge]) -> Vec<Edge> {
    let mut deg: HashMap<Vertex, usize> = HashMap::new();
    for e in edges {
        *deg.entry(e.u()).or_default() += 1;
        *deg.entry(e.v()).or_default() += 1;
    }
    let mut kept: HashMap<Vertex, Vertex> = HashMap::new();
    let pendant_of = |e: &Edge| -> Option<(Vertex, Vertex)> {
        let (a, b) = e.ends();
        match (deg[&a], deg[&b]) {
            (1, 1) => None,
            (_, 1) => Some((a, b)),
            (1, _) => Some((b, a)),
            _ => None,
        }
    };
    let mut sorted = edges.to_vec();
    sorted.sort();
    for e in &sorted {
        if let Some((hub, leaf)) = pendant_of(e) {
            kept.entry(hub).or_insert(leaf);
        }
    }
    sorted
        .into_iter()
        .filter(|e| match pendant_of(e) {
            Some((hub, leaf)) => kept[&hub] == leaf,
            None => true,
        })
        .collect()
}

/// Exact optima of small edge sets, keyed by the pruned edge list.
#[derive(Debug, Default)]
pub struct OptCache {
    map: HashMap<Vec<Edge>, Solution>,
}

impl OptCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Optimal solution over the graph formed by `edges`, and the number of
    /// vertices left after pendant pruning.
    pub fn solve(&mut self, edges: &[Edge]) -> (Solution, usize) {
        let pruned = prune_pendants(edges);
        let verts: BTreeSet<Vertex> = pruned.iter().flat_map(|e| [e.u(), e.v()]).collect();
        let size = verts.len();
        if let Some(s) = self.map.get(&pruned) {
            return (s.clone(), size);
        }
        let verts: Vec<Vertex> = verts.into_iter().collect();
        let pos: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let local = Graph::from_edges(size, pruned.iter().map(|e| (pos[&e.u()], pos[&e.v()])))
            .expect("simple edge set");
        let out = exact_opt(&local, &ExactConfig::with_cap(usize::MAX))
            .unwrap_or_else(|e| panic!("component too large for exact search: {e}"));
        assert!(out.exact, "unbounded search is exact");
        let sol = out.solution.mapped(|i| verts[i]);
        self.map.insert(pruned, sol.clone());
        (sol, size)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Satellite {
    /// Component of `H`.
    pub hcomp: usize,
    /// Supporting anchor in the center element.
    pub anchor: Vertex,
    /// Endpoint of the rescue-edge inside the satellite.
    pub attach: Vertex,
}

impl Satellite {
    pub fn rescue_edge(&self) -> Edge {
        Edge::new(self.anchor, self.attach)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Anchor {
    pub vertex: Vertex,
    /// Number of satellites it supports.
    pub j: usize,
}

/// One component `K` of `H + C` that is not an isolated bad component.
#[derive(Clone, Debug)]
pub struct ComponentInfo {
    /// Sorted `V(K)`.
    pub vertices: Vec<Vertex>,
    /// Component of `H` serving as `K_c`.
    pub center: usize,
    pub center_kind: HKind,
    /// Sorted by component id.
    pub satellites: Vec<Satellite>,
    /// In path order for a 5-path, sorted otherwise.
    pub anchors: Vec<Anchor>,
    /// Sorted `E(K)`: the `H` and `C` edges inside `K`.
    pub edges: Vec<Edge>,
    pub s: usize,
    pub opt: usize,
    pub opt_solution: Solution,
    pub pruned_size: usize,
    /// `11 s >= 14 opt`.
    pub crit0: bool,
    /// Responsible 1-anchors of `K`, sorted.
    pub responsible_anchors: Vec<Vertex>,
    /// Better solution over `G[V(K)]` for a component that is both critical
    /// and responsible.
    pub rescue_solution: Option<Solution>,
    /// Was at 14/11 and responsible, and got `rescue_solution` computed.
    pub settled: bool,
    /// Critical after components that are critical and responsible have
    /// been settled by their rescue solution.
    pub critical: bool,
}

impl ComponentInfo {
    pub fn is_isolated(&self) -> bool {
        self.satellites.is_empty()
    }

    pub fn is_responsible(&self) -> bool {
        !self.responsible_anchors.is_empty()
    }

    /// The solution this component contributes.
    pub fn solution(&self) -> &Solution {
        self.rescue_solution.as_ref().unwrap_or(&self.opt_solution)
    }

    pub fn value(&self) -> usize {
        self.solution().value()
    }

    pub fn anchor_degree(&self, v: Vertex) -> Option<usize> {
        self.anchors.iter().find(|a| a.vertex == v).map(|a| a.j)
    }

    pub fn satellites_of(&self, anchor: Vertex) -> impl Iterator<Item = &Satellite> + '_ {
        self.satellites.iter().filter(move |s| s.anchor == anchor)
    }

    pub fn two_anchors(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.anchors.iter().filter(|a| a.j == 2).map(|a| a.vertex)
    }
}

/// What a component of `H` is inside `H + C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Center(usize),
    Satellite { comp: usize, index: usize },
    IsolatedBad,
}

/// Where a vertex sits inside `H + C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    /// Not in `V(H)`.
    Outside,
    IsolatedBad(usize),
    Anchor { comp: usize, j: usize },
    /// A leaf of a star center.
    CenterLeaf { comp: usize },
    Satellite { comp: usize, index: usize },
}

/// The counts behind the rescue-loop potential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Potential {
    pub n0: usize,
    pub ncc: usize,
    pub nc: usize,
}

impl Potential {
    /// `n0 + ncc - 3 nc`. An Op2 whose target satellite hangs off a star
    /// center adds a 0-anchor while removing a critical component, which
    /// leaves this unchanged.
    pub fn value(&self) -> i64 {
        self.n0 as i64 + self.ncc as i64 - 3 * self.nc as i64
    }

    /// `n0 + 2 ncc - 3 nc`, which every move lowers: Op1 takes one off `n0`
    /// or `ncc` without raising the other, Op2 trades at most one new
    /// 0-anchor for a critical component, and Op3 adds a component and at
    /// most two 0-anchors. It lies in `[-3n/2, 2n]`, so there are at most
    /// `7n/2` moves.
    pub fn weighted(&self) -> i64 {
        self.n0 as i64 + 2 * self.ncc as i64 - 3 * self.nc as i64
    }
}

/// Census of `𝒦` by the number of vertices of `R` each component holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    /// `k[i] = |𝒦_i|` for `i = 0..=5`; larger counts are clamped to 5 and
    /// reported as audit failures.
    pub k: [usize; 6],
    pub k1c: usize,
    pub k2c: usize,
    /// `Σ i |𝒦_i| = |R|`.
    pub a: usize,
    /// `|𝒦_{1,c}| + 2 |𝒦_{2,c}|`.
    pub b: usize,
}

/// Everything derived from `H` and one cover `C`.
#[derive(Clone, Debug)]
pub struct Analysis {
    /// Components in `𝒦`, ordered by smallest vertex.
    pub comps: Vec<ComponentInfo>,
    pub role: Vec<Role>,
    /// Anchor degree of every anchor vertex.
    pub anchor_j: Vec<Option<usize>>,
    /// Number of components of `H + C` inside `V(H)`.
    pub nc: usize,
    /// Structural checks that failed; empty on a sound run.
    pub audits: Vec<String>,
}

impl Analysis {
    pub fn locate(&self, frame: &Frame<'_>, v: Vertex) -> Location {
        let Some(h) = frame.hs.comp_of[v] else {
            return Location::Outside;
        };
        match self.role[h] {
            Role::IsolatedBad => Location::IsolatedBad(h),
            Role::Satellite { comp, index } => Location::Satellite { comp, index },
            Role::Center(comp) => match self.anchor_j[v] {
                Some(j) => Location::Anchor { comp, j },
                None => Location::CenterLeaf { comp },
            },
        }
    }

    pub fn comp_of_vertex(&self, frame: &Frame<'_>, v: Vertex) -> Option<usize> {
        match self.locate(frame, v) {
            Location::Anchor { comp, .. }
            | Location::CenterLeaf { comp }
            | Location::Satellite { comp, .. } => Some(comp),
            _ => None,
        }
    }

    /// Which components of `H` act as centers, for keeping the choice
    /// stable when a contracted edge joins two bad components.
    pub fn center_hints(&self) -> Vec<bool> {
        self.role.iter().map(|r| matches!(r, Role::Center(_))).collect()
    }

    pub fn critical_count(&self) -> usize {
        self.comps.iter().filter(|k| k.critical).count()
    }

    pub fn potential(&self) -> Potential {
        let n0 = self
            .comps
            .iter()
            .flat_map(|k| &k.anchors)
            .filter(|a| a.j == 0)
            .count();
        Potential {
            n0,
            ncc: self.critical_count(),
            nc: self.nc,
        }
    }

    /// Satellites supported by a 2-anchor of a critical component.
    pub fn critical_satellites(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ci, k) in self.comps.iter().enumerate() {
            if !k.critical {
                continue;
            }
            for (si, s) in k.satellites.iter().enumerate() {
                if k.anchor_degree(s.anchor) == Some(2) {
                    out.push((ci, si));
                }
            }
        }
        out
    }

    /// `R`: 2-anchors and responsible 1-anchors.
    pub fn r_set(&self) -> BTreeSet<Vertex> {
        let mut r = BTreeSet::new();
        for k in &self.comps {
            r.extend(k.two_anchors());
            r.extend(k.responsible_anchors.iter().copied());
        }
        r
    }

    /// `R_c`: 2-anchors of critical components.
    pub fn r_c(&self) -> BTreeSet<Vertex> {
        self.comps
            .iter()
            .filter(|k| k.critical)
            .flat_map(|k| k.two_anchors())
            .collect()
    }

    /// `U_c`: vertices of the satellites supported by `R_c`.
    pub fn u_c(&self, frame: &Frame<'_>) -> BTreeSet<Vertex> {
        self.critical_satellites()
            .into_iter()
            .flat_map(|(ci, si)| frame.hs.comps[self.comps[ci].satellites[si].hcomp].vertices.iter().copied())
            .collect()
    }

    pub fn census(&self) -> Census {
        let r = self.r_set();
        let mut c = Census::default();
        for k in &self.comps {
            let i = k.vertices.iter().filter(|v| r.contains(v)).count();
            c.k[i.min(5)] += 1;
            c.a += i;
            if k.critical {
                match i {
                    1 => c.k1c += 1,
                    2 => c.k2c += 1,
                    _ => {}
                }
            }
        }
        c.b = c.k1c + 2 * c.k2c;
        c
    }

    /// `Q_v`: `v` followed by its longest run into one of its satellites.
    pub fn q_path(&self, frame: &Frame<'_>, comp: usize, v: Vertex) -> Vec<Vertex> {
        let k = &self.comps[comp];
        let mut best = vec![v];
        for s in k.satellites_of(v) {
            let mut p = vec![v];
            p.extend(frame.longest_from(s.attach));
            if p.len() > best.len() {
                best = p;
            }
        }
        best
    }

    /// `P_v` for a 2-anchor: the longest path through both rescue-edges.
    pub fn p_path(&self, frame: &Frame<'_>, comp: usize, v: Vertex) -> Path {
        let k = &self.comps[comp];
        let sats: Vec<&Satellite> = k.satellites_of(v).collect();
        assert_eq!(sats.len(), 2, "P_v needs a 2-anchor");
        let mut p: Vec<Vertex> = frame.longest_from(sats[0].attach).into_iter().rev().collect();
        p.push(v);
        p.extend(frame.longest_from(sats[1].attach));
        Path::new(p)
    }

    pub fn summaries(&self, frame: &Frame<'_>) -> Vec<ComponentSummary> {
        let r = self.r_set();
        self.comps
            .iter()
            .map(|k| ComponentSummary {
                vertices: k.vertices.clone(),
                center_kind: frame.hs.comps[k.center].kind.to_string(),
                center: frame.hs.comps[k.center].order.clone(),
                satellites: k
                    .satellites
                    .iter()
                    .map(|s| SatelliteSummary {
                        kind: frame.hs.comps[s.hcomp].kind.to_string(),
                        vertices: frame.hs.comps[s.hcomp].vertices.clone(),
                        anchor: s.anchor,
                        attach: s.attach,
                    })
                    .collect(),
                anchors: k.anchors.clone(),
                in_r: k.vertices.iter().filter(|v| r.contains(v)).count(),
                s: k.s,
                opt: k.opt,
                value: k.value(),
                crit0: k.crit0,
                responsible: k.is_responsible(),
                critical: k.critical,
            })
            .collect()
    }
}

/// Serializable view of one component for the census dump.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentSummary {
    pub vertices: Vec<Vertex>,
    pub center_kind: String,
    pub center: Vec<Vertex>,
    pub satellites: Vec<SatelliteSummary>,
    pub anchors: Vec<Anchor>,
    pub in_r: usize,
    pub s: usize,
    pub opt: usize,
    pub value: usize,
    pub crit0: bool,
    pub responsible: bool,
    pub critical: bool,
}

impl ComponentSummary {
    /// The same summary with every vertex id passed through `f`.
    pub fn relabeled(&self, f: impl Fn(Vertex) -> Vertex) -> Self {
        let f = &f;
        ComponentSummary {
            vertices: self.vertices.iter().map(|&v| f(v)).collect(),
            center: self.center.iter().map(|&v| f(v)).collect(),
            satellites: self
                .satellites
                .iter()
                .map(|s| SatelliteSummary {
                    kind: s.kind.clone(),
                    vertices: s.vertices.iter().map(|&v| f(v)).collect(),
                    anchor: f(s.anchor),
                    attach: f(s.attach),
                })
                .collect(),
            anchors: self
                .anchors
                .iter()
                .map(|a| Anchor {
                    vertex: f(a.vertex),
                    j: a.j,
                })
                .collect(),
            center_kind: self.center_kind.clone(),
            ..*self
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SatelliteSummary {
    pub kind: String,
    pub vertices: Vec<Vertex>,
    pub anchor: Vertex,
    pub attach: Vertex,
}

/// Analyzes `H + C`. `hints[h]` marks components of `H` that were centers
/// before; it only matters for a contracted edge between two bad components.
pub fn analyze(frame: &Frame<'_>, cover: &EdgeSet, hints: &[bool], cache: &mut OptCache) -> Analysis {
    let hs = &frame.hs;
    let nh = hs.comps.len();
    let mut audits = Vec::new();
    let mut cadj: Vec<Vec<(usize, Edge)>> = vec![Vec::new(); nh];
    for e in cover.sorted() {
        let (a, b) = e.ends();
        let (Some(ca), Some(cb)) = (hs.comp_of[a], hs.comp_of[b]) else {
            panic!("cover edge {e} leaves V(H)");
        };
        assert_ne!(ca, cb, "cover edge {e} inside one component of H");
        if !hs.comps[ca].is_bad() && !hs.comps[cb].is_bad() {
            audits.push(format!("cover edge {e} joins two 5-paths"));
        }
        cadj[ca].push((cb, e));
        cadj[cb].push((ca, e));
    }

    let mut role = vec![Role::IsolatedBad; nh];
    let mut anchor_j = vec![None; frame.g.n()];
    let mut comps = Vec::new();
    let mut seen = vec![false; nh];
    let mut nc = 0;
    for start in 0..nh {
        if seen[start] {
            continue;
        }
        nc += 1;
        let mut group = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < group.len() {
            for &(w, _) in &cadj[group[i]] {
                if !seen[w] {
                    seen[w] = true;
                    group.push(w);
                }
            }
            i += 1;
        }
        group.sort_unstable();
        if group.len() == 1 && hs.comps[start].is_bad() {
            continue;
        }
        let info = build_component(frame, &group, &cadj, hints, cache, &mut audits);
        comps.push(info);
    }
    comps.sort_by_key(|k| k.vertices[0]);
    for (ci, k) in comps.iter().enumerate() {
        role[k.center] = Role::Center(ci);
        for (si, s) in k.satellites.iter().enumerate() {
            role[s.hcomp] = Role::Satellite { comp: ci, index: si };
        }
        for a in &k.anchors {
            anchor_j[a.vertex] = Some(a.j);
        }
    }
    let mut an = Analysis {
        comps,
        role,
        anchor_j,
        nc,
        audits,
    };
    // Settling uses the satellites of every component at 14/11; the final
    // responsible anchors only look at satellites still critical after it.
    classify_responsible(frame, &mut an, cache, |k| k.crit0);
    settle_critical_and_responsible(frame, &mut an, cache);
    classify_responsible(frame, &mut an, cache, |k| k.critical);
    an
}

fn build_component(
    frame: &Frame<'_>,
    group: &[usize],
    cadj: &[Vec<(usize, Edge)>],
    hints: &[bool],
    cache: &mut OptCache,
    audits: &mut Vec<String>,
) -> ComponentInfo {
    let hs = &frame.hs;
    let cover_edges: BTreeSet<Edge> = group
        .iter()
        .flat_map(|&h| cadj[h].iter().map(|&(_, e)| e))
        .collect();
    let center = if group.len() == 1 {
        group[0]
    } else {
        pick_center(frame, group, cadj, hints, cover_edges.len())
    };
    let center_comp = &hs.comps[center];
    let kind = center_comp.kind;
    if kind == HKind::Triangle {
        audits.push(format!("triangle {:?} is a center element", center_comp.vertices));
    }
    let mut satellites = Vec::new();
    for &h in group {
        if h == center {
            continue;
        }
        let links: Vec<Edge> = cadj[h].iter().filter(|&&(w, _)| w == center).map(|&(_, e)| e).collect();
        assert_eq!(links.len(), 1, "satellite {h} must have exactly one rescue-edge");
        let e = links[0];
        let (anchor, attach) = if hs.comp_of[e.u()] == Some(center) {
            (e.u(), e.v())
        } else {
            (e.v(), e.u())
        };
        let sat = &hs.comps[h];
        if !sat.is_bad() {
            audits.push(format!("5-path {:?} is a satellite", sat.order));
        }
        if let HKind::Star { center: c } = kind {
            if anchor != c {
                audits.push(format!("satellite {:?} hangs off star leaf {anchor}", sat.vertices));
            }
        }
        if sat.kind == HKind::Triangle
            && !(kind == HKind::FivePath && (anchor == center_comp.order[1] || anchor == center_comp.order[3]))
        {
            audits.push(format!(
                "triangle satellite {:?} is not on a non-middle internal 5-path vertex",
                sat.vertices
            ));
        }
        satellites.push(Satellite {
            hcomp: h,
            anchor,
            attach,
        });
    }
    let anchor_vertices: Vec<Vertex> = match kind {
        HKind::FivePath => center_comp.order.clone(),
        HKind::Star { center: c } => vec![c],
        _ => center_comp.vertices.clone(),
    };
    let anchors: Vec<Anchor> = anchor_vertices
        .iter()
        .map(|&v| Anchor {
            vertex: v,
            j: satellites.iter().filter(|s| s.anchor == v).count(),
        })
        .collect();
    for a in &anchors {
        if a.j > 2 {
            audits.push(format!("anchor {} supports {} satellites", a.vertex, a.j));
        }
    }
    let mut vertices: Vec<Vertex> = group.iter().flat_map(|&h| hs.comps[h].vertices.iter().copied()).collect();
    vertices.sort_unstable();
    let mut edges: Vec<Edge> = group
        .iter()
        .flat_map(|&h| frame.h_edges_of(h).iter().copied())
        .chain(cover_edges.iter().copied())
        .collect();
    edges.sort_unstable();
    let s = group.iter().map(|&h| frame.matched_in(h)).sum();
    let (opt_solution, pruned_size) = if edges.is_empty() {
        (Solution::empty(), 0)
    } else {
        cache.solve(&edges)
    };
    if pruned_size > pruned_bound(kind) {
        audits.push(format!(
            "pruned component around {} center has {pruned_size} vertices, above {}",
            kind,
            pruned_bound(kind)
        ));
    }
    let opt = opt_solution.value();
    ComponentInfo {
        vertices,
        center,
        center_kind: kind,
        satellites,
        anchors,
        edges,
        s,
        opt,
        opt_solution,
        pruned_size,
        crit0: is_critical_ratio(s, opt),
        responsible_anchors: Vec::new(),
        rescue_solution: None,
        settled: false,
        critical: false,
    }
}

// The contracted component must be a star; for an edge the bad endpoint is
// the satellite, and between two bad endpoints the previous center stays.
fn pick_center(frame: &Frame<'_>, group: &[usize], cadj: &[Vec<(usize, Edge)>], hints: &[bool], m: usize) -> usize {
    let hs = &frame.hs;
    let distinct = |h: usize| -> usize {
        let ns: BTreeSet<usize> = cadj[h].iter().map(|&(w, _)| w).collect();
        ns.len()
    };
    assert_eq!(
        m,
        group.len() - 1,
        "contracted component {group:?} is not a tree"
    );
    let hubs: Vec<usize> = group.iter().copied().filter(|&h| distinct(h) >= 2).collect();
    match hubs.as_slice() {
        [] => {
            let (a, b) = (group[0], group[1]);
            match (hs.comps[a].is_bad(), hs.comps[b].is_bad()) {
                (false, _) => a,
                (_, false) => b,
                _ => match (hints.get(a).copied().unwrap_or(false), hints.get(b).copied().unwrap_or(false)) {
                    (false, true) => b,
                    _ => a,
                },
            }
        }
        [c] => *c,
        _ => panic!("contracted component {group:?} is not a star"),
    }
}

/// Edges of the component of `v` after moving satellite `sat` of component
/// `from` onto `v` through the `G`-edge `{v, w}`.
fn moved_edges(frame: &Frame<'_>, an: &Analysis, from: usize, sat: usize, to: usize, v: Vertex, w: Vertex) -> (Vec<Edge>, usize) {
    let s = an.comps[from].satellites[sat];
    let target = &an.comps[to];
    let mut edges: Vec<Edge> = if from == to {
        let old = s.rescue_edge();
        target.edges.iter().copied().filter(|e| *e != old).collect()
    } else {
        let mut e = target.edges.clone();
        e.extend(frame.h_edges_of(s.hcomp).iter().copied());
        e
    };
    edges.push(Edge::new(v, w));
    edges.sort_unstable();
    let s_new = if from == to {
        target.s
    } else {
        target.s + frame.matched_in(s.hcomp)
    };
    (edges, s_new)
}

// A 1-anchor is responsible if moving some critical satellite onto it
// makes its component reach 14/11. `source` says which components count as
// critical for their satellites.
fn classify_responsible(
    frame: &Frame<'_>,
    an: &mut Analysis,
    cache: &mut OptCache,
    source: impl Fn(&ComponentInfo) -> bool,
) {
    let mut found: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); an.comps.len()];
    for from in 0..an.comps.len() {
        if !source(&an.comps[from]) {
            continue;
        }
        for si in 0..an.comps[from].satellites.len() {
            let s = an.comps[from].satellites[si];
            if an.comps[from].anchor_degree(s.anchor) != Some(2) {
                continue;
            }
            for &w in &frame.hs.comps[s.hcomp].vertices {
                for &v in frame.g.neighbors(w) {
                    let Location::Anchor { comp: to, j: 1 } = an.locate(frame, v) else {
                        continue;
                    };
                    if found[to].contains(&v) {
                        continue;
                    }
                    let (edges, s_new) = moved_edges(frame, an, from, si, to, v, w);
                    let (sol, _) = cache.solve(&edges);
                    if is_critical_ratio(s_new, sol.value()) {
                        found[to].insert(v);
                    }
                }
            }
        }
    }
    for (k, f) in an.comps.iter_mut().zip(found) {
        k.responsible_anchors = f.into_iter().collect();
    }
}

// A component both critical and responsible gets a solution over its own
// edges plus the G-edges from its responsible 1-anchors into its
// satellites; when that clears 14/11 it counts as non-critical.
fn settle_critical_and_responsible(frame: &Frame<'_>, an: &mut Analysis, cache: &mut OptCache) {
    let hs = &frame.hs;
    for k in an.comps.iter_mut() {
        if !(k.crit0 && k.is_responsible()) {
            k.critical = k.crit0;
            continue;
        }
        let sat_vertices: BTreeSet<Vertex> = k
            .satellites
            .iter()
            .flat_map(|s| hs.comps[s.hcomp].vertices.iter().copied())
            .collect();
        let mut edges: BTreeSet<Edge> = k.edges.iter().copied().collect();
        for &v in &k.responsible_anchors {
            for &w in frame.g.neighbors(v) {
                if sat_vertices.contains(&w) {
                    edges.insert(Edge::new(v, w));
                }
            }
        }
        let edges: Vec<Edge> = edges.into_iter().collect();
        let (sol, _) = cache.solve(&edges);
        k.settled = true;
        let need = match k.s {
            8 => Some(7),
            14 => Some(12),
            _ => None,
        };
        match need {
            Some(need) if sol.value() < need => an.audits.push(format!(
                "critical responsible component at {:?} reaches only {} with s = {}",
                k.vertices,
                sol.value(),
                k.s
            )),
            None => an.audits.push(format!(
                "critical responsible component at {:?} has s = {}",
                k.vertices, k.s
            )),
            _ => {}
        }
        if sol.value() > k.opt {
            k.rescue_solution = Some(sol);
        }
        k.critical = is_critical_ratio(k.s, k.value());
        if k.critical {
            an.audits.push(format!(
                "critical responsible component at {:?} stays critical (s = {}, value = {})",
                k.vertices,
                k.s,
                k.value()
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_value;
    use crate::matching::Matching;

    fn frame_for<'g>(g: &'g Graph, ws: &Workspace<'g>) -> Frame<'g> {
        let _ = g;
        Frame::new(ws, ws.components())
    }

    fn ws_with<'g>(g: &'g Graph, m: &[(Vertex, Vertex)], extra_h: &[(Vertex, Vertex)]) -> Workspace<'g> {
        let matching = Matching::from_edges(g.n(), m.iter().map(|&(a, b)| Edge::new(a, b))).unwrap();
        let mut h = matching.edge_set();
        h.extend(extra_h.iter().map(|&(a, b)| Edge::new(a, b)));
        Workspace::from_parts(g, matching, h)
    }

    fn cover(edges: &[(Vertex, Vertex)]) -> EdgeSet {
        edges.iter().map(|&(a, b)| Edge::new(a, b)).collect()
    }

    /// Edge center {0,1}; 0 supports edges {2,3} and {4,5}, 1 supports {6,7}.
    fn eight_six() -> (Graph, Vec<(Vertex, Vertex)>, Vec<(Vertex, Vertex)>) {
        let m = vec![(0, 1), (2, 3), (4, 5), (6, 7)];
        let c = vec![(0, 2), (0, 4), (1, 6)];
        let g = Graph::from_edges(8, m.iter().chain(&c).copied()).unwrap();
        (g, m, c)
    }

    #[test]
    fn isolated_five_path() {
        let g = Graph::from_edges(5, (1..5).map(|i| (i - 1, i))).unwrap();
        let ws = ws_with(&g, &[(0, 1), (3, 4)], &[(1, 2), (2, 3)]);
        let fr = frame_for(&g, &ws);
        let an = analyze(&fr, &EdgeSet::new(), &[], &mut OptCache::new());
        assert_eq!(an.comps.len(), 1);
        let k = &an.comps[0];
        assert_eq!((k.s, k.opt, k.crit0), (4, 5, false));
        assert!(k.anchors.iter().all(|a| a.j == 0));
        assert_eq!(an.potential().n0, 5);
        assert!(an.audits.is_empty());
    }

    #[test]
    fn isolated_bad_components_are_dropped() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let ws = ws_with(&g, &[(0, 1), (3, 4)], &[(1, 2), (0, 2)]);
        let fr = frame_for(&g, &ws);
        let an = analyze(&fr, &EdgeSet::new(), &[], &mut OptCache::new());
        assert!(an.comps.is_empty());
        assert_eq!(an.nc, 2);
        assert_eq!(an.census(), Census::default());
    }

    #[test]
    fn edge_center_eight_over_six_is_critical() {
        let (g, m, c) = eight_six();
        let ws = ws_with(&g, &m, &[]);
        let fr = frame_for(&g, &ws);
        let an = analyze(&fr, &cover(&c), &[], &mut OptCache::new());
        assert_eq!(an.comps.len(), 1);
        let k = &an.comps[0];
        assert_eq!(fr.hs.comps[k.center].vertices, vec![0, 1]);
        assert_eq!((k.s, k.opt), (8, 6));
        assert!(k.crit0 && k.critical);
        assert_eq!(k.anchor_degree(0), Some(2));
        assert_eq!(k.anchor_degree(1), Some(1));
        assert_eq!(an.r_c().into_iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(an.u_c(&fr).into_iter().collect::<Vec<_>>(), vec![2, 3, 4, 5]);
        let census = an.census();
        assert_eq!((census.k1c, census.a, census.b), (1, 1, 1));
        assert_eq!(an.p_path(&fr, 0, 0).order(), 5);
        assert_eq!(an.q_path(&fr, 0, 1), vec![1, 6, 7]);
        assert!(an.audits.is_empty());
    }

    #[test]
    fn crossing_edge_makes_it_responsible_and_settled() {
        // Same as above plus the G-edge {1, 3}: moving {2,3} onto 1 keeps a
        // critical 8/6 shape, and the crossing edge yields a 7-path.
        let (g0, m, c) = eight_six();
        let mut edges: Vec<_> = g0.edges().map(|e| e.ends()).collect();
        edges.push((1, 3));
        let g = Graph::from_edges(8, edges).unwrap();
        let ws = ws_with(&g, &m, &[]);
        let fr = frame_for(&g, &ws);
        let an = analyze(&fr, &cover(&c), &[], &mut OptCache::new());
        let k = &an.comps[0];
        assert!(k.crit0 && k.settled);
        // Its own satellites stop being critical once it is settled.
        assert!(k.responsible_anchors.is_empty());
        assert!(k.value() >= 7);
        assert!(!k.critical);
        assert!(an.audits.is_empty(), "{:?}", an.audits);
    }

    #[test]
    fn two_bad_endpoints_keep_the_hinted_center() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3), (1, 2)]).unwrap();
        let ws = ws_with(&g, &[(0, 1), (2, 3)], &[]);
        let fr = frame_for(&g, &ws);
        let c = cover(&[(1, 2)]);
        let an = analyze(&fr, &c, &[], &mut OptCache::new());
        assert_eq!(an.comps[0].center, 0);
        let an = analyze(&fr, &c, &[false, true], &mut OptCache::new());
        assert_eq!(an.comps[0].center, 1);
        assert_eq!(an.comps[0].opt, 4);
    }

    #[test]
    fn pendant_pruning_keeps_the_optimum() {
        // Star with many leaves hanging off a path.
        let mut e = vec![(0, 1), (1, 2), (2, 3)];
        for leaf in 4..10 {
            e.push((3, leaf));
        }
        let g = Graph::from_edges(10, e.iter().copied()).unwrap();
        let edges: Vec<Edge> = g.edges().collect();
        let pruned = prune_pendants(&edges);
        assert_eq!(pruned.len(), 4);
        let (sol, size) = OptCache::new().solve(&edges);
        assert_eq!(size, 5);
        assert_eq!(sol.value(), exact_value(&g, 20));
    }

    #[test]
    fn five_path_with_satellites_matches_generic_exact() {
        // 5-path 0..4 with edge satellites at 1 and 3 and a triangle at 3.
        let m = vec![(0, 1), (3, 4), (5, 6), (7, 8), (9, 10)];
        let h = vec![(1, 2), (2, 3), (9, 11), (10, 11)];
        let c = vec![(1, 5), (3, 7), (3, 9)];
        let g = Graph::from_edges(12, m.iter().chain(&h).chain(&c).copied()).unwrap();
        let ws = ws_with(&g, &m, &h);
        let fr = frame_for(&g, &ws);
        let an = analyze(&fr, &cover(&c), &[], &mut OptCache::new());
        assert_eq!(an.comps.len(), 1);
        let k = &an.comps[0];
        assert_eq!(k.s, 4 + 6);
        assert_eq!(k.opt, exact_value(&g, 20));
        assert_eq!(an.p_path(&fr, 0, 3).order(), 6);
        assert!(an.audits.is_empty(), "{:?}", an.audits);
    }
}
