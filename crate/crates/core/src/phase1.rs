//! First phase: grow `H = (V(M), M)` into 5-paths, edges, triangles and
//! stars.
//!
//! Step 1.1 merges two edge components and one outside vertex into a 5-path
//! as long as an augmenting triple exists. Step 1.2 then attaches every
//! outside vertex adjacent to an endpoint of an edge component.

use std::fmt;

use thiserror::Error;

use crate::graph::{Edge, EdgeSet, Graph, Shape, Vertex};
use crate::matching::{check_tutte_berge, max_cardinality_matching, tutte_berge_witness, Matching};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleKind {
    /// `u0` is adjacent to `v0` and `v1`.
    C1,
    /// `u0` is adjacent to `v0`, and `w0` to `v1`.
    C2,
}

/// Outside vertex `u0` with edge components `e0 = {v0, w0}` and
/// `e1 = {v1, w1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AugTriple {
    pub u0: Vertex,
    pub v0: Vertex,
    pub w0: Vertex,
    pub v1: Vertex,
    pub w1: Vertex,
    pub kind: TripleKind,
}

impl AugTriple {
    pub fn e0(&self) -> Edge {
        Edge::new(self.v0, self.w0)
    }

    pub fn e1(&self) -> Edge {
        Edge::new(self.v1, self.w1)
    }

    /// The 5-path the triple turns into, in order.
    pub fn five_path(&self) -> [Vertex; 5] {
        match self.kind {
            TripleKind::C1 => [self.w0, self.v0, self.u0, self.v1, self.w1],
            TripleKind::C2 => [self.u0, self.v0, self.w0, self.v1, self.w1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("triple {0:?} no longer fits the workspace")]
pub struct StaleTriple(pub AugTriple);

/// `G` together with the evolving `H` and the maximum matching `M`.
#[derive(Clone, Debug)]
pub struct Workspace<'g> {
    g: &'g Graph,
    matching: Matching,
    h: EdgeSet,
    h_adj: Vec<Vec<Vertex>>,
    in_h: Vec<bool>,
}

impl<'g> Workspace<'g> {
    /// `H = (V(M), M)` for a maximum matching `M` of `g`.
    pub fn new(g: &'g Graph) -> Self {
        let m = max_cardinality_matching(g);
        let h = m.edge_set();
        Self::from_parts(g, m, h)
    }

    /// Workspace with a given matching and `H`; `V(H)` is `V(E(H))`.
    pub fn from_parts(g: &'g Graph, matching: Matching, h: EdgeSet) -> Self {
        let n = g.n();
        let mut h_adj = vec![Vec::new(); n];
        let mut in_h = vec![false; n];
        for e in h.sorted() {
            let (a, b) = e.ends();
            h_adj[a].push(b);
            h_adj[b].push(a);
            in_h[a] = true;
            in_h[b] = true;
        }
        Workspace {
            g,
            matching,
            h,
            h_adj,
            in_h,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn matching(&self) -> &Matching {
        &self.matching
    }

    pub fn h_edges(&self) -> &EdgeSet {
        &self.h
    }

    pub fn in_h(&self, v: Vertex) -> bool {
        self.in_h[v]
    }

    pub fn h_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.h_adj[v]
    }

    fn add_h_edge(&mut self, a: Vertex, b: Vertex) {
        if self.h.insert(Edge::new(a, b)) {
            self.h_adj[a].push(b);
            self.h_adj[b].push(a);
            self.in_h[a] = true;
            self.in_h[b] = true;
        }
    }

    /// Partner of `v` if `{v, partner}` is an edge component of `H`.
    fn edge_component_partner(&self, v: Vertex) -> Option<Vertex> {
        match self.h_adj[v].as_slice() {
            [w] if self.h_adj[*w].len() == 1 => Some(*w),
            _ => None,
        }
    }

    /// First augmenting triple in the fixed scan order: outside vertices by
    /// id for C1, then edge components by id for C2.
    pub fn find_augmenting_triple(&self) -> Option<AugTriple> {
        let g = self.g;
        for u0 in 0..g.n() {
            if self.in_h[u0] {
                continue;
            }
            let ends: Vec<(Vertex, Vertex)> = g
                .neighbors(u0)
                .iter()
                .filter_map(|&v| self.edge_component_partner(v).map(|w| (v, w)))
                .collect();
            if let Some(&(v0, w0)) = ends.first() {
                if let Some(&(v1, w1)) = ends.iter().find(|&&(v, _)| v != v0 && v != w0) {
                    return Some(AugTriple {
                        u0,
                        v0,
                        w0,
                        v1,
                        w1,
                        kind: TripleKind::C1,
                    });
                }
            }
        }
        for e in self.matching.edges() {
            let (a, b) = e.ends();
            if self.edge_component_partner(a) != Some(b) {
                continue;
            }
            for (v0, w0) in [(a, b), (b, a)] {
                let Some(&u0) = g.neighbors(v0).iter().find(|&&u| !self.in_h[u]) else {
                    continue;
                };
                let hit = g.neighbors(w0).iter().find_map(|&v1| {
                    (v1 != v0)
                        .then(|| self.edge_component_partner(v1).map(|w1| (v1, w1)))
                        .flatten()
                });
                if let Some((v1, w1)) = hit {
                    return Some(AugTriple {
                        u0,
                        v0,
                        w0,
                        v1,
                        w1,
                        kind: TripleKind::C2,
                    });
                }
            }
        }
        None
    }

    fn triple_is_current(&self, t: &AugTriple) -> bool {
        let g = self.g;
        let distinct = t.e0() != t.e1();
        let edges_ok = self.edge_component_partner(t.v0) == Some(t.w0)
            && self.edge_component_partner(t.v1) == Some(t.w1)
            && self.matching.contains(&t.e0())
            && self.matching.contains(&t.e1());
        let adj_ok = match t.kind {
            TripleKind::C1 => g.has_edge(t.u0, t.v0) && g.has_edge(t.u0, t.v1),
            TripleKind::C2 => g.has_edge(t.u0, t.v0) && g.has_edge(t.w0, t.v1),
        };
        distinct && edges_ok && adj_ok && !self.in_h[t.u0]
    }

    /// Merges the triple into a 5-path; swaps `e0` for `{u0, v0}` in `M`
    /// for a C2 triple.
    pub fn apply_triple(&mut self, t: &AugTriple) -> Result<(), StaleTriple> {
        if !self.triple_is_current(t) {
            return Err(StaleTriple(*t));
        }
        match t.kind {
            TripleKind::C1 => {
                self.add_h_edge(t.u0, t.v0);
                self.add_h_edge(t.u0, t.v1);
            }
            TripleKind::C2 => {
                self.add_h_edge(t.u0, t.v0);
                self.add_h_edge(t.w0, t.v1);
                self.matching.remove(t.e0());
                self.matching.insert(Edge::new(t.u0, t.v0));
                // H keeps e0 as a path edge.
            }
        }
        Ok(())
    }

    /// Applies triples until none is left; returns how many were applied.
    pub fn run_step_1_1(&mut self) -> usize {
        let mut count = 0;
        while let Some(t) = self.find_augmenting_triple() {
            self.apply_triple(&t).expect("fresh triple");
            count += 1;
        }
        count
    }

    /// Attaches every outside vertex adjacent to an endpoint of an edge
    /// component; returns the number of added edges.
    pub fn run_step_1_2(&mut self) -> usize {
        let g = self.g;
        let mut added = Vec::new();
        for u in 0..g.n() {
            if self.in_h[u] {
                continue;
            }
            for &v in g.neighbors(u) {
                if self.edge_component_partner(v).is_some() {
                    added.push((u, v));
                }
            }
        }
        let count = added.len();
        for (u, v) in added {
            self.add_h_edge(u, v);
        }
        count
    }

    /// Both steps of the first phase.
    pub fn run(g: &'g Graph) -> (Self, Phase1Stats) {
        let mut ws = Workspace::new(g);
        let matching_size = ws.matching.len();
        let triples = ws.run_step_1_1();
        let attached = ws.run_step_1_2();
        (
            ws,
            Phase1Stats {
                matching_size,
                triples,
                attached,
            },
        )
    }

    /// Components of `H`, ordered by smallest vertex.
    pub fn components(&self) -> HStructure {
        let n = self.g.n();
        let hg = Graph::from_edge_set(n, &self.h).expect("H is a simple subgraph");
        let mut comps = Vec::new();
        let mut comp_of = vec![None; n];
        for verts in hg.connected_components() {
            if verts.len() == 1 && !self.in_h[verts[0]] {
                continue;
            }
            let shape = hg.classify_component(&verts).expect("component");
            let kind = match shape {
                Shape::Path(5) => HKind::FivePath,
                Shape::Edge => HKind::Edge,
                Shape::Triangle => HKind::Triangle,
                Shape::Star { center } => HKind::Star { center },
                other => panic!("H component {verts:?} has shape {other:?}"),
            };
            let order = match kind {
                HKind::FivePath => {
                    let start = *verts.iter().find(|&&v| hg.degree(v) == 1).expect("end");
                    let mut order = vec![start];
                    let mut prev = usize::MAX;
                    let mut cur = start;
                    while order.len() < 5 {
                        let next = *hg
                            .neighbors(cur)
                            .iter()
                            .find(|&&w| w != prev)
                            .expect("path continues");
                        prev = cur;
                        cur = next;
                        order.push(cur);
                    }
                    order
                }
                _ => verts.clone(),
            };
            let m_edges = verts
                .iter()
                .filter_map(|&v| {
                    self.matching
                        .partner(v)
                        .filter(|&w| v < w)
                        .map(|w| Edge::new(v, w))
                })
                .collect();
            let id = comps.len();
            for &v in &verts {
                comp_of[v] = Some(id);
            }
            comps.push(HComponent {
                vertices: verts,
                kind,
                order,
                m_edges,
            });
        }
        HStructure { comps, comp_of }
    }

    fn matching_is_maximum(&self) -> bool {
        self.matching.is_valid_in(self.g)
            && tutte_berge_witness(self.g, &self.matching)
                .is_some_and(|u| check_tutte_berge(self.g, &self.matching, &u))
    }

    /// Literal check of the state promised when Step 1.1 stops.
    pub fn verify_after_merging(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.matching_is_maximum() {
            out.push("M is not a maximum matching".to_string());
        }
        let hs = self.components_lenient();
        for c in &hs {
            match c.shape {
                Shape::Edge => {
                    if !self.matching.contains(&Edge::new(c.vertices[0], c.vertices[1])) {
                        out.push(format!("edge component {:?} not in M", c.vertices));
                    }
                }
                Shape::Path(5) => out.extend(self.check_five_path(&c.vertices)),
                other => out.push(format!("component {:?} has shape {other:?}", c.vertices)),
            }
        }
        let allowed_far = self.internal_non_middle();
        let g = self.g;
        for e in self.matching.edges() {
            let (a, b) = e.ends();
            if self.edge_component_partner(a) != Some(b) {
                continue;
            }
            for (v, w) in [(a, b), (b, a)] {
                for &u in g.neighbors(v) {
                    if self.in_h[u] {
                        continue;
                    }
                    for &x in g.neighbors(u) {
                        if x != v && x != w && !allowed_far[x] {
                            out.push(format!(
                                "outside {u} next to edge component {e} also sees {x}"
                            ));
                        }
                    }
                    for &x in g.neighbors(w) {
                        if x != v && x != u && !allowed_far[x] {
                            out.push(format!(
                                "endpoint {w} of {e} (outside {u} at {v}) also sees {x}"
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// Literal check of the state promised when Step 1.2 stops.
    pub fn verify_structure(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.matching_is_maximum() {
            out.push("M is not a maximum matching".to_string());
        }
        let comps = self.components_lenient();
        let mut comp_of = vec![usize::MAX; self.g.n()];
        for (i, c) in comps.iter().enumerate() {
            for &v in &c.vertices {
                comp_of[v] = i;
            }
        }
        let allowed = self.internal_non_middle();
        let g = self.g;
        for (i, c) in comps.iter().enumerate() {
            let m_count = c
                .vertices
                .iter()
                .filter(|&&v| self.matching.partner(v).is_some_and(|w| v < w))
                .count();
            let restricted: Vec<Vertex> = match c.shape {
                Shape::Path(5) => {
                    out.extend(self.check_five_path(&c.vertices));
                    Vec::new()
                }
                Shape::Edge | Shape::Triangle | Shape::Star { .. } => {
                    if m_count != 1 {
                        out.push(format!(
                            "bad component {:?} holds {m_count} M-edges",
                            c.vertices
                        ));
                    }
                    match c.shape {
                        Shape::Triangle => c.vertices.clone(),
                        Shape::Star { center } => {
                            c.vertices.iter().copied().filter(|&v| v != center).collect()
                        }
                        _ => Vec::new(),
                    }
                }
                other => {
                    out.push(format!("component {:?} has shape {other:?}", c.vertices));
                    Vec::new()
                }
            };
            for v1 in restricted {
                for &v2 in g.neighbors(v1) {
                    if comp_of[v2] != i && !allowed[v2] {
                        out.push(format!(
                            "{v1} in {:?} is adjacent to {v2}, not an inner 5-path vertex",
                            c.vertices
                        ));
                    }
                }
            }
        }
        for u in 0..g.n() {
            if self.in_h[u] {
                continue;
            }
            for &x in g.neighbors(u) {
                if !allowed[x] {
                    out.push(format!("outside {u} is adjacent to {x}"));
                }
            }
        }
        out
    }

    fn check_five_path(&self, verts: &[Vertex]) -> Vec<String> {
        let ends: Vec<Vertex> = verts
            .iter()
            .copied()
            .filter(|&v| self.h_adj[v].len() == 1)
            .collect();
        let mut out = Vec::new();
        for &e in &ends {
            let next = self.h_adj[e][0];
            if !self.matching.contains(&Edge::new(e, next)) {
                out.push(format!("5-path {verts:?}: end edge {{{e}, {next}}} not in M"));
            }
        }
        out
    }

    // Marks second and fourth vertices of 5-path components.
    fn internal_non_middle(&self) -> Vec<bool> {
        let mut mark = vec![false; self.g.n()];
        for c in self.components_lenient() {
            if c.shape != Shape::Path(5) {
                continue;
            }
            for &v in &c.vertices {
                if self.h_adj[v].len() == 2 && self.h_adj[v].iter().any(|&w| self.h_adj[w].len() == 1)
                {
                    mark[v] = true;
                }
            }
        }
        mark
    }

    // Components of H with their raw shape, for verifiers that must not
    // panic on malformed input.
    fn components_lenient(&self) -> Vec<RawComponent> {
        let hg = Graph::from_edge_set(self.g.n(), &self.h).expect("H is a simple subgraph");
        hg.connected_components()
            .into_iter()
            .filter(|c| c.len() > 1 || self.in_h[c[0]])
            .map(|vertices| {
                let shape = hg.classify_component(&vertices).expect("component");
                RawComponent { vertices, shape }
            })
            .collect()
    }
}

struct RawComponent {
    vertices: Vec<Vertex>,
    shape: Shape,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Phase1Stats {
    pub matching_size: usize,
    pub triples: usize,
    pub attached: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HKind {
    FivePath,
    Edge,
    Triangle,
    Star { center: Vertex },
}

impl fmt::Display for HKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HKind::FivePath => write!(f, "5-path"),
            HKind::Edge => write!(f, "edge"),
            HKind::Triangle => write!(f, "triangle"),
            HKind::Star { .. } => write!(f, "star"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HComponent {
    /// Sorted vertex list.
    pub vertices: Vec<Vertex>,
    pub kind: HKind,
    /// Path order for a 5-path, otherwise the sorted vertices.
    pub order: Vec<Vertex>,
    pub m_edges: Vec<Edge>,
}

impl HComponent {
    /// Every component other than a 5-path is bad.
    pub fn is_bad(&self) -> bool {
        self.kind != HKind::FivePath
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Components of `H` plus the component index of each vertex in `V(H)`.
#[derive(Clone, Debug)]
pub struct HStructure {
    pub comps: Vec<HComponent>,
    pub comp_of: Vec<Option<usize>>,
}

impl HStructure {
    pub fn bad_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.comps.len()).filter(|&i| self.comps[i].is_bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws_with<'g>(g: &'g Graph, m: &[(Vertex, Vertex)]) -> Workspace<'g> {
        let matching = Matching::from_edges(g.n(), m.iter().map(|&(a, b)| Edge::new(a, b))).unwrap();
        let h = matching.edge_set();
        Workspace::from_parts(g, matching, h)
    }

    #[test]
    fn init_cases() {
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(Workspace::new(&p4).matching().len(), 2);
        let empty = Graph::empty(0);
        assert!(Workspace::new(&empty).h_edges().is_empty());
        let p7 = Graph::from_edges(7, (1..7).map(|i| (i - 1, i))).unwrap();
        assert_eq!(Workspace::new(&p7).matching().len(), 3);
    }

    #[test]
    fn c1_triple() {
        // a=0 b=1 c=2 d=3 u=4
        let g = Graph::from_edges(5, [(0, 1), (2, 3), (4, 0), (4, 2)]).unwrap();
        let mut ws = ws_with(&g, &[(0, 1), (2, 3)]);
        let t = ws.find_augmenting_triple().unwrap();
        assert_eq!(t.kind, TripleKind::C1);
        assert_eq!(t.five_path(), [1, 0, 4, 2, 3]);
        ws.apply_triple(&t).unwrap();
        let hs = ws.components();
        assert_eq!(hs.comps.len(), 1);
        assert_eq!(hs.comps[0].kind, HKind::FivePath);
        assert_eq!(ws.matching().len(), 2);
        assert!(ws.find_augmenting_triple().is_none());
        assert!(ws.apply_triple(&t).is_err());
    }

    #[test]
    fn c2_triple_swaps_matching() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3), (4, 0), (1, 2)]).unwrap();
        let mut ws = ws_with(&g, &[(0, 1), (2, 3)]);
        let t = ws.find_augmenting_triple().unwrap();
        assert_eq!(t.kind, TripleKind::C2);
        assert_eq!(t.five_path(), [4, 0, 1, 2, 3]);
        ws.apply_triple(&t).unwrap();
        assert!(ws.matching().contains(&Edge::new(4, 0)));
        assert!(!ws.matching().contains(&Edge::new(0, 1)));
        assert!(ws.h_edges().contains(&Edge::new(0, 1)));
        assert!(ws.verify_after_merging().is_empty(), "{:?}", ws.verify_after_merging());
    }

    #[test]
    fn single_edge_component_has_no_triple() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let ws = ws_with(&g, &[(0, 1)]);
        assert!(ws.find_augmenting_triple().is_none());
    }

    #[test]
    fn step_1_2_shapes() {
        // Triangle: u=2 adjacent to both ends of {0,1}.
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let (ws, _) = Workspace::run(&g);
        assert_eq!(ws.components().comps[0].kind, HKind::Triangle);

        // Star centered at v=0 with outside 2 and 3.
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let (ws, _) = Workspace::run(&g);
        assert_eq!(ws.components().comps[0].kind, HKind::Star { center: 0 });
        assert!(ws.verify_structure().is_empty());

        // Nothing to attach.
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let (ws, stats) = Workspace::run(&g);
        assert_eq!(stats.attached, 0);
        assert_eq!(ws.components().comps.len(), 2);
    }

    #[test]
    fn two_triples_in_a_chain() {
        // Two independent copies of the C1 gadget.
        let g = Graph::from_edges(
            10,
            [(0, 1), (2, 3), (4, 0), (4, 2), (5, 6), (7, 8), (9, 5), (9, 7)],
        )
        .unwrap();
        let (ws, stats) = Workspace::run(&g);
        assert_eq!(stats.triples, 2);
        let hs = ws.components();
        assert_eq!(hs.comps.iter().filter(|c| c.kind == HKind::FivePath).count(), 2);
        assert!(ws.verify_structure().is_empty());
    }

    #[test]
    fn verifier_flags_leftover_triple() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3), (4, 0), (4, 2)]).unwrap();
        let ws = ws_with(&g, &[(0, 1), (2, 3)]);
        assert!(!ws.verify_after_merging().is_empty());
        let empty = Graph::empty(0);
        assert!(Workspace::new(&empty).verify_after_merging().is_empty());
    }
}
