//! Maximum weight `[f, g]`-factors by reduction to maximum weight matching.
//!
//! Vertex `v` becomes `g(v)` copies, the first `f(v)` of which are
//! mandatory. Edge `e = {u, v}` becomes two nodes `a_e, b_e` joined by an
//! edge of weight `2P`; `a_e` is joined to every copy of `u` and `b_e` to
//! every copy of `v` with weight `P + w(e)`, plus a bonus `B` on mandatory
//! copies. With `B` above four times the total absolute weight and `P` above
//! `B + max |w|`, an optimal matching matches every gadget either
//! internally (edge left out) or to two copies (edge taken), covers as
//! many mandatory copies as possible, and among those maximizes `w`.

use crate::matching::{max_weight_matching, WeightedEdge};
use crate::graph::Vertex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorProblem {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex, i64)>,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

impl FactorProblem {
    /// Degree of every vertex under the chosen edge indices.
    pub fn degrees(&self, chosen: &[usize]) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &k in chosen {
            let (a, b, _) = self.edges[k];
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn is_factor(&self, chosen: &[usize]) -> bool {
        self.degrees(chosen)
            .iter()
            .enumerate()
            .all(|(v, &d)| self.f[v] <= d && d <= self.g[v])
    }

    pub fn weight(&self, chosen: &[usize]) -> i64 {
        chosen.iter().map(|&k| self.edges[k].2).sum()
    }
}

/// Indices of the edges of a maximum weight `[f, g]`-factor, sorted, or
/// `None` if no factor exists.
pub fn max_weight_fg_factor(p: &FactorProblem) -> Option<Vec<usize>> {
    assert_eq!(p.f.len(), p.n);
    assert_eq!(p.g.len(), p.n);
    if p.f.iter().zip(&p.g).any(|(f, g)| f > g) {
        return None;
    }
    let total: i64 = p.edges.iter().map(|e| e.2.abs()).sum();
    let max_w = p.edges.iter().map(|e| e.2.abs()).max().unwrap_or(0);
    let bonus = 4 * total + 1;
    let pad = bonus + max_w + 1;

    // Copies of each vertex.
    let mut first_copy = Vec::with_capacity(p.n + 1);
    let mut next = 0;
    for v in 0..p.n {
        first_copy.push(next);
        next += p.g[v];
    }
    let copies = next;
    let mut nodes = copies;
    let mut wedges = Vec::new();
    // gadget[k] = (a_e, b_e) for edges that can be used at all.
    let mut gadget = vec![None; p.edges.len()];
    for (k, &(u, v, w)) in p.edges.iter().enumerate() {
        assert!(u != v && u < p.n && v < p.n);
        if p.g[u] == 0 || p.g[v] == 0 {
            continue;
        }
        let a = nodes;
        let b = nodes + 1;
        nodes += 2;
        gadget[k] = Some((a, b));
        wedges.push(WeightedEdge::new(a, b, 2 * pad));
        for (end, x) in [(a, u), (b, v)] {
            for i in 0..p.g[x] {
                let extra = if i < p.f[x] { bonus } else { 0 };
                wedges.push(WeightedEdge::new(first_copy[x] + i, end, pad + w + extra));
            }
        }
    }
    let mate = solve_by_parts(nodes, &wedges);
    let mut chosen = Vec::new();
    for (k, gd) in gadget.iter().enumerate() {
        let Some((a, b)) = *gd else { continue };
        let ma = mate[a];
        let mb = mate[b];
        match (ma, mb) {
            (Some(x), _) if x == b => {}
            (Some(x), Some(y)) if x < copies && y < copies => chosen.push(k),
            _ => unreachable!("gadget of edge {k} half matched"),
        }
    }
    p.is_factor(&chosen).then_some(chosen)
}

// Solves each connected part of the gadget graph separately.
fn solve_by_parts(n: usize, edges: &[WeightedEdge]) -> Vec<Option<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in edges {
        let a = find(&mut parent, e.u);
        let b = find(&mut parent, e.v);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut local = vec![0; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut part_of_root = std::collections::HashMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        let id = *part_of_root.entry(r).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        local[x] = members[id].len();
        members[id].push(x);
    }
    let mut part_edges: Vec<Vec<WeightedEdge>> = vec![Vec::new(); members.len()];
    for e in edges {
        let id = part_of_root[&find(&mut parent, e.u)];
        part_edges[id].push(WeightedEdge::new(local[e.u], local[e.v], e.w));
    }
    let mut mate = vec![None; n];
    for (id, verts) in members.iter().enumerate() {
        if part_edges[id].is_empty() {
            continue;
        }
        let m = max_weight_matching(verts.len(), &part_edges[id], false);
        for (i, w) in m.into_iter().enumerate() {
            mate[verts[i]] = w.map(|j| verts[j]);
        }
    }
    mate
}
