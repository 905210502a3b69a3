//! Second phase, first half: a maximum weight path-cycle cover `C` of `G_1`
//! saturating as many bad components of `H` as possible, and the matching
//! edges `M_C` it keeps alive.

use thiserror::Error;

use crate::factor::{max_weight_fg_factor, FactorProblem};
use crate::graph::{Edge, EdgeSet, Graph, Vertex};
use crate::phase1::{HStructure, Workspace};

/// `G_1` and the bad components it may saturate.
#[derive(Clone, Debug)]
pub struct SaturationInstance {
    /// Spanning subgraph of `G` with the edges joining two different
    /// components of `H`, at least one of them bad.
    pub g1: Graph,
    /// Vertex sets of the bad components, in component order.
    pub bad: Vec<Vec<Vertex>>,
    /// Index of each bad component in the `H` structure.
    pub bad_hcomp: Vec<usize>,
    /// `bad_of[v]`: index into `bad` of the component holding `v`.
    pub bad_of: Vec<Option<usize>>,
}

impl SaturationInstance {
    /// Vertex sets given directly, for oracle tests.
    pub fn from_parts(g1: Graph, bad: Vec<Vec<Vertex>>) -> Self {
        let mut bad_of = vec![None; g1.n()];
        for (i, b) in bad.iter().enumerate() {
            for &v in b {
                assert!(bad_of[v].is_none(), "bad components overlap at {v}");
                bad_of[v] = Some(i);
            }
        }
        let bad_hcomp = (0..bad.len()).collect();
        SaturationInstance {
            g1,
            bad,
            bad_hcomp,
            bad_of,
        }
    }

    /// Number of bad components touched by `edges`.
    pub fn weight(&self, edges: &EdgeSet) -> usize {
        let mut hit = vec![false; self.bad.len()];
        for e in edges.iter() {
            for x in [e.u(), e.v()] {
                if let Some(b) = self.bad_of[x] {
                    hit[b] = true;
                }
            }
        }
        hit.into_iter().filter(|&h| h).count()
    }
}

pub fn build_saturation_instance(ws: &Workspace<'_>, hs: &HStructure) -> SaturationInstance {
    let g = ws.graph();
    let n = g.n();
    let edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .filter(|e| match (hs.comp_of[e.u()], hs.comp_of[e.v()]) {
            (Some(a), Some(b)) => a != b && (hs.comps[a].is_bad() || hs.comps[b].is_bad()),
            _ => false,
        })
        .map(|e| e.ends())
        .collect();
    let g1 = Graph::from_edges(n, edges).expect("subgraph of G");
    let mut bad = Vec::new();
    let mut bad_hcomp = Vec::new();
    let mut bad_of = vec![None; n];
    for id in hs.bad_ids() {
        for &v in &hs.comps[id].vertices {
            bad_of[v] = Some(bad.len());
        }
        bad.push(hs.comps[id].vertices.clone());
        bad_hcomp.push(id);
    }
    SaturationInstance {
        g1,
        bad,
        bad_hcomp,
        bad_of,
    }
}

/// The auxiliary graph `G'` with degree bounds. Vertices `0..n_base` are
/// those of `G`; bad component `i` adds `x[i]`, `y[i]`, `z[i]`.
#[derive(Clone, Debug)]
pub struct FactorInstance {
    pub n_base: usize,
    pub graph: Graph,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub f1: EdgeSet,
    pub f2: EdgeSet,
    pub x: Vec<Vertex>,
    pub y: Vec<Vertex>,
    pub z: Vec<Vertex>,
}

impl FactorInstance {
    /// 1 on `F_2`, 0 elsewhere.
    pub fn weight(&self, e: &Edge) -> i64 {
        i64::from(self.f2.contains(e))
    }

    pub fn factor_weight(&self, factor: &EdgeSet) -> i64 {
        factor.iter().map(|e| self.weight(e)).sum()
    }
}

pub fn build_factor_instance(si: &SaturationInstance) -> FactorInstance {
    let n = si.g1.n();
    let h = si.bad.len();
    let total = n + 3 * h;
    let mut f = vec![0; total];
    let mut g = vec![2; total];
    let mut f1 = EdgeSet::new();
    let mut f2 = EdgeSet::new();
    let (mut xs, mut ys, mut zs) = (Vec::new(), Vec::new(), Vec::new());
    for (i, b) in si.bad.iter().enumerate() {
        let (x, y, z) = (n + 3 * i, n + 3 * i + 1, n + 3 * i + 2);
        for &v in b {
            f[v] = 2;
            g[v] = 2;
            f1.insert(Edge::new(x, v));
            f1.insert(Edge::new(y, v));
        }
        f2.insert(Edge::new(x, z));
        f2.insert(Edge::new(y, z));
        g[x] = b.len();
        g[y] = b.len();
        g[z] = 1;
        xs.push(x);
        ys.push(y);
        zs.push(z);
    }
    let edges = si
        .g1
        .edges()
        .chain(f1.iter().copied())
        .chain(f2.iter().copied())
        .map(|e| e.ends());
    let graph = Graph::from_edges(total, edges).expect("disjoint edge families");
    FactorInstance {
        n_base: n,
        graph,
        f,
        g,
        f1,
        f2,
        x: xs,
        y: ys,
        z: zs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the auxiliary graph has no [f, g]-factor")]
pub struct InfeasibleFactor;

/// Maximum weight `[f, g]`-factor of `G'`.
pub fn solve_max_weight_fg_factor(fi: &FactorInstance) -> Result<EdgeSet, InfeasibleFactor> {
    let edges: Vec<Edge> = fi.graph.edges().collect();
    let problem = FactorProblem {
        n: fi.graph.n(),
        edges: edges.iter().map(|e| (e.u(), e.v(), fi.weight(e))).collect(),
        f: fi.f.clone(),
        g: fi.g.clone(),
    };
    let chosen = max_weight_fg_factor(&problem).ok_or(InfeasibleFactor)?;
    Ok(chosen.into_iter().map(|k| edges[k]).collect())
}

/// A path-cycle cover of `G_1` with the number of bad components it
/// saturates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCycleCover {
    pub edges: EdgeSet,
    pub weight: usize,
}

/// `C = F ∩ E(G_1)`, then drops edges in increasing order while the weight
/// stays the same.
pub fn extract_and_prune_cover(si: &SaturationInstance, factor: &EdgeSet) -> PathCycleCover {
    let edges: EdgeSet = factor
        .iter()
        .filter(|e| e.v() < si.g1.n() && si.g1.has_edge(e.u(), e.v()))
        .copied()
        .collect();
    prune(si, edges)
}

/// Removes every edge whose removal keeps all touched bad components
/// saturated. Incidence counts only go down, so one pass in edge order
/// reaches the same set as restarting the scan after each removal.
pub fn prune(si: &SaturationInstance, mut edges: EdgeSet) -> PathCycleCover {
    let mut count = vec![0usize; si.bad.len()];
    let touched = |e: &Edge| -> Vec<usize> {
        let mut t: Vec<usize> = [e.u(), e.v()].iter().filter_map(|&x| si.bad_of[x]).collect();
        t.dedup();
        t
    };
    for e in edges.iter() {
        for b in touched(e) {
            count[b] += 1;
        }
    }
    for e in edges.sorted() {
        let t = touched(&e);
        if t.iter().all(|&b| count[b] >= 2) {
            edges.remove(&e);
            for b in t {
                count[b] -= 1;
            }
        }
    }
    let weight = count.iter().filter(|&&c| c > 0).count();
    debug_assert_eq!(weight, si.weight(&edges));
    PathCycleCover { edges, weight }
}

/// Every edge's removal lowers the weight.
pub fn is_pruned(si: &SaturationInstance, cover: &PathCycleCover) -> bool {
    cover.edges.iter().all(|e| {
        let mut less = cover.edges.clone();
        less.remove(e);
        si.weight(&less) < cover.weight
    })
}

/// `M_C`: matching edges in 5-paths or in saturated bad components.
pub fn compute_mc(ws: &Workspace<'_>, hs: &HStructure, si: &SaturationInstance, cover: &PathCycleCover) -> EdgeSet {
    let mut saturated = vec![false; hs.comps.len()];
    for e in cover.edges.iter() {
        for x in [e.u(), e.v()] {
            if let Some(b) = si.bad_of[x] {
                saturated[si.bad_hcomp[b]] = true;
            }
        }
    }
    let mut mc = EdgeSet::new();
    for (id, c) in hs.comps.iter().enumerate() {
        if !c.is_bad() || saturated[id] {
            mc.extend(c.m_edges.iter().copied());
        }
    }
    debug_assert!(mc.iter().all(|e| ws.matching().contains(e)));
    mc
}

/// Everything the second phase derives from `H`.
#[derive(Clone, Debug)]
pub struct CoverStage {
    pub instance: SaturationInstance,
    pub cover: PathCycleCover,
    pub factor_weight: i64,
    pub mc: EdgeSet,
}

pub fn run_cover(ws: &Workspace<'_>, hs: &HStructure) -> CoverStage {
    let instance = build_saturation_instance(ws, hs);
    let fi = build_factor_instance(&instance);
    let factor = solve_max_weight_fg_factor(&fi).expect("the all-F1 completion is a factor");
    let factor_weight = fi.factor_weight(&factor);
    let cover = extract_and_prune_cover(&instance, &factor);
    assert_eq!(
        cover.weight as i64, factor_weight,
        "cover weight differs from factor weight"
    );
    let mc = compute_mc(ws, hs, &instance, &cover);
    CoverStage {
        instance,
        cover,
        factor_weight,
        mc,
    }
}
