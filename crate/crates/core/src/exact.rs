//! Exact solver for small graphs, plus brute-force oracles used to check
//! the approximation pipeline.
//!
//! Every connected component is relabeled in DFS order and solved by a
//! memoized search over the set of remaining vertices. At each state the
//! lowest remaining vertex is either left uncovered or covered by a vertex
//! set of size 4 to 7 that carries a Hamiltonian path; longer paths are
//! never needed because they split into pieces in that range.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::solution::{Path, Solution, MAX_ORDER, MIN_ORDER};

/// Largest component the bitmask search can represent.
pub const MAX_COMPONENT: usize = 64;

#[derive(Clone, Debug)]
pub struct ExactConfig {
    /// Refuse graphs with more vertices than this.
    pub cap: usize,
    /// Wall-clock budget per call; `None` means unlimited.
    pub budget: Option<Duration>,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            cap: 20,
            budget: None,
        }
    }
}

impl ExactConfig {
    pub fn with_cap(cap: usize) -> Self {
        ExactConfig {
            cap,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("graph has {n} vertices, above the exact cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("component of {size} vertices exceeds the {MAX_COMPONENT}-vertex search limit")]
    ComponentTooLarge { size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactOutcome {
    pub solution: Solution,
    /// False when the budget ran out and `solution` is only the best found.
    pub exact: bool,
}

/// Optimal solution of `g`, with all paths of order 4 to 7.
pub fn exact_opt(g: &Graph, cfg: &ExactConfig) -> Result<ExactOutcome, ExactError> {
    if g.n() > cfg.cap {
        return Err(ExactError::CapExceeded {
            n: g.n(),
            cap: cfg.cap,
        });
    }
    let deadline = cfg.budget.map(|b| Instant::now() + b);
    let mut solution = Solution::empty();
    let mut exact = true;
    for comp in g.connected_components() {
        if comp.len() < MIN_ORDER {
            continue;
        }
        if comp.len() > MAX_COMPONENT {
            return Err(ExactError::ComponentTooLarge { size: comp.len() });
        }
        let (part, ok) = solve_component(g, &comp, deadline);
        exact &= ok;
        solution.absorb(part);
    }
    Ok(ExactOutcome { solution, exact })
}

/// Optimal value of `g`; panics if the budget or cap is hit.
pub fn exact_value(g: &Graph, cap: usize) -> usize {
    let out = exact_opt(g, &ExactConfig::with_cap(cap)).expect("within cap");
    assert!(out.exact);
    out.solution.value()
}

// Relabels a component in DFS preorder starting from its lowest vertex.
fn dfs_order(g: &Graph, comp: &[Vertex]) -> Vec<Vertex> {
    let mut seen = HashSet::new();
    let mut order = Vec::with_capacity(comp.len());
    let mut stack = vec![comp[0]];
    while let Some(v) = stack.pop() {
        if !seen.insert(v) {
            continue;
        }
        order.push(v);
        for &w in g.neighbors(v).iter().rev() {
            if !seen.contains(&w) {
                stack.push(w);
            }
        }
    }
    order
}

struct Local {
    adj: Vec<u64>,
    /// `cands[v]`: vertex sets with minimum `v` that carry a 4..7 path.
    cands: Vec<Vec<u64>>,
    witness: HashMap<u64, Vec<usize>>,
}

impl Local {
    fn build(g: &Graph, order: &[Vertex]) -> Local {
        let k = order.len();
        let pos: HashMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![0u64; k];
        for (i, &v) in order.iter().enumerate() {
            for w in g.neighbors(v) {
                adj[i] |= 1 << pos[w];
            }
        }
        // Visit every (vertex set, endpoint) state of simple paths of order at
        // most 7 once; the first path reaching a set is its witness.
        let mut visited: HashSet<(u64, usize)> = HashSet::new();
        let mut witness: HashMap<u64, Vec<usize>> = HashMap::new();
        let mut path = Vec::with_capacity(MAX_ORDER);
        fn grow(
            adj: &[u64],
            mask: u64,
            path: &mut Vec<usize>,
            visited: &mut HashSet<(u64, usize)>,
            witness: &mut HashMap<u64, Vec<usize>>,
        ) {
            let end = *path.last().expect("nonempty");
            if !visited.insert((mask, end)) {
                return;
            }
            if path.len() >= MIN_ORDER {
                witness.entry(mask).or_insert_with(|| path.clone());
            }
            if path.len() == MAX_ORDER {
                return;
            }
            let mut next = adj[end] & !mask;
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                path.push(w);
                grow(adj, mask | 1 << w, path, visited, witness);
                path.pop();
            }
        }
        for s in 0..k {
            path.push(s);
            grow(&adj, 1 << s, &mut path, &mut visited, &mut witness);
            path.pop();
        }
        let mut cands = vec![Vec::new(); k];
        for &mask in witness.keys() {
            cands[mask.trailing_zeros() as usize].push(mask);
        }
        for c in &mut cands {
            // Larger sets first so good solutions appear early.
            c.sort_unstable_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
        }
        Local {
            adj,
            cands,
            witness,
        }
    }
}

struct Search<'a> {
    local: &'a Local,
    memo: HashMap<u64, u32>,
    deadline: Option<Instant>,
    steps: u64,
    expired: bool,
}

impl Search<'_> {
    fn best(&mut self, rem: u64) -> u32 {
        if rem.count_ones() < MIN_ORDER as u32 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&rem) {
            return v;
        }
        self.steps += 1;
        if self.steps.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.expired = true;
                }
            }
        }
        if self.expired {
            return 0;
        }
        let v = rem.trailing_zeros() as usize;
        let rest = rem & !(1 << v);
        let mut best = if rem & self.local.adj[v] == 0 {
            // Isolated in what remains.
            self.best(rest)
        } else {
            let mut b = 0;
            let mut any = false;
            for &mask in &self.local.cands[v] {
                if mask & !rem == 0 {
                    any = true;
                    let got = mask.count_ones() + self.best(rem & !mask);
                    b = b.max(got);
                    if b == rem.count_ones() {
                        break;
                    }
                }
            }
            if !any || b < rem.count_ones() {
                b = b.max(self.best(rest));
            }
            b
        };
        if self.expired {
            best = 0;
        } else {
            self.memo.insert(rem, best);
        }
        best
    }

    fn reconstruct(&mut self, mut rem: u64) -> Vec<u64> {
        let mut chosen = Vec::new();
        while rem.count_ones() >= MIN_ORDER as u32 {
            let target = self.best(rem);
            if target == 0 {
                break;
            }
            let v = rem.trailing_zeros() as usize;
            let rest = rem & !(1 << v);
            let pick = self.local.cands[v]
                .iter()
                .copied()
                .filter(|&m| m & !rem == 0)
                .find(|&m| m.count_ones() + self.best(rem & !m) == target);
            match pick {
                Some(m) => {
                    chosen.push(m);
                    rem &= !m;
                }
                None => rem = rest,
            }
        }
        chosen
    }
}

// Takes the largest available set at the lowest vertex that has one.
fn greedy(local: &Local, k: usize) -> Vec<u64> {
    let mut rem: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut chosen = Vec::new();
    for v in 0..k {
        if rem & (1 << v) == 0 {
            continue;
        }
        if let Some(&m) = local.cands[v].iter().find(|&&m| m & !rem == 0) {
            chosen.push(m);
            rem &= !m;
        }
    }
    chosen
}

fn solve_component(g: &Graph, comp: &[Vertex], deadline: Option<Instant>) -> (Solution, bool) {
    let order = dfs_order(g, comp);
    let k = order.len();
    let local = Local::build(g, &order);
    let full: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut search = Search {
        local: &local,
        memo: HashMap::new(),
        deadline,
        steps: 0,
        expired: false,
    };
    search.best(full);
    let (masks, exact) = if search.expired {
        (greedy(&local, k), false)
    } else {
        (search.reconstruct(full), true)
    };
    let paths = masks
        .iter()
        .map(|m| Path::new(local.witness[m].iter().map(|&i| order[i]).collect()))
        .collect();
    (Solution::new(paths), exact)
}

/// Maximum matching size by exhaustive search. Limited to 10 vertices.
pub fn exact_matching_oracle(g: &Graph) -> Result<usize, ExactError> {
    if g.n() > 10 {
        return Err(ExactError::CapExceeded { n: g.n(), cap: 10 });
    }
    fn go(g: &Graph, free: u32) -> usize {
        if free == 0 {
            return 0;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        let mut best = go(g, rest);
        for &w in g.neighbors(v) {
            if rest & (1 << w) != 0 {
                best = best.max(1 + go(g, rest & !(1 << w)));
            }
        }
        best
    }
    Ok(go(g, (1u32 << g.n()) - 1))
}

/// Largest number of the given vertex sets that can be touched by an edge
/// subset of `g1` with maximum degree 2. Exhaustive; limited to 8 vertices.
pub fn exact_cover_oracle(g1: &Graph, bad: &[Vec<Vertex>]) -> Result<usize, ExactError> {
    if g1.n() > 8 {
        return Err(ExactError::CapExceeded { n: g1.n(), cap: 8 });
    }
    let mut owner = vec![usize::MAX; g1.n()];
    for (i, b) in bad.iter().enumerate() {
        for &v in b {
            owner[v] = i;
        }
    }
    let edges: Vec<_> = g1.edges().collect();
    fn go(
        i: usize,
        edges: &[crate::graph::Edge],
        owner: &[usize],
        deg: &mut [u8],
        hits: &mut [u32],
        weight: usize,
        best: &mut usize,
    ) {
        *best = (*best).max(weight);
        if i == edges.len() {
            return;
        }
        go(i + 1, edges, owner, deg, hits, weight, best);
        let (a, b) = edges[i].ends();
        if deg[a] < 2 && deg[b] < 2 {
            deg[a] += 1;
            deg[b] += 1;
            let mut gained = 0;
            let mut touched = Vec::with_capacity(2);
            for x in [a, b] {
                let o = owner[x];
                if o != usize::MAX && !touched.contains(&o) {
                    touched.push(o);
                    if hits[o] == 0 {
                        gained += 1;
                    }
                    hits[o] += 1;
                }
            }
            go(i + 1, edges, owner, deg, hits, weight + gained, best);
            for o in touched {
                hits[o] -= 1;
            }
            deg[a] -= 1;
            deg[b] -= 1;
        }
    }
    let mut best = 0;
    go(
        0,
        &edges,
        &owner,
        &mut vec![0; g1.n()],
        &mut vec![0; bad.len()],
        0,
        &mut best,
    );
    Ok(best)
}
