// Maximum cardinality matching: Edmonds' blossom search from each free
// vertex, starting from a greedy matching.

use std::collections::VecDeque;

use super::Matching;
use crate::graph::{Graph, Vertex};

const NONE: usize = usize::MAX;

struct Search {
    parent: Vec<usize>,
    base: Vec<usize>,
    outer: Vec<bool>,
    in_blossom: Vec<bool>,
    seen: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Search {
    fn new(n: usize) -> Self {
        Search {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            outer: vec![false; n],
            in_blossom: vec![false; n],
            seen: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn reset(&mut self) {
        self.parent.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.outer.fill(false);
        self.queue.clear();
    }

    /// Lowest common base of `a` and `b` in the alternating forest, or
    /// `None` when they hang off different roots.
    fn lca(&mut self, mate: &[usize], mut a: usize, mut b: usize) -> Option<usize> {
        self.seen.fill(false);
        loop {
            a = self.base[a];
            self.seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base[b];
            if self.seen[b] {
                return Some(b);
            }
            if mate[b] == NONE {
                return None;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    fn contract(&mut self, mate: &[usize], v: usize, to: usize, lca: usize) {
        self.in_blossom.fill(false);
        self.mark_path(mate, v, lca, to);
        self.mark_path(mate, to, lca, v);
        for i in 0..self.base.len() {
            if self.in_blossom[self.base[i]] {
                self.base[i] = lca;
                if !self.outer[i] {
                    self.outer[i] = true;
                    self.queue.push_back(i);
                }
            }
        }
    }

    /// Grows an alternating tree from `root`; returns the free endpoint of
    /// an augmenting path if one is found.
    fn augmenting_path(&mut self, g: &Graph, mate: &[usize], root: usize) -> Option<usize> {
        self.reset();
        self.outer[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in g.neighbors(v) {
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let cur = self.lca(mate, v, to).expect("single tree");
                    self.contract(mate, v, to, cur);
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        return Some(to);
                    }
                    self.outer[mate[to]] = true;
                    self.queue.push_back(mate[to]);
                }
            }
        }
        None
    }

    /// Grows the forest rooted at every free vertex at once and returns the
    /// outer vertices, or `None` if an augmenting path shows up.
    fn outer_vertices(&mut self, g: &Graph, mate: &[usize]) -> Option<Vec<bool>> {
        self.reset();
        for v in 0..g.n() {
            if mate[v] == NONE {
                self.outer[v] = true;
                self.queue.push_back(v);
            }
        }
        while let Some(v) = self.queue.pop_front() {
            for &to in g.neighbors(v) {
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if mate[to] == NONE || (self.parent[mate[to]] != NONE) {
                    let cur = self.lca(mate, v, to)?;
                    self.contract(mate, v, to, cur);
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    self.outer[mate[to]] = true;
                    self.queue.push_back(mate[to]);
                }
            }
        }
        Some(self.outer.clone())
    }
}

fn mate_table(m: &Matching) -> Vec<usize> {
    m.mates().iter().map(|w| w.unwrap_or(NONE)).collect()
}

/// A maximum matching of `g`.
pub fn max_cardinality_matching(g: &Graph) -> Matching {
    let n = g.n();
    let mut mate = vec![NONE; n];
    for v in 0..n {
        if mate[v] != NONE {
            continue;
        }
        if let Some(&w) = g.neighbors(v).iter().find(|&&w| mate[w] == NONE) {
            mate[v] = w;
            mate[w] = v;
        }
    }
    let mut search = Search::new(n);
    for root in 0..n {
        if mate[root] != NONE {
            continue;
        }
        if let Some(end) = search.augmenting_path(g, &mate, root) {
            let mut v = end;
            while v != NONE {
                let pv = search.parent[v];
                let next = mate[pv];
                mate[v] = pv;
                mate[pv] = v;
                v = next;
            }
        }
    }
    let m = Matching::from_mates(mate.into_iter().map(|w| (w != NONE).then_some(w)).collect());
    debug_assert!(m.is_valid_in(g));
    m
}

/// A Tutte-Berge set `U` certifying that `m` is maximum, i.e.
/// `2|M| = n + |U| - odd(G - U)`. Returns `None` when `m` admits an
/// augmenting path.
pub fn tutte_berge_witness(g: &Graph, m: &Matching) -> Option<Vec<Vertex>> {
    let mate = mate_table(m);
    let mut search = Search::new(g.n());
    let outer = search.outer_vertices(g, &mate)?;
    let mut in_u = vec![false; g.n()];
    for v in 0..g.n() {
        if outer[v] {
            for &w in g.neighbors(v) {
                if !outer[w] {
                    in_u[w] = true;
                }
            }
        }
    }
    Some((0..g.n()).filter(|&v| in_u[v]).collect())
}

/// Checks the Tutte-Berge equality for `m` and the set `u`. Independent of
/// how either was produced.
pub fn check_tutte_berge(g: &Graph, m: &Matching, u: &[Vertex]) -> bool {
    if !m.is_valid_in(g) {
        return false;
    }
    let mut removed = vec![false; g.n()];
    for &v in u {
        removed[v] = true;
    }
    let keep: Vec<Vertex> = (0..g.n()).filter(|&v| !removed[v]).collect();
    let rest = g.induced_subgraph(&keep).expect("ids in range");
    let odd = rest
        .graph
        .connected_components()
        .iter()
        .filter(|c| c.len() % 2 == 1)
        .count();
    2 * m.len() + odd == g.n() + u.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, e).unwrap()
    }

    #[test]
    fn small_cases() {
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(max_cardinality_matching(&p4).len(), 2);
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(max_cardinality_matching(&tri).len(), 1);
        assert_eq!(max_cardinality_matching(&Graph::empty(5)).len(), 0);
        assert_eq!(max_cardinality_matching(&petersen()).len(), 5);
    }

    #[test]
    fn greedy_trap_needs_augmentation() {
        // Greedy matches 1-2 first on the path 0-1-2-3.
        let g = Graph::from_edges(4, [(1, 2), (0, 1), (2, 3)]).unwrap();
        let m = max_cardinality_matching(&g);
        assert_eq!(m.len(), 2);
        let u = tutte_berge_witness(&g, &m).unwrap();
        assert!(check_tutte_berge(&g, &m, &u));
    }

    #[test]
    fn blossom_contraction() {
        // 5-cycle with a pendant on vertex 0 and another one on vertex 2.
        let g = Graph::from_edges(
            7,
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (2, 6)],
        )
        .unwrap();
        let m = max_cardinality_matching(&g);
        assert_eq!(m.len(), 3);
        let u = tutte_berge_witness(&g, &m).unwrap();
        assert!(check_tutte_berge(&g, &m, &u));
    }

    #[test]
    fn witness_rejects_non_maximum() {
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let m = Matching::from_edges(4, [crate::graph::Edge::new(1, 2)]).unwrap();
        assert!(tutte_berge_witness(&p4, &m).is_none());
        assert!(!check_tutte_berge(&p4, &m, &[]));
    }
}
