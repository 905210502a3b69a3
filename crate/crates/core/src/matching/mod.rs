//! Matchings in general graphs.

mod cardinality;
mod weighted;

pub use cardinality::{check_tutte_berge, max_cardinality_matching, tutte_berge_witness};
pub use weighted::{max_weight_matching, max_weight_perfect_matching, WeightedEdge};

use crate::graph::{Edge, EdgeSet, Graph, Vertex};

/// A set of pairwise disjoint edges, stored as a partner table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<Option<Vertex>>,
    size: usize,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching {
            mate: vec![None; n],
            size: 0,
        }
    }

    /// Builds a matching from a partner table. Panics if the table is not
    /// symmetric.
    pub fn from_mates(mate: Vec<Option<Vertex>>) -> Self {
        let mut size = 0;
        for (v, &w) in mate.iter().enumerate() {
            if let Some(w) = w {
                assert_eq!(mate[w], Some(v), "asymmetric partner table");
                if v < w {
                    size += 1;
                }
            }
        }
        Matching { mate, size }
    }

    /// Builds a matching from edges; `None` if two edges share an endpoint.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Option<Self> {
        let mut m = Matching::empty(n);
        for e in edges {
            if m.mate[e.u()].is_some() || m.mate[e.v()].is_some() {
                return None;
            }
            m.insert(e);
        }
        Some(m)
    }

    pub fn n(&self) -> usize {
        self.mate.len()
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn partner(&self, v: Vertex) -> Option<Vertex> {
        self.mate[v]
    }

    pub fn is_matched(&self, v: Vertex) -> bool {
        self.mate[v].is_some()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.mate[e.u()] == Some(e.v())
    }

    pub fn mates(&self) -> &[Option<Vertex>] {
        &self.mate
    }

    /// Matched edges in increasing order.
    pub fn edges(&self) -> Vec<Edge> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(v, &w)| w.filter(|&w| v < w).map(|w| Edge::new(v, w)))
            .collect()
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges().into_iter().collect()
    }

    /// `|V(M)|`.
    pub fn vertex_count(&self) -> usize {
        2 * self.size
    }

    /// Adds an edge whose endpoints are both free.
    pub fn insert(&mut self, e: Edge) {
        let (a, b) = e.ends();
        assert!(self.mate[a].is_none() && self.mate[b].is_none());
        self.mate[a] = Some(b);
        self.mate[b] = Some(a);
        self.size += 1;
    }

    pub fn remove(&mut self, e: Edge) {
        let (a, b) = e.ends();
        assert_eq!(self.mate[a], Some(b));
        self.mate[a] = None;
        self.mate[b] = None;
        self.size -= 1;
    }

    /// True if every matched pair is an edge of `g` and partners agree.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        self.mate.len() == g.n()
            && self.mate.iter().enumerate().all(|(v, &w)| match w {
                None => true,
                Some(w) => w != v && self.mate[w] == Some(v) && g.has_edge(v, w),
            })
    }
}
