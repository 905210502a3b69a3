//! Simple undirected graphs with dense vertex ids.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex set is not connected")]
    NotConnected,
    #[error("vertex {inside} has neighbor {outside} outside the given component")]
    NotAComponent { inside: Vertex, outside: Vertex },
    #[error("empty vertex set")]
    Empty,
}

/// An unordered vertex pair, stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(&self) -> Vertex {
        self.0
    }

    pub fn v(&self) -> Vertex {
        self.1
    }

    pub fn ends(&self) -> (Vertex, Vertex) {
        (self.0, self.1)
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(&self, x: Vertex) -> Option<Vertex> {
        if self.0 == x {
            Some(self.1)
        } else if self.1 == x {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

/// A set of unordered pairs. Iteration through [`EdgeSet::sorted`] is
/// deterministic; membership is hashed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeSet {
    edges: HashSet<Edge>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        self.edges.insert(e)
    }

    pub fn remove(&mut self, e: &Edge) -> bool {
        self.edges.remove(e)
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn sorted(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = self.edges.iter().copied().collect();
        v.sort_unstable();
        v
    }

    /// `V(F)`: all endpoints, sorted.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = self.edges.iter().flat_map(|e| [e.0, e.1]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn is_subgraph_of(&self, g: &Graph) -> bool {
        self.edges.iter().all(|e| g.has_edge(e.0, e.1))
    }

    /// Degree of every vertex of a graph on `n` vertices under this set.
    pub fn degrees(&self, n: usize) -> Vec<usize> {
        let mut d = vec![0; n];
        for e in &self.edges {
            d[e.0] += 1;
            d[e.1] += 1;
        }
        d
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet {
            edges: iter.into_iter().collect(),
        }
    }
}

impl Extend<Edge> for EdgeSet {
    fn extend<I: IntoIterator<Item = Edge>>(&mut self, iter: I) {
        self.edges.extend(iter)
    }
}

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    /// Graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph, rejecting self-loops, parallel edges and bad ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            adj[a].push(b);
            adj[b].push(a);
            m += 1;
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(v.min(w[0]), v.max(w[0])));
            }
        }
        Ok(Graph { adj, m })
    }

    /// Graph spanned by an edge set on `n` vertices.
    pub fn from_edge_set(n: usize, edges: &EdgeSet) -> Result<Self, GraphError> {
        Self::from_edges(n, edges.sorted().into_iter().map(|e| e.ends()))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| Edge(u, v))
        })
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges().collect()
    }

    /// Checks simplicity, symmetry and the edge count.
    pub fn check_invariants(&self) -> bool {
        let n = self.n();
        let mut deg_sum = 0;
        for (v, list) in self.adj.iter().enumerate() {
            deg_sum += list.len();
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &w in list {
                if w == v || w >= n || self.adj[w].binary_search(&v).is_err() {
                    return false;
                }
            }
        }
        deg_sum == 2 * self.m
    }

    /// `G[keep]`. New ids follow the sorted order of `keep`.
    pub fn induced_subgraph(&self, keep: &[Vertex]) -> Result<InducedSubgraph, GraphError> {
        let n = self.n();
        let mut original: Vec<Vertex> = keep.to_vec();
        original.sort_unstable();
        original.dedup();
        let mut local = vec![usize::MAX; n];
        for (i, &v) in original.iter().enumerate() {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            local[v] = i;
        }
        let mut adj = vec![Vec::new(); original.len()];
        let mut m = 0;
        for (i, &v) in original.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != usize::MAX {
                    adj[i].push(j);
                    if i < j {
                        m += 1;
                    }
                }
            }
        }
        Ok(InducedSubgraph {
            graph: Graph { adj, m },
            original,
        })
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Structural tag of a connected component.
    ///
    /// A 3-vertex path is reported as a star centered at its middle vertex,
    /// since it has exactly one vertex of degree at least two.
    pub fn classify_component(&self, comp: &[Vertex]) -> Result<Shape, GraphError> {
        if comp.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = self.n();
        let mut inside = HashSet::with_capacity(comp.len());
        for &v in comp {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            inside.insert(v);
        }
        let mut edges2 = 0;
        for &v in &inside {
            for &w in &self.adj[v] {
                if !inside.contains(&w) {
                    return Err(GraphError::NotAComponent {
                        inside: v,
                        outside: w,
                    });
                }
            }
            edges2 += self.adj[v].len();
        }
        // connectivity inside the set
        let start = comp[0];
        let mut seen = HashSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != inside.len() {
            return Err(GraphError::NotConnected);
        }
        let k = inside.len();
        let m = edges2 / 2;
        Ok(shape_of(k, m, inside.iter().map(|&v| (v, self.adj[v].len()))))
    }
}

fn shape_of(k: usize, m: usize, degrees: impl Iterator<Item = (Vertex, usize)>) -> Shape {
    if k == 1 {
        return Shape::IsolatedVertex;
    }
    if k == 2 {
        return Shape::Edge;
    }
    let degs: Vec<(Vertex, usize)> = degrees.collect();
    let high: Vec<Vertex> = degs.iter().filter(|d| d.1 >= 2).map(|d| d.0).collect();
    if m == k - 1 && high.len() == 1 {
        return Shape::Star { center: high[0] };
    }
    if m == k && degs.iter().all(|d| d.1 == 2) {
        return if k == 3 {
            Shape::Triangle
        } else {
            Shape::Cycle(k)
        };
    }
    if m == k - 1 && degs.iter().all(|d| d.1 <= 2) {
        return Shape::Path(k);
    }
    Shape::Other
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    IsolatedVertex,
    Edge,
    Path(usize),
    Cycle(usize),
    Star { center: Vertex },
    Triangle,
    Other,
}

/// An induced subgraph with its map back to parent ids.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `original[local] = parent id`, increasing.
    pub original: Vec<Vertex>,
}

impl InducedSubgraph {
    pub fn to_original(&self, v: Vertex) -> Vertex {
        self.original[v]
    }

    pub fn to_local(&self, v: Vertex) -> Option<Vertex> {
        self.original.binary_search(&v).ok()
    }
}
