use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Smallest path order allowed in a solution.
pub const MIN_ORDER: usize = 4;
/// Any longer path can be cut into pieces of order between 4 and 7.
pub const MAX_ORDER: usize = 7;

/// An ordered vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path(Vec<Vertex>);

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Self {
        Path(vertices)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.0
    }

    /// Relabels every vertex through `map`.
    pub fn mapped(&self, map: impl Fn(Vertex) -> Vertex) -> Path {
        Path(self.0.iter().map(|&v| map(v)).collect())
    }

    pub fn is_path_in(&self, g: &Graph) -> bool {
        let mut seen = std::collections::HashSet::new();
        !self.0.is_empty()
            && self.0.iter().all(|&v| v < g.n() && seen.insert(v))
            && self.0.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("path of order {0} is shorter than {MIN_ORDER}")]
pub struct TooShort(pub usize);

/// Cuts a path into contiguous pieces whose orders all lie in `[4, 7]`,
/// using the fewest pieces (`ceil(|p| / 7)`), sized as evenly as possible.
pub fn split_long_path(p: &Path) -> Result<Vec<Path>, TooShort> {
    let n = p.order();
    if n < MIN_ORDER {
        return Err(TooShort(n));
    }
    let pieces = n.div_ceil(MAX_ORDER);
    let base = n / pieces;
    let extra = n % pieces;
    let mut out = Vec::with_capacity(pieces);
    let mut at = 0;
    for i in 0..pieces {
        let len = base + usize::from(i < extra);
        out.push(Path(p.0[at..at + len].to_vec()));
        at += len;
    }
    Ok(out)
}

/// Vertex-disjoint paths with their total vertex count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solution {
    paths: Vec<Path>,
    value: usize,
}

impl Solution {
    pub fn new(paths: Vec<Path>) -> Self {
        let value = paths.iter().map(Path::order).sum();
        Solution { paths, value }
    }

    /// A solution with a claimed value, as read from a file. Nothing is
    /// checked; run [`verify_solution`].
    pub fn with_claimed_value(paths: Vec<Path>, value: usize) -> Self {
        Solution { paths, value }
    }

    pub fn empty() -> Self {
        Solution::default()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn value(&self) -> usize {
        self.value
    }

    pub fn into_paths(self) -> Vec<Path> {
        self.paths
    }

    /// Adds the paths of `other`.
    pub fn absorb(&mut self, other: Solution) {
        self.value += other.value;
        self.paths.extend(other.paths);
    }

    pub fn push(&mut self, p: Path) {
        self.value += p.order();
        self.paths.push(p);
    }

    /// Splits every path longer than seven.
    pub fn normalized(self) -> Solution {
        let mut paths = Vec::with_capacity(self.paths.len());
        for p in self.paths {
            if p.order() > MAX_ORDER {
                paths.extend(split_long_path(&p).expect("long path"));
            } else {
                paths.push(p);
            }
        }
        Solution::new(paths)
    }

    pub fn mapped(&self, map: impl Fn(Vertex) -> Vertex) -> Solution {
        Solution {
            paths: self.paths.iter().map(|p| p.mapped(&map)).collect(),
            value: self.value,
        }
    }

    /// Canonical form for comparisons: paths oriented and sorted.
    pub fn canonical(&self) -> Vec<Vec<Vertex>> {
        let mut out: Vec<Vec<Vertex>> = self
            .paths
            .iter()
            .map(|p| {
                let mut v = p.0.clone();
                if v.first() > v.last() {
                    v.reverse();
                }
                v
            })
            .collect();
        out.sort();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionProblem {
    PathTooShort { path: usize, order: usize },
    VertexOutOfRange { path: usize, vertex: Vertex },
    NotAnEdge { path: usize, u: Vertex, v: Vertex },
    RepeatedVertex { path: usize, vertex: Vertex },
    SharedVertex { vertex: Vertex, first: usize, second: usize },
    ValueMismatch { claimed: usize, actual: usize },
}

impl fmt::Display for SolutionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionProblem::PathTooShort { path, order } => {
                write!(f, "path {path} has order {order} < {MIN_ORDER}")
            }
            SolutionProblem::VertexOutOfRange { path, vertex } => {
                write!(f, "path {path} uses unknown vertex {vertex}")
            }
            SolutionProblem::NotAnEdge { path, u, v } => {
                write!(f, "path {path} steps along non-edge {{{u}, {v}}}")
            }
            SolutionProblem::RepeatedVertex { path, vertex } => {
                write!(f, "path {path} visits vertex {vertex} twice")
            }
            SolutionProblem::SharedVertex { vertex, first, second } => {
                write!(f, "vertex {vertex} lies on paths {first} and {second}")
            }
            SolutionProblem::ValueMismatch { claimed, actual } => {
                write!(f, "claimed value {claimed} but paths cover {actual} vertices")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub problems: Vec<SolutionProblem>,
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Checks a solution against `g` without trusting how it was produced.
pub fn verify_solution(g: &Graph, s: &Solution) -> Verification {
    let mut problems = Vec::new();
    let mut owner: HashMap<Vertex, usize> = HashMap::new();
    let mut actual = 0;
    for (i, p) in s.paths.iter().enumerate() {
        actual += p.order();
        if p.order() < MIN_ORDER {
            problems.push(SolutionProblem::PathTooShort {
                path: i,
                order: p.order(),
            });
        }
        for &v in &p.0 {
            if v >= g.n() {
                problems.push(SolutionProblem::VertexOutOfRange { path: i, vertex: v });
                continue;
            }
            match owner.insert(v, i) {
                Some(j) if j == i => {
                    problems.push(SolutionProblem::RepeatedVertex { path: i, vertex: v })
                }
                Some(j) => problems.push(SolutionProblem::SharedVertex {
                    vertex: v,
                    first: j,
                    second: i,
                }),
                None => {}
            }
        }
        for w in p.0.windows(2) {
            if w[0] < g.n() && w[1] < g.n() && !g.has_edge(w[0], w[1]) {
                problems.push(SolutionProblem::NotAnEdge {
                    path: i,
                    u: w[0],
                    v: w[1],
                });
            }
        }
    }
    if actual != s.value {
        problems.push(SolutionProblem::ValueMismatch {
            claimed: s.value,
            actual,
        });
    }
    Verification { problems }
}
