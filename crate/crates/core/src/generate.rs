//! Seeded random instance families.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("{m} edges do not fit in a simple graph on {n} vertices")]
    TooManyEdges { n: usize, m: usize },
    #[error("no {d}-regular graph on {n} vertices")]
    NoRegular { n: usize, d: usize },
    #[error("could not sample a simple {d}-regular graph on {n} vertices")]
    RegularGaveUp { n: usize, d: usize },
    #[error("unknown family {0:?}; expected gnm, regular or planted-paths")]
    UnknownFamily(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Gnm,
    Regular,
    PlantedPaths,
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gnm" => Ok(Family::Gnm),
            "regular" => Ok(Family::Regular),
            "planted-paths" | "planted" => Ok(Family::PlantedPaths),
            other => Err(GenError::UnknownFamily(other.to_string())),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Gnm => "gnm",
            Family::Regular => "regular",
            Family::PlantedPaths => "planted-paths",
        })
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// Pair index k in 0..n(n-1)/2 as (a, b) with a < b, row by row.
fn pair_of(n: usize, mut k: usize) -> (Vertex, Vertex) {
    let mut a = 0;
    while k >= n - 1 - a {
        k -= n - 1 - a;
        a += 1;
    }
    (a, a + 1 + k)
}

/// Uniform graph with `n` vertices and exactly `m` edges.
pub fn gnm(n: usize, m: usize, seed: u64) -> Result<Graph, GenError> {
    let max = n * n.saturating_sub(1) / 2;
    if m > max {
        return Err(GenError::TooManyEdges { n, m });
    }
    let mut r = rng(seed);
    let mut picks = index::sample(&mut r, max.max(1), m.min(max)).into_vec();
    picks.sort_unstable();
    let edges = picks.into_iter().map(|k| pair_of(n, k));
    Ok(Graph::from_edges(n, edges).expect("distinct pairs"))
}

/// Random simple `d`-regular graph by repeated configuration pairing.
pub fn regular(n: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    if (d >= n.max(1) || (n * d) % 2 == 1) && !(n == 0 && d == 0) {
        return Err(GenError::NoRegular { n, d });
    }
    let mut r = rng(seed);
    'attempt: for _ in 0..1000 {
        let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        stubs.shuffle(&mut r);
        let mut edges = BTreeSet::new();
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || !edges.insert((a.min(b), a.max(b))) {
                continue 'attempt;
            }
        }
        return Ok(Graph::from_edges(n, edges).expect("simple"));
    }
    Err(GenError::RegularGaveUp { n, d })
}

/// Disjoint paths of random orders 4 to 7, extra isolated vertices, and
/// `noise` random extra edges, with vertices shuffled. Returns the graph and
/// the number of vertices on planted paths, a lower bound on the optimum.
pub fn planted_paths(paths: usize, extra: usize, noise: usize, seed: u64) -> Result<(Graph, usize), GenError> {
    let mut r = rng(seed);
    let orders: Vec<usize> = (0..paths).map(|_| r.gen_range(4..=7)).collect();
    let planted: usize = orders.iter().sum();
    let n = planted + extra;
    let max = n * n.saturating_sub(1) / 2;
    if planted - paths + noise > max {
        return Err(GenError::TooManyEdges {
            n,
            m: planted - paths + noise,
        });
    }
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(&mut r);
    let mut edges = BTreeSet::new();
    let mut at = 0;
    for k in orders {
        for i in at + 1..at + k {
            let (a, b) = (perm[i - 1], perm[i]);
            edges.insert((a.min(b), a.max(b)));
        }
        at += k;
    }
    let target = edges.len() + noise;
    while edges.len() < target {
        let a = r.gen_range(0..n);
        let b = r.gen_range(0..n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Ok((Graph::from_edges(n, edges).expect("simple"), planted))
}
