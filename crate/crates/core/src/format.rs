//! Text graph files, solution JSON, and overlay dumps.
//!
//! Graph files use 1-based labels:
//!
//! ```text
//! c optional comment
//! p <n> <m>
//! e <u> <v>      (exactly m lines)
//! ```
//!
//! Overlay dumps append `m <u> <v>` (matching) and `d <u> <v>` (cover) lines
//! after the edges of a graph.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, EdgeSet, Graph, Vertex};
use crate::solution::{Path, Solution};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing `p <n> <m>` header")]
    MissingHeader,
    #[error("line {line}: vertex {vertex} outside 1..={n}")]
    InvalidVertex { line: usize, vertex: usize, n: usize },
    #[error("line {line}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("header announces {expected} edges but {found} were given")]
    EdgeCount { expected: usize, found: usize },
    #[error("solution JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl FormatError {
    /// Line the error refers to, when there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            FormatError::Parse { line, .. }
            | FormatError::InvalidVertex { line, .. }
            | FormatError::DuplicateEdge { line, .. }
            | FormatError::SelfLoop { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// A graph file together with any overlay edge sets.
#[derive(Clone, Debug)]
pub struct Dump {
    pub graph: Graph,
    pub matching: EdgeSet,
    pub cover: EdgeSet,
}

/// Parses a graph file. Overlay lines are rejected.
pub fn load_graph(text: &str) -> Result<Graph, FormatError> {
    let dump = parse(text, false)?;
    Ok(dump.graph)
}

/// Parses a graph file that may carry `m` and `d` overlay lines.
pub fn load_dump(text: &str) -> Result<Dump, FormatError> {
    parse(text, true)
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, FormatError> {
    let tok = tok.ok_or_else(|| FormatError::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| FormatError::Parse {
        line,
        message: format!("bad {what} `{tok}`"),
    })
}

fn parse(text: &str, overlays: bool) -> Result<Dump, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut seen: HashSet<Edge> = HashSet::new();
    let mut matching = EdgeSet::new();
    let mut cover = EdgeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(FormatError::Parse {
                        line,
                        message: "second header".into(),
                    });
                }
                let n = parse_usize(toks.next(), line, "vertex count")?;
                let m = parse_usize(toks.next(), line, "edge count")?;
                header = Some((n, m));
            }
            "e" | "m" | "d" => {
                if kind != "e" && !overlays {
                    return Err(FormatError::Parse {
                        line,
                        message: format!("unexpected `{kind}` line"),
                    });
                }
                let (n, _) = header.ok_or(FormatError::MissingHeader)?;
                let u = parse_usize(toks.next(), line, "vertex")?;
                let v = parse_usize(toks.next(), line, "vertex")?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(FormatError::InvalidVertex { line, vertex: x, n });
                    }
                }
                if u == v {
                    return Err(FormatError::SelfLoop { line, vertex: u });
                }
                let e = Edge::new(u - 1, v - 1);
                match kind {
                    "e" => {
                        if !seen.insert(e) {
                            return Err(FormatError::DuplicateEdge { line, u, v });
                        }
                        edges.push(e.ends());
                    }
                    "m" => {
                        matching.insert(e);
                    }
                    _ => {
                        cover.insert(e);
                    }
                }
            }
            other => {
                return Err(FormatError::Parse {
                    line,
                    message: format!("unknown line type `{other}`"),
                })
            }
        }
        if toks.next().is_some() {
            return Err(FormatError::Parse {
                line,
                message: "trailing tokens".into(),
            });
        }
    }
    let (n, m) = header.ok_or(FormatError::MissingHeader)?;
    if edges.len() != m {
        return Err(FormatError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    let graph = Graph::from_edges(n, edges).expect("edges validated while parsing");
    debug_assert!(graph.check_invariants());
    Ok(Dump {
        graph,
        matching,
        cover,
    })
}

/// Writes `g` in the graph file format.
pub fn dump_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 1));
    writeln!(out, "p {} {}", g.n(), g.m()).unwrap();
    for e in g.edges() {
        writeln!(out, "e {} {}", e.u() + 1, e.v() + 1).unwrap();
    }
    out
}

/// Graph file plus `m` lines for `matching` and `d` lines for `cover`.
pub fn dump_with_overlays(g: &Graph, matching: &EdgeSet, cover: &EdgeSet) -> String {
    let mut out = dump_graph(g);
    for e in matching.sorted() {
        writeln!(out, "m {} {}", e.u() + 1, e.v() + 1).unwrap();
    }
    for e in cover.sorted() {
        writeln!(out, "d {} {}", e.u() + 1, e.v() + 1).unwrap();
    }
    out
}

#[derive(Serialize, Deserialize)]
struct SolutionFile {
    value: usize,
    paths: Vec<Vec<usize>>,
}

/// Solution JSON with 1-based labels.
pub fn solution_to_json(s: &Solution) -> String {
    let file = SolutionFile {
        value: s.value(),
        paths: s
            .paths()
            .iter()
            .map(|p| p.vertices().iter().map(|v| v + 1).collect())
            .collect(),
    };
    serde_json::to_string(&file).expect("plain data")
}

/// Reads solution JSON. The claimed value is kept as-is for verification.
pub fn solution_from_json(text: &str) -> Result<Solution, FormatError> {
    let file: SolutionFile = serde_json::from_str(text)?;
    let mut paths = Vec::with_capacity(file.paths.len());
    for p in file.paths {
        if p.contains(&0) {
            return Err(FormatError::Parse {
                line: 1,
                message: "vertex label 0 in solution (labels are 1-based)".into(),
            });
        }
        paths.push(Path::new(p.into_iter().map(|v| v - 1).collect()));
    }
    Ok(Solution::with_claimed_value(paths, file.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_small_files() {
        let g = load_graph("p 2 1\ne 1 2\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        let tri = load_graph("c triangle\np 3 3\ne 1 2\ne 2 3\nc mid\ne 1 3\n").unwrap();
        assert_eq!(tri.m(), 3);
        assert!(tri.has_edge(0, 2));
    }

    #[test]
    fn rejects_bad_files() {
        let dup = load_graph("p 3 2\ne 1 2\ne 1 2\n").unwrap_err();
        assert!(matches!(dup, FormatError::DuplicateEdge { line: 3, .. }));
        let rev = load_graph("p 3 2\ne 1 2\ne 2 1\n").unwrap_err();
        assert!(matches!(rev, FormatError::DuplicateEdge { line: 3, .. }));
        assert!(matches!(
            load_graph("p 3 1\ne 2 2\n").unwrap_err(),
            FormatError::SelfLoop { line: 2, vertex: 2 }
        ));
        assert!(matches!(
            load_graph("p 3 1\ne 1 4\n").unwrap_err(),
            FormatError::InvalidVertex { line: 2, vertex: 4, .. }
        ));
        assert!(matches!(
            load_graph("p 3 1\ne 0 1\n").unwrap_err(),
            FormatError::InvalidVertex { vertex: 0, .. }
        ));
        assert!(matches!(
            load_graph("e 1 2\n").unwrap_err(),
            FormatError::MissingHeader
        ));
        assert!(matches!(
            load_graph("p 3 2\ne 1 2\n").unwrap_err(),
            FormatError::EdgeCount { expected: 2, found: 1 }
        ));
        assert!(matches!(
            load_graph("p 3 1\ne 1 x\n").unwrap_err(),
            FormatError::Parse { line: 2, .. }
        ));
        assert!(load_graph("p 3 1\ne 1 2\nm 1 2\n").is_err());
    }

    #[test]
    fn overlay_dump_loads_back() {
        let g = load_graph("p 4 3\ne 1 2\ne 2 3\ne 3 4\n").unwrap();
        let m: EdgeSet = [Edge::new(0, 1), Edge::new(2, 3)].into_iter().collect();
        let c: EdgeSet = [Edge::new(1, 2)].into_iter().collect();
        let text = dump_with_overlays(&g, &m, &c);
        let d = load_dump(&text).unwrap();
        assert_eq!(d.graph, g);
        assert_eq!(d.matching, m);
        assert_eq!(d.cover, c);
    }

    #[test]
    fn solution_json_uses_one_based_labels() {
        let s = Solution::new(vec![Path::new(vec![0, 1, 2, 3])]);
        let text = solution_to_json(&s);
        assert_eq!(text, r#"{"value":4,"paths":[[1,2,3,4]]}"#);
        assert_eq!(solution_from_json(&text).unwrap(), s);
        let empty = solution_from_json(r#"{"value":0,"paths":[]}"#).unwrap();
        assert_eq!(empty.value(), 0);
    }
}
