//! The full algorithm, one level at a time.
//!
//! A level grows `H` from a maximum matching, computes and prunes the cover
//! `C`, runs the rescue loop and takes the census. Either it outputs an
//! optimal solution of every component of `𝒦`, or it keeps a 5+-path
//! `P_v` for each critical 2-anchor `v` and continues on
//! `G_c = G - (R_c ∪ U_c)`. Small graphs are solved exactly.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;

use crate::components::{Analysis, Census, ComponentSummary, Frame};
use crate::cover::run_cover;
use crate::exact::{exact_opt, ExactConfig};
use crate::graph::{Graph, Vertex};
use crate::phase1::Workspace;
use crate::ratio::exceeds_five_sevenths_r;
use crate::rescue::{run_rescue_loop, MoveRecord};
use crate::solution::{verify_solution, Path, Solution};

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Graphs with at most this many vertices are solved exactly.
    pub base_case: usize,
    /// Collect human-readable trace lines.
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            base_case: 8,
            trace: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Solved by the exact search.
    Exact,
    /// Output the optimal solutions of the components.
    OutputComponents,
    /// Keep the `P_v` paths and continue on `G_c`.
    Recurse,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PhaseTimes {
    pub phase1_ms: f64,
    pub cover_ms: f64,
    pub rescue_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub depth: usize,
    pub n: usize,
    pub m: usize,
    /// Input vertex of each vertex of this level's graph.
    #[serde(skip)]
    pub original: Vec<Vertex>,
    pub branch: Branch,
    /// `|V(M)|`.
    pub matching_vertices: usize,
    /// `|V(M_C)|`.
    pub mc_vertices: usize,
    pub cover_weight: usize,
    pub moves: Vec<MoveRecord>,
    pub census: Census,
    pub components: Vec<ComponentSummary>,
    /// `R_c ∪ U_c` as input vertices.
    pub removed: Vec<Vertex>,
    /// Vertices covered by the paths this level outputs.
    pub value: usize,
    pub audits: Vec<String>,
    pub times: PhaseTimes,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: Solution,
    pub levels: Vec<LevelReport>,
    pub trace: Vec<String>,
}

impl SolveReport {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn move_count(&self) -> usize {
        self.levels.iter().map(|l| l.moves.len()).sum()
    }

    /// Moves that left `n0 + ncc - 3 nc` unchanged.
    pub fn stalled_moves(&self) -> usize {
        self.levels.iter().flat_map(|l| &l.moves).filter(|r| r.stalled()).count()
    }

    pub fn audits(&self) -> Vec<String> {
        self.levels
            .iter()
            .flat_map(|l| l.audits.iter().map(move |a| format!("level {}: {a}", l.depth)))
            .collect()
    }
}

/// Approximate solution of `g`.
pub fn solve(g: &Graph) -> Solution {
    solve_with_report(g, &SolverConfig::default()).solution
}

pub fn solve_with_report(g: &Graph, cfg: &SolverConfig) -> SolveReport {
    let mut solution = Solution::empty();
    let mut levels = Vec::new();
    let mut trace = Vec::new();
    let mut cur = g.clone();
    let mut original: Vec<Vertex> = (0..g.n()).collect();
    loop {
        let depth = levels.len();
        let (report, paths, next) = run_level(&cur, &original, depth, cfg, &mut trace);
        for p in paths {
            solution.push(p.mapped(|v| original[v]));
        }
        levels.push(report);
        match next {
            Some((graph, keep)) => {
                original = keep.iter().map(|&v| original[v]).collect();
                cur = graph;
            }
            None => break,
        }
    }
    let solution = solution.normalized();
    SolveReport {
        solution,
        levels,
        trace,
    }
}

/// The top level of `solve` run through the full pipeline regardless of
/// size, for inspecting the census of small graphs.
pub fn first_level(g: &Graph) -> LevelReport {
    let cfg = SolverConfig {
        base_case: 0,
        trace: false,
    };
    let original: Vec<Vertex> = (0..g.n()).collect();
    run_level(g, &original, 0, &cfg, &mut Vec::new()).0
}

type Next = Option<(Graph, Vec<Vertex>)>;

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn run_level(
    g: &Graph,
    original: &[Vertex],
    depth: usize,
    cfg: &SolverConfig,
    trace: &mut Vec<String>,
) -> (LevelReport, Vec<Path>, Next) {
    let start = Instant::now();
    let mut report = LevelReport {
        depth,
        n: g.n(),
        m: g.m(),
        original: original.to_vec(),
        branch: Branch::Exact,
        matching_vertices: 0,
        mc_vertices: 0,
        cover_weight: 0,
        moves: Vec::new(),
        census: Census::default(),
        components: Vec::new(),
        removed: Vec::new(),
        value: 0,
        audits: Vec::new(),
        times: PhaseTimes::default(),
    };
    if g.n() <= cfg.base_case {
        let out = exact_opt(g, &ExactConfig::with_cap(cfg.base_case)).expect("within the base case");
        let paths = out.solution.into_paths();
        report.value = paths.iter().map(Path::order).sum();
        report.times.total_ms = ms(start);
        if cfg.trace {
            trace.push(format!("level {depth}: n={} exact value {}", g.n(), report.value));
        }
        return (report, paths, None);
    }

    let t = Instant::now();
    let (ws, _) = Workspace::run(g);
    let hs = ws.components();
    report.audits.extend(ws.verify_structure());
    report.matching_vertices = 2 * ws.matching().len();
    report.times.phase1_ms = ms(t);

    let t = Instant::now();
    let stage = run_cover(&ws, &hs);
    report.mc_vertices = 2 * stage.mc.len();
    report.cover_weight = stage.cover.weight;
    report.times.cover_ms = ms(t);

    let t = Instant::now();
    let frame = Frame::new(&ws, hs);
    let out = run_rescue_loop(&frame, &stage.instance, stage.cover.edges.clone());
    report.times.rescue_ms = ms(t);
    report.audits.extend(out.audits.iter().cloned());
    if cfg.trace {
        trace.push(format!(
            "level {depth}: n={} m={} |V(M)|={} weight={} |V(M_C)|={}",
            g.n(),
            g.m(),
            report.matching_vertices,
            report.cover_weight,
            report.mc_vertices
        ));
        trace.extend(out.moves.iter().map(|r| format!("level {depth}: {r}")));
    }
    let an = &out.analysis;
    report.audits.extend(ratio_audit(an));
    let census = an.census();
    report.components = an.summaries(&frame);
    report.moves = out.moves.clone();

    let output = census.b == 0 || exceeds_five_sevenths_r(census.a, census.b);
    let (paths, next) = if output {
        report.branch = Branch::OutputComponents;
        let paths: Vec<Path> = an
            .comps
            .iter()
            .flat_map(|k| k.solution().paths().iter().cloned())
            .collect();
        (paths, None)
    } else {
        report.branch = Branch::Recurse;
        let (paths, removed) = recurse_parts(&frame, an, &mut report.audits);
        report.removed = removed.iter().map(|&v| original[v]).collect();
        let removed_set: BTreeSet<Vertex> = removed.into_iter().collect();
        let keep: Vec<Vertex> = (0..g.n()).filter(|v| !removed_set.contains(v)).collect();
        let sub = g.induced_subgraph(&keep).expect("valid vertex set");
        (paths, Some((sub.graph, sub.original)))
    };
    let level_solution = Solution::new(paths.clone());
    let check = verify_solution(g, &level_solution);
    report
        .audits
        .extend(check.problems.iter().map(|p| format!("level solution: {p}")));
    report.value = level_solution.value();
    report.census = census;
    if cfg.trace {
        trace.push(format!(
            "level {depth}: A={} B={} -> {:?}, value {}",
            report.census.a, report.census.b, report.branch, report.value
        ));
    }
    report.times.total_ms = ms(start);
    (report, paths, next)
}

// The P_v paths of the critical 2-anchors and the vertex set R_c ∪ U_c.
fn recurse_parts(frame: &Frame<'_>, an: &Analysis, audits: &mut Vec<String>) -> (Vec<Path>, Vec<Vertex>) {
    let r_c = an.r_c();
    let u_c = an.u_c(frame);
    let mut paths = Vec::new();
    let mut used = BTreeSet::new();
    for (ci, k) in an.comps.iter().enumerate() {
        if !k.critical {
            continue;
        }
        for v in k.two_anchors() {
            let p = an.p_path(frame, ci, v);
            if !(5..=7).contains(&p.order()) {
                audits.push(format!("P_{v} has order {}", p.order()));
            }
            for &x in p.vertices() {
                if x != v && !u_c.contains(&x) {
                    audits.push(format!("P_{v} uses {x} outside U_c"));
                }
                if !used.insert(x) {
                    audits.push(format!("P_{v} reuses {x}"));
                }
            }
            paths.push(p);
        }
    }
    let mut removed: Vec<Vertex> = r_c.union(&u_c).copied().collect();
    removed.sort_unstable();
    if removed.is_empty() {
        audits.push("recursion branch with empty R_c ∪ U_c".to_string());
    }
    (paths, removed)
}

/// Bounds on `(s, value)` by the number `i` of `R`-vertices in a component
/// and its criticality: some fraction `a/b` of the list must satisfy
/// `s <= a` and `value >= b`.
fn ratio_bounds(i: usize, critical: bool) -> &'static [(usize, usize)] {
    match (i, critical) {
        (1, true) => &[(8, 5), (10, 7)],
        (1, false) => &[(6, 5), (8, 7), (10, 8), (12, 10), (14, 12), (16, 13)],
        (2, true) => &[(16, 12), (18, 13), (14, 11)],
        (2, false) => &[(6, 6), (12, 10), (14, 12), (16, 13), (18, 15)],
        (3, _) => &[(18, 15), (20, 17), (12, 11)],
        (4, _) => &[(22, 20)],
        (5, _) => &[(24, 25)],
        _ => &[],
    }
}

/// Checks every component of `𝒦` against the `(s, opt)` table.
pub fn ratio_audit(an: &Analysis) -> Vec<String> {
    let r = an.r_set();
    let mut out = Vec::new();
    for k in &an.comps {
        let i = k.vertices.iter().filter(|v| r.contains(v)).count();
        let value = k.value();
        let ok = match i {
            0 => !k.critical && 11 * k.s < 14 * value,
            1..=5 => {
                (!k.critical || i <= 2)
                    && ratio_bounds(i, k.critical)
                        .iter()
                        .any(|&(a, b)| k.s <= a && value >= b)
            }
            _ => false,
        };
        if !ok {
            out.push(format!(
                "component at {:?} with {i} vertices in R{} has s = {}, value = {value}",
                k.vertices,
                if k.critical { ", critical" } else { "" },
                k.s
            ));
        }
    }
    out
}
