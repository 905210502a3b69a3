//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Tolerances and corpus sizes are fixed below.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use pathcover::components::{analyze, Frame, Location, OptCache};
use pathcover::cover::{build_factor_instance, extract_and_prune_cover, run_cover, solve_max_weight_fg_factor, SaturationInstance};
use pathcover::exact::{exact_cover_oracle, exact_matching_oracle, exact_value};
use pathcover::generate::{self, gnm};
use pathcover::graph::{Edge, EdgeSet, Graph, Vertex};
use pathcover::matching::{max_cardinality_matching, Matching};
use pathcover::phase1::Workspace;
use pathcover::ratio::{at_least_four_fifths, within_ratio};
use pathcover::rescue::{MoveKind, MoveRecord, RescueState};
use pathcover::solver::SolveReport;
use pathcover::{solve_with_report, verify_solution, SolverConfig};
use rand::Rng;

const CORPUS: usize = 2000;
const CORPUS_SEED: u64 = 20_000;
const N_RANGE: std::ops::RangeInclusive<usize> = 5..=12;
const DENSITIES: [f64; 7] = [0.1, 0.2, 0.3, 0.45, 0.6, 0.8, 1.0];
// Sparse graphs reach the rescue loop and the recursion far more often.
const SPARSE: usize = 3000;
const SPARSE_N: std::ops::RangeInclusive<usize> = 8..=14;
const EXACT_CAP: usize = 14;
// Sparse instances found by a wider release run (n in 10..=60) where the only
// applicable move is an Op2 next to a star center, which leaves
// `n0 + ncc - 3 nc` unchanged. Kept as (n, m, gnm seed).
const STALLS: [(usize, usize, u64); 16] = [
    (46, 61, 17652017402206425441),
    (50, 44, 7271164031912182581),
    (36, 37, 2469080899448950580),
    (59, 67, 17116486891580445136),
    (36, 40, 8031940533940452387),
    (18, 17, 8360896804676902156),
    (34, 29, 16805397310078374212),
    (40, 38, 3063845890980843483),
    (33, 26, 3162573317776297717),
    (56, 45, 1594460564129279931),
    (44, 50, 7653396409570301413),
    (50, 44, 6114875979799519943),
    (26, 24, 15819992043225522534),
    (44, 50, 9692691945750657343),
    (33, 29, 2724908932639821019),
    (53, 44, 5762316714341219253),
];
const CORPUS_BUDGET: Duration = Duration::from_secs(600);
const FACTOR_CASES: usize = 600;
const MATCHING_CASES: usize = 600;
const COMPONENT_CAP: usize = 14;
const SCALE_N: usize = 2000;
const SCALE_M: usize = 6000;
const SCALE_BUDGET: Duration = Duration::from_secs(60);

struct Line {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn corpus_instance(i: usize) -> Graph {
    let span = N_RANGE.end() - N_RANGE.start() + 1;
    let n = N_RANGE.start() + i % span;
    let p = DENSITIES[(i / span) % DENSITIES.len()];
    let max = n * (n - 1) / 2;
    let m = ((p * max as f64).round() as usize).min(max);
    gnm(n, m, CORPUS_SEED + i as u64).expect("m fits")
}

fn sparse_instance(i: usize) -> Graph {
    let mut r = generate::rng(CORPUS_SEED + (CORPUS + i) as u64);
    let n = r.gen_range(SPARSE_N);
    let m = r.gen_range(n - 2..=n + 2);
    gnm(n, m, r.gen()).expect("m fits")
}

/// Everything one corpus instance contributes.
#[derive(Default)]
struct Outcome {
    ratio: Vec<String>,
    matching_bound: Vec<String>,
    mc_bound: Vec<String>,
    structure: Vec<String>,
    potential: Vec<String>,
    stalls: Vec<String>,
    stalled_op2: usize,
    weighted: Vec<String>,
    moves: usize,
    components_checked: usize,
    component: Vec<String>,
    recursions: usize,
    recursion_bound: Vec<String>,
    worst: (usize, usize),
}

fn check_move(r: &MoveRecord, label: &str, out: &mut Outcome) {
    if r.stalled() {
        out.stalls.push(format!("{label}: {r}"));
        out.stalled_op2 += usize::from(r.mv.kind == MoveKind::Op2);
    }
    if r.after.weighted() >= r.before.weighted() {
        out.weighted.push(format!("{label}: {r}"));
    }
}

fn check_report(g: &Graph, opt: Option<usize>, label: &str, rep: &SolveReport, out: &mut Outcome) {
    let alg = rep.solution.value();
    let v = verify_solution(g, &rep.solution);
    if !v.is_valid() {
        out.ratio.push(format!("{label}: invalid solution {:?}", v.problems));
    }
    let Some(opt) = opt else {
        out.structure.extend(rep.audits().into_iter().map(|a| format!("{label}: {a}")));
        for l in &rep.levels {
            if l.moves.len() > 5 * l.n {
                out.potential.push(format!("{label} level {}: {} moves for n = {}", l.depth, l.moves.len(), l.n));
            }
            for r in &l.moves {
                check_move(r, &format!("{label} level {}", l.depth), out);
            }
        }
        return;
    };
    if !within_ratio(opt, alg) {
        out.ratio.push(format!("{label}: opt {opt} alg {alg}"));
    }
    if opt * out.worst.1.max(1) > out.worst.0 * alg.max(1) || out.worst == (0, 0) {
        out.worst = (opt, alg);
    }
    out.structure.extend(rep.audits().into_iter().map(|a| format!("{label}: {a}")));
    for l in &rep.levels {
        if l.moves.len() > 5 * l.n {
            out.potential.push(format!("{label} level {}: {} moves for n = {}", l.depth, l.moves.len(), l.n));
        }
        for r in &l.moves {
            check_move(r, &format!("{label} level {}", l.depth), out);
        }
    }
    // opt(G_d) <= opt(G_{d+1}) + 7 |R| at every recursion level.
    for w in rep.levels.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        out.recursions += 1;
        let gd = g.induced_subgraph(&cur.original).expect("ids").graph;
        let gc = g.induced_subgraph(&next.original).expect("ids").graph;
        let (od, oc) = (exact_value(&gd, EXACT_CAP), exact_value(&gc, EXACT_CAP));
        if od > oc + 7 * cur.census.a {
            out.recursion_bound.push(format!(
                "{label} level {}: opt {od} > opt(G_c) {oc} + 7 * {}",
                cur.depth, cur.census.a
            ));
        }
        let removed: BTreeSet<Vertex> = cur.removed.iter().copied().collect();
        if next.original.iter().any(|v| removed.contains(v)) {
            out.recursion_bound.push(format!("{label} level {}: G_c keeps a removed vertex", cur.depth));
        }
    }
}

// The top level of the pipeline run by hand, so that each stage can be
// checked on its own.
fn check_pipeline(g: &Graph, opt: Option<usize>, out: &mut Outcome) {
    let mut ws = Workspace::new(g);
    ws.run_step_1_1();
    out.structure.extend(ws.verify_after_merging());
    ws.run_step_1_2();
    out.structure.extend(ws.verify_structure());
    let opt_or_zero = opt.unwrap_or(0);
    let vm = 2 * ws.matching().len();
    if !at_least_four_fifths(vm, opt_or_zero) {
        out.matching_bound.push(format!("|V(M)| = {vm}, opt = {opt_or_zero}"));
    }
    let hs = ws.components();
    let stage = run_cover(&ws, &hs);
    let vmc = 2 * stage.mc.len();
    if !at_least_four_fifths(vmc, opt_or_zero) {
        out.mc_bound.push(format!("|V(M_C)| = {vmc}, opt = {opt_or_zero}"));
    }
    let frame = Frame::new(&ws, hs);
    let weight = stage.instance.weight(&stage.cover.edges);
    let mut state = RescueState::new(&frame, &stage.instance, stage.cover.edges.clone());
    let mut audits = Vec::new();
    let mut count = 0;
    while let Some((mv, after)) = state.find_move() {
        count += 1;
        if count > 5 * g.n() {
            out.potential.push(format!("more than {} moves", 5 * g.n()));
            break;
        }
        let rec = state.apply_move(mv, after, &mut audits);
        check_move(&rec, "pipeline", out);
        let w = stage.instance.weight(&state.cover);
        if w != weight {
            out.potential.push(format!("cover weight {weight} -> {w} after {rec}"));
        }
    }
    out.moves += count;
    out.structure.extend(audits);
    let an = &state.analysis;
    out.structure.extend(an.audits.iter().cloned());

    // A G-neighbor of a critical satellite outside it is a 2-anchor or a
    // responsible 1-anchor.
    for (ci, si) in an.critical_satellites() {
        let sat = frame.hs.comps[an.comps[ci].satellites[si].hcomp].vertices.clone();
        for &v in &sat {
            for &w in g.neighbors(v) {
                if sat.contains(&w) {
                    continue;
                }
                let ok = match an.locate(&frame, w) {
                    Location::Anchor { j: 2, .. } => true,
                    Location::Anchor { comp, j: 1 } => an.comps[comp].responsible_anchors.contains(&w),
                    _ => false,
                };
                if !ok {
                    out.structure.push(format!("critical satellite vertex {v} has neighbor {w} at {:?}", an.locate(&frame, w)));
                }
            }
        }
    }

    for k in &an.comps {
        if k.opt_solution.value() != k.opt {
            out.component.push(format!("component {:?}: solution value differs from opt", k.vertices));
        }
        if k.vertices.len() > COMPONENT_CAP {
            continue;
        }
        out.components_checked += 1;
        let local = component_graph(&k.vertices, &k.edges);
        let want = exact_value(&local, COMPONENT_CAP);
        if want != k.opt {
            out.component.push(format!("component {:?}: opt {} but exact {want}", k.vertices, k.opt));
        }
    }
}

fn component_graph(vertices: &[Vertex], edges: &[Edge]) -> Graph {
    let idx = |x: Vertex| vertices.binary_search(&x).expect("edge inside K");
    Graph::from_edges(vertices.len(), edges.iter().map(|e| (idx(e.u()), idx(e.v())))).expect("simple")
}

fn run_instance(i: usize) -> Outcome {
    let g = if i < CORPUS {
        corpus_instance(i)
    } else {
        sparse_instance(i - CORPUS)
    };
    let opt = exact_value(&g, EXACT_CAP);
    let mut out = Outcome::default();
    let label = format!("#{i} n={} m={}", g.n(), g.m());
    let default = solve_with_report(&g, &SolverConfig::default());
    check_report(&g, Some(opt), &format!("{label} base 8"), &default, &mut out);
    // A small base case sends most instances through the full pipeline.
    let small = SolverConfig {
        base_case: 4,
        trace: false,
    };
    check_report(&g, Some(opt), &format!("{label} base 4"), &solve_with_report(&g, &small), &mut out);
    let mut tagged = Outcome::default();
    check_pipeline(&g, Some(opt), &mut tagged);
    for (dst, src) in [
        (&mut out.matching_bound, tagged.matching_bound),
        (&mut out.mc_bound, tagged.mc_bound),
        (&mut out.structure, tagged.structure),
        (&mut out.potential, tagged.potential),
        (&mut out.stalls, tagged.stalls),
        (&mut out.weighted, tagged.weighted),
        (&mut out.component, tagged.component),
    ] {
        dst.extend(src.into_iter().map(|s| format!("{label}: {s}")));
    }
    out.moves += tagged.moves;
    out.stalled_op2 += tagged.stalled_op2;
    out.components_checked += tagged.components_checked;
    out
}

// Moves, audits and component checks only; these are too large for the
// exact search.
fn run_stall_instance(&(n, m, seed): &(usize, usize, u64)) -> Outcome {
    let g = gnm(n, m, seed).expect("m fits");
    let label = format!("stall n={n} m={m} seed={seed}");
    let mut out = Outcome::default();
    check_report(&g, None, &label, &solve_with_report(&g, &SolverConfig::default()), &mut out);
    let mut tagged = Outcome::default();
    check_pipeline(&g, None, &mut tagged);
    for (dst, src) in [
        (&mut out.structure, tagged.structure),
        (&mut out.potential, tagged.potential),
        (&mut out.stalls, tagged.stalls),
        (&mut out.weighted, tagged.weighted),
        (&mut out.component, tagged.component),
    ] {
        dst.extend(src.into_iter().map(|s| format!("{label}: {s}")));
    }
    out.moves += tagged.moves;
    out.stalled_op2 += tagged.stalled_op2;
    out.components_checked += tagged.components_checked;
    out
}

fn run_corpus() -> (Vec<Outcome>, Duration) {
    let start = Instant::now();
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    let jobs = std::thread::available_parallelism().map_or(4, |n| n.get());
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= CORPUS + SPARSE {
                    break;
                }
                let o = run_instance(i);
                results.lock().unwrap().push((i, o));
            });
        }
    });
    let mut all = results.into_inner().unwrap();
    all.sort_by_key(|r| r.0);
    (all.into_iter().map(|r| r.1).collect(), start.elapsed())
}

fn first_few(v: &[String]) -> String {
    if v.is_empty() {
        return String::new();
    }
    let mut s: Vec<&str> = v.iter().take(3).map(String::as_str).collect();
    if v.len() > 3 {
        s.push("...");
    }
    format!("; e.g. {}", s.join(" | "))
}

fn gather(outs: &[Outcome], f: impl Fn(&Outcome) -> &Vec<String>) -> Vec<String> {
    outs.iter().flat_map(|o| f(o).iter().cloned()).collect()
}

// Random saturation instances: blocks of 1 to 3 vertices, some bad, and
// random edges between distinct blocks touching a bad one.
fn factor_vs_oracle() -> Line {
    let mut r = generate::rng(4);
    let mut bad_cases = Vec::new();
    for case in 0..FACTOR_CASES {
        let n = r.gen_range(2..=8);
        let mut blocks: Vec<Vec<Vertex>> = Vec::new();
        let mut v = 0;
        while v < n {
            let len = r.gen_range(1..=3).min(n - v);
            blocks.push((v..v + len).collect());
            v += len;
        }
        let bad: Vec<Vec<Vertex>> = blocks.iter().filter(|_| r.gen_bool(0.6)).cloned().collect();
        let block_of: Vec<usize> = (0..n).map(|x| blocks.iter().position(|b| b.contains(&x)).unwrap()).collect();
        let is_bad = |x: Vertex| bad.iter().any(|b| b.contains(&x));
        let p = r.gen_range(0.2..0.9);
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if block_of[a] != block_of[b] && (is_bad(a) || is_bad(b)) && r.gen_bool(p) {
                    e.push((a, b));
                }
            }
        }
        let g1 = Graph::from_edges(n, e).unwrap();
        let si = SaturationInstance::from_parts(g1.clone(), bad.clone());
        let fi = build_factor_instance(&si);
        let got = match solve_max_weight_fg_factor(&fi) {
            Ok(f) => extract_and_prune_cover(&si, &f).weight,
            Err(_) => {
                bad_cases.push(format!("case {case}: no factor"));
                continue;
            }
        };
        let want = exact_cover_oracle(&g1, &bad).unwrap();
        if got != want {
            bad_cases.push(format!("case {case}: cover {got}, oracle {want}"));
        }
    }
    Line {
        id: 4,
        name: "factor reduction equals brute-force saturation",
        pass: bad_cases.is_empty(),
        detail: format!("{FACTOR_CASES} instances, {} mismatches{}", bad_cases.len(), first_few(&bad_cases)),
    }
}

fn petersen() -> Graph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::from_edges(10, e).unwrap()
}

fn matching_vs_oracle() -> Line {
    let mut r = generate::rng(5);
    let mut bad = Vec::new();
    for case in 0..MATCHING_CASES {
        let n: usize = r.gen_range(0..=10);
        let max = n * n.saturating_sub(1) / 2;
        let m = r.gen_range(0..=max);
        let g = gnm(n, m, r.gen()).unwrap();
        let mm = max_cardinality_matching(&g);
        let want = exact_matching_oracle(&g).unwrap();
        if !mm.is_valid_in(&g) || mm.len() != want {
            bad.push(format!("case {case}: blossom {}, oracle {want}", mm.len()));
        }
    }
    let p = max_cardinality_matching(&petersen()).len();
    if p != 5 {
        bad.push(format!("Petersen gave {p}"));
    }
    Line {
        id: 5,
        name: "blossom matching equals brute force, Petersen is 5",
        pass: bad.is_empty(),
        detail: format!("{MATCHING_CASES} graphs plus Petersen ({p}), {} mismatches{}", bad.len(), first_few(&bad)),
    }
}

// Edge center {0,1}; 0 supports the edges {2,3} and {4,5}, 1 supports {6,7}.
fn eight_six_instance() -> Result<String, String> {
    let m = [(0, 1), (2, 3), (4, 5), (6, 7)];
    let c = [(0, 2), (0, 4), (1, 6)];
    let g = Graph::from_edges(8, m.iter().chain(&c).copied()).unwrap();
    let matching = Matching::from_edges(8, m.iter().map(|&(a, b)| Edge::new(a, b))).unwrap();
    let h = matching.edge_set();
    let ws = Workspace::from_parts(&g, matching, h);
    let frame = Frame::new(&ws, ws.components());
    let cover: EdgeSet = c.iter().map(|&(a, b)| Edge::new(a, b)).collect();
    let an = analyze(&frame, &cover, &[], &mut OptCache::new());
    let [k] = an.comps.as_slice() else {
        return Err(format!("{} components", an.comps.len()));
    };
    let census = an.census();
    if (k.s, k.opt) == (8, 6) && k.critical && census.k1c == 1 {
        Ok(format!("s = {}, opt = {}, critical, census k1c = {}", k.s, k.opt, census.k1c))
    } else {
        Err(format!("s = {}, opt = {}, critical = {}, k1c = {}", k.s, k.opt, k.critical, census.k1c))
    }
}

fn scale() -> Line {
    let g = gnm(SCALE_N, SCALE_M, 0).unwrap();
    let start = Instant::now();
    let rep = solve_with_report(&g, &SolverConfig::default());
    let took = start.elapsed();
    let valid = verify_solution(&g, &rep.solution).is_valid();
    let audits = rep.audits();
    Line {
        id: 10,
        name: "n = 2000, m = 6000 solves within 60 s",
        pass: valid && audits.is_empty() && took < SCALE_BUDGET,
        detail: format!(
            "{:.1} s, value {}, depth {}, {} moves, valid {valid}, {} audits, debug assertions {}",
            took.as_secs_f64(),
            rep.solution.value(),
            rep.depth(),
            rep.move_count(),
            audits.len(),
            cfg!(debug_assertions)
        ),
    }
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let (mut outs, took) = run_corpus();
    outs.extend(STALLS.iter().map(run_stall_instance));
    let (main_outs, rest) = outs.split_at(CORPUS);
    let sparse_outs = &rest[..SPARSE];
    let ratio = gather(main_outs, |o| &o.ratio);
    let sparse_ratio = gather(sparse_outs, |o| &o.ratio);
    let worst = main_outs
        .iter()
        .map(|o| o.worst)
        .max_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)))
        .unwrap_or((0, 0));
    lines.push(Line {
        id: 1,
        name: "opt <= r * alg on the random corpus",
        pass: ratio.is_empty() && sparse_ratio.is_empty() && took < CORPUS_BUDGET,
        detail: format!(
            "{CORPUS} instances x 2 base cases, {} violations, worst {}/{}; {SPARSE} sparse extras, {} violations; {:.1} s{}",
            ratio.len(),
            worst.0,
            worst.1,
            sparse_ratio.len(),
            took.as_secs_f64(),
            first_few(&[ratio, sparse_ratio].concat())
        ),
    });
    for (id, name, v) in [
        (2, "|V(M)| >= 4/5 opt", gather(main_outs, |o| &o.matching_bound)),
        (3, "|V(M_C)| >= 4/5 opt", gather(main_outs, |o| &o.mc_bound)),
    ] {
        lines.push(Line {
            id,
            name,
            pass: v.is_empty(),
            detail: format!("{CORPUS} instances, {} violations{}", v.len(), first_few(&v)),
        });
    }
    lines.push(factor_vs_oracle());
    lines.push(matching_vs_oracle());
    let structure = gather(&outs, |o| &o.structure);
    lines.push(Line {
        id: 6,
        name: "structure audits after each phase",
        pass: structure.is_empty(),
        detail: format!(
            "{} instances, {} violations{}",
            CORPUS + SPARSE + STALLS.len(),
            structure.len(),
            first_few(&structure)
        ),
    });
    let potential = gather(&outs, |o| &o.potential);
    let stalls = gather(&outs, |o| &o.stalls);
    let weighted = gather(&outs, |o| &o.weighted);
    let moves: usize = outs.iter().map(|o| o.moves).sum();
    let stalled_op2: usize = outs.iter().map(|o| o.stalled_op2).sum();
    let corpus_stalls = gather(&outs[..CORPUS + SPARSE], |o| &o.stalls).len();
    lines.push(Line {
        id: 7,
        name: "moves <= 5n, n0 + ncc - 3nc strictly decreases, weight fixed",
        pass: potential.is_empty() && stalls.is_empty() && moves > 0,
        detail: format!(
            "{moves} checked moves over {} instances; {} cap or weight violations; {} moves leave n0 + ncc - 3nc unchanged \
             ({stalled_op2} of them Op2, {corpus_stalls} outside the {} pinned instances); \
             n0 + 2ncc - 3nc strictly decreases on all but {}{}",
            CORPUS + SPARSE + STALLS.len(),
            potential.len(),
            stalls.len(),
            STALLS.len(),
            weighted.len(),
            first_few(&[potential, stalls].concat())
        ),
    });
    let mut component = gather(&outs, |o| &o.component);
    let checked: usize = outs.iter().map(|o| o.components_checked).sum();
    let constructed = eight_six_instance();
    if let Err(e) = &constructed {
        component.push(format!("constructed instance: {e}"));
    }
    lines.push(Line {
        id: 8,
        name: "component opt equals exact; constructed 8/6 instance is critical",
        pass: component.is_empty() && checked > 0,
        detail: format!(
            "{checked} components, {} mismatches; {}{}",
            component.len(),
            constructed.unwrap_or_else(|e| e),
            first_few(&component)
        ),
    });
    let recursion_bound = gather(&outs, |o| &o.recursion_bound);
    let recursions: usize = outs.iter().map(|o| o.recursions).sum();
    lines.push(Line {
        id: 9,
        name: "opt(G) <= opt(G_c) + 7 |R| on recursion levels",
        pass: recursion_bound.is_empty() && recursions > 0,
        detail: format!("{recursions} recursion levels, {} violations{}", recursion_bound.len(), first_few(&recursion_bound)),
    });
    lines.push(scale());

    lines.sort_by_key(|l| l.id);
    let mut ok = true;
    for l in &lines {
        ok &= l.pass;
        println!(
            "[{}] {:>2}. {}: {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.id,
            l.name,
            l.detail
        );
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
