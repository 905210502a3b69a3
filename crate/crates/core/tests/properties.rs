//! Property tests against the oracles.

use pathcover::exact::{exact_matching_oracle, exact_value};
use pathcover::factor::{max_weight_fg_factor, FactorProblem};
use pathcover::format::{dump_graph, load_graph, solution_from_json, solution_to_json};
use pathcover::graph::Graph;
use pathcover::matching::{check_tutte_berge, max_cardinality_matching, tutte_berge_witness};
use pathcover::ratio::{exceeds_five_sevenths_r, within_ratio, R_APPROX};
use pathcover::solution::{split_long_path, Path};
use pathcover::{solve_with_report, verify_solution, SolverConfig};
use proptest::prelude::*;

/// A simple graph on `lo..=hi` vertices from a random subset of pairs.
fn graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let len = pairs.len();
        proptest::sample::subsequence(pairs, 0..=len).prop_map(move |e| Graph::from_edges(n, e).unwrap())
    })
}

/// Sparse graphs, where the rescue loop and the recursion actually run.
fn sparse_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        proptest::sample::subsequence(pairs, n.saturating_sub(2)..=n + 2).prop_map(move |e| Graph::from_edges(n, e).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn solutions_are_valid_and_within_ratio(g in graph(0, 11), base in 0usize..=8) {
        let rep = solve_with_report(&g, &SolverConfig { base_case: base, trace: false });
        prop_assert!(verify_solution(&g, &rep.solution).is_valid());
        let opt = exact_value(&g, 12);
        prop_assert!(within_ratio(opt, rep.solution.value()), "opt {} alg {}", opt, rep.solution.value());
        prop_assert!(rep.audits().is_empty(), "{:?}", rep.audits());
    }

    #[test]
    fn sparse_runs_keep_their_invariants(g in sparse_graph(8, 14)) {
        let rep = solve_with_report(&g, &SolverConfig { base_case: 4, trace: false });
        prop_assert!(verify_solution(&g, &rep.solution).is_valid());
        prop_assert!(within_ratio(exact_value(&g, 14), rep.solution.value()));
        prop_assert!(rep.audits().is_empty(), "{:?}", rep.audits());
        for l in &rep.levels {
            prop_assert!(l.moves.len() <= 5 * l.n);
            for r in &l.moves {
                prop_assert!(r.after.weighted() < r.before.weighted());
            }
        }
    }

    #[test]
    fn blossom_is_maximum_and_certified(g in graph(0, 10)) {
        let m = max_cardinality_matching(&g);
        prop_assert!(m.is_valid_in(&g));
        prop_assert_eq!(m.len(), exact_matching_oracle(&g).unwrap());
        let u = tutte_berge_witness(&g, &m).expect("maximum matchings have a witness");
        prop_assert!(check_tutte_berge(&g, &m, &u));
    }

    #[test]
    fn graph_files_round_trip(g in graph(0, 15)) {
        prop_assert_eq!(load_graph(&dump_graph(&g)).unwrap(), g);
    }

    #[test]
    fn split_pieces_are_short_and_cover_the_path(n in 4usize..60) {
        let p = Path::new((0..n).collect());
        let pieces = split_long_path(&p).unwrap();
        prop_assert_eq!(pieces.len(), n.div_ceil(7));
        prop_assert!(pieces.iter().all(|q| (4..=7).contains(&q.order())));
        let joined: Vec<usize> = pieces.iter().flat_map(|q| q.vertices().to_vec()).collect();
        prop_assert_eq!(joined, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn solution_json_round_trips(g in graph(4, 11)) {
        let s = solve_with_report(&g, &SolverConfig::default()).solution;
        let back = solution_from_json(&solution_to_json(&s)).unwrap();
        prop_assert_eq!(back.canonical(), s.canonical());
        prop_assert_eq!(back.value(), s.value());
    }

    #[test]
    fn factor_matches_brute_force(
        n in 2usize..=6,
        raw in proptest::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..9),
        bounds in proptest::collection::vec((0usize..=2, 0usize..=2), 6),
    ) {
        let mut edges: Vec<(usize, usize, i64)> = Vec::new();
        for (a, b, w) in raw {
            let (a, b) = (a % n, b % n);
            if a != b && !edges.iter().any(|e| (e.0, e.1) == (a.min(b), a.max(b))) {
                edges.push((a.min(b), a.max(b), w));
            }
        }
        let f: Vec<usize> = bounds[..n].iter().map(|&(x, y)| x.min(y)).collect();
        let g: Vec<usize> = bounds[..n].iter().map(|&(x, y)| x.max(y)).collect();
        let p = FactorProblem { n, edges, f, g };
        let best = (0u32..1 << p.edges.len())
            .map(|mask| (0..p.edges.len()).filter(|k| mask >> k & 1 == 1).collect::<Vec<_>>())
            .filter(|c| p.is_factor(c))
            .map(|c| p.weight(&c))
            .max();
        match max_weight_fg_factor(&p) {
            Some(c) => {
                prop_assert!(p.is_factor(&c));
                prop_assert_eq!(Some(p.weight(&c)), best);
            }
            None => prop_assert_eq!(best, None),
        }
    }

    #[test]
    fn ratio_tests_agree_with_floats(a in 0usize..400, b in 0usize..400) {
        let r = a as f64 / b.max(1) as f64;
        if b > 0 && (r - R_APPROX).abs() > 1e-9 {
            prop_assert_eq!(within_ratio(a, b), r <= R_APPROX);
        }
        let t = 5.0 / 7.0 * R_APPROX;
        if b > 0 && (r - t).abs() > 1e-9 {
            prop_assert_eq!(exceeds_five_sevenths_r(a, b), r > t);
        }
    }
}
