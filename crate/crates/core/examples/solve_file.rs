//! Solves a graph file and prints the solution JSON.
//!
//! `cargo run --example solve_file -- graph.txt`; without an argument a
//! 7-vertex path is used.

use pathcover::format::{load_graph, solution_to_json};
use pathcover::{solve_with_report, verify_solution, SolverConfig};

const P7: &str = "c path on seven vertices\np 7 6\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 6\ne 6 7\n";

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}")),
        None => P7.to_string(),
    };
    let g = match load_graph(&text) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let report = solve_with_report(&g, &SolverConfig::default());
    let check = verify_solution(&g, &report.solution);
    println!("{}", solution_to_json(&report.solution));
    eprintln!(
        "n={} m={} value={} depth={} moves={} valid={}",
        g.n(),
        g.m(),
        report.solution.value(),
        report.depth(),
        report.move_count(),
        check.is_valid()
    );
}
