//! Move log of the rescue loop on a sparse graph where one move leaves
//! `n0 + ncc - 3 nc` unchanged while `n0 + 2 ncc - 3 nc` still drops.

use pathcover::generate::gnm;
use pathcover::{solve_with_report, SolverConfig};

fn main() {
    let g = gnm(18, 17, 8360896804676902156).unwrap();
    let cfg = SolverConfig {
        trace: true,
        ..SolverConfig::default()
    };
    let report = solve_with_report(&g, &cfg);
    for line in &report.trace {
        println!("{line}");
    }
    for r in report.levels.iter().flat_map(|l| &l.moves) {
        println!("{r}: weighted {} -> {}, stalled {}", r.before.weighted(), r.after.weighted(), r.stalled());
    }
    println!("audits {:?}", report.audits());
}
