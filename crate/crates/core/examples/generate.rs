//! Seeded generators and the graph file round trip.

use pathcover::format::{dump_graph, load_graph};
use pathcover::generate::{gnm, planted_paths, regular};

fn main() {
    let g = gnm(10, 15, 1).unwrap();
    let text = dump_graph(&g);
    print!("{text}");
    assert_eq!(load_graph(&text).unwrap(), g);
    let r = regular(12, 3, 2).unwrap();
    println!("3-regular on 12: {} edges", r.m());
    let (p, planted) = planted_paths(3, 2, 4, 9).unwrap();
    println!("planted paths: n={} m={} planted={planted}", p.n(), p.m());
    println!("too many edges: {}", gnm(4, 7, 0).unwrap_err());
}
