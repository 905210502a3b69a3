//! The exact search against the approximation on a few small graphs, with
//! the ratio bound checked in integers.

use pathcover::exact::exact_value;
use pathcover::generate::gnm;
use pathcover::graph::Graph;
use pathcover::ratio::{within_ratio, R_APPROX};
use pathcover::solve;

fn main() {
    let petersen = {
        let mut e = Vec::new();
        for i in 0..5 {
            e.extend([(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)]);
        }
        Graph::from_edges(10, e).unwrap()
    };
    let mut graphs = vec![("petersen".to_string(), petersen)];
    for seed in 0..5 {
        graphs.push((format!("gnm(11, 12, {seed})"), gnm(11, 12, seed).unwrap()));
    }
    println!("r = {R_APPROX:.6}");
    for (name, g) in &graphs {
        let opt = exact_value(g, 12);
        let alg = solve(g).value();
        println!("{name:>16}: opt {opt:>2}  alg {alg:>2}  within r: {}", within_ratio(opt, alg));
    }
}
