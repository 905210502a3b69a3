//! A maximum weight [f, g]-factor: every vertex of a 5-cycle gets degree 1
//! or 2, vertex 0 must have degree 2.

use pathcover::factor::{max_weight_fg_factor, FactorProblem};

fn main() {
    let p = FactorProblem {
        n: 5,
        edges: (0..5).map(|i| (i, (i + 1) % 5, i as i64 - 2)).collect(),
        f: vec![2, 1, 1, 1, 1],
        g: vec![2, 2, 2, 2, 2],
    };
    let chosen = max_weight_fg_factor(&p).expect("feasible");
    for &k in &chosen {
        println!("edge {:?}", p.edges[k]);
    }
    println!("weight {} degrees {:?}", p.weight(&chosen), p.degrees(&chosen));
}
