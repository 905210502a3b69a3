//! Maximum matching with its Tutte-Berge certificate, and a maximum weight
//! perfect matching.

use pathcover::graph::Graph;
use pathcover::matching::{check_tutte_berge, max_cardinality_matching, max_weight_perfect_matching, tutte_berge_witness};

fn main() {
    // Three triangles hanging off vertex 0: removing 0 leaves three odd
    // components, so two vertices stay unmatched.
    let mut e = Vec::new();
    for t in 0..3 {
        let a = 1 + 3 * t;
        e.extend([(0, a), (a, a + 1), (a + 1, a + 2), (a, a + 2)]);
    }
    let g = Graph::from_edges(10, e).unwrap();
    let m = max_cardinality_matching(&g);
    let u = tutte_berge_witness(&g, &m).expect("maximum");
    println!("matching {:?}", m.edges());
    println!("Tutte-Berge set {u:?}, certificate holds: {}", check_tutte_berge(&g, &m, &u));

    // Weights favour the long way round a 6-cycle.
    let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
    let pm = max_weight_perfect_matching(&c6, |e| if e.u() % 2 == 0 { 3 } else { 1 }).unwrap();
    println!("heaviest perfect matching of C6 {:?}", pm.edges());
}
