//! The first two phases on a random sparse graph: the components of `H`
//! after phase 1, the path-cycle cover `C` and the matching `M_C`.

use pathcover::cover::run_cover;
use pathcover::generate::gnm;
use pathcover::phase1::Workspace;

fn main() {
    let g = gnm(24, 26, 3).unwrap();
    let (ws, stats) = Workspace::run(&g);
    println!("{stats:?}");
    let hs = ws.components();
    for c in &hs.comps {
        println!("H component {:<14} {:?}", c.kind.to_string(), c.vertices);
    }
    let stage = run_cover(&ws, &hs);
    println!("bad components: {}", stage.instance.bad.len());
    println!("cover C: {:?}", stage.cover.edges);
    println!("saturated: {}  |V(M)| = {}  |V(M_C)| = {}", stage.cover.weight, 2 * ws.matching().len(), 2 * stage.mc.len());
}
