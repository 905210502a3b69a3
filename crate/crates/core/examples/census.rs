//! Component census after the rescue loop, as printed by `pathcover census`.

use pathcover::generate::planted_paths;
use pathcover::solver::first_level;

fn main() {
    let (g, planted) = planted_paths(5, 4, 6, 11).unwrap();
    let level = first_level(&g);
    println!("n={} m={} planted={planted} branch={:?}", g.n(), g.m(), level.branch);
    println!("{:?}", level.census);
    for k in &level.components {
        println!(
            "center {:<10} {:?}: s={} opt={} critical={} satellites={}",
            k.center_kind,
            k.center,
            k.s,
            k.opt,
            k.critical,
            k.satellites.len()
        );
    }
}
