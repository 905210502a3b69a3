//! The bench across the three families, printed as CSV.

use pathcover::cli::{bench, bench_csv, FamilyArgs};
use pathcover::generate::Family;

fn main() {
    for family in [Family::Gnm, Family::Regular, Family::PlantedPaths] {
        let fa = FamilyArgs {
            family,
            n: 10,
            m: None,
            d: 3,
            paths: 2,
            extra: 1,
            noise: 3,
        };
        let reports = bench(&fa, 8, 1, 12, 2).unwrap();
        println!("# {family}");
        print!("{}", bench_csv(&reports, true));
    }
}
