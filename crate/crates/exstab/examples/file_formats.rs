//! Round trip through the profile and matching text formats.

use exstab::{parse_matching, parse_profile, serialize_matching, serialize_profile};

const TEXT: &str = "\
# three agents on a triangle, no bipartition
ann: bob cat
bob: cat ann
cat: ann bob
";

fn main() {
    let p = parse_profile(TEXT).unwrap();
    println!(
        "{} agents, bipartite={}, complete={}",
        p.len(),
        p.is_bipartite(),
        p.is_complete()
    );
    print!("{}", serialize_profile(&p));
    let m = parse_matching(&p, "ann bob\n").unwrap();
    print!("{}", serialize_matching(&p, &m));
    for bad in ["ann: bob bob\nbob: ann\n", "ann: bob\n", "ann bob\n"] {
        println!("{bad:?}: {}", parse_profile(bad).unwrap_err());
    }
}
