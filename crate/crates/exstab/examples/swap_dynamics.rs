//! Swap sequences: a shortest route to stability and a livelock.

use exstab::fixtures::{swap_market, M3, M4};
use exstab::swap::reach_es;
use exstab::Matching;

fn main() {
    let p = swap_market();
    for (label, pairs) in [("M3", M3), ("M4", M4)] {
        let m0 = Matching::from_names(&p, pairs).unwrap();
        match reach_es(&p, &m0, 6) {
            Some(steps) => {
                println!("{label}: stable after {} swap(s)", steps.len());
                for s in steps {
                    println!("  swap {} {}", p.name(s.pair.0), p.name(s.pair.1));
                }
            }
            None => println!("{label}: no exchange-stable matching within 6 swaps"),
        }
    }
}
