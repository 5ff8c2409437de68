//! Swap reachability instances from graphs: a budget of `2h` swaps suffices
//! exactly when the graph has an independent set of size `h`.

use exstab::reductions::{has_independent_set, is_to_pesm};
use exstab::swap::reach_es;
use exstab::Graph;

fn main() {
    // a 5-cycle: largest independent set has two vertices
    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
    for h in 1..=3 {
        let inst = is_to_pesm(&g, h).unwrap();
        let steps = reach_es(&inst.profile, &inst.m0, inst.budget);
        println!(
            "h={h}: {} agents, budget {}, independent set {:?}, reachable {}",
            inst.profile.len(),
            inst.budget,
            has_independent_set(&g, h),
            steps.map_or("no".to_string(), |s| format!("in {} swaps", s.len()))
        );
    }
}
