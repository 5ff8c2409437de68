//! Linear-time solving when every list has at most two entries.

use std::time::Instant;

use exstab::d2::solve_d2;
use exstab::generate::{profile_on_graph, random_profile, rng};
use exstab::oracle::solve_brute;
use exstab::{Criterion, Graph};
use rand::Rng;

fn main() {
    let mut r = rng(5);
    let mut agree = 0;
    for _ in 0..200 {
        let p = random_profile(10, 2, 0.5, &mut r);
        let fast = solve_d2(&p, Criterion::Ces).unwrap().is_some();
        agree += (fast == solve_brute(&p, Criterion::Ces, true).is_some()) as usize;
    }
    println!("agreement with exhaustive search: {agree}/200");

    // even paths and cycles: a perfect matching always exists, but with tens of
    // thousands of cycles one of them usually admits no stable choice
    let n = 200_000;
    let mut g = Graph::new(n);
    let mut start = 0;
    while start + 8 <= n {
        let len = 2 * r.gen_range(2..=4);
        for v in start..start + len - 1 {
            g.add_edge(v, v + 1);
        }
        if r.gen_bool(0.5) {
            g.add_edge(start, start + len - 1);
        }
        start += len;
    }
    let p = profile_on_graph(&g, None, &mut r);
    for c in [Criterion::Es, Criterion::Ces] {
        let t = Instant::now();
        let found = solve_d2(&p, c).unwrap().is_some();
        println!(
            "{} agents, {c:?}: found={found} in {:.3?}",
            p.len(),
            t.elapsed()
        );
    }
}
