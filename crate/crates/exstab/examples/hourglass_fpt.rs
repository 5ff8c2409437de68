//! The hourglass solver for lists of length three on a large sparse market.

use std::time::Instant;

use exstab::fpt::solve_d3_fpt_report;
use exstab::generate::{rng, synthetic_sparse};
use exstab::hourglass::collect_hourglasses;
use exstab::{is_exchange_stable, is_perfect};

fn main() {
    let p = synthetic_sparse(20_000, 6, 5, &mut rng(9));
    let coll = collect_hourglasses(&p.acceptability_graph());
    println!(
        "{} agents, {} maximal hourglasses, {} tall, {} clusters",
        p.len(),
        coll.all.len(),
        coll.tall.len(),
        coll.clusters.len()
    );
    let t = Instant::now();
    let rep = solve_d3_fpt_report(&p, 1).unwrap();
    println!(
        "{} combinations tried in {:.3?}",
        rep.combinations,
        t.elapsed()
    );
    match rep.matching {
        Some(m) => println!(
            "perfect={} es={}",
            is_perfect(&p, &m),
            is_exchange_stable(&p, &m)
        ),
        None => println!("no perfect exchange-stable matching"),
    }
}
