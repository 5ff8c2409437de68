//! Exhaustive search on a random market: counts stable matchings and checks
//! which perfect coalitional ones are Pareto optimal.

use exstab::generate::{random_profile, rng, seed_from_env};
use exstab::oracle::{enumerate_matchings, is_pareto_optimal, solve_brute};
use exstab::{is_ces, is_exchange_stable, serialize_profile, Criterion};

fn main() {
    let p = random_profile(8, 3, 0.7, &mut rng(seed_from_env(3)));
    print!("{}", serialize_profile(&p));
    let (mut all, mut es, mut ces, mut po) = (0, 0, 0, 0);
    for m in enumerate_matchings(&p, false) {
        all += 1;
        es += is_exchange_stable(&p, &m) as usize;
        if is_ces(&p, &m) {
            ces += 1;
            po += is_pareto_optimal(&p, &m) as usize;
        }
    }
    println!("{all} matchings, {es} exchange-stable, {ces} coalitional ({po} Pareto optimal)");
    match solve_brute(&p, Criterion::Ces, true) {
        Some(m) => println!("a perfect coalitional one: {:?}", m.pairs()),
        None => println!("no perfect coalitional matching"),
    }
}
