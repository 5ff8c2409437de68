//! Builds the market for a small formula, turns a satisfying assignment into a
//! matching and checks it on both the sparse and the completed market.

use exstab::reductions::{
    assignment_to_matching, complete_profile, default_choice, parse_dimacs, r3sat_to_223sat,
    sat_to_cesm3, SideOrders,
};
use exstab::{is_ces, is_perfect};

const FORMULA: &str = "p cnf 3 3\n1 2 3 0\n-1 -2 0\n-3 2 0\n";

fn main() {
    let f = r3sat_to_223sat(&parse_dimacs(FORMULA).unwrap()).unwrap();
    println!(
        "normalised: {} variables, {} clauses",
        f.num_vars,
        f.clauses.len()
    );
    let (p, gm) = sat_to_cesm3(&f).unwrap();
    println!(
        "market: {} agents, lists of length <= {}",
        p.len(),
        p.max_length()
    );
    let sigma = f.brute_force_sat().expect("satisfiable");
    let m =
        assignment_to_matching(&p, &gm, &f, &sigma, &default_choice(&f, &sigma).unwrap()).unwrap();
    println!(
        "assignment {sigma:?}: perfect={} ces={}",
        is_perfect(&p, &m),
        is_ces(&p, &m)
    );
    let full = complete_profile(&p, &gm, &SideOrders::id_order(&p).unwrap()).unwrap();
    println!(
        "completed market: complete={} ces={}",
        full.is_complete(),
        is_ces(&full, &m)
    );
}
