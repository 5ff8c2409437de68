//! Checks the two small hand-made markets against every stability notion.

use exstab::fixtures::{cycle_market, swap_market, CYCLE_M, M1, M2, M3, M4, M5};
use exstab::stability::all_ebps;
use exstab::{find_ebc, is_ces, is_exchange_stable, is_perfect, Matching, Profile};

fn report(p: &Profile, label: &str, pairs: &[(&str, &str)]) {
    let m = Matching::from_names(p, pairs).expect("fixture matching");
    let ebps: Vec<String> = all_ebps(p, &m)
        .into_iter()
        .map(|(x, y)| format!("({},{})", p.name(x), p.name(y)))
        .collect();
    println!(
        "{label}: perfect={} es={} ces={} blocking pairs=[{}]",
        is_perfect(p, &m),
        is_exchange_stable(p, &m),
        is_ces(p, &m),
        ebps.join(" ")
    );
    if let Some(c) = find_ebc(p, &m) {
        println!("    blocking coalition {}", c.display(p));
    }
}

fn main() {
    let p = swap_market();
    for (label, m) in [("M1", M1), ("M2", M2), ("M3", M3), ("M4", M4), ("M5", M5)] {
        report(&p, label, m);
    }
    report(&cycle_market(), "cycle", CYCLE_M);
}
