//! Solvers against the exhaustive oracle on random small instances.

use exstab::d2::solve_d2;
use exstab::fpt::solve_d3_fpt;
use exstab::generate::{random_graph, random_hourglass_profile, random_profile, rng, Wraps};
use exstab::hourglass::{collect_hourglasses, hourglass_perfect_es, maximal_hourglasses};
use exstab::oracle::{enumerate_matchings, maximal_hourglass_sets, solve_brute};
use exstab::stability::{is_perfect, no_ebp_within};
use exstab::Criterion;

#[test]
fn d2_agrees_with_oracle() {
    let mut r = rng(11);
    for i in 0..300 {
        let n = 2 + i % 13;
        let p = random_profile(n, 2, 0.5, &mut r);
        for c in [Criterion::Es, Criterion::Ces] {
            let fast = solve_d2(&p, c).unwrap();
            let slow = solve_brute(&p, c, true);
            assert_eq!(
                fast.is_some(),
                slow.is_some(),
                "{}",
                exstab::serialize_profile(&p)
            );
            if let Some(m) = fast {
                assert!(is_perfect(&p, &m) && c.holds(&p, &m));
            }
        }
    }
}

#[test]
fn fpt_agrees_with_oracle() {
    let mut r = rng(12);
    for i in 0..300 {
        let n = 4 + i % 11;
        let p = random_profile(n, 3, 0.6, &mut r);
        let fast = solve_d3_fpt(&p).unwrap();
        let slow = solve_brute(&p, Criterion::Es, true);
        assert_eq!(
            fast.is_some(),
            slow.is_some(),
            "{}",
            exstab::serialize_profile(&p)
        );
        if let Some(m) = fast {
            assert!(is_perfect(&p, &m) && Criterion::Es.holds(&p, &m));
        }
    }
}

#[test]
fn hourglass_dp_agrees_with_oracle() {
    let mut r = rng(13);
    for h in 2..=7 {
        for w in Wraps::valid_for(h) {
            for _ in 0..20 {
                let (p, hg) = random_hourglass_profile(h, w, &mut r);
                let all: Vec<usize> = p.agents().collect();
                let expect = enumerate_matchings(&p, true).any(|m| no_ebp_within(&p, &m, &all));
                let got = hourglass_perfect_es(&p, &hg);
                assert_eq!(
                    got.is_some(),
                    expect,
                    "h={h} {w:?}\n{}",
                    exstab::serialize_profile(&p)
                );
                if let Some(m) = got {
                    assert!(is_perfect(&p, &m) && no_ebp_within(&p, &m, &all));
                }
            }
        }
    }
}

#[test]
fn maximal_hourglasses_match_oracle() {
    let mut r = rng(14);
    for i in 0..300 {
        let n = 4 + i % 9;
        let g = random_graph(n, 3, 0.7, &mut r);
        let mut found: Vec<Vec<usize>> = maximal_hourglasses(&g)
            .iter()
            .map(|h| h.sorted_agents())
            .collect();
        found.sort();
        assert_eq!(found, maximal_hourglass_sets(&g), "{:?}", g.adj);
        let c = collect_hourglasses(&g);
        for (a, x) in c.all.iter().enumerate() {
            for y in &c.all[a + 1..] {
                let sx = x.sorted_agents();
                let common = y.agents().iter().filter(|v| sx.contains(v)).count();
                let ok = common == 0
                    || (x.height() == 2 && y.height() == 2 && common == 3)
                    || (x.height() == 3 && y.height() == 3 && common == 5);
                assert!(ok, "{:?} {:?} {:?}", g.adj, x, y);
            }
        }
    }
}

#[test]
fn every_perfect_matching_has_a_category() {
    let mut r = rng(15);
    let mut seen = 0;
    for _ in 0..400 {
        let g = random_graph(14, 3, 0.8, &mut r);
        let c = collect_hourglasses(&g);
        if c.tall.iter().all(|h| h.height() < 5) {
            continue;
        }
        let p = exstab::generate::profile_on_graph(&g, None, &mut r);
        let g2 = p.acceptability_graph();
        for hg in collect_hourglasses(&g2)
            .tall
            .iter()
            .filter(|h| h.height() >= 5)
        {
            for m in enumerate_matchings(&p, true).take(200) {
                seen += 1;
                assert!(hg.category_of(&m).is_some());
            }
        }
    }
    assert!(seen > 0);
}

/// Ladders of height five or six with outside agents hanging off the
/// boundary, so that every category is reachable.
#[test]
fn fpt_on_tall_hourglasses() {
    use exstab::generate::{hourglass_graph, profile_on_graph};
    use rand::Rng;
    let mut r = rng(16);
    let mut yes = 0;
    for i in 0..400 {
        let h = 5 + i % 2;
        let w = Wraps::valid_for(h)[i % 7];
        let (lg, hg) = hourglass_graph(h, w);
        let extra = 2 + i % 3;
        let n = 2 * h + extra;
        let mut g = exstab::Graph::new(n);
        for (a, b) in lg.edges() {
            g.add_edge(a, b);
        }
        let boundary = [hg.us[0], hg.ws[0], hg.us[h - 1], hg.ws[h - 1]];
        for o in 2 * h..n {
            for &b in &boundary {
                if g.degree(b) < 3 && g.degree(o) < 3 && r.gen_bool(0.5) {
                    g.add_edge(b, o);
                }
            }
            for o2 in o + 1..n {
                if g.degree(o2) < 3 && g.degree(o) < 3 && r.gen_bool(0.3) {
                    g.add_edge(o, o2);
                }
            }
        }
        let p = profile_on_graph(&g, None, &mut r);
        let fast = solve_d3_fpt(&p).unwrap();
        let slow = solve_brute(&p, Criterion::Es, true);
        assert_eq!(
            fast.is_some(),
            slow.is_some(),
            "{}",
            exstab::serialize_profile(&p)
        );
        if let Some(m) = fast {
            yes += 1;
            assert!(is_perfect(&p, &m) && Criterion::Es.holds(&p, &m));
        }
    }
    assert!(yes > 20);
}
