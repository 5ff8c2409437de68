//! Linear-time solver for profiles whose lists have length at most two.
//!
//! The acceptability graph is a disjoint union of paths and cycles. Paths have
//! one perfect matching and cycles two; envy never leaves a component under a
//! perfect matching, so each component is decided on its own.

use crate::profile::{AgentId, Matching, Profile};
use crate::stability::holds_within;
use crate::{check_max_length, Criterion, SolveError};

/// A perfect matching satisfying `criterion`, if one exists.
pub fn solve_d2(p: &Profile, criterion: Criterion) -> Result<Option<Matching>, SolveError> {
    check_max_length(p, 2)?;
    let g = p.acceptability_graph();
    let mut m = Matching::empty(p.len());
    for comp in g.components() {
        if comp.len() % 2 == 1 {
            return Ok(None);
        }
        let order = walk(p, &comp);
        if comp.iter().any(|&v| p.degree(v) == 1) {
            for pair in order.chunks(2) {
                m.pair(pair[0], pair[1]);
            }
            continue;
        }
        let k = order.len();
        for shift in [0, 1] {
            for i in (0..k).step_by(2) {
                m.pair(order[(i + shift) % k], order[(i + shift + 1) % k]);
            }
            if holds_within(p, &m, &comp, criterion) {
                break;
            }
            if shift == 1 {
                return Ok(None);
            }
            for &v in &order {
                m.unpair(v);
            }
        }
    }
    Ok(Some(m))
}

/// Vertices of a path or cycle component in traversal order.
///
/// Paths start at their smaller endpoint; cycles start at their smallest
/// vertex and head towards its smaller neighbour.
fn walk(p: &Profile, comp: &[AgentId]) -> Vec<AgentId> {
    let start = comp
        .iter()
        .copied()
        .filter(|&v| p.degree(v) == 1)
        .min()
        .unwrap_or(comp[0]);
    let mut order = Vec::with_capacity(comp.len());
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        order.push(cur);
        let next = p.prefs(cur).iter().copied().filter(|&w| w != prev).min();
        match next {
            Some(w) if w != start && order.len() < comp.len() => {
                prev = cur;
                cur = w;
            }
            _ => break,
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::solve_brute;
    use crate::parse_profile;

    #[test]
    fn path_has_its_unique_matching() {
        let p = parse_profile("a: b\nb: a c\nc: b d\nd: c\n").unwrap();
        for c in [Criterion::Es, Criterion::Ces] {
            let m = solve_d2(&p, c).unwrap().unwrap();
            assert_eq!(m.pairs(), vec![(0, 1), (2, 3)]);
        }
    }

    #[test]
    fn odd_cycle_rejected() {
        let p = parse_profile("a: b e\nb: a c\nc: b d\nd: c e\ne: d a\n").unwrap();
        assert_eq!(solve_d2(&p, Criterion::Es).unwrap(), None);
    }

    #[test]
    fn four_cycle_with_both_matchings_blocked() {
        // both perfect matchings of this 4-cycle admit a blocking pair
        let p = parse_profile("a: d b\nb: a c\nc: b d\nd: c a\n").unwrap();
        assert_eq!(solve_brute(&p, Criterion::Es, true), None);
        assert_eq!(solve_d2(&p, Criterion::Es).unwrap(), None);
        let q = parse_profile("a: b d\nb: a c\nc: d b\nd: c a\n").unwrap();
        let m = solve_d2(&q, Criterion::Ces).unwrap().unwrap();
        assert_eq!(m.pairs(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn rejects_long_lists() {
        let p = crate::fixtures::swap_market();
        assert!(solve_d2(&p, Criterion::Es).is_err());
    }
}
