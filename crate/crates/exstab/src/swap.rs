//! Swap dynamics: exchanging the partners of an exchange-blocking pair.

use rustc_hash::FxHashSet;

use thiserror::Error;

use crate::profile::{AgentId, Matching, Profile};
use crate::stability::{all_ebps, is_ebp, is_exchange_stable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SwapError {
    #[error("`{0}` and `{1}` do not form an exchange-blocking pair")]
    NotBlocking(String, String),
    #[error("exactly one of `{0}` and `{1}` is matched; there is nothing to exchange")]
    HalfMatched(String, String),
    #[error("`{0}` and `{1}` are not mutually acceptable")]
    NotAnEdge(String, String),
}

/// One exchange and the matchings on either side of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapStep {
    pub pair: (AgentId, AgentId),
    pub before: Matching,
    pub after: Matching,
}

/// The matching reached by exchanging the partners of `x` and `y`.
///
/// Two unmatched agents who block each other simply pair up.
pub fn apply_swap(
    p: &Profile,
    m: &Matching,
    (x, y): (AgentId, AgentId),
) -> Result<Matching, SwapError> {
    let nm = |a: AgentId| p.name(a).to_string();
    if !is_ebp(p, m, x, y) {
        return Err(SwapError::NotBlocking(nm(x), nm(y)));
    }
    if let (Some(a), Some(b)) = (m.mate(x), m.mate(y)) {
        for (s, t) in [(x, b), (y, a)] {
            if !p.is_acceptable(s, t) {
                return Err(SwapError::NotAnEdge(nm(s), nm(t)));
            }
        }
    }
    exchange(m, x, y).ok_or_else(|| SwapError::HalfMatched(nm(x), nm(y)))
}

/// Partners of `x` and `y` exchanged, or the two paired when both are free.
fn exchange(m: &Matching, x: AgentId, y: AgentId) -> Option<Matching> {
    let mut next = m.clone();
    match (m.mate(x), m.mate(y)) {
        (Some(a), Some(b)) => {
            next.unpair(x);
            next.unpair(y);
            next.pair(x, b);
            next.pair(y, a);
        }
        (None, None) => next.pair(x, y),
        _ => return None,
    }
    Some(next)
}

/// A shortest sequence of at most `k` swaps leading from `m0` to an
/// exchange-stable matching.
///
/// Breadth-first over matchings, expanding blocking pairs in lexicographic
/// order, so each matching is expanded once. A matching is dropped when
/// [`swaps_needed_bound`] exceeds the remaining budget.
pub fn reach_es(p: &Profile, m0: &Matching, k: usize) -> Option<Vec<SwapStep>> {
    let root = all_ebps(p, m0);
    if root.is_empty() {
        return Some(Vec::new());
    }
    if swaps_needed_bound(m0, &root) > k {
        return None;
    }
    // (matching, parent index, pair swapped to get here)
    let mut nodes: Vec<(Matching, usize, (AgentId, AgentId))> =
        vec![(m0.clone(), usize::MAX, (0, 0))];
    let mut seen: FxHashSet<Matching> = FxHashSet::default();
    seen.insert(m0.clone());
    let mut frontier = vec![(0, root)];
    for depth in 1..=k {
        let left = k - depth;
        let mut next_frontier = Vec::new();
        for (i, blocking) in frontier {
            for pair in blocking {
                // a blocking pair's new partners are acceptable by envy
                let Some(next) = exchange(&nodes[i].0, pair.0, pair.1) else {
                    continue;
                };
                if left == 0 {
                    if is_exchange_stable(p, &next) {
                        nodes.push((next, i, pair));
                        return Some(trace(&nodes, nodes.len() - 1));
                    }
                    continue;
                }
                if !seen.insert(next.clone()) {
                    continue;
                }
                let eb = all_ebps(p, &next);
                let done = eb.is_empty();
                if !done && swaps_needed_bound(&next, &eb) > left {
                    continue;
                }
                nodes.push((next, i, pair));
                if done {
                    return Some(trace(&nodes, nodes.len() - 1));
                }
                next_frontier.push((nodes.len() - 1, eb));
            }
        }
        frontier = next_frontier;
    }
    None
}

/// Lower bound on the swaps needed to make `m` exchange-stable.
///
/// Some agent of every blocking pair must end with a new partner, and a swap
/// disturbs at most two pairs of `m` (a free agent counts as its own pair).
/// Disjoint blocking pairs between distinct pairs of `m` each need one of
/// their pairs disturbed, so `t` of them need `ceil(t / 2)` swaps.
pub fn swaps_needed_bound(m: &Matching, blocking: &[(AgentId, AgentId)]) -> usize {
    let node = |a: AgentId| a.min(m.partner(a));
    let mut used: Vec<AgentId> = Vec::new();
    let mut t: usize = 0;
    for &(x, y) in blocking {
        let (a, b) = (node(x), node(y));
        if !used.contains(&a) && !used.contains(&b) {
            used.push(a);
            used.push(b);
            t += 1;
        }
    }
    t.div_ceil(2)
}

fn trace(nodes: &[(Matching, usize, (AgentId, AgentId))], mut i: usize) -> Vec<SwapStep> {
    let mut steps = Vec::new();
    while nodes[i].1 != usize::MAX {
        let (after, parent, pair) = &nodes[i];
        steps.push(SwapStep {
            pair: *pair,
            before: nodes[*parent].0.clone(),
            after: after.clone(),
        });
        i = *parent;
    }
    steps.reverse();
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, M1, M3, M4, M5};
    use crate::oracle::min_swaps_to_es;
    use crate::stability::is_exchange_stable;

    #[test]
    fn swaps_in_swap_market() {
        let p = fixtures::swap_market();
        let id = |s| p.id(s).unwrap();
        let m = |x| Matching::from_names(&p, x).unwrap();
        assert_eq!(apply_swap(&p, &m(M3), (id("y"), id("z"))).unwrap(), m(M1));
        assert_eq!(apply_swap(&p, &m(M3), (id("x"), id("z"))).unwrap(), m(M4));
        assert_eq!(apply_swap(&p, &m(M4), (id("x"), id("y"))).unwrap(), m(M5));
        assert_eq!(apply_swap(&p, &m(M5), (id("a"), id("b"))).unwrap(), m(M4));
        assert!(matches!(
            apply_swap(&p, &m(M1), (id("x"), id("y"))),
            Err(SwapError::NotBlocking(..))
        ));
    }

    #[test]
    fn reachability_in_swap_market() {
        let p = fixtures::swap_market();
        let m = |x| Matching::from_names(&p, x).unwrap();
        let seq = reach_es(&p, &m(M3), 1).unwrap();
        assert_eq!(seq.len(), 1);
        assert_eq!(seq[0].after, m(M1));
        for k in 0..=10 {
            assert!(reach_es(&p, &m(M4), k).is_none());
            assert_eq!(min_swaps_to_es(&p, &m(M4), k), None);
        }
        assert_eq!(reach_es(&p, &m(M1), 0), Some(vec![]));
        assert!(is_exchange_stable(&p, &seq[0].after));
    }

    #[test]
    fn unmatched_pair_joins() {
        let p = crate::parse_profile("p: q\nq: p\n").unwrap();
        let e = Matching::empty(2);
        let seq = reach_es(&p, &e, 1).unwrap();
        assert_eq!(seq[0].after.pairs(), vec![(0, 1)]);
    }
}
