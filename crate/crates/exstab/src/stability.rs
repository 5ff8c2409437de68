//! Envy graph, exchange-blocking pairs and coalitions.

use crate::profile::{AgentId, Matching, Profile};

/// `x` envies `y` iff `M(y)` is acceptable to `x` and `x` prefers it to `M(x)`.
#[inline]
pub fn envies(p: &Profile, m: &Matching, x: AgentId, y: AgentId) -> bool {
    if x == y {
        return false;
    }
    let target = m.partner(y);
    target != x && p.is_acceptable(x, target) && p.prefers_fast(x, target, m.partner(x))
}

/// Directed envy graph with sorted out-lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyGraph {
    pub arcs: Vec<Vec<AgentId>>,
}

impl EnvyGraph {
    pub fn has_arc(&self, u: AgentId, v: AgentId) -> bool {
        self.arcs[u].binary_search(&v).is_ok()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    /// Some directed cycle, rotated to start at its smallest agent.
    pub fn find_cycle(&self) -> Option<Vec<AgentId>> {
        find_cycle_in(&self.arcs, |_| true)
    }
}

/// Agents that `x` envies: holders of the partners `x` ranks above `M(x)`.
fn envied_by(p: &Profile, m: &Matching, x: AgentId, out: &mut Vec<AgentId>) {
    let own = m.partner(x);
    let cut = p.rank(x, own).unwrap_or(p.degree(x));
    for &z in &p.prefs(x)[..cut] {
        let y = m.partner(z);
        if y != x {
            out.push(y);
        }
    }
}

pub fn envy_graph(p: &Profile, m: &Matching) -> EnvyGraph {
    let mut arcs = Vec::with_capacity(p.len());
    for x in p.agents() {
        let mut out = Vec::new();
        envied_by(p, m, x, &mut out);
        out.sort_unstable();
        arcs.push(out);
    }
    EnvyGraph { arcs }
}

/// A cyclic sequence of agents, each envying its successor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockingCoalition {
    pub cycle: Vec<AgentId>,
}

impl BlockingCoalition {
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn display(&self, p: &Profile) -> String {
        let names: Vec<&str> = self.cycle.iter().map(|&a| p.name(a)).collect();
        format!("({})", names.join(","))
    }
}

/// Smallest `(x, y)`, `x < y`, with mutual envy.
pub fn find_ebp(p: &Profile, m: &Matching) -> Option<(AgentId, AgentId)> {
    let mut buf = Vec::new();
    for x in p.agents() {
        buf.clear();
        envied_by(p, m, x, &mut buf);
        buf.sort_unstable();
        if let Some(&y) = buf.iter().find(|&&y| y > x && envies(p, m, y, x)) {
            return Some((x, y));
        }
    }
    None
}

/// All exchange-blocking pairs `(x, y)`, `x < y`, in lexicographic order.
pub fn all_ebps(p: &Profile, m: &Matching) -> Vec<(AgentId, AgentId)> {
    let mut out = Vec::new();
    for x in p.agents() {
        let start = out.len();
        let cut = p.rank(x, m.partner(x)).unwrap_or(p.degree(x));
        for &z in &p.prefs(x)[..cut] {
            let y = m.partner(z);
            if y > x && envies(p, m, y, x) {
                out.push((x, y));
            }
        }
        out[start..].sort_unstable();
    }
    out
}

pub fn is_ebp(p: &Profile, m: &Matching, x: AgentId, y: AgentId) -> bool {
    envies(p, m, x, y) && envies(p, m, y, x)
}

pub fn find_ebc(p: &Profile, m: &Matching) -> Option<BlockingCoalition> {
    envy_graph(p, m)
        .find_cycle()
        .map(|cycle| BlockingCoalition { cycle })
}

pub fn is_exchange_stable(p: &Profile, m: &Matching) -> bool {
    p.agents().all(|x| {
        let cut = p.rank(x, m.partner(x)).unwrap_or(p.degree(x));
        p.prefs(x)[..cut].iter().all(|&z| {
            let y = m.partner(z);
            y == x || !envies(p, m, y, x)
        })
    })
}

pub fn is_ces(p: &Profile, m: &Matching) -> bool {
    find_ebc(p, m).is_none()
}

pub fn is_perfect(p: &Profile, m: &Matching) -> bool {
    p.agents().all(|a| m.is_matched(a))
}

/// No two unmatched agents find each other acceptable.
pub fn is_maximal(p: &Profile, m: &Matching) -> bool {
    p.agents()
        .all(|a| m.is_matched(a) || p.prefs(a).iter().all(|&b| m.is_matched(b)))
}

/// True when no two agents of `set` form an exchange-blocking pair.
pub fn no_ebp_within(p: &Profile, m: &Matching, set: &[AgentId]) -> bool {
    let inside: std::collections::HashSet<AgentId> = set.iter().copied().collect();
    let mut buf = Vec::new();
    for &x in set {
        buf.clear();
        envied_by(p, m, x, &mut buf);
        if buf
            .iter()
            .any(|&y| inside.contains(&y) && envies(p, m, y, x))
        {
            return false;
        }
    }
    true
}

/// Checks `criterion` using only envy among the agents of `set`.
///
/// Exact whenever the envy arcs leaving `set` stay inside it, as they do for a
/// union of components under a perfect matching.
pub fn holds_within(
    p: &Profile,
    m: &Matching,
    set: &[AgentId],
    criterion: crate::Criterion,
) -> bool {
    let mut pos = std::collections::HashMap::with_capacity(set.len());
    for (i, &a) in set.iter().enumerate() {
        pos.insert(a, i);
    }
    let mut arcs = Vec::with_capacity(set.len());
    let mut buf = Vec::new();
    for &x in set {
        buf.clear();
        envied_by(p, m, x, &mut buf);
        arcs.push(
            buf.iter()
                .filter_map(|y| pos.get(y).copied())
                .collect::<Vec<_>>(),
        );
    }
    match criterion {
        crate::Criterion::Es => arcs
            .iter()
            .enumerate()
            .all(|(i, out)| out.iter().all(|&j| !arcs[j].contains(&i))),
        crate::Criterion::Ces => find_cycle_in(&arcs, |_| true).is_none(),
    }
}

/// Iterative three-colour DFS over the vertices accepted by `keep`.
pub(crate) fn find_cycle_in(
    arcs: &[Vec<AgentId>],
    keep: impl Fn(AgentId) -> bool,
) -> Option<Vec<AgentId>> {
    let n = arcs.len();
    // 0 white, 1 grey, 2 black
    let mut colour = vec![0u8; n];
    let mut stack: Vec<(AgentId, usize)> = Vec::new();
    for root in 0..n {
        if colour[root] != 0 || !keep(root) {
            continue;
        }
        colour[root] = 1;
        stack.push((root, 0));
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < arcs[v].len() {
                let w = arcs[v][*i];
                *i += 1;
                if !keep(w) {
                    continue;
                }
                match colour[w] {
                    0 => {
                        colour[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => {
                        let start = stack.iter().position(|&(u, _)| u == w).unwrap();
                        let mut cyc: Vec<AgentId> =
                            stack[start..].iter().map(|&(u, _)| u).collect();
                        let min = cyc.iter().enumerate().min_by_key(|&(_, &a)| a).unwrap().0;
                        cyc.rotate_left(min);
                        return Some(cyc);
                    }
                    _ => {}
                }
            } else {
                colour[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn m(p: &Profile, pairs: &[(&str, &str)]) -> Matching {
        Matching::from_names(p, pairs).unwrap()
    }

    #[test]
    fn envy_in_swap_market() {
        let p = fixtures::swap_market();
        let id = |s| p.id(s).unwrap();
        let m3 = m(&p, fixtures::M3);
        let g = envy_graph(&p, &m3);
        assert!(g.has_arc(id("y"), id("z")) && g.has_arc(id("z"), id("y")));
        assert_eq!(find_ebp(&p, &m3), Some((id("x"), id("z"))));
        assert_eq!(
            all_ebps(&p, &m3),
            vec![(id("x"), id("z")), (id("y"), id("z"))]
        );
        for mm in [fixtures::M1, fixtures::M2] {
            let mm = m(&p, mm);
            assert!(envy_graph(&p, &mm).find_cycle().is_none());
            assert!(is_exchange_stable(&p, &mm) && is_ces(&p, &mm) && is_perfect(&p, &mm));
        }
    }

    #[test]
    fn coalition_in_cycle_market() {
        let p = fixtures::cycle_market();
        let mm = m(&p, fixtures::CYCLE_M);
        assert_eq!(find_ebp(&p, &mm), None);
        let c = find_ebc(&p, &mm).unwrap();
        assert_eq!(c.display(&p), "(x,z,y)");
        for i in 0..c.len() {
            assert!(envies(&p, &mm, c.cycle[i], c.cycle[(i + 1) % c.len()]));
        }
        assert!(is_exchange_stable(&p, &mm) && !is_ces(&p, &mm));
    }

    #[test]
    fn top_choices_have_no_envy() {
        let p = crate::profile::parse_profile("p: q r\nq: p\nr: p s\ns: r\n").unwrap();
        let mm = m(&p, &[("p", "q"), ("r", "s")]);
        assert_eq!(envy_graph(&p, &mm).num_arcs(), 1); // r envies q (holder of p)
        let p2 = crate::profile::parse_profile("p: q\nq: p\n").unwrap();
        let top = m(&p2, &[("p", "q")]);
        assert_eq!(envy_graph(&p2, &top).num_arcs(), 0);
        assert!(find_ebc(&p2, &top).is_none());
    }

    #[test]
    fn empty_matching_is_not_maximal() {
        let p = crate::profile::parse_profile("p: q\nq: p\n").unwrap();
        let e = Matching::empty(2);
        assert!(!is_maximal(&p, &e));
        assert!(!is_exchange_stable(&p, &e));
        assert!(!is_ces(&p, &e));
    }
}
