//! Exhaustive ground truth for small instances.
//!
//! Nothing in here is fast. Every routine re-derives what it needs from the
//! profile directly so that solver bugs do not leak into the reference answers.

use std::collections::{HashSet, VecDeque};

use crate::blossom::has_perfect_matching;
use crate::profile::{AgentId, Graph, Matching, Profile};
use crate::stability::find_cycle_in;
use crate::Criterion;

const UNDEC: usize = usize::MAX;

/// Lazy enumeration of matchings, branching on the lowest undecided agent.
pub struct MatchingIter<'a> {
    p: &'a Profile,
    perfect_only: bool,
    /// `UNDEC`, the agent itself (left unmatched), or its partner.
    part: Vec<usize>,
    /// (agent, index of the current option)
    stack: Vec<(AgentId, usize)>,
    started: bool,
    done: bool,
}

impl<'a> MatchingIter<'a> {
    fn options(&self, v: AgentId) -> Vec<AgentId> {
        let mut opts = Vec::new();
        if !self.perfect_only {
            opts.push(v);
        }
        let mut nb: Vec<AgentId> = self
            .p
            .prefs(v)
            .iter()
            .copied()
            .filter(|&u| self.part[u] == UNDEC)
            .collect();
        nb.sort_unstable();
        opts.extend(nb);
        opts
    }

    fn assign(&mut self, v: AgentId, c: AgentId) {
        self.part[v] = c;
        self.part[c] = v;
    }

    fn unassign(&mut self, v: AgentId) {
        let c = self.part[v];
        self.part[v] = UNDEC;
        self.part[c] = UNDEC;
    }

    /// Extends the stack until complete (true) or stuck (false).
    fn descend(&mut self) -> bool {
        loop {
            let Some(v) = self.part.iter().position(|&x| x == UNDEC) else {
                return true;
            };
            let opts = self.options(v);
            if opts.is_empty() {
                return false;
            }
            self.assign(v, opts[0]);
            self.stack.push((v, 0));
        }
    }

    fn emit(&self) -> Matching {
        let mut m = Matching::empty(self.p.len());
        for (v, &c) in self.part.iter().enumerate() {
            if c != v && v < c {
                m.pair(v, c);
            }
        }
        m
    }
}

impl Iterator for MatchingIter<'_> {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.descend() {
                return Some(self.emit());
            }
        }
        loop {
            let Some((v, idx)) = self.stack.pop() else {
                self.done = true;
                return None;
            };
            self.unassign(v);
            let opts = self.options(v);
            if idx + 1 < opts.len() {
                self.assign(v, opts[idx + 1]);
                self.stack.push((v, idx + 1));
                if self.descend() {
                    return Some(self.emit());
                }
            }
        }
    }
}

/// Every matching (or every perfect matching) exactly once, in a fixed order.
pub fn enumerate_matchings(p: &Profile, perfect_only: bool) -> MatchingIter<'_> {
    MatchingIter {
        p,
        perfect_only,
        part: vec![UNDEC; p.len()],
        stack: Vec::new(),
        started: false,
        done: false,
    }
}

/// Direct mutual-envy scan over all agent pairs.
pub fn has_ebp_naive(p: &Profile, m: &Matching) -> bool {
    let envy = |x: AgentId, y: AgentId| {
        let t = m.partner(y);
        t != x && p.is_acceptable(x, t) && p.rank(x, t).unwrap() < p.rank(x, m.partner(x)).unwrap()
    };
    for x in p.agents() {
        for y in x + 1..p.len() {
            if envy(x, y) && envy(y, x) {
                return true;
            }
        }
    }
    false
}

fn naive_envy_cycle(p: &Profile, m: &Matching) -> bool {
    let arcs: Vec<Vec<AgentId>> = p
        .agents()
        .map(|x| {
            p.agents()
                .filter(|&y| {
                    let t = m.partner(y);
                    y != x
                        && t != x
                        && p.is_acceptable(x, t)
                        && p.rank(x, t).unwrap() < p.rank(x, m.partner(x)).unwrap()
                })
                .collect()
        })
        .collect();
    find_cycle_in(&arcs, |_| true).is_some()
}

/// Exhaustive constraint search for a (perfect) ES or CES matching.
///
/// Agents are variables; values are acceptable partners or "unmatched".
/// Partial assignments are pruned as soon as two decided agents block each
/// other, the decided envy arcs close a cycle (CES), or the undecided agents
/// can no longer be perfectly matched.
pub fn solve_brute(p: &Profile, criterion: Criterion, perfect_required: bool) -> Option<Matching> {
    let mut csp = Csp {
        p,
        criterion,
        perfect: perfect_required,
        part: vec![UNDEC; p.len()],
        nodes: 0,
    };
    if csp.search() {
        let mut m = Matching::empty(p.len());
        for (v, &c) in csp.part.iter().enumerate() {
            if c != v && v < c {
                m.pair(v, c);
            }
        }
        Some(m)
    } else {
        None
    }
}

struct Csp<'a> {
    p: &'a Profile,
    criterion: Criterion,
    perfect: bool,
    part: Vec<usize>,
    nodes: u64,
}

impl Csp<'_> {
    fn decided(&self, a: AgentId) -> bool {
        self.part[a] != UNDEC
    }

    /// Does decided agent `a` form a blocking pair with another decided agent?
    fn blocks_with_decided(&self, a: AgentId) -> bool {
        let p = self.p;
        let pa = self.part[a];
        let cut = p.rank(a, pa).unwrap_or(p.degree(a));
        for &z in &p.prefs(a)[..cut] {
            let y = self.part[z];
            if y == UNDEC || y == a {
                continue;
            }
            // y holds z and a would rather have z; does y want pa?
            if pa != y && p.is_acceptable(y, pa) && p.rank(y, pa) < p.rank(y, self.part[y]) {
                return true;
            }
        }
        false
    }

    fn viable(&mut self, x: AgentId, c: AgentId) -> bool {
        self.part[x] = c;
        self.part[c] = x;
        let ok = !self.blocks_with_decided(x) && (c == x || !self.blocks_with_decided(c));
        self.part[x] = UNDEC;
        self.part[c] = UNDEC;
        ok
    }

    fn has_decided_cycle(&self) -> bool {
        let p = self.p;
        let arcs: Vec<Vec<AgentId>> = p
            .agents()
            .map(|x| {
                if !self.decided(x) {
                    return Vec::new();
                }
                let cut = p.rank(x, self.part[x]).unwrap_or(p.degree(x));
                p.prefs(x)[..cut]
                    .iter()
                    .filter(|&&z| self.decided(z) && self.part[z] != x)
                    .map(|&z| self.part[z])
                    .collect()
            })
            .collect();
        find_cycle_in(&arcs, |v| self.decided(v)).is_some()
    }

    fn search(&mut self) -> bool {
        self.nodes += 1;
        let p = self.p;
        let undecided: Vec<AgentId> = p.agents().filter(|&a| !self.decided(a)).collect();
        if undecided.is_empty() {
            let mut m = Matching::empty(p.len());
            for (v, &c) in self.part.iter().enumerate() {
                if c != v && v < c {
                    m.pair(v, c);
                }
            }
            return match self.criterion {
                Criterion::Es => !has_ebp_naive(p, &m),
                Criterion::Ces => !naive_envy_cycle(p, &m),
            };
        }
        let mut best: Option<(AgentId, Vec<AgentId>)> = None;
        let mut viable_edges = Vec::new();
        for &x in &undecided {
            let mut cands = Vec::new();
            for &c in p.prefs(x) {
                if !self.decided(c) && self.viable(x, c) {
                    cands.push(c);
                    if x < c {
                        viable_edges.push((x, c));
                    }
                }
            }
            if !self.perfect && self.viable(x, x) {
                cands.push(x);
            }
            if cands.is_empty() {
                return false;
            }
            if best.as_ref().is_none_or(|(_, b)| cands.len() < b.len()) {
                best = Some((x, cands));
            }
        }
        if self.perfect {
            let mut pos = vec![UNDEC; p.len()];
            for (i, &x) in undecided.iter().enumerate() {
                pos[x] = i;
            }
            let mut g = Graph::new(undecided.len());
            for (a, b) in viable_edges {
                g.add_edge(pos[a], pos[b]);
            }
            if !has_perfect_matching(&g) {
                return false;
            }
        }
        let (x, cands) = best.unwrap();
        for c in cands {
            self.part[x] = c;
            self.part[c] = x;
            let ok = self.criterion == Criterion::Es || !self.has_decided_cycle();
            if ok && self.search() {
                return true;
            }
            self.part[x] = UNDEC;
            self.part[c] = UNDEC;
        }
        false
    }
}

/// Search statistics variant of [`solve_brute`]: also returns the node count.
pub fn solve_brute_counted(
    p: &Profile,
    criterion: Criterion,
    perfect_required: bool,
) -> (Option<Matching>, u64) {
    let mut csp = Csp {
        p,
        criterion,
        perfect: perfect_required,
        part: vec![UNDEC; p.len()],
        nodes: 0,
    };
    let found = csp.search();
    let m = found.then(|| {
        let mut m = Matching::empty(p.len());
        for (v, &c) in csp.part.iter().enumerate() {
            if c != v && v < c {
                m.pair(v, c);
            }
        }
        m
    });
    (m, csp.nodes)
}

/// No other matching leaves everyone weakly better off and someone strictly.
pub fn is_pareto_optimal(p: &Profile, m: &Matching) -> bool {
    // allowed[x]: partners x weakly prefers to M(x)
    fn rec(p: &Profile, m: &Matching, part: &mut Vec<usize>, differs: bool) -> bool {
        let Some(x) = part.iter().position(|&c| c == UNDEC) else {
            return differs;
        };
        let own = m.partner(x);
        let limit = p.rank(x, own).unwrap();
        let mut opts: Vec<AgentId> = p.prefs(x)[..limit.min(p.degree(x))].to_vec();
        if own != x && !opts.contains(&own) {
            opts.push(own);
        }
        if own == x {
            opts.push(x);
        }
        for c in opts {
            if c != x {
                if part[c] != UNDEC {
                    continue;
                }
                let oc = m.partner(c);
                if p.rank(c, x).unwrap() > p.rank(c, oc).unwrap() {
                    continue;
                }
            }
            part[x] = c;
            part[c] = x;
            if rec(p, m, part, differs || c != own) {
                return true;
            }
            part[x] = UNDEC;
            part[c] = UNDEC;
        }
        false
    }
    let mut part = vec![UNDEC; p.len()];
    !rec(p, m, &mut part, false)
}

/// Fewest swaps from `m0` to an exchange-stable matching, by breadth-first
/// search over the swap graph, up to `max_depth`.
pub fn min_swaps_to_es(p: &Profile, m0: &Matching, max_depth: usize) -> Option<usize> {
    let envy = |m: &Matching, x: AgentId, y: AgentId| {
        let t = m.partner(y);
        x != y
            && t != x
            && p.is_acceptable(x, t)
            && p.rank(x, t).unwrap() < p.rank(x, m.partner(x)).unwrap()
    };
    let ebps = |m: &Matching| {
        let mut v = Vec::new();
        for x in p.agents() {
            for y in x + 1..p.len() {
                if envy(m, x, y) && envy(m, y, x) {
                    v.push((x, y));
                }
            }
        }
        v
    };
    let mut seen: HashSet<Matching> = HashSet::new();
    let mut q = VecDeque::new();
    seen.insert(m0.clone());
    q.push_back((m0.clone(), 0usize));
    while let Some((m, d)) = q.pop_front() {
        let blocking = ebps(&m);
        if blocking.is_empty() {
            return Some(d);
        }
        if d == max_depth {
            continue;
        }
        for (x, y) in blocking {
            let (mx, my) = (m.mate(x), m.mate(y));
            let mut next = m.clone();
            match (mx, my) {
                (Some(a), Some(b)) => {
                    next.unpair(x);
                    next.unpair(y);
                    next.pair(x, b);
                    next.pair(y, a);
                }
                (None, None) => next.pair(x, y),
                _ => continue,
            }
            if seen.insert(next.clone()) {
                q.push_back((next, d + 1));
            }
        }
    }
    None
}

/// Does the vertex set `s` (bitmask) induce an hourglass under some layering?
pub fn is_hourglass_set(g: &Graph, s: u64) -> bool {
    let k = s.count_ones() as usize;
    if k < 4 || k % 2 == 1 {
        return false;
    }
    let inside = |v: usize| s >> v & 1 == 1;
    let verts: Vec<usize> = (0..g.len()).filter(|&v| inside(v)).collect();
    let induced_deg = |v: usize| g.neighbors(v).iter().filter(|&&w| inside(w)).count();

    fn grow(
        g: &Graph,
        s: u64,
        us: &mut Vec<usize>,
        ws: &mut Vec<usize>,
        used: u64,
        check: &dyn Fn(&[usize], &[usize]) -> bool,
    ) -> bool {
        if used == s {
            return check(us, ws);
        }
        let (ui, wi) = (*us.last().unwrap(), *ws.last().unwrap());
        for &nu in g.neighbors(wi) {
            if s >> nu & 1 == 0 || used >> nu & 1 == 1 {
                continue;
            }
            for &nw in g.neighbors(ui) {
                if s >> nw & 1 == 0 || used >> nw & 1 == 1 || nw == nu || !g.has_edge(nu, nw) {
                    continue;
                }
                us.push(nu);
                ws.push(nw);
                let ok = grow(g, s, us, ws, used | 1 << nu | 1 << nw, check);
                us.pop();
                ws.pop();
                if ok {
                    return true;
                }
            }
        }
        false
    }

    let check = |us: &[usize], ws: &[usize]| {
        let h = us.len();
        (1..h - 1).all(|i| induced_deg(us[i]) == 3 && induced_deg(ws[i]) == 3)
    };
    for &u0 in &verts {
        for &w0 in g.neighbors(u0) {
            if !inside(w0) {
                continue;
            }
            let mut us = vec![u0];
            let mut ws = vec![w0];
            if grow(g, s, &mut us, &mut ws, 1 << u0 | 1 << w0, &check) {
                return true;
            }
        }
    }
    false
}

/// All inclusion-maximal hourglass vertex sets of a small graph (at most 20 vertices).
pub fn maximal_hourglass_sets(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.len();
    assert!(n <= 20, "oracle is exponential in the vertex count");
    let all: Vec<u64> = (0u64..1 << n).filter(|&s| is_hourglass_set(g, s)).collect();
    let mut out: Vec<Vec<usize>> = all
        .iter()
        .filter(|&&s| !all.iter().any(|&t| t != s && t & s == s))
        .map(|&s| (0..n).filter(|&v| s >> v & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::profile::parse_profile;

    #[test]
    fn enumerates_perfect_matchings_of_k33() {
        let p = fixtures::swap_market();
        assert_eq!(enumerate_matchings(&p, true).count(), 6);
        // 1 + 9 + 18 + 6 matchings of K_{3,3}
        assert_eq!(enumerate_matchings(&p, false).count(), 34);
        let all: HashSet<Matching> = enumerate_matchings(&p, false).collect();
        assert_eq!(all.len(), 34);
    }

    #[test]
    fn enumerates_small_graphs() {
        let p = parse_profile("p: q\nq: p\n").unwrap();
        let v: Vec<_> = enumerate_matchings(&p, true).collect();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].pairs(), vec![(0, 1)]);
        let path = parse_profile("a: b\nb: a c\nc: b d\nd: c\n").unwrap();
        let v: Vec<_> = enumerate_matchings(&path, true).collect();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].pairs(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn brute_solver_on_fixtures() {
        let p = fixtures::swap_market();
        let m = solve_brute(&p, Criterion::Ces, true).unwrap();
        let m1 = Matching::from_names(&p, fixtures::M1).unwrap();
        let m2 = Matching::from_names(&p, fixtures::M2).unwrap();
        assert!(m == m1 || m == m2);
        let q = fixtures::cycle_market();
        assert_eq!(solve_brute(&q, Criterion::Ces, true), None);
        assert_eq!(
            solve_brute(&q, Criterion::Es, true),
            Some(Matching::from_names(&q, fixtures::CYCLE_M).unwrap())
        );
    }

    #[test]
    fn pareto() {
        let p = fixtures::swap_market();
        assert!(is_pareto_optimal(
            &p,
            &Matching::from_names(&p, fixtures::M1).unwrap()
        ));
        let e = parse_profile("p: q\nq: p\n").unwrap();
        assert!(is_pareto_optimal(
            &e,
            &Matching::from_pairs(&e, &[(0, 1)]).unwrap()
        ));
        assert!(!is_pareto_optimal(&e, &Matching::empty(2)));
    }

    #[test]
    fn hourglass_sets() {
        // 4-cycle
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(maximal_hourglass_sets(&c4), vec![vec![0, 1, 2, 3]]);
        // path
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(maximal_hourglass_sets(&p4).is_empty());
        // K_{2,3}: three overlapping 4-cycles
        let k23 = Graph::from_edges(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]);
        assert_eq!(maximal_hourglass_sets(&k23).len(), 3);
    }
}
