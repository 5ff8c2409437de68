//! Hourglasses: stacked 4-cycles where all blocking pairs of a perfect matching
//! in a degree-three acceptability graph must live.
//!
//! Layer `i` is the pair `(u_i, w_i)`; edges are `u_i w_i`, `u_i w_{i+1}` and
//! `u_{i+1} w_i`. Only the four boundary agents may have neighbours beyond
//! the ladder.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::oracle::enumerate_matchings;
use crate::profile::{AgentId, Graph, Matching, Profile};
use crate::stability::no_ebp_within;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hourglass {
    pub us: Vec<AgentId>,
    pub ws: Vec<AgentId>,
}

/// How a perfect matching treats the boundary agents of a tall hourglass.
///
/// An agent is askew when matched to a neighbour outside the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Category {
    /// `u_0` and `w_{h-1}` askew; the rest shifted along `w_i u_{i+1}`.
    I,
    /// `w_0` and `u_{h-1}` askew; the rest shifted along `u_i w_{i+1}`.
    II,
    /// `u_0`, `w_0` askew.
    III,
    /// `u_{h-1}`, `w_{h-1}` askew.
    IV,
    /// All four boundary agents askew.
    V,
    /// No agent askew.
    VI,
}

pub type Signature = Category;

impl Category {
    pub const ALL: [Category; 6] = [
        Category::I,
        Category::II,
        Category::III,
        Category::IV,
        Category::V,
        Category::VI,
    ];
}

impl Hourglass {
    pub fn height(&self) -> usize {
        self.us.len()
    }

    /// Agents in layer order.
    pub fn agents(&self) -> Vec<AgentId> {
        self.us
            .iter()
            .zip(&self.ws)
            .flat_map(|(&u, &w)| [u, w])
            .collect()
    }

    pub fn sorted_agents(&self) -> Vec<AgentId> {
        let mut v = self.agents();
        v.sort_unstable();
        v
    }

    /// Ladder neighbours of `a` (its layer partner and the two cross edges).
    fn ladder_neighbors(&self, a: AgentId) -> Vec<AgentId> {
        let h = self.height();
        let mut out = Vec::with_capacity(3);
        for i in 0..h {
            let (u, w) = (self.us[i], self.ws[i]);
            if a == u {
                out.push(w);
                if i > 0 {
                    out.push(self.ws[i - 1]);
                }
                if i + 1 < h {
                    out.push(self.ws[i + 1]);
                }
            } else if a == w {
                out.push(u);
                if i > 0 {
                    out.push(self.us[i - 1]);
                }
                if i + 1 < h {
                    out.push(self.us[i + 1]);
                }
            }
        }
        out
    }

    /// Ladder edges present and inner agents of induced degree exactly three.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let h = self.height();
        if h < 2 || self.ws.len() != h {
            return false;
        }
        let set: HashSet<AgentId> = self.agents().into_iter().collect();
        if set.len() != 2 * h {
            return false;
        }
        for i in 0..h {
            if !g.has_edge(self.us[i], self.ws[i]) {
                return false;
            }
            if i + 1 < h
                && !(g.has_edge(self.us[i], self.ws[i + 1])
                    && g.has_edge(self.us[i + 1], self.ws[i]))
            {
                return false;
            }
        }
        (1..h - 1).all(|i| {
            [self.us[i], self.ws[i]]
                .iter()
                .all(|&a| g.neighbors(a).iter().filter(|v| set.contains(v)).count() == 3)
        })
    }

    /// The category describing a perfect matching on this hourglass, if any.
    pub fn category_of(&self, m: &Matching) -> Option<Category> {
        let h = self.height();
        let askew = |a: AgentId| match m.mate(a) {
            Some(b) => !self.ladder_neighbors(a).contains(&b),
            None => true,
        };
        let key = (
            askew(self.us[0]),
            askew(self.ws[0]),
            askew(self.us[h - 1]),
            askew(self.ws[h - 1]),
        );
        match key {
            (true, false, false, true) => Some(Category::I),
            (false, true, true, false) => Some(Category::II),
            (true, true, false, false) => Some(Category::III),
            (false, false, true, true) => Some(Category::IV),
            (true, true, true, true) => Some(Category::V),
            (false, false, false, false) => Some(Category::VI),
            _ => None,
        }
    }
}

/// Matchings of two agents per side of a 4-agent window: is there a blocking pair?
fn quad_stable(p: &Profile, e1: (AgentId, AgentId), e2: (AgentId, AgentId)) -> bool {
    let partner = |a: AgentId| {
        if a == e1.0 {
            e1.1
        } else if a == e1.1 {
            e1.0
        } else if a == e2.0 {
            e2.1
        } else {
            e2.0
        }
    };
    let env = |x: AgentId, y: AgentId| {
        let t = partner(y);
        p.is_acceptable(x, t) && p.prefers_fast(x, t, partner(x))
    };
    for x in [e1.0, e1.1] {
        for y in [e2.0, e2.1] {
            if env(x, y) && env(y, x) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum State {
    /// Layer matched along its rung.
    H,
    /// Layer closes a crossed block with the previous layer.
    C,
}

/// Perfect matching of layers `lo..=hi` built from rungs and crossed blocks,
/// free of blocking pairs inside every covered window, with fixed first and
/// last states.
fn ladder_dp(
    p: &Profile,
    hg: &Hourglass,
    lo: usize,
    hi: usize,
    start: State,
    end: State,
) -> Option<Vec<(AgentId, AgentId)>> {
    let (us, ws) = (&hg.us, &hg.ws);
    let len = hi + 1 - lo;
    if start == State::C && len < 2 {
        return None;
    }
    let tau_h = |i: usize| quad_stable(p, (us[i - 1], ws[i - 1]), (us[i], ws[i]));
    let tau_c = |i: usize| quad_stable(p, (us[i - 1], ws[i]), (ws[i - 1], us[i]));
    let mut dh = vec![false; len];
    let mut dc = vec![false; len];
    dh[0] = start == State::H;
    if len > 1 {
        dh[1] = dh[0] && tau_h(lo + 1);
        dc[1] = start == State::C && tau_c(lo + 1);
    }
    for k in 2..len {
        let i = lo + k;
        dh[k] = dc[k - 1] || (dh[k - 1] && tau_h(i));
        dc[k] = (dc[k - 2] || dh[k - 2]) && tau_c(i);
    }
    let last = len - 1;
    let ok = match end {
        State::H => dh[last],
        State::C => dc[last],
    };
    if !ok {
        return None;
    }
    let mut pairs = Vec::with_capacity(len);
    let mut k = last as isize;
    let mut st = end;
    while k >= 0 {
        let ku = k as usize;
        let i = lo + ku;
        match st {
            State::H => {
                pairs.push((us[i], ws[i]));
                if ku == 0 {
                    break;
                }
                st = if dc[ku - 1] { State::C } else { State::H };
                k -= 1;
            }
            State::C => {
                pairs.push((us[i - 1], ws[i]));
                pairs.push((ws[i - 1], us[i]));
                if ku == 1 {
                    break;
                }
                st = if dc[ku - 2] { State::C } else { State::H };
                k -= 2;
            }
        }
    }
    pairs.reverse();
    Some(pairs)
}

/// Askew boundary agents of a category, in the order u_0, w_0, u_{h-1}, w_{h-1}.
fn askew_set(hg: &Hourglass, c: Category) -> Vec<AgentId> {
    let h = hg.height();
    let (u0, w0, ul, wl) = (hg.us[0], hg.ws[0], hg.us[h - 1], hg.ws[h - 1]);
    match c {
        Category::I => vec![u0, wl],
        Category::II => vec![w0, ul],
        Category::III => vec![u0, w0],
        Category::IV => vec![ul, wl],
        Category::V => vec![u0, w0, ul, wl],
        Category::VI => vec![],
    }
}

fn matching_from(n: usize, pairs: &[(AgentId, AgentId)]) -> Matching {
    Matching::from_pairs_unchecked(n, pairs)
}

/// A matching of all of `V(H)` in category `c`, blocking-pair free inside
/// `V(H)`. Askew agents take their unique non-ladder neighbour; with
/// `internal_only` that neighbour must itself be an askew agent of `H`.
///
/// Requires height at least five.
pub fn category_feasible(
    p: &Profile,
    hg: &Hourglass,
    c: Category,
    internal_only: bool,
) -> Option<Vec<(AgentId, AgentId)>> {
    let h = hg.height();
    assert!(
        h >= 5,
        "categories are defined for heights of at least five"
    );
    let askew = askew_set(hg, c);
    let inside: HashSet<AgentId> = hg.agents().into_iter().collect();
    let mut pairs: Vec<(AgentId, AgentId)> = Vec::new();
    let mut taken: HashSet<AgentId> = HashSet::new();
    for &a in &askew {
        if taken.contains(&a) {
            continue;
        }
        let ladder = hg.ladder_neighbors(a);
        let z = p.prefs(a).iter().copied().find(|b| !ladder.contains(b))?;
        if inside.contains(&z) {
            if !askew.contains(&z) || taken.contains(&z) {
                return None;
            }
        } else if internal_only || taken.contains(&z) {
            return None;
        }
        taken.insert(a);
        taken.insert(z);
        pairs.push((a, z));
    }
    let (us, ws) = (&hg.us, &hg.ws);
    let range = match c {
        Category::I => {
            pairs.extend((0..h - 1).map(|i| (ws[i], us[i + 1])));
            None
        }
        Category::II => {
            pairs.extend((0..h - 1).map(|i| (us[i], ws[i + 1])));
            None
        }
        Category::III => Some((1, h - 1)),
        Category::IV => Some((0, h - 2)),
        Category::V => Some((1, h - 2)),
        Category::VI => Some((0, h - 1)),
    };
    let agents = hg.agents();
    let check =
        |pairs: &[(AgentId, AgentId)]| no_ebp_within(p, &matching_from(p.len(), pairs), &agents);
    match range {
        None => check(&pairs).then_some(pairs),
        Some((lo, hi)) => {
            for s in [State::H, State::C] {
                for e in [State::H, State::C] {
                    if let Some(inner) = ladder_dp(p, hg, lo, hi, s, e) {
                        let mut all = pairs.clone();
                        all.extend(inner);
                        if check(&all) {
                            return Some(all);
                        }
                    }
                }
            }
            None
        }
    }
}

/// Every way to match all agents of `set` to acceptable partners, inside or
/// outside `set`, that leaves no blocking pair inside `set`. Options with the
/// same outside pairs are merged.
pub fn covering_options(p: &Profile, set: &[AgentId]) -> Vec<Vec<(AgentId, AgentId)>> {
    fn rec(
        p: &Profile,
        set: &[AgentId],
        inside: &HashSet<AgentId>,
        used: &mut HashSet<AgentId>,
        pairs: &mut Vec<(AgentId, AgentId)>,
        seen: &mut HashSet<Vec<(AgentId, AgentId)>>,
        out: &mut Vec<Vec<(AgentId, AgentId)>>,
    ) {
        let Some(&a) = set.iter().find(|a| !used.contains(a)) else {
            let m = matching_from(p.len(), pairs);
            if no_ebp_within(p, &m, set) {
                let mut outside: Vec<(AgentId, AgentId)> = pairs
                    .iter()
                    .copied()
                    .filter(|(_, b)| !inside.contains(b))
                    .collect();
                outside.sort_unstable();
                if seen.insert(outside) {
                    out.push(pairs.clone());
                }
            }
            return;
        };
        used.insert(a);
        for &b in p.prefs(a) {
            if used.contains(&b) {
                continue;
            }
            used.insert(b);
            pairs.push((a, b));
            rec(p, set, inside, used, pairs, seen, out);
            pairs.pop();
            used.remove(&b);
        }
        used.remove(&a);
    }
    let inside: HashSet<AgentId> = set.iter().copied().collect();
    let mut out = Vec::new();
    rec(
        p,
        set,
        &inside,
        &mut HashSet::new(),
        &mut Vec::new(),
        &mut HashSet::new(),
        &mut out,
    );
    out
}

/// A perfect matching of `V(H)` using only edges inside `H`, with no blocking
/// pair among `V(H)`.
pub fn hourglass_perfect_es(p: &Profile, hg: &Hourglass) -> Option<Matching> {
    let agents = hg.agents();
    if hg.height() <= 4 {
        let sub = induced_profile(p, &agents);
        let found = enumerate_matchings(&sub, true)
            .find(|m| no_ebp_within(&sub, m, &(0..sub.len()).collect::<Vec<_>>()))?;
        let pairs: Vec<_> = found
            .pairs()
            .into_iter()
            .map(|(a, b)| (agents[a], agents[b]))
            .collect();
        return Some(matching_from(p.len(), &pairs));
    }
    for c in [
        Category::I,
        Category::II,
        Category::V,
        Category::III,
        Category::IV,
        Category::VI,
    ] {
        if let Some(pairs) = category_feasible(p, hg, c, true) {
            return Some(matching_from(p.len(), &pairs));
        }
    }
    None
}

/// Profile restricted to `agents` (relabelled in the given order), keeping
/// the relative order of each list.
pub fn induced_profile(p: &Profile, agents: &[AgentId]) -> Profile {
    let pos: HashMap<AgentId, usize> = agents.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let names = agents.iter().map(|&a| p.name(a).to_string()).collect();
    let prefs = agents
        .iter()
        .map(|&a| {
            p.prefs(a)
                .iter()
                .filter_map(|b| pos.get(b).copied())
                .collect()
        })
        .collect();
    Profile::new(names, prefs, None).expect("restriction of a valid profile is valid")
}

/// Overlap-connected group of maximal hourglasses of height at most three.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HourglassCluster {
    pub hourglasses: Vec<Hourglass>,
    pub agents: Vec<AgentId>,
}

/// All maximal hourglasses, split into tall ones and clusters.
#[derive(Debug, Clone, Default)]
pub struct HourglassCollection {
    /// Every maximal hourglass, in discovery order.
    pub all: Vec<Hourglass>,
    /// Height at least four and overlapping nothing.
    pub tall: Vec<Hourglass>,
    pub clusters: Vec<HourglassCluster>,
}

impl HourglassCollection {
    pub fn ell(&self) -> usize {
        self.all.len()
    }
}

fn layer_key(u0: AgentId, w0: AgentId, u1: AgentId, w1: AgentId) -> [AgentId; 4] {
    [
        [u0, w0, u1, w1],
        [w0, u0, w1, u1],
        [u1, w1, u0, w0],
        [w1, u1, w0, u0],
    ]
    .into_iter()
    .min()
    .unwrap()
}

struct Grower<'g> {
    g: &'g Graph,
    stamp: Vec<u32>,
    cur: u32,
}

impl Grower<'_> {
    fn inside(&self, v: AgentId) -> bool {
        self.stamp[v] == self.cur
    }

    /// The next layer beyond `(ua, wa)` going away from `(ub, wb)`.
    fn step(
        &self,
        ua: AgentId,
        wa: AgentId,
        ub: AgentId,
        wb: AgentId,
    ) -> Option<(AgentId, AgentId)> {
        for &nu in self.g.neighbors(wa) {
            if nu == ua || nu == ub || self.inside(nu) {
                continue;
            }
            for &nw in self.g.neighbors(ua) {
                if nw == wa || nw == wb || nw == nu || self.inside(nw) {
                    continue;
                }
                if self.g.has_edge(nu, nw) {
                    return Some((nu, nw));
                }
            }
        }
        None
    }

    fn grow(&mut self, seed: [AgentId; 4]) -> Hourglass {
        self.cur += 1;
        let [u0, w0, u1, w1] = seed;
        for v in seed {
            self.stamp[v] = self.cur;
        }
        let mut us = std::collections::VecDeque::from([u0, u1]);
        let mut ws = std::collections::VecDeque::from([w0, w1]);
        loop {
            let l = us.len();
            let Some((nu, nw)) = self.step(us[l - 1], ws[l - 1], us[l - 2], ws[l - 2]) else {
                break;
            };
            self.stamp[nu] = self.cur;
            self.stamp[nw] = self.cur;
            us.push_back(nu);
            ws.push_back(nw);
        }
        while let Some((nu, nw)) = self.step(us[0], ws[0], us[1], ws[1]) {
            self.stamp[nu] = self.cur;
            self.stamp[nw] = self.cur;
            us.push_front(nu);
            ws.push_front(nw);
        }
        Hourglass {
            us: us.into(),
            ws: ws.into(),
        }
    }
}

/// Seeds of hourglasses with `(a, b)` as a layer: the 4-cycles through it.
fn seeds_at(g: &Graph, a: AgentId, b: AgentId) -> Vec<[AgentId; 4]> {
    let mut out = Vec::new();
    for &u1 in g.neighbors(b) {
        if u1 == a {
            continue;
        }
        for &w1 in g.neighbors(a) {
            if w1 == b || w1 == u1 {
                continue;
            }
            if g.has_edge(u1, w1) {
                out.push([a, b, u1, w1]);
            }
        }
    }
    out
}

/// The tallest hourglass grown from `edge` taken as a layer, if the edge lies
/// on a 4-cycle with a second layer.
pub fn find_max_hourglass_at(g: &Graph, edge: (AgentId, AgentId)) -> Option<Hourglass> {
    let mut grower = Grower {
        g,
        stamp: vec![0; g.len()],
        cur: 0,
    };
    let mut best: Option<Hourglass> = None;
    for seed in seeds_at(g, edge.0, edge.1) {
        let hg = grower.grow(seed);
        if best.as_ref().is_none_or(|b| hg.height() > b.height()) {
            best = Some(hg);
        }
    }
    best
}

/// Every maximal hourglass of a graph with maximum degree three.
pub fn maximal_hourglasses(g: &Graph) -> Vec<Hourglass> {
    let n = g.len();
    let mut grower = Grower {
        g,
        stamp: vec![0; n],
        cur: 0,
    };
    let mut visited: HashSet<[AgentId; 4]> = HashSet::new();
    let mut found: Vec<Hourglass> = Vec::new();
    let mut by_set: HashSet<Vec<AgentId>> = HashSet::new();
    for a in 0..n {
        for &b in g.neighbors(a) {
            if b < a {
                continue;
            }
            for seed in seeds_at(g, a, b) {
                if visited.contains(&layer_key(seed[0], seed[1], seed[2], seed[3])) {
                    continue;
                }
                let hg = grower.grow(seed);
                for i in 0..hg.height() - 1 {
                    visited.insert(layer_key(hg.us[i], hg.ws[i], hg.us[i + 1], hg.ws[i + 1]));
                }
                if by_set.insert(hg.sorted_agents()) {
                    found.push(hg);
                }
            }
        }
    }
    // drop hourglasses strictly contained in another
    let mut lists: HashMap<AgentId, Vec<usize>> = HashMap::new();
    for (i, hg) in found.iter().enumerate() {
        for a in hg.agents() {
            lists.entry(a).or_default().push(i);
        }
    }
    let sets: Vec<HashSet<AgentId>> = found
        .iter()
        .map(|h| h.agents().into_iter().collect())
        .collect();
    let keep: Vec<bool> = (0..found.len())
        .map(|i| {
            let first = found[i].us[0];
            !lists[&first]
                .iter()
                .any(|&j| j != i && sets[j].len() > sets[i].len() && sets[i].is_subset(&sets[j]))
        })
        .collect();
    found
        .into_iter()
        .zip(keep)
        .filter_map(|(h, k)| k.then_some(h))
        .collect()
}

/// Maximal hourglasses grouped by vertex overlap.
pub fn collect_hourglasses(g: &Graph) -> HourglassCollection {
    let all = maximal_hourglasses(g);
    let k = all.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut owner: HashMap<AgentId, usize> = HashMap::new();
    for (i, hg) in all.iter().enumerate() {
        for a in hg.agents() {
            if let Some(&j) = owner.get(&a) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            } else {
                owner.insert(a, i);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of: HashMap<usize, usize> = HashMap::new();
    for i in 0..k {
        let r = find(&mut parent, i);
        let gi = *group_of.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[gi].push(i);
    }
    let mut tall = Vec::new();
    let mut clusters = Vec::new();
    for grp in groups {
        if grp.len() == 1 && all[grp[0]].height() >= 4 {
            tall.push(all[grp[0]].clone());
            continue;
        }
        let mut agents: Vec<AgentId> = grp.iter().flat_map(|&i| all[i].agents()).collect();
        agents.sort_unstable();
        agents.dedup();
        clusters.push(HourglassCluster {
            hourglasses: grp.iter().map(|&i| all[i].clone()).collect(),
            agents,
        });
    }
    HourglassCollection {
        all,
        tall,
        clusters,
    }
}

/// Covering options of a cluster; see [`covering_options`].
pub fn cluster_matchings(p: &Profile, c: &HourglassCluster) -> Vec<Vec<(AgentId, AgentId)>> {
    covering_options(p, &c.agents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::maximal_hourglass_sets;

    fn ladder(h: usize) -> (Graph, Hourglass) {
        // u_i = 2i, w_i = 2i + 1
        let us: Vec<usize> = (0..h).map(|i| 2 * i).collect();
        let ws: Vec<usize> = (0..h).map(|i| 2 * i + 1).collect();
        let mut g = Graph::new(2 * h);
        for i in 0..h {
            g.add_edge(us[i], ws[i]);
            if i + 1 < h {
                g.add_edge(us[i], ws[i + 1]);
                g.add_edge(us[i + 1], ws[i]);
            }
        }
        (g, Hourglass { us, ws })
    }

    #[test]
    fn ladder_is_one_hourglass() {
        for h in 2..8 {
            let (g, hg) = ladder(h);
            assert!(hg.is_valid(&g));
            let all = maximal_hourglasses(&g);
            assert_eq!(all.len(), 1, "height {h}");
            assert_eq!(all[0].sorted_agents(), hg.sorted_agents());
            let found = find_max_hourglass_at(&g, (hg.us[1], hg.ws[1])).unwrap();
            assert_eq!(found.height(), h);
        }
    }

    #[test]
    fn tree_has_none() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
        assert!(maximal_hourglasses(&g).is_empty());
        assert!(find_max_hourglass_at(&g, (0, 1)).is_none());
    }

    #[test]
    fn overlapping_four_cycles_form_a_cluster() {
        // K_{2,3}: parts {a, c} and {b, d, e}
        let g = Graph::from_edges(5, &[(0, 1), (0, 3), (0, 4), (2, 1), (2, 3), (2, 4)]);
        let c = collect_hourglasses(&g);
        assert_eq!(c.ell(), 3);
        assert!(c.tall.is_empty());
        assert_eq!(c.clusters.len(), 1);
        assert_eq!(c.clusters[0].agents, vec![0, 1, 2, 3, 4]);
        let mut found: Vec<_> = c.all.iter().map(|h| h.sorted_agents()).collect();
        found.sort();
        assert_eq!(found, maximal_hourglass_sets(&g));
    }

    #[test]
    fn categories_cover_perfect_matchings() {
        let (g, hg) = ladder(6);
        let lists: Vec<Vec<usize>> = (0..g.len()).map(|v| g.neighbors(v).to_vec()).collect();
        let names = (0..g.len()).map(|i| format!("v{i}")).collect();
        let p = Profile::new(names, lists, None).unwrap();
        for m in enumerate_matchings(&p, true) {
            assert_eq!(hg.category_of(&m), Some(Category::VI));
        }
    }
}
