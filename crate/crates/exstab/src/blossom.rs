//! Maximum-cardinality matching in general graphs (Edmonds' blossom search).

use std::collections::VecDeque;

use crate::profile::{Graph, Matching};

const NIL: usize = usize::MAX;

struct Search<'g> {
    g: &'g Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, mate: Vec<usize>) -> Self {
        let n = g.len();
        Search {
            g,
            mate,
            parent: vec![NIL; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn touch(&mut self, v: usize) {
        if !self.used[v] && self.parent[v] == NIL && self.base[v] == v {
            self.touched.push(v);
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.parent[v] = NIL;
            self.base[v] = v;
            self.used[v] = false;
            self.blossom[v] = false;
        }
        self.touched.clear();
        self.queue.clear();
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = std::collections::HashSet::new();
        loop {
            a = self.base[a];
            seen.insert(a);
            if self.mate[a] == NIL {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen.contains(&b) {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize, marked: &mut Vec<usize>) {
        while self.base[v] != b {
            let mv = self.mate[v];
            for x in [self.base[v], self.base[mv]] {
                if !self.blossom[x] {
                    self.blossom[x] = true;
                    marked.push(x);
                }
            }
            self.touch(mv);
            self.parent[v] = child;
            child = mv;
            v = self.parent[mv];
        }
    }

    /// BFS for an augmenting path from `root`; returns its free endpoint.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        self.reset();
        self.touch(root);
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for i in 0..self.g.adj[v].len() {
                let to = self.g.adj[v][i];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NIL && self.parent[self.mate[to]] != NIL) {
                    let cur = self.lca(v, to);
                    let mut marked = Vec::new();
                    self.mark_path(v, cur, to, &mut marked);
                    self.mark_path(to, cur, v, &mut marked);
                    let members: Vec<usize> = self.touched.clone();
                    for x in members {
                        if self.blossom[self.base[x]] {
                            self.base[x] = cur;
                            if !self.used[x] {
                                self.used[x] = true;
                                self.queue.push_back(x);
                            }
                        }
                    }
                    for x in marked {
                        self.blossom[x] = false;
                    }
                } else if self.parent[to] == NIL {
                    self.touch(to);
                    self.parent[to] = v;
                    if self.mate[to] == NIL {
                        return Some(to);
                    }
                    let m = self.mate[to];
                    self.touch(m);
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NIL {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

/// Maximum-cardinality matching, starting from a greedy matching.
pub fn max_matching(g: &Graph) -> Matching {
    let n = g.len();
    let mut mate = vec![NIL; n];
    // greedy seed, low-degree vertices first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| g.degree(v));
    for &v in &order {
        if mate[v] != NIL {
            continue;
        }
        if let Some(&w) = g.adj[v]
            .iter()
            .filter(|&&w| mate[w] == NIL)
            .min_by_key(|&&w| g.degree(w))
        {
            mate[v] = w;
            mate[w] = v;
        }
    }
    let mut s = Search::new(g, mate);
    for v in 0..n {
        if s.mate[v] == NIL {
            if let Some(end) = s.find_path(v) {
                s.augment(end);
            }
        }
    }
    let mut m = Matching::empty(n);
    for v in 0..n {
        let w = s.mate[v];
        if w != NIL && v < w {
            m.pair(v, w);
        }
    }
    m
}

/// Whether `g` has a perfect matching.
pub fn has_perfect_matching(g: &Graph) -> bool {
    g.len().is_multiple_of(2) && max_matching(g).size() * 2 == g.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive maximum matching size for tiny graphs.
    fn brute(g: &Graph) -> usize {
        fn rec(g: &Graph, used: &mut Vec<bool>, v: usize) -> usize {
            if v == g.len() {
                return 0;
            }
            if used[v] {
                return rec(g, used, v + 1);
            }
            let mut best = rec(g, used, v + 1);
            used[v] = true;
            for &w in &g.adj[v] {
                if !used[w] {
                    used[w] = true;
                    best = best.max(1 + rec(g, used, v + 1));
                    used[w] = false;
                }
            }
            used[v] = false;
            best
        }
        rec(g, &mut vec![false; g.len()], 0)
    }

    fn check(g: &Graph) {
        let m = max_matching(g);
        for (a, b) in m.pairs() {
            assert!(g.has_edge(a, b));
        }
        assert_eq!(m.size(), brute(g), "graph {:?}", g.adj);
    }

    #[test]
    fn small_graphs() {
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(max_matching(&k4).size(), 2);
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(max_matching(&c5).size(), 2);
        // blossom needed: triangle with tails
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (0, 4), (1, 5)]);
        check(&g);
    }

    #[test]
    fn random_graphs_match_exhaustive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(1..=12);
            let mut g = Graph::new(n);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.3) && g.degree(a) < 3 && g.degree(b) < 3 {
                        g.add_edge(a, b);
                    }
                }
            }
            check(&g);
        }
        for _ in 0..200 {
            let n = rng.gen_range(1..=11);
            let mut g = Graph::new(n);
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.4) {
                        g.add_edge(a, b);
                    }
                }
            }
            check(&g);
        }
    }
}
