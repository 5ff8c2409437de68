//! Random and structured instance generators.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hourglass::Hourglass;
use crate::profile::{AgentId, Graph, Matching, Profile};

/// Seed from `EXSTAB_SEED` when set and parseable, else `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("EXSTAB_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Profile on `g` with each list a uniformly random order of the neighbours.
/// Isolated vertices are dropped; names are `v0, v1, ...` over the survivors.
pub fn profile_on_graph<R: Rng>(g: &Graph, sides: Option<&[u8]>, rng: &mut R) -> Profile {
    let keep: Vec<usize> = (0..g.len()).filter(|&v| g.degree(v) > 0).collect();
    let mut pos = vec![usize::MAX; g.len()];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i;
    }
    let names: Vec<String> = (0..keep.len()).map(|i| format!("v{i}")).collect();
    let prefs: Vec<Vec<AgentId>> = keep
        .iter()
        .map(|&v| {
            let mut l: Vec<AgentId> = g.neighbors(v).iter().map(|&w| pos[w]).collect();
            l.shuffle(rng);
            l
        })
        .collect();
    let sides = sides.map(|s| {
        let u = keep
            .iter()
            .filter(|&&v| s[v] == 1)
            .map(|&v| pos[v])
            .collect();
        let w = keep
            .iter()
            .filter(|&&v| s[v] == 2)
            .map(|&v| pos[v])
            .collect();
        (u, w)
    });
    Profile::new(names, prefs, sides).expect("generated profile is valid")
}

/// Random graph on `n` vertices with maximum degree `d`: each candidate edge
/// is kept with probability `density` while both ends have room.
pub fn random_graph<R: Rng>(n: usize, d: usize, density: f64, rng: &mut R) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    pairs.shuffle(rng);
    let mut g = Graph::new(n);
    for (a, b) in pairs {
        if g.degree(a) < d && g.degree(b) < d && rng.gen_bool(density) {
            g.add_edge(a, b);
        }
    }
    g
}

/// Random roommates profile with lists of length at most `d`.
pub fn random_profile<R: Rng>(n: usize, d: usize, density: f64, rng: &mut R) -> Profile {
    loop {
        let g = random_graph(n, d, density, rng);
        if (0..n).any(|v| g.degree(v) > 0) {
            return profile_on_graph(&g, None, rng);
        }
    }
}

/// Random marriage profile, `k` agents per side, lists of length at most `d`.
pub fn random_bipartite_profile<R: Rng>(k: usize, d: usize, density: f64, rng: &mut R) -> Profile {
    loop {
        let mut g = Graph::new(2 * k);
        let mut pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|a| (k..2 * k).map(move |b| (a, b)))
            .collect();
        pairs.shuffle(rng);
        for (a, b) in pairs {
            if g.degree(a) < d && g.degree(b) < d && rng.gen_bool(density) {
                g.add_edge(a, b);
            }
        }
        let sides: Vec<u8> = (0..2 * k).map(|v| if v < k { 1 } else { 2 }).collect();
        let keep: Vec<usize> = (0..2 * k).filter(|&v| g.degree(v) > 0).collect();
        let nu = keep.iter().filter(|&&v| v < k).count();
        if nu > 0 && 2 * nu == keep.len() {
            return profile_on_graph(&g, Some(&sides), rng);
        }
    }
}

/// Random matching: edges in random order, each added with probability
/// `take` when both ends are free.
pub fn random_matching<R: Rng>(p: &Profile, take: f64, rng: &mut R) -> Matching {
    let mut edges = p.acceptability_graph().edges();
    edges.shuffle(rng);
    let mut m = Matching::empty(p.len());
    for (a, b) in edges {
        if !m.is_matched(a) && !m.is_matched(b) && rng.gen_bool(take) {
            m.pair(a, b);
        }
    }
    m
}

/// Extra edges between the boundary agents of a ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Wraps {
    /// `u_0 u_{h-1}`
    pub a: bool,
    /// `w_0 w_{h-1}`
    pub b: bool,
    /// `u_0 w_{h-1}`
    pub c: bool,
    /// `w_0 u_{h-1}`
    pub d: bool,
}

impl Wraps {
    /// Every combination keeping all degrees at most three, for height `h`.
    pub fn valid_for(h: usize) -> Vec<Wraps> {
        let none = Wraps::default();
        let mut out = vec![
            none,
            Wraps { a: true, ..none },
            Wraps { b: true, ..none },
            Wraps {
                a: true,
                b: true,
                ..none
            },
        ];
        if h >= 3 {
            out.extend([
                Wraps { c: true, ..none },
                Wraps { d: true, ..none },
                Wraps {
                    c: true,
                    d: true,
                    ..none
                },
            ]);
        }
        out
    }
}

/// The ladder graph of height `h` (`u_i = 2i`, `w_i = 2i + 1`) plus `wraps`.
pub fn hourglass_graph(h: usize, wraps: Wraps) -> (Graph, Hourglass) {
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
    let l = h - 1;
    for (on, x, y) in [
        (wraps.a, us[0], us[l]),
        (wraps.b, ws[0], ws[l]),
        (wraps.c, us[0], ws[l]),
        (wraps.d, ws[0], us[l]),
    ] {
        if on && !g.has_edge(x, y) {
            g.add_edge(x, y);
        }
    }
    (g, Hourglass { us, ws })
}

/// Random preferences on a standalone hourglass.
pub fn random_hourglass_profile<R: Rng>(
    h: usize,
    wraps: Wraps,
    rng: &mut R,
) -> (Profile, Hourglass) {
    let (g, hg) = hourglass_graph(h, wraps);
    (profile_on_graph(&g, None, rng), hg)
}

/// Large instance with lists of length at most three whose only 4-cycles sit
/// in `ell` ladders of height `h`.
///
/// The backbone is a long path; each ladder hangs off it through two
/// boundary agents. About `n` agents in total.
pub fn synthetic_sparse<R: Rng>(n: usize, ell: usize, h: usize, rng: &mut R) -> Profile {
    let ladder = 2 * h;
    let backbone = (n - ell * ladder) & !1;
    let total = backbone + ell * ladder;
    let mut g = Graph::new(total);
    for v in 0..backbone.saturating_sub(1) {
        g.add_edge(v, v + 1);
    }
    let spacing = backbone / (ell + 1);
    for k in 0..ell {
        let base = backbone + k * ladder;
        let (lg, _) = hourglass_graph(h, Wraps::default());
        for (a, b) in lg.edges() {
            g.add_edge(base + a, base + b);
        }
        // hang u_0 and w_{h-1} off two backbone vertices far apart
        let anchor = spacing * (k + 1);
        g.add_edge(base, anchor);
        g.add_edge(base + 2 * h - 1, (anchor + spacing / 2) | 1);
    }
    profile_on_graph(&g, None, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hourglass::collect_hourglasses;

    #[test]
    fn generators_respect_bounds() {
        let mut r = rng(3);
        for _ in 0..50 {
            let p = random_profile(10, 3, 0.4, &mut r);
            assert!(p.max_length() <= 3);
            let q = random_bipartite_profile(5, 2, 0.5, &mut r);
            assert!(q.is_bipartite() && q.max_length() <= 2);
            let m = random_matching(&p, 0.7, &mut r);
            for (a, b) in m.pairs() {
                assert!(p.is_acceptable(a, b));
            }
        }
    }

    #[test]
    fn synthetic_instance_has_requested_hourglasses() {
        let p = synthetic_sparse(2000, 4, 6, &mut rng(1));
        assert!(p.max_length() <= 3);
        let c = collect_hourglasses(&p.acceptability_graph());
        assert_eq!(c.ell(), 4);
        assert_eq!(c.tall.len(), 4);
    }

    #[test]
    fn wrapped_ladders_stay_valid() {
        for h in 2..8 {
            for w in Wraps::valid_for(h) {
                let (g, hg) = hourglass_graph(h, w);
                assert!(g.max_degree() <= 3);
                assert!(hg.is_valid(&g));
            }
        }
    }
}
