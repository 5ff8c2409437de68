//! Independent set to bounded swap reachability.
//!
//! Edge-list files: a header line `n m`, then `m` lines `u v` with 1-based
//! vertex numbers. Lines starting with `#` are ignored.

use super::{Builder, ReductionError};
use crate::profile::{AgentId, Graph, Matching, Profile};

/// Generated instance: profile, start matching and swap budget `2h`.
#[derive(Debug, Clone)]
pub struct PesmInstance {
    pub profile: Profile,
    pub m0: Matching,
    pub budget: usize,
    pub s: Vec<AgentId>,
    pub t: Vec<AgentId>,
    pub x: Vec<AgentId>,
    pub u: Vec<AgentId>,
    pub y: Vec<AgentId>,
    pub w: Vec<AgentId>,
}

impl PesmInstance {
    /// Swap sequence reaching a stable matching from an independent set of
    /// size `h` (0-based vertices): for the `z`-th vertex `j`, swap `t_z`
    /// with `w_j`, then `x_j` with `u_j`.
    pub fn witness_swaps(&self, set: &[usize]) -> Vec<(AgentId, AgentId)> {
        set.iter()
            .enumerate()
            .flat_map(|(z, &j)| [(self.t[z], self.w[j]), (self.x[j], self.u[j])])
            .collect()
    }
}

pub fn is_to_pesm(g: &Graph, h: usize) -> Result<PesmInstance, ReductionError> {
    let n = g.len();
    if h == 0 || h > n {
        return Err(ReductionError::TargetOutOfRange { h, n });
    }
    let mut bld = Builder::default();
    let s: Vec<AgentId> = (1..=h).map(|j| bld.add(format!("s{j}"), 1)).collect();
    let t: Vec<AgentId> = (1..=h).map(|j| bld.add(format!("t{j}"), 2)).collect();
    let x: Vec<AgentId> = (1..=n).map(|i| bld.add(format!("x{i}"), 1)).collect();
    let u: Vec<AgentId> = (1..=n).map(|i| bld.add(format!("u{i}"), 1)).collect();
    let y: Vec<AgentId> = (1..=n).map(|i| bld.add(format!("y{i}"), 2)).collect();
    let w: Vec<AgentId> = (1..=n).map(|i| bld.add(format!("w{i}"), 2)).collect();
    for j in 0..h {
        bld.set(s[j], w.iter().copied().chain([t[j]]).collect());
        bld.set(t[j], u.iter().chain(&x).copied().chain([s[j]]).collect());
    }
    for i in 0..n {
        let mut nb = g.neighbors(i).to_vec();
        nb.sort_unstable();
        bld.set(x[i], t.iter().copied().chain([y[i]]).collect());
        bld.set(
            y[i],
            [u[i], x[i]]
                .into_iter()
                .chain(nb.iter().map(|&z| u[z]))
                .collect(),
        );
        bld.set(
            u[i],
            std::iter::once(w[i])
                .chain(nb.iter().map(|&z| y[z]))
                .chain([y[i]])
                .chain(t.iter().copied())
                .collect(),
        );
        bld.set(w[i], s.iter().copied().chain([u[i]]).collect());
    }
    let profile = bld.build()?;
    let mut pairs: Vec<(AgentId, AgentId)> = (0..h).map(|j| (s[j], t[j])).collect();
    for i in 0..n {
        pairs.push((u[i], w[i]));
        pairs.push((x[i], y[i]));
    }
    let m0 = Matching::from_pairs(&profile, &pairs)?;
    Ok(PesmInstance {
        profile,
        m0,
        budget: 2 * h,
        s,
        t,
        x,
        u,
        y,
        w,
    })
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ReductionError> {
    let err = |line: usize, msg: &str| ReductionError::EdgeList {
        line,
        msg: msg.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| err(1, "missing `n m` header"))?;
    let nums = |l: &str, ln: usize| -> Result<(usize, usize), ReductionError> {
        let v: Vec<&str> = l.split_whitespace().collect();
        if v.len() != 2 {
            return Err(err(ln, "expected two integers"));
        }
        let a = v[0].parse().map_err(|_| err(ln, "bad integer"))?;
        let b = v[1].parse().map_err(|_| err(ln, "bad integer"))?;
        Ok((a, b))
    };
    let (n, m) = nums(header, hl)?;
    let mut g = Graph::new(n);
    let mut count = 0;
    for (ln, l) in lines {
        let (a, b) = nums(l, ln)?;
        if a == 0 || b == 0 || a > n || b > n {
            return Err(err(ln, "vertex out of range"));
        }
        if a == b {
            return Err(err(ln, "self-loop"));
        }
        if g.has_edge(a - 1, b - 1) {
            return Err(err(ln, "repeated edge"));
        }
        g.add_edge(a - 1, b - 1);
        count += 1;
    }
    if count != m {
        return Err(err(
            hl,
            &format!("header declares {m} edges, found {count}"),
        ));
    }
    Ok(g)
}

pub fn serialize_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut s = format!("{} {}\n", g.len(), edges.len());
    for (a, b) in edges {
        s.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    s
}

/// Some independent set of size `h`, by exhaustive search.
pub fn has_independent_set(g: &Graph, h: usize) -> Option<Vec<usize>> {
    fn rec(g: &Graph, v: usize, h: usize, cur: &mut Vec<usize>) -> bool {
        if cur.len() == h {
            return true;
        }
        if g.len() - v < h - cur.len() {
            return false;
        }
        if cur.iter().all(|&c| !g.has_edge(c, v)) {
            cur.push(v);
            if rec(g, v + 1, h, cur) {
                return true;
            }
            cur.pop();
        }
        rec(g, v + 1, h, cur)
    }
    let mut cur = Vec::new();
    rec(g, 0, h, &mut cur).then_some(cur)
}
