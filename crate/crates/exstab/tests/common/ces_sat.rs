//! Exact CES search on complete bipartite profiles through a SAT solver.
//!
//! On such a profile every CES matching is perfect (two free agents would
//! envy each other) and envy arcs join agents of the same side, so a perfect
//! matching is CES iff each side's envy graph is acyclic, i.e. contained in a
//! linear order. Variables: one per pair, a tournament per side with directed
//! triangles forbidden, and ladder variables "partner ranked r or better".

use exstab::{AgentId, Matching, Profile};

/// CNF over variables `1..=num_vars`, DIMACS-signed literals.
pub struct Encoding {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    u: Vec<AgentId>,
    w: Vec<AgentId>,
}

impl Encoding {
    /// Matching read off a model given as the set of true variables.
    pub fn decode(&self, p: &Profile, truth: &[bool]) -> Matching {
        let k = self.u.len();
        let mut m = Matching::empty(p.len());
        for i in 0..k {
            for j in 0..k {
                if truth[1 + i * k + j] {
                    m.pair(self.u[i], self.w[j]);
                }
            }
        }
        m
    }
}

/// `None` when the profile is not complete and bipartite.
pub fn encode(p: &Profile) -> Option<Encoding> {
    let (u, w) = p.sides()?;
    if !p.is_complete() {
        return None;
    }
    let (u, w) = (u.to_vec(), w.to_vec());
    let k = u.len();
    let mut pos = vec![0usize; p.len()];
    for (i, &x) in u.iter().enumerate() {
        pos[x] = i;
    }
    for (i, &y) in w.iter().enumerate() {
        pos[y] = i;
    }
    let mut next = 1 + k * k;
    let mut fresh = |count: usize| {
        let base = next;
        next += count;
        base
    };
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mate = |a: AgentId, b: AgentId| -> i32 {
        let (i, j) = if p.side(a) == 1 {
            (pos[a], pos[b])
        } else {
            (pos[b], pos[a])
        };
        (1 + i * k + j) as i32
    };
    for side in [&u, &w] {
        for &a in side.iter() {
            let all: Vec<i32> = p.prefs(a).iter().map(|&b| mate(a, b)).collect();
            clauses.push(all.clone());
            for i in 0..all.len() {
                for j in i + 1..all.len() {
                    clauses.push(vec![-all[i], -all[j]]);
                }
            }
        }
    }
    for side in [&u, &w] {
        // an agent envying nobody holds its first choice
        clauses.push(side.iter().map(|&a| mate(a, p.prefs(a)[0])).collect());
    }
    for side in [&u, &w] {
        // at(a, r): a's partner has rank <= r
        let at_base = fresh(k * k);
        let at = |ia: usize, r: usize| (at_base + ia * k + r) as i32;
        for (ia, &a) in side.iter().enumerate() {
            for r in 0..k {
                let m = mate(a, p.prefs(a)[r]);
                clauses.push(vec![-m, at(ia, r)]);
                if r == 0 {
                    clauses.push(vec![-at(ia, 0), m]);
                } else {
                    clauses.push(vec![-at(ia, r), at(ia, r - 1), m]);
                    clauses.push(vec![-at(ia, r - 1), at(ia, r)]);
                }
            }
        }
        let t_base = fresh(k * k);
        let ahead = |i: usize, j: usize| -> i32 {
            if i < j {
                (t_base + i * k + j) as i32
            } else {
                -((t_base + j * k + i) as i32)
            }
        };
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    clauses.push(vec![-ahead(i, j), -ahead(j, l), -ahead(l, i)]);
                    clauses.push(vec![-ahead(j, i), -ahead(l, j), -ahead(i, l)]);
                }
            }
        }
        for (ia, &a) in side.iter().enumerate() {
            for (ib, &b) in side.iter().enumerate() {
                if a == b {
                    continue;
                }
                // b holds t and a ranks its own partner below t: a envies b
                for (r, &t) in p.prefs(a).iter().enumerate() {
                    clauses.push(vec![-mate(b, t), at(ia, r), ahead(ia, ib)]);
                }
            }
        }
    }
    Some(Encoding {
        num_vars: next - 1,
        clauses,
        u,
        w,
    })
}

/// `None` when the profile is not complete and bipartite.
pub fn solve_ces_complete_sat(p: &Profile) -> Option<Option<Matching>> {
    use batsat::{lbool, BasicSolver, Lit, SolverInterface};
    let enc = encode(p)?;
    let mut solver = BasicSolver::default();
    let vars: Vec<batsat::Var> = (0..enc.num_vars)
        .map(|_| solver.new_var_default())
        .collect();
    let mut buf = Vec::new();
    for c in &enc.clauses {
        buf.clear();
        buf.extend(
            c.iter()
                .map(|&l| Lit::new(vars[l.unsigned_abs() as usize - 1], l > 0)),
        );
        solver.add_clause_reuse(&mut buf);
    }
    if solver.solve_limited(&[]) != lbool::TRUE {
        return Some(None);
    }
    let mut truth = vec![false; enc.num_vars + 1];
    for (i, &v) in vars.iter().enumerate() {
        truth[i + 1] = solver.value_var(v) == lbool::TRUE;
    }
    Some(Some(enc.decode(p, &truth)))
}
