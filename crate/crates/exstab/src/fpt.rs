//! Perfect exchange-stable matchings for lists of length at most three.
//!
//! Every blocking pair of a perfect matching spans a 4-cycle, so it lies inside
//! some maximal hourglass. Each tall hourglass is handled through its six
//! categories and each overlap cluster by brute force; all combinations of
//! these choices are tried and the agents outside every hourglass are
//! completed with a maximum matching. The running time is exponential only in
//! the number of hourglasses.

use std::collections::HashMap;

use serde::Serialize;

use crate::blossom::max_matching;
use crate::hourglass::{category_feasible, collect_hourglasses, covering_options, Category};
use crate::profile::{AgentId, Graph, Matching, Profile};
use crate::{check_max_length, SolveError};

type Pairs = Vec<(AgentId, AgentId)>;

/// A group of agents whose matching is chosen from a short option list.
struct Unit {
    agents: Vec<AgentId>,
    options: Vec<Pairs>,
}

/// Outcome of [`solve_d3_fpt_report`].
#[derive(Debug, Clone, Serialize)]
pub struct FptReport {
    #[serde(skip)]
    pub matching: Option<Matching>,
    /// Number of maximal hourglasses.
    pub ell: usize,
    pub clusters: usize,
    pub tall: usize,
    pub heights: Vec<usize>,
    /// Option combinations examined.
    pub combinations: u64,
}

pub fn solve_d3_fpt(p: &Profile) -> Result<Option<Matching>, SolveError> {
    Ok(solve_d3_fpt_report(p, 1)?.matching)
}

/// Solver with statistics; `threads > 1` splits the combinations of each
/// component across scoped threads, keeping the first success by index.
pub fn solve_d3_fpt_report(p: &Profile, threads: usize) -> Result<FptReport, SolveError> {
    check_max_length(p, 3)?;
    let g = p.acceptability_graph();
    let coll = collect_hourglasses(&g);
    let mut units = Vec::new();
    for hg in &coll.tall {
        let options = if hg.height() >= 5 {
            Category::ALL
                .iter()
                .filter_map(|&c| category_feasible(p, hg, c, false))
                .collect()
        } else {
            covering_options(p, &hg.agents())
        };
        units.push(Unit {
            agents: hg.agents(),
            options,
        });
    }
    for c in &coll.clusters {
        units.push(Unit {
            agents: c.agents.clone(),
            options: covering_options(p, &c.agents),
        });
    }
    let mut report = FptReport {
        matching: None,
        ell: coll.ell(),
        clusters: coll.clusters.len(),
        tall: coll.tall.len(),
        heights: coll.all.iter().map(|h| h.height()).collect(),
        combinations: 0,
    };

    let comps = g.components();
    let mut comp_of = vec![0; p.len()];
    for (ci, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = ci;
        }
    }
    let mut units_in: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for (ui, u) in units.iter().enumerate() {
        units_in[comp_of[u.agents[0]]].push(ui);
    }
    let mut in_unit = vec![false; p.len()];
    for u in &units {
        for &a in &u.agents {
            in_unit[a] = true;
        }
    }

    let mut m = Matching::empty(p.len());
    for (ci, comp) in comps.iter().enumerate() {
        if comp.len() % 2 == 1 {
            return Ok(report);
        }
        let local: Vec<&Unit> = units_in[ci].iter().map(|&i| &units[i]).collect();
        let mut solver = Component::new(&g, comp, &in_unit);
        let (found, tried) = solver.solve(&local, threads.max(1));
        report.combinations += tried;
        match found {
            Some(pairs) => {
                for (a, b) in pairs {
                    m.pair(a, b);
                }
            }
            None => return Ok(report),
        }
    }
    report.matching = Some(m);
    Ok(report)
}

/// Residual structure of one component of the acceptability graph.
struct Component<'g> {
    g: &'g Graph,
    /// Components of the graph left after deleting all unit agents.
    parts: Vec<Vec<AgentId>>,
    part_of: HashMap<AgentId, usize>,
    /// Matching of each untouched part, if perfect.
    base: Vec<Option<Pairs>>,
}

impl<'g> Component<'g> {
    fn new(g: &'g Graph, comp: &[AgentId], in_unit: &[bool]) -> Self {
        let rest: Vec<AgentId> = comp.iter().copied().filter(|&v| !in_unit[v]).collect();
        let sub = g.induced(&rest);
        let parts: Vec<Vec<AgentId>> = sub
            .components()
            .into_iter()
            .map(|c| c.into_iter().map(|i| rest[i]).collect())
            .collect();
        let mut part_of = HashMap::new();
        for (i, part) in parts.iter().enumerate() {
            for &v in part {
                part_of.insert(v, i);
            }
        }
        let base = parts.iter().map(|part| perfect_on(g, part, &[])).collect();
        Component {
            g,
            parts,
            part_of,
            base,
        }
    }

    fn solve(&mut self, units: &[&Unit], threads: usize) -> (Option<Pairs>, u64) {
        if units.iter().any(|u| u.options.is_empty()) {
            return (None, 0);
        }
        let total: u64 = units.iter().map(|u| u.options.len() as u64).product();
        let this = &*self;
        if threads <= 1 || total < 2 * threads as u64 {
            let mut memo = HashMap::new();
            return this.scan(units, 0, total, &mut memo);
        }
        let chunk = total.div_ceil(threads as u64);
        let results: Vec<(Option<Pairs>, u64)> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads as u64)
                .map(|t| {
                    let lo = (t * chunk).min(total);
                    let hi = ((t + 1) * chunk).min(total);
                    s.spawn(move || this.scan(units, lo, hi, &mut HashMap::new()))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let tried = results.iter().map(|r| r.1).sum();
        (results.into_iter().find_map(|r| r.0), tried)
    }

    /// First feasible combination with index in `lo..hi`.
    fn scan(
        &self,
        units: &[&Unit],
        lo: u64,
        hi: u64,
        memo: &mut HashMap<(usize, Vec<AgentId>), Option<Pairs>>,
    ) -> (Option<Pairs>, u64) {
        let bad_base: Vec<usize> = (0..self.parts.len())
            .filter(|&i| self.base[i].is_none())
            .collect();
        let mut tried = 0;
        for idx in lo..hi {
            tried += 1;
            let mut rem = idx;
            let mut partner: HashMap<AgentId, AgentId> = HashMap::new();
            let mut ok = true;
            'units: for u in units {
                let k = u.options.len() as u64;
                let opt = &u.options[(rem % k) as usize];
                rem /= k;
                for &(a, b) in opt {
                    for (x, y) in [(a, b), (b, a)] {
                        match partner.get(&x) {
                            Some(&z) if z != y => {
                                ok = false;
                                break 'units;
                            }
                            _ => {
                                partner.insert(x, y);
                            }
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            // outside agents claimed by some unit, grouped by residual part
            let mut claimed: HashMap<usize, Vec<AgentId>> = HashMap::new();
            for &a in partner.keys() {
                if let Some(&pi) = self.part_of.get(&a) {
                    claimed.entry(pi).or_default().push(a);
                }
            }
            if bad_base.iter().any(|pi| !claimed.contains_key(pi)) {
                continue;
            }
            let mut pairs: Pairs = Vec::new();
            for (&pi, removed) in claimed.iter_mut() {
                removed.sort_unstable();
                let key = (pi, removed.clone());
                let res = memo
                    .entry(key)
                    .or_insert_with(|| perfect_on(self.g, &self.parts[pi], removed));
                match res {
                    Some(ps) => pairs.extend(ps.iter().copied()),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            for (pi, b) in self.base.iter().enumerate() {
                if !claimed.contains_key(&pi) {
                    pairs.extend(b.as_ref().unwrap().iter().copied());
                }
            }
            pairs.extend(partner.iter().filter(|(a, b)| a < b).map(|(&a, &b)| (a, b)));
            return (Some(pairs), tried);
        }
        (None, tried)
    }
}

/// A perfect matching of `part` minus `removed`, if one exists.
fn perfect_on(g: &Graph, part: &[AgentId], removed: &[AgentId]) -> Option<Pairs> {
    let keep: Vec<AgentId> = part
        .iter()
        .copied()
        .filter(|v| removed.binary_search(v).is_err())
        .collect();
    if keep.len() % 2 == 1 {
        return None;
    }
    let sub = g.induced(&keep);
    let mm = max_matching(&sub);
    (mm.size() * 2 == keep.len()).then(|| {
        mm.pairs()
            .into_iter()
            .map(|(a, b)| (keep[a], keep[b]))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::solve_brute;
    use crate::stability::{is_exchange_stable, is_perfect};
    use crate::{parse_profile, Criterion};

    #[test]
    fn swap_market_matches_stable_fixtures() {
        let p = fixtures::swap_market();
        let m = solve_d3_fpt(&p).unwrap().unwrap();
        let m1 = Matching::from_names(&p, fixtures::M1).unwrap();
        let m2 = Matching::from_names(&p, fixtures::M2).unwrap();
        assert!(m == m1 || m == m2);
    }

    #[test]
    fn forest_takes_its_perfect_matching() {
        let p = parse_profile("a: b\nb: a c\nc: b d\nd: c e f\ne: d\nf: d\n").unwrap();
        assert_eq!(solve_d3_fpt(&p).unwrap(), None);
        let q = parse_profile("a: b\nb: a c\nc: b d\nd: c\n").unwrap();
        let m = solve_d3_fpt(&q).unwrap().unwrap();
        assert_eq!(m.pairs(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn cycle_market_agrees_with_oracle() {
        let p = fixtures::cycle_market();
        let m = solve_d3_fpt(&p).unwrap().unwrap();
        assert!(is_perfect(&p, &m) && is_exchange_stable(&p, &m));
        assert!(solve_brute(&p, Criterion::Es, true).is_some());
    }
}
