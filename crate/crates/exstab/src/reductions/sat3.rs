//! Formula to bipartite profile with lists of length at most three.
//!
//! Agent names (indices 1-based): variable agents `v_3`, `w_3`, `x_3`,
//! `xbar_3`, `y_3`, `ybar_3`; clause agents `c_4`, `d_4`; per occurrence of
//! variable 3 in clause 4 the agents `e_i3_c4`, `f_i3_c4` and the switch
//! agents `a0_i3_c4 .. a6_i3_c4`, `b0_i3_c4 .. b6_i3_c4`.

use std::collections::{BTreeSet, HashMap};

use super::cnf::{lit_value, CnfFormula, Literal};
use super::gadget::SwitchGadget;
use super::{Builder, ReductionError};
use crate::profile::{AgentId, Matching, Profile};

/// One occurrence of a literal in a clause, with its gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    /// 0-based variable.
    pub var: usize,
    pub positive: bool,
    /// 0-based clause.
    pub clause: usize,
    /// Whether this is the literal's second occurrence (by clause index).
    pub second: bool,
    pub e: AgentId,
    pub f: AgentId,
    pub gadget: SwitchGadget,
}

/// Agent handles of a generated profile, all vectors indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetMap {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub v: Vec<AgentId>,
    pub w: Vec<AgentId>,
    pub x: Vec<AgentId>,
    pub xbar: Vec<AgentId>,
    pub y: Vec<AgentId>,
    pub ybar: Vec<AgentId>,
    pub c: Vec<AgentId>,
    pub d: Vec<AgentId>,
    pub occurrences: Vec<Occurrence>,
    index: HashMap<(usize, usize), usize>,
}

impl GadgetMap {
    /// Occurrence of variable `var` in clause `clause`.
    pub fn occurrence(&self, var: usize, clause: usize) -> Option<&Occurrence> {
        self.index
            .get(&(var, clause))
            .map(|&i| &self.occurrences[i])
    }

    /// First and second occurrence of a literal.
    pub fn occurrences_of(&self, var: usize, positive: bool) -> [&Occurrence; 2] {
        let mut it = self
            .occurrences
            .iter()
            .filter(|o| o.var == var && o.positive == positive);
        let first = it.next().expect("literal occurs twice");
        let second = it.next().expect("literal occurs twice");
        [first, second]
    }

    /// `y` agents of every literal and `e` agents.
    pub fn middle_w(&self) -> Vec<AgentId> {
        let mut v: Vec<AgentId> = self.y.iter().chain(&self.ybar).copied().collect();
        v.extend(self.occurrences.iter().map(|o| o.e));
        v
    }

    /// `x` agents of every literal and `f` agents.
    pub fn middle_u(&self) -> Vec<AgentId> {
        let mut v: Vec<AgentId> = self.x.iter().chain(&self.xbar).copied().collect();
        v.extend(self.occurrences.iter().map(|o| o.f));
        v
    }
}

pub fn sat_to_cesm3(f: &CnfFormula) -> Result<(Profile, GadgetMap), ReductionError> {
    f.validate_22().map_err(ReductionError::NotTwoTwo)?;
    let n = f.num_vars;
    let m = f.clauses.len();
    let mut bld = Builder::default();
    let mut v = Vec::new();
    let mut w = Vec::new();
    let mut x = Vec::new();
    let mut xbar = Vec::new();
    let mut y = Vec::new();
    let mut ybar = Vec::new();
    for i in 1..=n {
        v.push(bld.add(format!("v_{i}"), 1));
        w.push(bld.add(format!("w_{i}"), 2));
        x.push(bld.add(format!("x_{i}"), 1));
        xbar.push(bld.add(format!("xbar_{i}"), 1));
        y.push(bld.add(format!("y_{i}"), 2));
        ybar.push(bld.add(format!("ybar_{i}"), 2));
    }
    let mut c = Vec::new();
    let mut d = Vec::new();
    for j in 1..=m {
        c.push(bld.add(format!("c_{j}"), 1));
        d.push(bld.add(format!("d_{j}"), 2));
    }
    // occurrences sorted by clause, then variable
    let mut occ_keys: Vec<(usize, usize, bool)> = Vec::new();
    for (j, cl) in f.clauses.iter().enumerate() {
        let mut lits: Vec<Literal> = cl.clone();
        lits.sort_by_key(|l| l.unsigned_abs());
        for l in lits {
            occ_keys.push((j, l.unsigned_abs() as usize - 1, l > 0));
        }
    }
    let mut ef = Vec::new();
    for &(j, i, _) in &occ_keys {
        let e = bld.add(format!("e_i{}_c{}", i + 1, j + 1), 2);
        let fa = bld.add(format!("f_i{}_c{}", i + 1, j + 1), 1);
        ef.push((e, fa));
    }
    let mut ab = Vec::new();
    for &(j, i, _) in &occ_keys {
        let a: [AgentId; 7] =
            std::array::from_fn(|z| bld.add(format!("a{z}_i{}_c{}", i + 1, j + 1), 1));
        let b: [AgentId; 7] =
            std::array::from_fn(|z| bld.add(format!("b{z}_i{}_c{}", i + 1, j + 1), 2));
        ab.push((a, b));
    }
    let mut seen: HashMap<(usize, bool), usize> = HashMap::new();
    let mut first_of: HashMap<(usize, bool), usize> = HashMap::new();
    let mut second_of: HashMap<(usize, bool), usize> = HashMap::new();
    for (k, &(_, i, pos)) in occ_keys.iter().enumerate() {
        let cnt = seen.entry((i, pos)).or_insert(0);
        if *cnt == 0 {
            first_of.insert((i, pos), k);
        } else {
            second_of.insert((i, pos), k);
        }
        *cnt += 1;
    }
    let lit_agent = |i: usize, pos: bool| if pos { x[i] } else { xbar[i] };
    let y_agent = |i: usize, pos: bool| if pos { y[i] } else { ybar[i] };
    let mut occurrences = Vec::new();
    let mut index = HashMap::new();
    for (k, &(j, i, pos)) in occ_keys.iter().enumerate() {
        let second = second_of[&(i, pos)] == k;
        let (a, b) = ab[k];
        let (alpha, delta) = if second {
            (ab[first_of[&(i, pos)]].0[6], y_agent(i, pos))
        } else {
            (lit_agent(i, pos), ab[second_of[&(i, pos)]].1[0])
        };
        let gadget = SwitchGadget {
            a,
            b,
            alpha,
            beta: ef[k].0,
            gamma: ef[k].1,
            delta,
        };
        index.insert((i, j), k);
        occurrences.push(Occurrence {
            var: i,
            positive: pos,
            clause: j,
            second,
            e: ef[k].0,
            f: ef[k].1,
            gadget,
        });
    }
    for i in 0..n {
        let o1 = |pos| &ab[first_of[&(i, pos)]];
        let o2 = |pos| &ab[second_of[&(i, pos)]];
        bld.set(v[i], vec![y[i], ybar[i]]);
        bld.set(w[i], vec![x[i], xbar[i]]);
        bld.set(x[i], vec![w[i], o1(true).1[0]]);
        bld.set(xbar[i], vec![w[i], o1(false).1[0]]);
        bld.set(y[i], vec![v[i], o2(true).0[6]]);
        bld.set(ybar[i], vec![v[i], o2(false).0[6]]);
    }
    for j in 0..m {
        let ks: Vec<usize> = (0..occ_keys.len())
            .filter(|&k| occ_keys[k].0 == j)
            .collect();
        bld.set(c[j], ks.iter().map(|&k| ef[k].0).collect());
        bld.set(d[j], ks.iter().map(|&k| ef[k].1).collect());
    }
    for (k, o) in occurrences.iter().enumerate() {
        let j = occ_keys[k].0;
        bld.set(o.e, vec![c[j], o.gadget.a[0]]);
        bld.set(o.f, vec![d[j], o.gadget.b[6]]);
        for (agent, list) in o.gadget.switch_prefs() {
            bld.set(agent, list);
        }
    }
    let profile = bld.build()?;
    let gm = GadgetMap {
        num_vars: n,
        num_clauses: m,
        v,
        w,
        x,
        xbar,
        y,
        ybar,
        c,
        d,
        occurrences,
        index,
    };
    Ok((profile, gm))
}

/// Perfect matching certified by a satisfying assignment.
///
/// `choice[j]` is the 0-based variable whose literal satisfies clause `j`.
/// The chosen occurrence takes the "true" local matching, other true
/// occurrences the "don't care" one, and false occurrences the "false" one.
pub fn assignment_to_matching(
    p: &Profile,
    gm: &GadgetMap,
    f: &CnfFormula,
    sigma: &[bool],
    choice: &[usize],
) -> Result<Matching, ReductionError> {
    if sigma.len() != gm.num_vars {
        return Err(ReductionError::AssignmentArity {
            got: sigma.len(),
            want: gm.num_vars,
        });
    }
    if choice.len() != gm.num_clauses {
        return Err(ReductionError::AssignmentArity {
            got: choice.len(),
            want: gm.num_clauses,
        });
    }
    for (j, cl) in f.clauses.iter().enumerate() {
        if !cl.iter().any(|&l| lit_value(l, sigma)) {
            return Err(ReductionError::Unsatisfied(j));
        }
        let ok = cl
            .iter()
            .any(|&l| l.unsigned_abs() as usize - 1 == choice[j] && lit_value(l, sigma));
        if !ok {
            return Err(ReductionError::BadChoice(j));
        }
    }
    let mut pairs: BTreeSet<(AgentId, AgentId)> = BTreeSet::new();
    let mut add = |a: AgentId, b: AgentId| {
        pairs.insert((a.min(b), a.max(b)));
    };
    for (i, &val) in sigma.iter().enumerate() {
        if val {
            add(gm.xbar[i], gm.w[i]);
            add(gm.v[i], gm.ybar[i]);
        } else {
            add(gm.x[i], gm.w[i]);
            add(gm.v[i], gm.y[i]);
        }
    }
    for (j, &s) in choice.iter().enumerate() {
        let o = gm.occurrence(s, j).expect("chosen occurrence exists");
        add(gm.c[j], o.e);
        add(o.f, gm.d[j]);
    }
    for o in &gm.occurrences {
        let truth = sigma[o.var] == o.positive;
        let local = if !truth {
            o.gadget.n2()
        } else if choice[o.clause] == o.var {
            o.gadget.n1()
        } else {
            o.gadget.nd()
        };
        for (a, b) in local {
            add(a, b);
        }
    }
    let pairs: Vec<_> = pairs.into_iter().collect();
    Ok(Matching::from_pairs(p, &pairs)?)
}

/// First satisfying literal's variable for every clause.
pub fn default_choice(f: &CnfFormula, sigma: &[bool]) -> Option<Vec<usize>> {
    f.clauses
        .iter()
        .map(|cl| {
            cl.iter()
                .find(|&&l| lit_value(l, sigma))
                .map(|l| l.unsigned_abs() as usize - 1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::{is_ces, is_perfect};

    #[test]
    fn sizes_and_names() {
        let f = CnfFormula::new(1, vec![vec![1], vec![1], vec![-1], vec![-1]]);
        let (p, gm) = sat_to_cesm3(&f).unwrap();
        assert_eq!(p.len(), 6 + 2 * 4 + 16 * 4);
        assert!(p.is_bipartite() && p.max_length() <= 3);
        let a3 = p.id("a3_i1_c2").unwrap();
        let names: Vec<&str> = p.prefs(a3).iter().map(|&b| p.name(b)).collect();
        assert_eq!(names, ["b2_i1_c2", "b3_i1_c2", "b4_i1_c2"]);
        // second occurrence of x1 is wired to y_1 and to the first gadget
        let o = gm.occurrence(0, 1).unwrap();
        assert!(o.second);
        assert_eq!(p.name(o.gadget.delta), "y_1");
        assert_eq!(p.name(o.gadget.alpha), "a6_i1_c1");
        let first = gm.occurrence(0, 0).unwrap();
        assert_eq!(p.name(first.gadget.alpha), "x_1");
        assert_eq!(p.name(first.gadget.delta), "b0_i1_c2");
        assert!(sat_to_cesm3(&CnfFormula::new(1, vec![vec![1]])).is_err());
    }

    #[test]
    fn certified_matching_is_ces() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![1, 2], vec![-1, -2], vec![-1, -2]]);
        let sigma = f.brute_force_sat().unwrap();
        let (p, gm) = sat_to_cesm3(&f).unwrap();
        let ch = default_choice(&f, &sigma).unwrap();
        let m = assignment_to_matching(&p, &gm, &f, &sigma, &ch).unwrap();
        assert!(is_perfect(&p, &m));
        assert!(is_ces(&p, &m));
        // false occurrences take the "false" local matching
        let false_occ = gm
            .occurrences
            .iter()
            .find(|o| sigma[o.var] != o.positive)
            .unwrap();
        assert!(m.contains(false_occ.gadget.a[0], false_occ.e));
        assert!(m.contains(false_occ.gadget.b[6], false_occ.f));
        assert!(matches!(
            assignment_to_matching(&p, &gm, &f, &[true, true], &[0, 0, 0, 0]),
            Err(ReductionError::Unsatisfied(2))
        ));
        assert!(matches!(
            assignment_to_matching(&p, &gm, &f, &[true, false], &[1, 0, 0, 0]),
            Err(ReductionError::BadChoice(0))
        ));
    }
}
