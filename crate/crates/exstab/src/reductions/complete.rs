//! Completion of a generated profile to complete bipartite preferences.

use super::sat3::GadgetMap;
use super::ReductionError;
use crate::profile::{AgentId, Profile};

/// Linear orders on the two sides used to append the missing agents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideOrders {
    pub u: Vec<AgentId>,
    pub w: Vec<AgentId>,
}

impl SideOrders {
    /// Increasing agent id on both sides.
    pub fn id_order(p: &Profile) -> Result<Self, ReductionError> {
        let (u, w) = p.sides().ok_or(ReductionError::NoSides)?;
        let (mut u, mut w) = (u.to_vec(), w.to_vec());
        u.sort_unstable();
        w.sort_unstable();
        Ok(SideOrders { u, w })
    }
}

/// Each agent keeps its list, then ranks the remaining middle-block agents
/// (`y`, `ybar`, `e` for side U; `x`, `xbar`, `f` for side W), then everyone
/// else of the opposite side, both blocks in the given side order.
pub fn complete_profile(
    p: &Profile,
    gm: &GadgetMap,
    orders: &SideOrders,
) -> Result<Profile, ReductionError> {
    let (u, w) = p.sides().ok_or(ReductionError::NoSides)?;
    for (side, order) in [(u, &orders.u), (w, &orders.w)] {
        let mut a = side.to_vec();
        let mut b = order.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(ReductionError::BadOrder);
        }
    }
    let n = p.len();
    let mut in_mid_w = vec![false; n];
    for a in gm.middle_w() {
        in_mid_w[a] = true;
    }
    let mut in_mid_u = vec![false; n];
    for a in gm.middle_u() {
        in_mid_u[a] = true;
    }
    let mut prefs = Vec::with_capacity(n);
    let mut listed = vec![usize::MAX; n];
    for z in p.agents() {
        let (order, mid) = if p.side(z) == 1 {
            (&orders.w, &in_mid_w)
        } else {
            (&orders.u, &in_mid_u)
        };
        let mut list = p.prefs(z).to_vec();
        for &a in &list {
            listed[a] = z;
        }
        list.extend(order.iter().copied().filter(|&a| mid[a] && listed[a] != z));
        list.extend(order.iter().copied().filter(|&a| !mid[a] && listed[a] != z));
        prefs.push(list);
    }
    let sides = Some((u.to_vec(), w.to_vec()));
    Ok(Profile::new(p.names().to_vec(), prefs, sides)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::cnf::CnfFormula;
    use crate::reductions::sat3::sat_to_cesm3;

    #[test]
    fn completion_keeps_prefixes() {
        let f = CnfFormula::new(1, vec![vec![1], vec![1], vec![-1], vec![-1]]);
        let (p, gm) = sat_to_cesm3(&f).unwrap();
        let q = complete_profile(&p, &gm, &SideOrders::id_order(&p).unwrap()).unwrap();
        assert!(q.is_complete());
        for z in p.agents() {
            assert_eq!(q.degree(z), p.len() / 2);
            assert_eq!(&q.prefs(z)[..p.degree(z)], p.prefs(z));
        }
        let v1 = p.id("v_1").unwrap();
        let names: Vec<&str> = q.prefs(v1)[..6].iter().map(|&a| q.name(a)).collect();
        assert_eq!(
            names,
            ["y_1", "ybar_1", "e_i1_c1", "e_i1_c2", "e_i1_c3", "e_i1_c4"]
        );
        let mut bad = SideOrders::id_order(&p).unwrap();
        bad.u.pop();
        assert!(complete_profile(&p, &gm, &bad).is_err());
    }
}
