//! The 14-agent switch gadget and its three admissible local matchings.

use crate::profile::{AgentId, Profile};

use super::Builder;

/// Agent handles of one switch gadget together with its boundary agents.
///
/// `a` and `alpha`, `gamma` lie on side U; `b` and `beta`, `delta` on W.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchGadget {
    pub a: [AgentId; 7],
    pub b: [AgentId; 7],
    pub alpha: AgentId,
    pub beta: AgentId,
    pub gamma: AgentId,
    pub delta: AgentId,
}

type Pairs = Vec<(AgentId, AgentId)>;

impl SwitchGadget {
    /// Lists of the fourteen switch agents, `a0..a6` then `b0..b6`.
    pub fn switch_prefs(&self) -> Vec<(AgentId, Vec<AgentId>)> {
        let (a, b) = (&self.a, &self.b);
        vec![
            (a[0], vec![b[1], self.beta]),
            (a[1], vec![b[0], b[2], b[1]]),
            (a[2], vec![b[3], b[1], b[2]]),
            (a[3], vec![b[2], b[3], b[4]]),
            (a[4], vec![b[4], b[3], b[5]]),
            (a[5], vec![b[6], b[4], b[5]]),
            (a[6], vec![b[5], self.delta]),
            (b[0], vec![a[1], self.alpha]),
            (b[1], vec![a[0], a[2], a[1]]),
            (b[2], vec![a[2], a[3], a[1]]),
            (b[3], vec![a[4], a[3], a[2]]),
            (b[4], vec![a[3], a[5], a[4]]),
            (b[5], vec![a[6], a[4], a[5]]),
            (b[6], vec![a[5], self.gamma]),
        ]
    }

    pub fn switch_agents(&self) -> Vec<AgentId> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    /// "True" matching: `alpha b0`, `a6 delta` and the diagonals `a(z-1) bz`.
    pub fn n1(&self) -> Pairs {
        let mut v = vec![(self.alpha, self.b[0]), (self.a[6], self.delta)];
        v.extend((1..7).map(|z| (self.a[z - 1], self.b[z])));
        v
    }

    /// "False" matching: `a0 beta`, `gamma b6` and the diagonals `az b(z-1)`.
    pub fn n2(&self) -> Pairs {
        let mut v = vec![(self.a[0], self.beta), (self.gamma, self.b[6])];
        v.extend((1..7).map(|z| (self.a[z], self.b[z - 1])));
        v
    }

    /// "Don't care" matching, touching all four boundary agents.
    pub fn nd(&self) -> Pairs {
        let (a, b) = (&self.a, &self.b);
        vec![
            (self.alpha, b[0]),
            (a[0], self.beta),
            (a[6], self.delta),
            (self.gamma, b[6]),
            (a[1], b[2]),
            (a[2], b[1]),
            (a[3], b[3]),
            (a[4], b[5]),
            (a[5], b[4]),
        ]
    }
}

/// Fixed preference choices for the four boundary agents of a standalone
/// gadget. Each boundary agent accepts its gadget neighbour and both boundary
/// agents of the opposite side, so that every local matching extends to a
/// perfect one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPrefs {
    /// Gadget neighbour first, then the others by id.
    GadgetFirst,
    /// The others by id, gadget neighbour last.
    GadgetLast,
    /// Gadget neighbour first, then the others by decreasing id.
    GadgetFirstReversed,
    /// `alpha` and `gamma` rank the gadget first, `beta` and `delta` last.
    Mixed,
}

impl BoundaryPrefs {
    pub const ALL: [BoundaryPrefs; 4] = [
        BoundaryPrefs::GadgetFirst,
        BoundaryPrefs::GadgetLast,
        BoundaryPrefs::GadgetFirstReversed,
        BoundaryPrefs::Mixed,
    ];
}

/// Standalone gadget: `a0..a6`, `b0..b6`, `alpha`, `beta`, `gamma`, `delta`
/// (18 agents, in that order).
pub fn build_switch_gadget(boundary: BoundaryPrefs) -> (Profile, SwitchGadget) {
    let mut bld = Builder::default();
    let a: [AgentId; 7] = std::array::from_fn(|z| bld.add(format!("a{z}"), 1));
    let b: [AgentId; 7] = std::array::from_fn(|z| bld.add(format!("b{z}"), 2));
    let alpha = bld.add("alpha".into(), 1);
    let beta = bld.add("beta".into(), 2);
    let gamma = bld.add("gamma".into(), 1);
    let delta = bld.add("delta".into(), 2);
    let sg = SwitchGadget {
        a,
        b,
        alpha,
        beta,
        gamma,
        delta,
    };
    for (x, l) in sg.switch_prefs() {
        bld.set(x, l);
    }
    let boundary_lists = [
        (alpha, b[0], [beta, delta]),
        (beta, a[0], [alpha, gamma]),
        (gamma, b[6], [beta, delta]),
        (delta, a[6], [alpha, gamma]),
    ];
    for (x, gadget, others) in boundary_lists {
        let first = match boundary {
            BoundaryPrefs::GadgetFirst | BoundaryPrefs::GadgetFirstReversed => true,
            BoundaryPrefs::GadgetLast => false,
            BoundaryPrefs::Mixed => x == alpha || x == gamma,
        };
        let mut rest = others.to_vec();
        if boundary == BoundaryPrefs::GadgetFirstReversed {
            rest.reverse();
        }
        let list = if first {
            std::iter::once(gadget).chain(rest).collect()
        } else {
            rest.into_iter().chain(std::iter::once(gadget)).collect()
        };
        bld.set(x, list);
    }
    (bld.build().expect("gadget profile is valid"), sg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::{is_exchange_stable, is_perfect};
    use crate::Matching;

    #[test]
    fn local_matchings_are_perfect_on_the_gadget() {
        let (p, sg) = build_switch_gadget(BoundaryPrefs::GadgetFirst);
        assert_eq!(p.len(), 18);
        assert!(p.max_length() <= 3);
        assert_eq!(p.prefs(sg.a[3]), &[sg.b[2], sg.b[3], sg.b[4]]);
        for (local, extra) in [
            (sg.n1(), vec![(sg.gamma, sg.beta)]),
            (sg.n2(), vec![(sg.alpha, sg.delta)]),
            (sg.nd(), vec![]),
        ] {
            let pairs: Vec<_> = local.into_iter().chain(extra).collect();
            let m = Matching::from_pairs(&p, &pairs).unwrap();
            assert!(is_perfect(&p, &m));
            let _ = is_exchange_stable(&p, &m);
        }
    }
}
