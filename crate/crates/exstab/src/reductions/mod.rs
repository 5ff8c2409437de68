//! Constructive reductions used as certified instance factories.

pub mod cnf;
pub mod complete;
pub mod gadget;
pub mod pesm;
pub mod sat3;

use thiserror::Error;

pub use cnf::{all_22_formulas, parse_dimacs, r3sat_to_223sat, CnfError, CnfFormula, Literal};
pub use complete::{complete_profile, SideOrders};
pub use gadget::{build_switch_gadget, BoundaryPrefs, SwitchGadget};
pub use pesm::{
    has_independent_set, is_to_pesm, parse_edge_list, serialize_edge_list, PesmInstance,
};
pub use sat3::{assignment_to_matching, default_choice, sat_to_cesm3, GadgetMap, Occurrence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("formula is not (2,2)-valid: {0}")]
    NotTwoTwo(String),
    #[error("assignment has {got} values for {want} variables")]
    AssignmentArity { got: usize, want: usize },
    #[error("assignment leaves clause {0} unsatisfied")]
    Unsatisfied(usize),
    #[error("chosen literal of clause {0} is not in the clause or is false")]
    BadChoice(usize),
    #[error("profile has no bipartition")]
    NoSides,
    #[error("side order does not list every agent of its side exactly once")]
    BadOrder,
    #[error("target size {h} outside 1..={n}")]
    TargetOutOfRange { h: usize, n: usize },
    #[error("edge list line {line}: {msg}")]
    EdgeList { line: usize, msg: String },
    #[error(transparent)]
    Profile(#[from] crate::profile::ProfileError),
    #[error(transparent)]
    Matching(#[from] crate::profile::MatchingError),
}

/// Incremental, name-addressed construction of a bipartite profile.
#[derive(Default)]
pub(crate) struct Builder {
    names: Vec<String>,
    prefs: Vec<Vec<crate::AgentId>>,
    side: Vec<u8>,
}

impl Builder {
    /// New agent on side 1 (U) or 2 (W); its list is set later.
    pub(crate) fn add(&mut self, name: String, side: u8) -> crate::AgentId {
        self.names.push(name);
        self.prefs.push(Vec::new());
        self.side.push(side);
        self.names.len() - 1
    }

    pub(crate) fn set(&mut self, a: crate::AgentId, list: Vec<crate::AgentId>) {
        self.prefs[a] = list;
    }

    pub(crate) fn build(self) -> Result<crate::Profile, crate::ProfileError> {
        let n = self.names.len();
        let u = (0..n).filter(|&a| self.side[a] == 1).collect();
        let w = (0..n).filter(|&a| self.side[a] == 2).collect();
        crate::Profile::new(self.names, self.prefs, Some((u, w)))
    }
}
