//! Exchange-stable (ES) and coalitional exchange-stable (CES) matchings.
//!
//! Agents swap partners when both gain; a matching is exchange-stable when no
//! such pair exists and coalitionally exchange-stable when no cycle of agents
//! can profit by rotating partners. The crate provides verification, an
//! exhaustive oracle, a linear-time solver for lists of length at most two, a
//! parameterised solver for lists of length at most three, swap-dynamics
//! search, and generators for hard instances.

pub mod blossom;
pub mod cli;
pub mod d2;
pub mod fixtures;
pub mod fpt;
pub mod generate;
pub mod hourglass;
pub mod oracle;
pub mod profile;
pub mod reductions;
pub mod stability;
pub mod swap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use blossom::max_matching;
pub use profile::{
    parse_matching, parse_profile, serialize_matching, serialize_profile, AcceptabilityGraph,
    AgentId, Graph, Matching, MatchingError, Profile, ProfileError,
};
pub use stability::{
    envy_graph, find_ebc, find_ebp, is_ces, is_exchange_stable, is_maximal, is_perfect,
    BlockingCoalition, EnvyGraph,
};

/// Which blocking structures a matching must avoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// No exchange-blocking pair.
    Es,
    /// No exchange-blocking coalition of any size.
    Ces,
}

impl Criterion {
    pub fn holds(self, p: &Profile, m: &Matching) -> bool {
        match self {
            Criterion::Es => is_exchange_stable(p, m),
            Criterion::Ces => is_ces(p, m),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("agent `{agent}` has a list of length {len}, above the limit {limit}")]
    ListTooLong {
        agent: String,
        len: usize,
        limit: usize,
    },
}

pub(crate) fn check_max_length(p: &Profile, limit: usize) -> Result<(), SolveError> {
    match p.agents().find(|&a| p.degree(a) > limit) {
        Some(a) => Err(SolveError::ListTooLong {
            agent: p.name(a).to_string(),
            len: p.degree(a),
            limit,
        }),
        None => Ok(()),
    }
}
