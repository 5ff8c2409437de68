//! Small hand-checked instances shared by tests, examples and the CLI docs.

use crate::profile::{parse_profile, Profile};

/// Three-by-three market with two coalitional exchange-stable matchings
/// (`M1`, `M2`) and a swap livelock between `M4` and `M5`.
pub const SWAP_MARKET: &str = "\
bipartite: U = x,y,z ; W = a,b,c
x: a b c
y: b a c
z: a c b
a: y x z
b: x y z
c: x y z
";

/// Three-by-three market with a single exchange-stable matching that is
/// blocked by a coalition of size three.
pub const CYCLE_MARKET: &str = "\
bipartite: U = x,y,z ; W = a,b,c
x: a b c
y: b c a
z: c a b
a: y z x
b: z x y
c: x y z
";

pub const M1: &[(&str, &str)] = &[("x", "c"), ("y", "b"), ("z", "a")];
pub const M2: &[(&str, &str)] = &[("x", "b"), ("y", "c"), ("z", "a")];
pub const M3: &[(&str, &str)] = &[("x", "c"), ("y", "a"), ("z", "b")];
pub const M4: &[(&str, &str)] = &[("x", "b"), ("y", "a"), ("z", "c")];
pub const M5: &[(&str, &str)] = &[("x", "a"), ("y", "b"), ("z", "c")];

/// The exchange-stable matching of [`CYCLE_MARKET`].
pub const CYCLE_M: &[(&str, &str)] = &[("x", "b"), ("y", "c"), ("z", "a")];

pub fn swap_market() -> Profile {
    parse_profile(SWAP_MARKET).expect("fixture parses")
}

pub fn cycle_market() -> Profile {
    parse_profile(CYCLE_MARKET).expect("fixture parses")
}
