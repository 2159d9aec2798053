use serde::{Deserialize, Serialize};

use crate::perm::DEFAULT_DEGREE_CAP;

/// Resource limits. Exceeding one is always reported as an error, never
/// answered approximately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Caps {
    /// Largest accepted permutation degree.
    pub max_degree: usize,
    /// Largest subgroup that closure will enumerate.
    pub max_subgroup_order: usize,
    /// Largest `n` for which all of `S_n` may be enumerated.
    pub max_full_degree: usize,
    /// Node budget for the transversal search.
    pub transversal_budget: u64,
    /// Square-root candidates tried per element by the hypothesis checkers.
    pub root_candidates: usize,
}

/// `max_full_degree` when big ambients are explicitly allowed.
pub const BIG_FULL_DEGREE: usize = 12;

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_degree: DEFAULT_DEGREE_CAP,
            max_subgroup_order: 1 << 20,
            max_full_degree: 10,
            transversal_budget: 10_000_000,
            root_candidates: 4096,
        }
    }
}

impl Caps {
    pub fn allow_big(mut self) -> Self {
        self.max_full_degree = BIG_FULL_DEGREE;
        self
    }
}
