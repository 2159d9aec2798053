use serde::{Deserialize, Serialize};

use crate::perm::Permutation;

use super::{PerfectError, RuleId, Status, Verdict};

/// Two readings of the rule for cyclic 2-subgroups generated by an even
/// permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpretation {
    /// Perfect iff every moved cycle has the same length and there is an
    /// odd number of them.
    SameLengthOddCount,
    /// Perfect iff the generator is not a square in `S_n`.
    #[default]
    NotASquare,
}

impl Interpretation {
    pub fn rule(self) -> RuleId {
        match self {
            Interpretation::SameLengthOddCount => RuleId::CyclicSameLengthOddCount,
            Interpretation::NotASquare => RuleId::CyclicNotASquare,
        }
    }
}

/// What `reading` predicts for an even generator `x`.
pub fn reading_verdict(x: &Permutation, reading: Interpretation) -> Status {
    match reading {
        Interpretation::SameLengthOddCount => {
            let moved = x.cycle_type().moved_lengths();
            let one_length = moved.windows(2).all(|w| w[0] == w[1]);
            Status::from_perfect(!moved.is_empty() && one_length && moved.len() % 2 == 1)
        }
        Interpretation::NotASquare => Status::from_perfect(!x.is_square()),
    }
}

/// Fast-path verdict for `<x>` with `o(x) = 2^m`, `m >= 1`.
pub fn cyclic_fast_path(x: &Permutation, reading: Interpretation) -> Result<Verdict, PerfectError> {
    let ord = x.order();
    if ord < 2 || !ord.is_power_of_two() {
        return Err(PerfectError::NotTwoPower(ord));
    }
    if x.parity().is_odd() {
        return Ok(Verdict::rule(Status::Perfect, RuleId::CyclicOddPermutation));
    }
    Ok(Verdict::rule(reading_verdict(x, reading), reading.rule()))
}
