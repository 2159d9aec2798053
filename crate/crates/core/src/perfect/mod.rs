//! Deciding whether a subgroup `H <= S_n` is a perfect code of some Cayley
//! graph of `S_n`.
//!
//! Two independent exact oracles are provided: a search for an
//! inverse-closed left transversal, and a scan for a self-inverse double
//! coset `HxH` with an odd number of left cosets and no involution. The
//! first succeeds exactly when `H` is perfect, the second exactly when it
//! is not. Faster structural rules are layered on top in [`classify`].

mod certificate;
mod classify;
mod cyclic;
mod hypothesis;
mod oracle;
mod sweep;
mod transversal;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::GroupError;
use crate::perm::Permutation;

pub use certificate::{coset_is_inverse_closed_without_involution, verify_certificate};
pub use classify::{
    canonical_generators, classify, CertificateRecord, ClassifyOptions, ClassifyReport, Discrepancy, Policy, TraceStep,
};
pub use cyclic::{cyclic_fast_path, reading_verdict, Interpretation};
pub use hypothesis::{
    hyp_commutative, hyp_extension, hyp_three_generator, hyp_two_generator, quotient_cyclic_check, quotient_frames,
    search_extension, two_generator_frames, HypothesisInstance, HypothesisKind,
};
pub use oracle::{bad_double_coset, normal_criterion, oracle_double_coset, oracle_status, witness_search_2elements};
pub use sweep::{
    conjugation_invariance, extension_stability, invariance_suite, normalizer_reduction, random_subgroup,
    random_two_subgroup, sweep_cyclic, sylow_reduction, InvarianceReport, SweepRow, Tally,
};
pub use transversal::build_transversal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerfectError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("transversal search exhausted its budget of {budget} nodes")]
    BudgetExhausted { budget: u64 },
    #[error("certificate failed re-verification: {0}")]
    VerificationFailed(String),
    #[error("subgroup is not normal in the ambient group")]
    NotNormal,
    #[error("element order {0} is not a power of two greater than one")]
    NotTwoPower(u64),
    #[error("hypotheses not satisfied: {0}")]
    HypothesisNotSatisfied(String),
    #[error("undecided: {0}")]
    Undecided(String),
}

impl PerfectError {
    /// Errors that mean "ran out of room", as opposed to bad input or an
    /// internal inconsistency.
    pub fn is_resource(&self) -> bool {
        match self {
            PerfectError::Group(g) => g.is_resource(),
            PerfectError::BudgetExhausted { .. } | PerfectError::Undecided(_) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Perfect,
    NotPerfect,
}

impl Status {
    pub fn from_perfect(perfect: bool) -> Status {
        if perfect {
            Status::Perfect
        } else {
            Status::NotPerfect
        }
    }

    pub fn is_perfect(self) -> bool {
        self == Status::Perfect
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Perfect => "Perfect",
            Status::NotPerfect => "NotPerfect",
        })
    }
}

/// Identifies a decision rule in traces and provenance records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleId {
    OddOrder,
    OddIndex,
    Sylow2Reduction,
    CyclicOddPermutation,
    CyclicSquare,
    CyclicSameLengthOddCount,
    CyclicNotASquare,
    HypCommutative,
    HypTwoGenerator,
    HypExtension,
    HypThreeGenerator,
    NormalizerReduction,
    NormalCriterion,
    DoubleCosetOracle,
    TransversalOracle,
}

impl RuleId {
    /// One-line statement of the rule.
    pub fn basis(self) -> &'static str {
        match self {
            RuleId::OddOrder => "a subgroup of odd order is perfect",
            RuleId::OddIndex => "a subgroup of odd index is perfect",
            RuleId::Sylow2Reduction => "H is perfect iff a Sylow 2-subgroup of H is perfect",
            RuleId::CyclicOddPermutation => "a cyclic 2-subgroup generated by an odd permutation is perfect",
            RuleId::CyclicSquare => "<x> with x = r^2 is not perfect: rH is inverse-closed with no involution",
            RuleId::CyclicSameLengthOddCount => {
                "even x of 2-power order: perfect iff its cycles share one length and their count is odd"
            }
            RuleId::CyclicNotASquare => "even x of 2-power order: perfect iff x is not a square",
            RuleId::HypCommutative => {
                "abelian 2-group with x outside H, x^2 = x1 and x commuting with the other generators"
            }
            RuleId::HypTwoGenerator => {
                "<x1,x2> non-abelian, y^2 = x1^-1, x2 y^-1 = y^-k x2 with odd k != -1 mod 2^(l+1)"
            }
            RuleId::HypExtension => "two-generator witness extended by commuting generators that commute with y and x2",
            RuleId::HypThreeGenerator => {
                "two-generator witness with x3 y^-1 = y^-k x3, x2 x3^-1 = x3^-s x2, odd k < 2^l"
            }
            RuleId::NormalizerReduction => "a 2-subgroup Q is perfect in G iff it is perfect in N_G(Q)",
            RuleId::NormalCriterion => "normal H is perfect iff every x with x^2 in H has some (xh)^2 = 1",
            RuleId::DoubleCosetOracle => {
                "not perfect iff some self-inverse HxH has an odd number of left cosets and no involution"
            }
            RuleId::TransversalOracle => "perfect iff an inverse-closed left transversal exists",
        }
    }
}

/// How a verdict was reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "rules", rename_all = "snake_case")]
pub enum Provenance {
    OracleProven,
    TheoremFastPath(RuleId),
    ReducedThenOracle(Vec<RuleId>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub provenance: Provenance,
}

impl Verdict {
    pub fn oracle(status: Status) -> Verdict {
        Verdict {
            status,
            provenance: Provenance::OracleProven,
        }
    }

    pub fn rule(status: Status, rule: RuleId) -> Verdict {
        Verdict {
            status,
            provenance: Provenance::TheoremFastPath(rule),
        }
    }
}

/// A re-checkable proof of a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// An inverse-closed left transversal: proves `Perfect`.
    Transversal(Vec<Permutation>),
    /// `x` such that `HxH` is self-inverse, has an odd number of left
    /// cosets and no involution: proves `NotPerfect`.
    BadDoubleCoset(Permutation),
}

impl Certificate {
    pub fn status(&self) -> Status {
        match self {
            Certificate::Transversal(_) => Status::Perfect,
            Certificate::BadDoubleCoset(_) => Status::NotPerfect,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Transversal(_) => "transversal",
            Certificate::BadDoubleCoset(_) => "bad_double_coset",
        }
    }

    pub fn data(&self) -> Vec<Permutation> {
        match self {
            Certificate::Transversal(t) => t.clone(),
            Certificate::BadDoubleCoset(x) => vec![*x],
        }
    }
}
