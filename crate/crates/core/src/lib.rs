//! Subgroup perfect codes in symmetric groups.
//!
//! A subgroup `H <= S_n` is a perfect code when some Cayley graph of `S_n`
//! has `H` as an efficient dominating set. This crate decides that
//! property exactly, emits re-checkable certificates and cross-checks a
//! family of structural rules against the exact oracles.
//!
//! Composition is right to left: `p.compose(&q)` applies `q` first.

pub mod caps;
pub mod cli;
pub mod group;
pub mod numtheory;
pub mod perfect;
pub mod perm;

pub use caps::Caps;
pub use group::{Ambient, Subgroup};
pub use perfect::{classify, Certificate, ClassifyOptions, ClassifyReport, Policy, Status, Verdict};
pub use perm::{CycleType, Parity, Permutation};
