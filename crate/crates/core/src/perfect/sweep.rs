//! Empirical checks run against the oracles: a sweep over cyclic
//! 2-subgroups by cycle type and sampled invariance tests.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::group::{normalizer_in, Ambient, Subgroup};
use crate::perm::{factorial, CycleType, Parity, Permutation};

use super::cyclic::{cyclic_fast_path, Interpretation};
use super::oracle::oracle_status;
use super::transversal::build_transversal;
use super::{PerfectError, Status};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub cycle_type: String,
    pub representative: String,
    pub parity: Parity,
    pub is_square: bool,
    pub same_length_odd_count: Status,
    pub not_a_square: Status,
    pub oracle: Status,
    /// The transversal search reached the same answer independently.
    pub transversal_agrees: bool,
    pub readings_agree: bool,
    /// `same_length_odd_count` differs from the oracle.
    pub same_length_flag: bool,
    /// `not_a_square` differs from the oracle.
    pub not_a_square_flag: bool,
}

/// Partitions of `n` into powers of two, largest part first, without the
/// all-ones partition.
fn two_power_types(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        let mut part = max;
        while part >= 1 {
            if part <= rest {
                acc.push(part);
                rec(rest - part, part, acc, out);
                acc.pop();
            }
            part /= 2;
        }
    }
    let mut out = Vec::new();
    let top = if n == 0 {
        1
    } else {
        1 << (usize::BITS - 1 - n.leading_zeros())
    };
    rec(n, top, &mut Vec::new(), &mut out);
    out.retain(|t| t.iter().any(|&l| l > 1));
    out
}

/// One row per cycle type of 2-power order in `S_n`, decided by both
/// oracles and by both readings of the rule for even generators.
pub fn sweep_cyclic(n: usize, caps: &Caps) -> Result<Vec<SweepRow>, PerfectError> {
    let sym = Ambient::symmetric(n, caps)?;
    two_power_types(n)
        .into_par_iter()
        .map(|lengths| {
            let ct = CycleType::from_lengths(&lengths);
            let x = ct.representative();
            let h = Subgroup::close(&[x], n, caps.max_subgroup_order)?;
            let oracle = oracle_status(&h, &sym)?;
            let has_t = build_transversal(&h, &sym, caps.transversal_budget)?.is_some();
            let same = cyclic_fast_path(&x, Interpretation::SameLengthOddCount)?.status;
            let not_sq = cyclic_fast_path(&x, Interpretation::NotASquare)?.status;
            Ok(SweepRow {
                n,
                cycle_type: ct.to_string(),
                representative: x.to_cycle_string(),
                parity: x.parity(),
                is_square: x.is_square(),
                same_length_odd_count: same,
                not_a_square: not_sq,
                oracle,
                transversal_agrees: has_t == oracle.is_perfect(),
                readings_agree: same == not_sq,
                same_length_flag: same != oracle,
                not_a_square_flag: not_sq != oracle,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl Tally {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn from_results(results: Vec<Result<Option<String>, PerfectError>>) -> Result<Tally, PerfectError> {
        let mut t = Tally::default();
        for r in results {
            t.checked += 1;
            if let Some(m) = r? {
                t.mismatches.push(m);
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub conjugation: Tally,
    pub extension: Tally,
    pub sylow: Tally,
    pub normalizer: Tally,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.conjugation.passed() && self.extension.passed() && self.sylow.passed() && self.normalizer.passed()
    }
}

fn random_element(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    Permutation::unrank(rng.random_range(0..factorial(n)), n).expect("rank in range")
}

/// Closure of one to three uniform random elements of `S_n`.
pub fn random_subgroup(n: usize, rng: &mut ChaCha8Rng) -> Subgroup {
    let count = rng.random_range(1..=3);
    let gens: Vec<Permutation> = (0..count).map(|_| random_element(n, rng)).collect();
    Subgroup::close(&gens, n, usize::MAX).expect("no cap")
}

/// A random subgroup of a random conjugate of the Sylow 2-subgroup `p`.
pub fn random_two_subgroup(p: &Subgroup, rng: &mut ChaCha8Rng) -> Subgroup {
    let n = p.degree();
    let g = random_element(n, rng);
    let count = rng.random_range(1..=2);
    let gens: Vec<Permutation> = (0..count)
        .map(|_| {
            let x = p.elements()[rng.random_range(0..p.elements().len())];
            x.conjugate(&g)
        })
        .collect();
    Subgroup::close(&gens, n, p.elements().len()).expect("inside a conjugate of p")
}

fn verdicts_differ(label: String, a: Status, b: Status) -> Option<String> {
    (a != b).then(|| format!("{label}: {a} vs {b}"))
}

/// Oracle verdict of `H` against that of `gHg⁻¹`.
pub fn conjugation_invariance(n: usize, samples: usize, seed: u64, caps: &Caps) -> Result<Tally, PerfectError> {
    let sym = Ambient::symmetric(n, caps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(Subgroup, Permutation)> = (0..samples)
        .map(|_| (random_subgroup(n, &mut rng), random_element(n, &mut rng)))
        .collect();
    let results = cases
        .par_iter()
        .map(|(h, g)| {
            let a = oracle_status(h, &sym)?;
            let b = oracle_status(&h.conjugate_by(g), &sym)?;
            Ok(verdicts_differ(format!("{h:?} by {g}"), a, b))
        })
        .collect();
    Tally::from_results(results)
}

/// Oracle verdict of `H` in `S_n` against `H` in `S_(n+1)`.
pub fn extension_stability(n: usize, samples: usize, seed: u64, caps: &Caps) -> Result<Tally, PerfectError> {
    let small = Ambient::symmetric(n, caps)?;
    let big = Ambient::symmetric(n + 1, caps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<Subgroup> = (0..samples).map(|_| random_subgroup(n, &mut rng)).collect();
    let results = cases
        .par_iter()
        .map(|h| {
            let a = oracle_status(h, &small)?;
            let b = oracle_status(&h.extend_to(n + 1)?, &big)?;
            Ok(verdicts_differ(format!("{h:?}"), a, b))
        })
        .collect();
    Tally::from_results(results)
}

/// Oracle verdict of an even-order `H` against that of its Sylow
/// 2-subgroup.
pub fn sylow_reduction(n: usize, samples: usize, seed: u64, caps: &Caps) -> Result<Tally, PerfectError> {
    let sym = Ambient::symmetric(n, caps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<Subgroup> = (0..samples)
        .map(|_| loop {
            let h = random_subgroup(n, &mut rng);
            if h.order().is_multiple_of(2) {
                break h;
            }
        })
        .collect();
    let results = cases
        .par_iter()
        .map(|h| {
            let a = oracle_status(h, &sym)?;
            let b = oracle_status(&h.sylow2(), &sym)?;
            Ok(verdicts_differ(format!("{h:?}"), a, b))
        })
        .collect();
    Tally::from_results(results)
}

/// Oracle verdict of a 2-subgroup `Q` in `S_n` against `Q` in `N(Q)`.
pub fn normalizer_reduction(n: usize, samples: usize, seed: u64, caps: &Caps) -> Result<Tally, PerfectError> {
    let sym = Ambient::symmetric(n, caps)?;
    let p = Subgroup::symmetric(n, caps.max_subgroup_order)?.sylow2();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<Subgroup> = (0..samples).map(|_| random_two_subgroup(&p, &mut rng)).collect();
    let results = cases
        .iter()
        .map(|q| {
            let norm = normalizer_in(q, &sym)?;
            let a = oracle_status(q, &sym)?;
            let b = oracle_status(q, &Ambient::restricted(norm))?;
            Ok(verdicts_differ(format!("{q:?}"), a, b))
        })
        .collect();
    Tally::from_results(results)
}

/// All four invariance checks on `S_n`; the extension check goes to
/// `S_(n+1)` and is skipped when that exceeds the caps.
pub fn invariance_suite(n: usize, samples: usize, seed: u64, caps: &Caps) -> Result<InvarianceReport, PerfectError> {
    let extension = if n < caps.max_full_degree {
        extension_stability(n, samples, seed.wrapping_add(1), caps)?
    } else {
        Tally::default()
    };
    Ok(InvarianceReport {
        conjugation: conjugation_invariance(n, samples, seed, caps)?,
        extension,
        sylow: sylow_reduction(n, samples, seed.wrapping_add(2), caps)?,
        normalizer: normalizer_reduction(n, samples, seed.wrapping_add(3), caps)?,
    })
}
