//! Fixture suite built from the worked examples, and the exhaustive unit
//! group check.

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::group::{find_isomorphism, normalizer_in, Ambient, Subgroup};
use crate::numtheory::{decompose_unit, exists_power_neg_one, order_mod, pow_mod};
use crate::perfect::{
    build_transversal, coset_is_inverse_closed_without_involution, hyp_commutative, hyp_three_generator,
    hyp_two_generator, oracle_double_coset, search_extension, two_generator_frames, witness_search_2elements,
    PerfectError, Status,
};
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureResult {
    pub name: String,
    pub claim: String,
    pub observed: String,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub budget: Budget,
    pub fixtures: Vec<FixtureResult>,
}

impl SuiteSummary {
    pub fn findings(&self) -> impl Iterator<Item = &FixtureResult> {
        self.fixtures.iter().filter(|f| !f.agrees)
    }

    pub fn fixture(&self, name: &str) -> Option<&FixtureResult> {
        self.fixtures.iter().find(|f| f.name == name)
    }
}

fn perm(s: &str, n: usize) -> Permutation {
    Permutation::parse(s, n).expect("fixture permutation")
}

fn group(gens: &[&str], n: usize) -> Subgroup {
    let g: Vec<Permutation> = gens.iter().map(|s| perm(s, n)).collect();
    Subgroup::close(&g, n, 1 << 20).expect("fixture group")
}

/// Oracle verdict with its certificate re-verified, cross-checked against
/// the transversal search. Disagreement is an internal failure.
pub fn decide(h: &Subgroup, g: &Ambient, caps: &Caps) -> Result<Status, PerfectError> {
    let (v, _) = oracle_double_coset(h, g, caps)?;
    if v.status == Status::NotPerfect && build_transversal(h, g, caps.transversal_budget)?.is_some() {
        return Err(PerfectError::VerificationFailed(format!("oracles disagree on {h:?}")));
    }
    Ok(v.status)
}

/// `N_{S_m}(Q)` for `Q` moving exactly the points `1..=k`: the normalizer
/// in `S_k` times the symmetric group on the remaining points.
fn normalizer_beyond_support(q: &Subgroup, m: usize, caps: &Caps) -> Result<Subgroup, PerfectError> {
    let k = q.degree();
    let moved: Vec<usize> = (0..k)
        .filter(|&i| q.generators().iter().any(|g| g.apply(i) != i))
        .collect();
    assert_eq!(moved.len(), k, "fixture subgroup moves every point");
    let local = normalizer_in(q, &Ambient::symmetric(k, caps)?)?;
    let mut gens: Vec<Permutation> = local
        .generators()
        .iter()
        .map(|g| g.extend_to(m))
        .collect::<Result<_, _>>()
        .map_err(crate::group::GroupError::from)?;
    if m - k >= 2 {
        gens.push(Permutation::from_cycles(m, &[vec![k, k + 1]]).map_err(crate::group::GroupError::from)?);
        gens.push(Permutation::from_cycles(m, &[(k..m).collect()]).map_err(crate::group::GroupError::from)?);
    }
    Ok(Subgroup::close(&gens, m, caps.max_subgroup_order)?)
}

struct Recorder(Vec<FixtureResult>);

impl Recorder {
    fn add(&mut self, name: &str, claim: &str, observed: String, agrees: bool) {
        self.0.push(FixtureResult {
            name: name.to_string(),
            claim: claim.to_string(),
            observed,
            agrees,
        });
    }

    fn verdict(&mut self, name: &str, claim: Status, what: &str, observed: Status) {
        self.add(
            name,
            &format!("{what}: {claim}"),
            format!("{what}: {observed}"),
            claim == observed,
        );
    }
}

const H1: [&str; 2] = ["(1 4 7 6)(2 8 3 5)", "(2 5)(3 8)(4 6)"];
const H2: [&str; 2] = ["(1 6)(2 4)(3 8)(5 7)", "(1 8 5 4)(2 7 3 6)"];
const H2_NORMALIZER_REPS: [&str; 6] = [
    "(4 8)(6 7)",
    "(2 3)(6 7)",
    "(2 6)(3 7)(4 8)",
    "(2 7)(3 6)(4 8)",
    "(2 6 3 7)",
    "(2 7 3 6)",
];
const Y: &str = "(1 2 6 5 7 3 4 8)";
const S11_H: [&str; 3] = ["(4 8)(5 6)", "(3 7)(4 8)", "(1 8 2 4)(3 5 7 6)"];
const S11_H1: [&str; 2] = ["(3 7)(4 8)", "(1 8 2 4)(3 5 7 6)"];
const EX36_H: &str = "(1 2 3 4)(5 6)";
const EX36_K: [&str; 2] = ["(1 2 3 4)(5 6)", "(7 8 9)"];

fn dihedral_fixtures(rec: &mut Recorder, caps: &Caps) -> Result<(), PerfectError> {
    let s8 = Ambient::symmetric(8, caps)?;
    let h1 = group(&H1, 8);
    let h2 = group(&H2, 8);
    let y = perm(Y, 8);

    rec.verdict("d4_h1", Status::NotPerfect, "H1 in S_8", decide(&h1, &s8, caps)?);
    let closed = coset_is_inverse_closed_without_involution(&h1, &y);
    rec.add(
        "d4_h1_coset",
        "yH1 is inverse-closed with no involution, y = (1 2 6 5 7 3 4 8)",
        format!("inverse-closed without involution: {closed}"),
        closed,
    );
    let w = witness_search_2elements(&h1, &s8)?.map(|c| c.data()[0]);
    rec.add(
        "d4_h1_first_witness",
        "smallest 2-element witness for H1 is (1 2 6 5 7 3 4 8)",
        format!("smallest witness: {}", w.map_or("none".into(), |w| w.to_cycle_string())),
        w == Some(y),
    );
    rec.verdict("d4_h2", Status::Perfect, "H2 in S_8", decide(&h2, &s8, caps)?);

    let iso = find_isomorphism(&h1, &h2);
    let same_shape = h1.order() == 8 && h2.order() == 8 && !h1.is_abelian() && !h2.is_abelian();
    let ok = iso.is_some() && same_shape && h1.order_profile() == h2.order_profile();
    rec.add(
        "d4_isomorphic",
        "H1 and H2 are isomorphic non-abelian groups of order 8",
        format!(
            "orders {}/{}, generator images {}",
            h1.order(),
            h2.order(),
            iso.map_or("none".into(), |v| v
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", "))
        ),
        ok,
    );

    let norm = normalizer_in(&h2, &s8)?;
    let reps_in = H2_NORMALIZER_REPS.iter().all(|r| norm.contains(&perm(r, 8)));
    rec.add(
        "d4_h2_normalizer_members",
        "the six listed coset representatives normalise H2",
        format!("all listed representatives in N(H2): {reps_in}"),
        reps_in,
    );
    let listed = 8 * (H2_NORMALIZER_REPS.len() as u64 + 1);
    rec.add(
        "d4_h2_normalizer_order",
        &format!(
            "N_S8(H2) is the union of the {} listed cosets (order {listed})",
            H2_NORMALIZER_REPS.len() + 1
        ),
        format!("order by full scan: {}", norm.order()),
        norm.order() == listed,
    );
    rec.verdict(
        "d4_h2_in_normalizer",
        Status::Perfect,
        "H2 in N_S8(H2)",
        decide(&h2, &Ambient::restricted(norm), caps)?,
    );

    let inst = hyp_two_generator(&h1, caps);
    let x1 = perm(H1[0], 8);
    let x2 = perm(H1[1], 8);
    let k = two_generator_frames(&x1, &x2, caps.root_candidates)
        .into_iter()
        .find(|(r, _)| *r == y)
        .map(|(_, k)| k);
    let holds = inst.is_some() && k.is_some_and(|k| k % 2 == 1 && k != 7);
    rec.add(
        "d4_h1_two_generator",
        "two-generator hypotheses hold for H1 with y = (1 2 6 5 7 3 4 8)",
        format!("checker fired: {}, k for y: {k:?}", inst.is_some()),
        holds,
    );

    let fired = [
        hyp_commutative(&h2, caps).is_some(),
        hyp_two_generator(&h2, caps).is_some(),
        search_extension(&h2, caps).is_some(),
        hyp_three_generator(&h2, caps).is_some(),
    ];
    rec.add(
        "d4_h2_no_hypothesis",
        "no non-perfect hypothesis applies to H2",
        format!("checkers fired: {fired:?}"),
        !fired.iter().any(|&f| f),
    );
    Ok(())
}

fn s11_fixtures(rec: &mut Recorder, caps: &Caps) -> Result<(), PerfectError> {
    let s8 = Ambient::symmetric(8, caps)?;
    let h = group(&S11_H, 8);
    let h1 = group(&S11_H1, 8);
    let h_11 = h.extend_to(11)?;
    let h1_11 = h1.extend_to(11)?;
    let k_gens: Vec<Permutation> = h_11
        .generators()
        .iter()
        .copied()
        .chain([perm("(9 10 11)", 11)])
        .collect();
    let k = Subgroup::close(&k_gens, 11, caps.max_subgroup_order)?;
    rec.add(
        "s11_sylow",
        "H is a Sylow 2-subgroup of K",
        format!(
            "|K| = {}, Sylow 2-subgroup of K equals H: {}",
            k.order(),
            k.sylow2() == h_11
        ),
        k.sylow2() == h_11,
    );

    let h_s8 = decide(&h, &s8, caps)?;
    rec.verdict("s11_h_in_s8", Status::NotPerfect, "H in S_8", h_s8);
    let n_h = normalizer_beyond_support(&h, 11, caps)?;
    let h_s11 = decide(&h_11, &Ambient::restricted(n_h), caps)?;
    rec.verdict(
        "s11_h",
        Status::NotPerfect,
        "H in S_11 (decided in its normalizer)",
        h_s11,
    );
    rec.verdict(
        "s11_k",
        Status::NotPerfect,
        "K in S_11 (verdict of its Sylow 2-subgroup)",
        h_s11,
    );

    let three = hyp_three_generator(&h_11, caps);
    rec.add(
        "s11_h_three_generator",
        "three-generator hypotheses hold for H",
        format!("binding found: {}", three.is_some()),
        three.is_some(),
    );

    let h1_s8 = decide(&h1, &s8, caps)?;
    rec.verdict("s11_h1_in_s8", Status::NotPerfect, "H1 in S_8", h1_s8);
    let n_h1 = normalizer_beyond_support(&h1, 11, caps)?;
    let h1_s11 = decide(&h1_11, &Ambient::restricted(n_h1), caps)?;
    rec.verdict(
        "s11_h1",
        Status::NotPerfect,
        "H1 in S_11 (decided in its normalizer)",
        h1_s11,
    );
    let ext = search_extension(&h1_11, caps).or_else(|| hyp_two_generator(&h1_11, caps));
    rec.add(
        "s11_h1_extension",
        "extension hypotheses hold for H1",
        format!("binding found: {}", ext.is_some()),
        ext.is_some(),
    );
    Ok(())
}

fn cyclic_fixtures(rec: &mut Recorder, caps: &Caps, budget: Budget) -> Result<(), PerfectError> {
    let k10 = group(&EX36_K, 10);
    let h10 = group(&[EX36_H], 10);
    rec.add(
        "ex36_sylow",
        "H is a Sylow 2-subgroup of K",
        format!("Sylow 2-subgroup of K equals H: {}", k10.sylow2() == h10),
        k10.sylow2() == h10,
    );
    let h6 = group(&[EX36_H], 6);
    let s6 = Ambient::symmetric(6, caps)?;
    rec.verdict("ex36_h_in_s6", Status::NotPerfect, "H in S_6", decide(&h6, &s6, caps)?);
    if budget == Budget::Full {
        let s10 = Ambient::symmetric(10, caps)?;
        let vh = decide(&h10, &s10, caps)?;
        rec.verdict("ex36_h_in_s10", Status::NotPerfect, "H in S_10", vh);
        let vk = decide(&k10, &s10, caps)?;
        rec.verdict("ex36_k_in_s10", Status::NotPerfect, "K in S_10", vk);
        if vh != vk {
            return Err(PerfectError::VerificationFailed(
                "K and its Sylow 2-subgroup received different verdicts".into(),
            ));
        }
    }
    Ok(())
}

pub fn fixture_suite(budget: Budget, caps: &Caps) -> Result<SuiteSummary, PerfectError> {
    let mut rec = Recorder(Vec::new());
    dihedral_fixtures(&mut rec, caps)?;
    s11_fixtures(&mut rec, caps)?;
    cyclic_fixtures(&mut rec, caps, budget)?;
    Ok(SuiteSummary {
        budget,
        fixtures: rec.0,
    })
}

pub const MAX_L: u32 = 20;
/// Largest `l` for which powers are also enumerated one by one.
pub const BRUTE_FORCE_L: u32 = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumtheorySummary {
    pub l_max: u32,
    pub k_checked: u64,
    pub brute_forced: u64,
    pub counterexamples: Vec<(u64, u32)>,
    pub order_of_five_failures: Vec<u32>,
}

impl NumtheorySummary {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.order_of_five_failures.is_empty()
    }
}

/// Walks `k, k², …` until it returns to 1.
pub fn brute_force_hits_neg_one(k: u64, exponent: u32) -> bool {
    let mask = (1u64 << exponent) - 1;
    let mut x = k & mask;
    loop {
        if x == mask {
            return true;
        }
        if x == 1 {
            return false;
        }
        x = ((x as u128 * k as u128) & mask as u128) as u64;
    }
}

/// For every `l` in `[2, l_max]` and odd `k < 2^l`: no power of `k` is
/// `-1 (mod 2^(l+1))`. Checked through the involution test, through the
/// `(-1)^a 5^b` decomposition and, for small `l`, by listing powers.
pub fn numtheory_check(l_max: u32) -> NumtheorySummary {
    assert!((2..=MAX_L).contains(&l_max));
    let mut s = NumtheorySummary {
        l_max,
        k_checked: 0,
        brute_forced: 0,
        counterexamples: Vec::new(),
        order_of_five_failures: Vec::new(),
    };
    for l in 2..=l_max {
        for k in (1..1u64 << l).step_by(2) {
            s.k_checked += 1;
            let fast = exists_power_neg_one(k, l).expect("in range");
            // -1 lies in <(-1)^a 5^b> only when a = 1 and b = 0
            let d = decompose_unit(k, l + 1).expect("odd");
            let structural = d.sign == 1 && d.power == 0;
            let mut hit = fast || structural;
            if l <= BRUTE_FORCE_L {
                s.brute_forced += 1;
                hit |= brute_force_hits_neg_one(k, l + 1);
            }
            if hit {
                s.counterexamples.push((k, l));
            }
        }
    }
    for n in 3..=30 {
        let expected = 1u64 << (n - 2);
        let ok = order_mod(5, n) == Ok(expected) && pow_mod(5, expected as u128 / 2, n) != 1;
        if !ok {
            s.order_of_five_failures.push(n);
        }
    }
    s
}
