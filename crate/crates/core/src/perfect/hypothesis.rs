//! Searches for explicit bindings of the structural hypotheses that are
//! claimed to force a subgroup to be non-perfect.
//!
//! Every checker returns an instance whose relations can be re-checked
//! with [`HypothesisInstance::verify_relations`]. An instance is only a
//! prediction; callers confirm it by verifying `BadDoubleCoset(witness)`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::group::Subgroup;
use crate::numtheory::{exists_power_neg_one, is_neg_one_mod};
use crate::perm::Permutation;

use super::{Certificate, PerfectError, RuleId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisKind {
    /// Abelian `H = <x1,…,xm>`, `x ∉ H`, `x² = x1`, `x` commuting with the
    /// remaining generators.
    Commutative,
    /// Non-abelian `<x1,x2>` of order `2^(l+1)`, `o(x1) = 2^l`, `o(x2) = 2`,
    /// `y² = x1⁻¹`, `x2 y⁻¹ = y^-k x2` with odd `k ≢ -1 (mod 2^(l+1))`.
    TwoGenerator,
    /// A two-generator frame plus pairwise commuting `x3,…,xm` that commute
    /// with `y` and `x2`.
    Extension,
    /// A two-generator frame with odd `k < 2^l`, plus `x3` with
    /// `x3 y⁻¹ = y^-k x3` and `x2 x3⁻¹ = x3^-s x2`.
    ThreeGenerator,
}

impl HypothesisKind {
    pub fn rule(self) -> RuleId {
        match self {
            HypothesisKind::Commutative => RuleId::HypCommutative,
            HypothesisKind::TwoGenerator => RuleId::HypTwoGenerator,
            HypothesisKind::Extension => RuleId::HypExtension,
            HypothesisKind::ThreeGenerator => RuleId::HypThreeGenerator,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisInstance {
    pub kind: HypothesisKind,
    /// `x1, x2, …, xm`.
    pub generators: Vec<Permutation>,
    /// `x` for the commutative kind, `y` otherwise.
    pub root: Permutation,
    pub k: Option<u64>,
    pub l: Option<u32>,
    pub s: Option<u64>,
    /// `o(x3)`.
    pub t1: Option<u64>,
    pub m: usize,
    /// Whether some `k^i ≡ -1 (mod 2^(l+1))`, when `l >= 2` and `k < 2^l`.
    pub k_power_hits_neg_one: Option<bool>,
}

fn log2(x: u64) -> u32 {
    x.trailing_zeros()
}

/// Smallest `k` in `[1, o(y)]` with `y^-k = target`.
fn solve_power(y: &Permutation, target: &Permutation) -> Option<u64> {
    let y_inv = y.inverse();
    let mut acc = y_inv;
    for k in 1..=y.order() {
        if acc == *target {
            return Some(k);
        }
        acc = acc.compose(&y_inv);
    }
    None
}

fn k_check(k: u64, l: u32) -> Option<bool> {
    if l >= 2 && k < (1 << l) {
        exists_power_neg_one(k, l).ok()
    } else {
        None
    }
}

impl HypothesisInstance {
    pub fn witness(&self) -> Certificate {
        Certificate::BadDoubleCoset(self.root)
    }

    fn group(&self) -> Option<Subgroup> {
        let n = self.root.degree();
        Subgroup::close(&self.generators, n, 1 << 20).ok()
    }

    /// The `<x1, x2>` frame: orders, non-commutativity, `|<x1,x2>| =
    /// 2^(l+1)`, `y² = x1⁻¹` and `x2 y⁻¹ = y^-k x2`.
    fn frame_holds(&self) -> bool {
        let (Some(l), Some(k)) = (self.l, self.k) else {
            return false;
        };
        let [x1, x2, ..] = self.generators[..] else {
            return false;
        };
        let y = self.root;
        let n = y.degree();
        let Ok(base) = Subgroup::close(&[x1, x2], n, 1 << 20) else {
            return false;
        };
        x1.order() == 1 << l
            && x2.order() == 2
            && base.order() == 1 << (l + 1)
            && !x1.commutes_with(&x2)
            && y.compose(&y) == x1.inverse()
            && x2.compose(&y.inverse()) == y.power(-(k as i64)).compose(&x2)
    }

    fn third_generator_holds(&self) -> bool {
        let (Some(k), Some(s)) = (self.k, self.s) else {
            return false;
        };
        let [_, x2, x3] = self.generators[..] else {
            return false;
        };
        let y = self.root;
        x3.compose(&y.inverse()) == y.power(-(k as i64)).compose(&x3)
            && x2.compose(&x3.inverse()) == x3.power(-(s as i64)).compose(&x2)
    }

    /// Re-checks every relation the instance claims.
    pub fn verify_relations(&self) -> bool {
        if self.m != self.generators.len() || self.generators.is_empty() {
            return false;
        }
        let Some(h) = self.group() else {
            return false;
        };
        match self.kind {
            HypothesisKind::Commutative => {
                let x = self.root;
                let x1 = self.generators[0];
                h.is_abelian()
                    && h.order().is_power_of_two()
                    && !h.contains(&x)
                    && x.compose(&x) == x1
                    && self.generators[1..].iter().all(|g| g.commutes_with(&x))
            }
            HypothesisKind::TwoGenerator => {
                let (l, k) = (self.l.unwrap_or(0), self.k.unwrap_or(0));
                self.m == 2 && self.frame_holds() && k % 2 == 1 && !is_neg_one_mod(k as i64, l + 1)
            }
            HypothesisKind::Extension => {
                let (l, k) = (self.l.unwrap_or(0), self.k.unwrap_or(0));
                let x2 = self.generators.get(1);
                let extra = self.generators.get(2..).unwrap_or(&[]);
                self.frame_holds()
                    && k % 2 == 1
                    && !is_neg_one_mod(k as i64, l + 1)
                    && extra.iter().all(|g| {
                        g.commutes_with(&self.root)
                            && x2.is_some_and(|x2| g.commutes_with(x2))
                            && extra.iter().all(|o| o.commutes_with(g))
                    })
            }
            HypothesisKind::ThreeGenerator => {
                let (l, k) = (self.l.unwrap_or(0), self.k.unwrap_or(0));
                self.m == 3 && self.frame_holds() && self.third_generator_holds() && k % 2 == 1 && k < 1 << l
            }
        }
    }
}

fn greedy_completion(h: &Subgroup, start: &[Permutation], pool: &[Permutation]) -> Option<Vec<Permutation>> {
    let n = h.degree();
    let mut gens = start.to_vec();
    let mut current = Subgroup::close(&gens, n, h.elements().len()).ok()?;
    for p in pool {
        if current.order() == h.order() {
            break;
        }
        if current.contains(p) {
            continue;
        }
        gens.push(*p);
        current = Subgroup::close(&gens, n, h.elements().len()).ok()?;
    }
    (current.order() == h.order()).then_some(gens)
}

/// Commutative case. Since `x` commutes with `x1 = x²` and with the other
/// generators, it must centralise `H`; the search runs over square roots
/// of each non-identity `x1 ∈ H`.
pub fn hyp_commutative(h: &Subgroup, caps: &Caps) -> Option<HypothesisInstance> {
    if h.order() < 2 || !h.is_two_group() || !h.is_abelian() {
        return None;
    }
    for &x1 in &h.elements()[1..] {
        for x in x1.square_roots(caps.root_candidates) {
            if h.contains(&x) || !h.generators().iter().all(|g| g.commutes_with(&x)) {
                continue;
            }
            let gens = greedy_completion(h, &[x1], &h.elements()[1..])?;
            let inst = HypothesisInstance {
                kind: HypothesisKind::Commutative,
                m: gens.len(),
                generators: gens,
                root: x,
                k: None,
                l: None,
                s: None,
                t1: None,
                k_power_hits_neg_one: None,
            };
            debug_assert!(inst.verify_relations());
            return Some(inst);
        }
    }
    None
}

/// Pairs `(x1, x2)` of `H` spanning a non-abelian subgroup of order
/// `2 o(x1)` with `o(x2) = 2`, in rank order.
fn frame_pairs(h: &Subgroup) -> Vec<(Permutation, Permutation, Subgroup)> {
    let n = h.degree();
    let mut out = Vec::new();
    for &x1 in h.elements() {
        let o1 = x1.order();
        if o1 < 2 {
            continue;
        }
        for &x2 in h.elements() {
            if !x2.is_involution() || x1.commutes_with(&x2) {
                continue;
            }
            if let Ok(base) = Subgroup::close(&[x1, x2], n, h.elements().len()) {
                if base.order() == 2 * o1 {
                    out.push((x1, x2, base));
                }
            }
        }
    }
    out
}

/// All `(y, k)` with `y² = x1⁻¹` and `x2 y⁻¹ = y^-k x2`, `k` in
/// `[1, 2^(l+1)]`, over at most `cap` roots.
pub fn two_generator_frames(x1: &Permutation, x2: &Permutation, cap: usize) -> Vec<(Permutation, u64)> {
    let mut out = Vec::new();
    for y in x1.inverse().square_roots(cap) {
        let target = x2.compose(&y.inverse()).compose(x2);
        if let Some(k) = solve_power(&y, &target) {
            out.push((y, k));
        }
    }
    out
}

fn frame_instance(kind: HypothesisKind, gens: Vec<Permutation>, y: Permutation, k: u64) -> HypothesisInstance {
    let l = log2(gens[0].order());
    HypothesisInstance {
        kind,
        m: gens.len(),
        generators: gens,
        root: y,
        k: Some(k),
        l: Some(l),
        s: None,
        t1: None,
        k_power_hits_neg_one: k_check(k, l),
    }
}

/// Two-generator case, with `<x1, x2> = H`.
pub fn hyp_two_generator(h: &Subgroup, caps: &Caps) -> Option<HypothesisInstance> {
    if !h.is_two_group() || h.is_abelian() {
        return None;
    }
    for (x1, x2, base) in frame_pairs(h) {
        if base.order() != h.order() {
            continue;
        }
        let l = log2(x1.order());
        for (y, k) in two_generator_frames(&x1, &x2, caps.root_candidates) {
            if k % 2 == 1 && !is_neg_one_mod(k as i64, l + 1) {
                let inst = frame_instance(HypothesisKind::TwoGenerator, vec![x1, x2], y, k);
                debug_assert!(inst.verify_relations());
                return Some(inst);
            }
        }
    }
    None
}

/// Extends a two-generator `base` (whose frame lies inside `H`) by
/// pairwise commuting elements of `H` that commute with `y` and `x2`,
/// chosen greedily in rank order, until `H` is generated.
pub fn hyp_extension(h: &Subgroup, base: &HypothesisInstance) -> Option<HypothesisInstance> {
    let [x1, x2] = base.generators[..] else {
        return None;
    };
    let y = base.root;
    if !h.contains(&x1) || !h.contains(&x2) {
        return None;
    }
    let n = h.degree();
    let mut gens = vec![x1, x2];
    let mut current = Subgroup::close(&gens, n, h.elements().len()).ok()?;
    for &g in h.elements() {
        if current.order() == h.order() {
            break;
        }
        if current.contains(&g)
            || !g.commutes_with(&y)
            || !g.commutes_with(&x2)
            || !gens[2..].iter().all(|o| o.commutes_with(&g))
        {
            continue;
        }
        gens.push(g);
        current = Subgroup::close(&gens, n, h.elements().len()).ok()?;
    }
    if current.order() != h.order() || gens.len() == 2 {
        return None;
    }
    let inst = frame_instance(HypothesisKind::Extension, gens, y, base.k?);
    inst.verify_relations().then_some(inst)
}

/// Tries [`hyp_extension`] over every two-generator frame inside `H`.
pub fn search_extension(h: &Subgroup, caps: &Caps) -> Option<HypothesisInstance> {
    if !h.is_two_group() || h.is_abelian() {
        return None;
    }
    for (x1, x2, base) in frame_pairs(h) {
        if base.order() == h.order() {
            continue;
        }
        let l = log2(x1.order());
        for (y, k) in two_generator_frames(&x1, &x2, caps.root_candidates) {
            if k % 2 == 0 || is_neg_one_mod(k as i64, l + 1) {
                continue;
            }
            let frame = frame_instance(HypothesisKind::TwoGenerator, vec![x1, x2], y, k);
            if let Some(inst) = hyp_extension(h, &frame) {
                return Some(inst);
            }
        }
    }
    None
}

/// Three-generator case: `H = <x1, x2, x3>` with odd `k < 2^l`.
pub fn hyp_three_generator(h: &Subgroup, caps: &Caps) -> Option<HypothesisInstance> {
    three_generator_search(h, caps, true, 1).pop()
}

/// Up to `limit` bindings `H = <x1, x2, x3>` of the three-generator
/// relations for any `k, s >= 1`, the setting of [`quotient_cyclic_check`].
pub fn quotient_frames(h: &Subgroup, caps: &Caps, limit: usize) -> Vec<HypothesisInstance> {
    three_generator_search(h, caps, false, limit)
}

fn three_generator_search(h: &Subgroup, caps: &Caps, strict: bool, limit: usize) -> Vec<HypothesisInstance> {
    let mut out = Vec::new();
    if !h.is_two_group() || h.is_abelian() {
        return out;
    }
    let n = h.degree();
    for (x1, x2, base) in frame_pairs(h) {
        if base.order() == h.order() {
            continue;
        }
        let l = log2(x1.order());
        for (y, k) in two_generator_frames(&x1, &x2, caps.root_candidates) {
            if strict && (k % 2 == 0 || k >= 1 << l) {
                continue;
            }
            let y_inv = y.inverse();
            let y_k = y.power(-(k as i64));
            for &x3 in h.elements() {
                if base.contains(&x3) || x3.compose(&y_inv) != y_k.compose(&x3) {
                    continue;
                }
                let target = x2.compose(&x3.inverse()).compose(&x2);
                let Some(s) = solve_power(&x3, &target) else {
                    continue;
                };
                let Ok(whole) = Subgroup::close(&[x1, x2, x3], n, h.elements().len()) else {
                    continue;
                };
                if whole.order() != h.order() {
                    continue;
                }
                let mut inst = frame_instance(HypothesisKind::ThreeGenerator, vec![x1, x2, x3], y, k);
                inst.s = Some(s);
                inst.t1 = Some(x3.order());
                debug_assert!(!strict || inst.verify_relations());
                out.push(inst);
                if out.len() >= limit {
                    return out;
                }
            }
        }
    }
    out
}

/// Checks that `<x1,x2,x3> / <x1,x2>` is cyclic, generated by the image of
/// `x3`, after re-verifying the frame and the `x3` relations.
pub fn quotient_cyclic_check(inst: &HypothesisInstance) -> Result<bool, PerfectError> {
    if inst.generators.len() != 3 || !inst.frame_holds() || !inst.third_generator_holds() {
        return Err(PerfectError::HypothesisNotSatisfied(
            "three-generator relations do not hold".into(),
        ));
    }
    let [x1, x2, x3] = inst.generators[..] else {
        unreachable!()
    };
    let n = x1.degree();
    let small = Subgroup::close(&[x1, x2], n, 1 << 20)?;
    let big = Subgroup::close(&[x1, x2, x3], n, 1 << 20)?;
    let key = |p: &Permutation| small.elements().iter().map(|k| p.compose(k)).min().expect("non-empty");
    let all: HashSet<Permutation> = big.elements().iter().map(key).collect();
    let mut reached = HashSet::new();
    let mut p = Permutation::identity(n);
    loop {
        if !reached.insert(key(&p)) {
            break;
        }
        p = p.compose(&x3);
    }
    Ok(reached == all)
}
