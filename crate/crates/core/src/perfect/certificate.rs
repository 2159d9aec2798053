//! Certificate checks written against plain hash sets, sharing no code with
//! the oracles that produce the certificates.

use std::collections::HashSet;

use crate::group::{Ambient, Subgroup};
use crate::perm::Permutation;

use super::Certificate;

pub fn verify_certificate(h: &Subgroup, g: &Ambient, cert: &Certificate) -> bool {
    if h.degree() != g.degree() || !h.elements().iter().all(|k| g.contains(k)) {
        return false;
    }
    match cert {
        Certificate::Transversal(t) => verify_transversal(h, g, t),
        Certificate::BadDoubleCoset(x) => verify_bad_double_coset(h, g, x),
    }
}

fn left_coset_key(h: &Subgroup, t: &Permutation) -> Permutation {
    h.elements().iter().map(|k| t.compose(k)).min().expect("H contains e")
}

fn verify_transversal(h: &Subgroup, g: &Ambient, t: &[Permutation]) -> bool {
    if t.len() as u64 * h.order() != g.order() {
        return false;
    }
    if !t.iter().all(|x| x.degree() == g.degree() && g.contains(x)) {
        return false;
    }
    let set: HashSet<Permutation> = t.iter().copied().collect();
    if set.len() != t.len() || !t.iter().all(|x| set.contains(&x.inverse())) {
        return false;
    }
    let keys: HashSet<Permutation> = t.iter().map(|x| left_coset_key(h, x)).collect();
    keys.len() == t.len()
}

fn verify_bad_double_coset(h: &Subgroup, g: &Ambient, x: &Permutation) -> bool {
    if x.degree() != g.degree() || !g.contains(x) {
        return false;
    }
    let mut d = HashSet::new();
    for a in h.elements() {
        let ax = a.compose(x);
        for b in h.elements() {
            d.insert(ax.compose(b));
        }
    }
    let size = d.len() as u64;
    if !size.is_multiple_of(h.order()) || (size / h.order()).is_multiple_of(2) {
        return false;
    }
    d.contains(&x.inverse()) && !d.iter().any(Permutation::squares_to_identity)
}

/// Whether the left coset `yH` equals its own inverse set and holds no
/// involution. Such a coset is a one-coset bad double coset `HyH = yH`.
pub fn coset_is_inverse_closed_without_involution(h: &Subgroup, y: &Permutation) -> bool {
    let coset: HashSet<Permutation> = h.elements().iter().map(|k| y.compose(k)).collect();
    coset
        .iter()
        .all(|c| coset.contains(&c.inverse()) && !c.squares_to_identity())
}
