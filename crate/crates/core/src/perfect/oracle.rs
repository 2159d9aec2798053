use std::collections::HashSet;

use crate::caps::Caps;
use crate::group::{walk_double_cosets, Ambient, Subgroup};
use crate::perm::Permutation;

use super::transversal::build_transversal;
use super::{verify_certificate, Certificate, PerfectError, RuleId, Status, Verdict};

/// Smallest representative of a double coset `HxH` that is self-inverse,
/// has an odd number of left cosets of `H` and contains no involution.
pub fn bad_double_coset(h: &Subgroup, g: &Ambient) -> Result<Option<Permutation>, PerfectError> {
    let mut found = None;
    walk_double_cosets(h, g, |d| {
        if d.self_inverse && d.left_coset_count % 2 == 1 && !d.has_involution() {
            found = Some(d.representative);
            false
        } else {
            true
        }
    })?;
    Ok(found)
}

/// Verdict from the double-coset criterion alone, without certificates.
pub fn oracle_status(h: &Subgroup, g: &Ambient) -> Result<Status, PerfectError> {
    Ok(Status::from_perfect(bad_double_coset(h, g)?.is_none()))
}

/// Decides `H` in `G` by the double-coset criterion. A `Perfect` answer is
/// backed by a transversal; every certificate is re-verified before it is
/// returned.
pub fn oracle_double_coset(h: &Subgroup, g: &Ambient, caps: &Caps) -> Result<(Verdict, Certificate), PerfectError> {
    let cert = match bad_double_coset(h, g)? {
        Some(x) => Certificate::BadDoubleCoset(x),
        None => match build_transversal(h, g, caps.transversal_budget)? {
            Some(t) => Certificate::Transversal(t),
            None => {
                return Err(PerfectError::VerificationFailed(
                    "no bad double coset, yet no inverse-closed transversal".into(),
                ))
            }
        },
    };
    if !verify_certificate(h, g, &cert) {
        return Err(PerfectError::VerificationFailed(format!(
            "{} certificate rejected",
            cert.kind()
        )));
    }
    Ok((Verdict::oracle(cert.status()), cert))
}

/// Scans for a 2-element `x` outside `H` with `x² ∈ H`, an odd number
/// `|H : H ∩ xHx⁻¹|` and no involution in `HxH`. A hit proves `NotPerfect`;
/// a miss proves nothing by itself.
pub fn witness_search_2elements(h: &Subgroup, g: &Ambient) -> Result<Option<Certificate>, PerfectError> {
    for idx in 0..g.order() {
        let x = g.element(idx);
        if h.contains(&x) || !x.is_two_element() || !h.contains(&x.compose(&x)) {
            continue;
        }
        let x_inv = x.inverse();
        let meet = h
            .elements()
            .iter()
            .filter(|k| h.contains(&x_inv.compose(k).compose(&x)))
            .count() as u64;
        if (h.order() / meet).is_multiple_of(2) {
            continue;
        }
        let mut seen = HashSet::new();
        let mut involution = false;
        'outer: for a in h.elements() {
            let ax = a.compose(&x);
            for b in h.elements() {
                let d = ax.compose(b);
                if seen.insert(d) && d.squares_to_identity() {
                    involution = true;
                    break 'outer;
                }
            }
        }
        if involution {
            continue;
        }
        let cert = Certificate::BadDoubleCoset(x);
        if !verify_certificate(h, g, &cert) {
            return Err(PerfectError::VerificationFailed("2-element witness rejected".into()));
        }
        return Ok(Some(cert));
    }
    Ok(None)
}

/// For normal `H`: perfect iff every `x ∈ G` with `x² ∈ H` admits `h ∈ H`
/// with `(xh)² = e`.
pub fn normal_criterion(h: &Subgroup, g: &Ambient) -> Result<Verdict, PerfectError> {
    if !h.is_normal_in(g)? {
        return Err(PerfectError::NotNormal);
    }
    let failures =
        g.par_filter(|x| h.contains(&x.compose(x)) && !h.elements().iter().any(|k| x.compose(k).squares_to_identity()));
    Ok(Verdict::rule(
        Status::from_perfect(failures.is_empty()),
        RuleId::NormalCriterion,
    ))
}
