//! Finite permutation groups given by generators and fully enumerated.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use thiserror::Error;

use crate::caps::Caps;
use crate::perm::{factorial, PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("subgroup order exceeds the cap of {cap} elements")]
    OrderCapExceeded { cap: usize },
    #[error("enumerating S_{degree} exceeds the ambient cap (n <= {cap})")]
    AmbientTooLarge { degree: usize, cap: usize },
    #[error("subgroup is not contained in the ambient group")]
    NotContained,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
}

impl GroupError {
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            GroupError::OrderCapExceeded { .. } | GroupError::AmbientTooLarge { .. }
        )
    }
}

/// A subgroup of `S_n` with all elements enumerated in rank order.
#[derive(Clone)]
pub struct Subgroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(S{}, order {}, <", self.degree, self.order())?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(">)")
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Closure of `generators` by breadth-first search.
    pub fn close(generators: &[Permutation], n: usize, cap: usize) -> Result<Subgroup, GroupError> {
        for g in generators {
            if g.degree() != n {
                return Err(GroupError::DegreeMismatch {
                    expected: n,
                    found: g.degree(),
                });
            }
        }
        let gens: Vec<Permutation> = generators.iter().copied().filter(|g| !g.is_identity()).collect();
        let id = Permutation::identity(n);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id);
        let mut queue = VecDeque::from([id]);
        while let Some(a) = queue.pop_front() {
            for g in &gens {
                let b = a.compose(g);
                if seen.insert(b) {
                    if seen.len() > cap {
                        return Err(GroupError::OrderCapExceeded { cap });
                    }
                    queue.push_back(b);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort_unstable();
        Ok(Subgroup {
            degree: n,
            generators: generators.to_vec(),
            elements,
        })
    }

    pub fn trivial(n: usize) -> Subgroup {
        Subgroup {
            degree: n,
            generators: Vec::new(),
            elements: vec![Permutation::identity(n)],
        }
    }

    /// `S_n` as a subgroup, generated by `(1 2)` and `(1 2 … n)`.
    pub fn symmetric(n: usize, cap: usize) -> Result<Subgroup, GroupError> {
        if n == 1 {
            return Ok(Subgroup::trivial(1));
        }
        let t = Permutation::from_cycles(n, &[vec![0, 1]])?;
        let c = Permutation::from_cycles(n, &[(0..n).collect()])?;
        Subgroup::close(&[t, c], n, cap)
    }

    /// Wraps an element set already known to be a group; a small
    /// generating set is picked greedily in rank order.
    pub fn from_group_elements(n: usize, mut elements: Vec<Permutation>) -> Subgroup {
        elements.sort_unstable();
        elements.dedup();
        let mut generators = Vec::new();
        let mut current: HashSet<Permutation> = HashSet::from([Permutation::identity(n)]);
        for &e in &elements {
            if current.len() == elements.len() {
                break;
            }
            if current.contains(&e) {
                continue;
            }
            generators.push(e);
            let closed = Subgroup::close(&generators, n, elements.len()).expect("closure stays inside a group");
            current = closed.elements.into_iter().collect();
        }
        Subgroup {
            degree: n,
            generators,
            elements,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Elements sorted by rank.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    #[inline]
    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree && self.elements.binary_search(p).is_ok()
    }

    pub fn position(&self, p: &Permutation) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    pub fn index_in(&self, g: &Ambient) -> Result<u64, GroupError> {
        if g.degree() != self.degree {
            return Err(GroupError::DegreeMismatch {
                expected: g.degree(),
                found: self.degree,
            });
        }
        if let Ambient::Restricted(k) = g {
            if !self.is_subgroup_of(k) {
                return Err(GroupError::NotContained);
            }
        }
        Ok(g.order() / self.order())
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Smallest-rank element whose order equals the group order, if any.
    pub fn cyclic_generator(&self) -> Option<Permutation> {
        let order = self.order();
        self.elements.iter().copied().find(|e| e.order() == order)
    }

    pub fn is_two_group(&self) -> bool {
        self.order().is_power_of_two()
    }

    /// Conjugation by `g` maps every generator into `self`.
    pub fn normalized_by(&self, g: &Permutation) -> bool {
        self.generators.iter().all(|h| self.contains(&h.conjugate(g)))
    }

    pub fn is_normal_in(&self, g: &Ambient) -> Result<bool, GroupError> {
        if g.degree() != self.degree {
            return Err(GroupError::DegreeMismatch {
                expected: g.degree(),
                found: self.degree,
            });
        }
        let ambient_gens = g.generators()?;
        if let Ambient::Restricted(k) = g {
            if !self.is_subgroup_of(k) {
                return Ok(false);
            }
        }
        Ok(ambient_gens.iter().all(|a| self.normalized_by(a)))
    }

    /// `g H g⁻¹`, regenerated from conjugated generators.
    pub fn conjugate_by(&self, g: &Permutation) -> Subgroup {
        let gens: Vec<Permutation> = self.generators.iter().map(|h| h.conjugate(g)).collect();
        Subgroup::close(&gens, self.degree, self.elements.len()).expect("conjugate has the same order")
    }

    /// The same group acting on `m >= n` points.
    pub fn extend_to(&self, m: usize) -> Result<Subgroup, GroupError> {
        let lift = |v: &[Permutation]| -> Result<Vec<Permutation>, GroupError> {
            v.iter().map(|p| p.extend_to(m).map_err(GroupError::from)).collect()
        };
        let generators = lift(&self.generators)?;
        let mut elements = lift(&self.elements)?;
        elements.sort_unstable();
        Ok(Subgroup {
            degree: m,
            generators,
            elements,
        })
    }

    /// A Sylow 2-subgroup, grown one smallest-rank normalizing 2-element
    /// at a time.
    pub fn sylow2(&self) -> Subgroup {
        let n = self.degree;
        let mut p = Subgroup::trivial(n);
        let odd_part = |m: u64| m >> m.trailing_zeros();
        let target = self.order() / odd_part(self.order());
        while p.order() < target {
            let g = self
                .elements
                .iter()
                .copied()
                .find(|g| !p.contains(g) && g.is_two_element() && p.normalized_by(g))
                .expect("a non-Sylow 2-subgroup has a 2-element in its normalizer outside it");
            let mut gens = p.generators.clone();
            gens.push(g);
            p = Subgroup::close(&gens, n, self.elements.len()).expect("inside self");
        }
        p
    }

    /// Canonical key: the sorted element list.
    pub fn key(&self) -> Vec<u64> {
        self.elements.iter().map(Permutation::rank).collect()
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.elements.iter().map(Permutation::order).collect();
        v.sort_unstable();
        v
    }
}

/// Searches for an isomorphism `self -> other` by trying images of the
/// generators and extending along the Cayley graph. Returns the images of
/// `self`'s generators.
pub fn find_isomorphism(a: &Subgroup, b: &Subgroup) -> Option<Vec<Permutation>> {
    if a.order() != b.order() || a.order_profile() != b.order_profile() {
        return None;
    }
    let gens = a.generators();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<Permutation> = choice.iter().map(|&i| b.elements[i]).collect();
        let orders_match = gens.iter().zip(&images).all(|(g, h)| g.order() == h.order());
        if orders_match && extends_to_isomorphism(a, b, &images) {
            return Some(images);
        }
        // odometer over |b|^gens choices
        let mut k = 0;
        loop {
            if k == choice.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < b.elements.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// True when `gens[i] ↦ images[i]` defines a bijective homomorphism.
pub fn extends_to_isomorphism(a: &Subgroup, b: &Subgroup, images: &[Permutation]) -> bool {
    let gens = a.generators();
    let id_a = Permutation::identity(a.degree());
    let mut phi: HashMap<Permutation, Permutation> = HashMap::from([(id_a, Permutation::identity(b.degree()))]);
    let mut queue = VecDeque::from([id_a]);
    while let Some(x) = queue.pop_front() {
        let fx = phi[&x];
        for (g, h) in gens.iter().zip(images) {
            let y = x.compose(g);
            let fy = fx.compose(h);
            match phi.get(&y) {
                Some(existing) if *existing != fy => return false,
                Some(_) => {}
                None => {
                    phi.insert(y, fy);
                    queue.push_back(y);
                }
            }
        }
    }
    let image: HashSet<Permutation> = phi.values().copied().collect();
    phi.len() == a.elements.len() && image.len() == b.elements.len() && image.iter().all(|p| b.contains(p))
}

/// The group that cosets and double cosets are taken in.
#[derive(Clone, Debug)]
pub enum Ambient {
    /// All of `S_n`, indexed by rank.
    Symmetric { degree: usize },
    /// A subgroup acting as the ambient group, indexed by position.
    Restricted(Arc<Subgroup>),
}

impl Ambient {
    pub fn symmetric(n: usize, caps: &Caps) -> Result<Ambient, GroupError> {
        if n > caps.max_full_degree || n > crate::perm::MAX_RANK_DEGREE {
            return Err(GroupError::AmbientTooLarge {
                degree: n,
                cap: caps.max_full_degree,
            });
        }
        Ok(Ambient::Symmetric { degree: n })
    }

    pub fn restricted(g: Subgroup) -> Ambient {
        Ambient::Restricted(Arc::new(g))
    }

    pub fn degree(&self) -> usize {
        match self {
            Ambient::Symmetric { degree } => *degree,
            Ambient::Restricted(g) => g.degree(),
        }
    }

    pub fn order(&self) -> u64 {
        match self {
            Ambient::Symmetric { degree } => factorial(*degree),
            Ambient::Restricted(g) => g.order(),
        }
    }

    /// Element at a dense index in `[0, order)`, increasing in rank.
    #[inline]
    pub fn element(&self, index: u64) -> Permutation {
        match self {
            Ambient::Symmetric { degree } => Permutation::unrank(index, *degree).expect("index in range"),
            Ambient::Restricted(g) => g.elements()[index as usize],
        }
    }

    #[inline]
    pub fn index_of(&self, p: &Permutation) -> Option<u64> {
        match self {
            Ambient::Symmetric { degree } => (p.degree() == *degree).then(|| p.rank()),
            Ambient::Restricted(g) => g.position(p).map(|i| i as u64),
        }
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index_of(p).is_some()
    }

    pub fn generators(&self) -> Result<Vec<Permutation>, GroupError> {
        match self {
            Ambient::Symmetric { degree } => {
                let n = *degree;
                if n == 1 {
                    return Ok(Vec::new());
                }
                Ok(vec![
                    Permutation::from_cycles(n, &[vec![0, 1]])?,
                    Permutation::from_cycles(n, &[(0..n).collect()])?,
                ])
            }
            Ambient::Restricted(g) => Ok(g.generators().to_vec()),
        }
    }

    /// Visits every element in index order, in parallel chunks, keeping
    /// those accepted by `keep`. Output is in ascending index order.
    pub fn par_filter<F>(&self, keep: F) -> Vec<Permutation>
    where
        F: Fn(&Permutation) -> bool + Sync,
    {
        const CHUNK: u64 = 1 << 14;
        let total = self.order();
        let chunks = total.div_ceil(CHUNK);
        let parts: Vec<Vec<Permutation>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK;
                let end = (start + CHUNK).min(total);
                let mut out = Vec::new();
                match self {
                    Ambient::Symmetric { .. } => {
                        let mut p = self.element(start);
                        for i in start..end {
                            if keep(&p) {
                                out.push(p);
                            }
                            if i + 1 < end {
                                p.next_lex();
                            }
                        }
                    }
                    Ambient::Restricted(g) => {
                        out.extend(g.elements()[start as usize..end as usize].iter().filter(|p| keep(p)));
                    }
                }
                out
            })
            .collect();
        parts.into_iter().flatten().collect()
    }

    fn check_subgroup(&self, h: &Subgroup) -> Result<(), GroupError> {
        if h.degree() != self.degree() {
            return Err(GroupError::DegreeMismatch {
                expected: self.degree(),
                found: h.degree(),
            });
        }
        if let Ambient::Restricted(g) = self {
            if !h.is_subgroup_of(g) {
                return Err(GroupError::NotContained);
            }
        }
        Ok(())
    }
}

/// `N_G(H)`, by scanning every element of the ambient group.
pub fn normalizer_in(h: &Subgroup, g: &Ambient) -> Result<Subgroup, GroupError> {
    g.check_subgroup(h)?;
    let elements = g.par_filter(|x| h.normalized_by(x));
    Ok(Subgroup::from_group_elements(h.degree(), elements))
}

/// Smallest-rank representatives of the left cosets `xH`.
pub fn left_cosets(h: &Subgroup, g: &Ambient) -> Result<Vec<Permutation>, GroupError> {
    g.check_subgroup(h)?;
    let mut seen = FixedBitSet::with_capacity(g.order() as usize);
    let mut reps = Vec::new();
    for idx in 0..g.order() {
        if seen.contains(idx as usize) {
            continue;
        }
        let x = g.element(idx);
        reps.push(x);
        for k in h.elements() {
            let i = g.index_of(&x.compose(k)).expect("closed under H");
            seen.insert(i as usize);
        }
    }
    Ok(reps)
}

/// A double coset `HxH` with its smallest-rank representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoset {
    pub representative: Permutation,
    /// Ambient indices of the members, ascending.
    pub members: Vec<u64>,
    /// `|D| / |H|`, which equals `|H : H ∩ xHx⁻¹|`.
    pub left_coset_count: u64,
    pub self_inverse: bool,
    /// Some member `t` has `t² = e`. The identity counts, so `H` itself
    /// is never reported as lacking one.
    pub has_involution: bool,
}

impl DoubleCoset {
    pub fn size(&self) -> u64 {
        self.members.len() as u64
    }
}

/// A double coset as seen during the walk; the involution scan is lazy.
pub struct DoubleCosetView<'a> {
    pub representative: Permutation,
    pub members: &'a [u64],
    pub left_coset_count: u64,
    pub self_inverse: bool,
    ambient: &'a Ambient,
}

impl DoubleCosetView<'_> {
    /// Some member squares to `e`.
    pub fn has_involution(&self) -> bool {
        self.members
            .iter()
            .any(|&i| self.ambient.element(i).squares_to_identity())
    }
}

/// Walks the double cosets of `H` in `G` in order of their smallest
/// member. `visit` may stop the walk early by returning `false`.
pub fn walk_double_cosets<F>(h: &Subgroup, g: &Ambient, mut visit: F) -> Result<(), GroupError>
where
    F: FnMut(&DoubleCosetView<'_>) -> bool,
{
    g.check_subgroup(h)?;
    let total = g.order();
    let mut seen = FixedBitSet::with_capacity(total as usize);
    let mut members: Vec<u64> = Vec::new();
    let mut cursor = match g {
        Ambient::Symmetric { degree } => Some(Permutation::identity(*degree)),
        Ambient::Restricted(_) => None,
    };
    for idx in 0..total {
        let x = match &mut cursor {
            Some(p) => {
                let cur = *p;
                p.next_lex();
                cur
            }
            None => g.element(idx),
        };
        if seen.contains(idx as usize) {
            continue;
        }
        members.clear();
        let mut cosets = 0u64;
        for k in h.elements() {
            let y = k.compose(&x);
            let iy = g.index_of(&y).expect("H and x lie in G");
            if seen.contains(iy as usize) {
                continue;
            }
            cosets += 1;
            for k2 in h.elements() {
                let z = y.compose(k2);
                let iz = g.index_of(&z).expect("H and x lie in G");
                seen.insert(iz as usize);
                members.push(iz);
            }
        }
        members.sort_unstable();
        let inv = g.index_of(&x.inverse()).expect("G is a group");
        let view = DoubleCosetView {
            representative: x,
            members: &members,
            left_coset_count: cosets,
            self_inverse: members.binary_search(&inv).is_ok(),
            ambient: g,
        };
        if !visit(&view) {
            break;
        }
    }
    Ok(())
}

/// All double cosets `HxH` partitioning `G`.
pub fn double_cosets(h: &Subgroup, g: &Ambient) -> Result<Vec<DoubleCoset>, GroupError> {
    let mut out = Vec::new();
    walk_double_cosets(h, g, |d| {
        out.push(DoubleCoset {
            representative: d.representative,
            members: d.members.to_vec(),
            left_coset_count: d.left_coset_count,
            self_inverse: d.self_inverse,
            has_involution: d.has_involution(),
        });
        true
    })?;
    Ok(out)
}

/// Every subgroup of `S_n`, `n <= 6`, as joins of cyclic subgroups.
pub fn all_subgroups(n: usize) -> Result<Vec<Subgroup>, GroupError> {
    if n > 6 {
        return Err(GroupError::AmbientTooLarge { degree: n, cap: 6 });
    }
    let sym = Subgroup::symmetric(n, usize::MAX)?;
    let cap = sym.elements.len();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut cyclic: Vec<Subgroup> = Vec::new();
    for &x in sym.elements() {
        let c = Subgroup::close(&[x], n, cap)?;
        if seen.insert(c.key()) {
            cyclic.push(c);
        }
    }
    let mut all: Vec<Subgroup> = cyclic.clone();
    let mut frontier: Vec<Subgroup> = cyclic.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for k in &frontier {
            for c in &cyclic {
                let g = c.generators()[0];
                if k.contains(&g) {
                    continue;
                }
                let mut gens = k.generators().to_vec();
                gens.push(g);
                let j = Subgroup::close(&gens, n, cap)?;
                if seen.insert(j.key()) {
                    next.push(j.clone());
                    all.push(j);
                }
            }
        }
        frontier = next;
    }
    all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.key().cmp(&b.key())));
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    fn close(gens: &[&str], n: usize) -> Subgroup {
        let g: Vec<Permutation> = gens.iter().map(|s| p(s, n)).collect();
        Subgroup::close(&g, n, 1 << 20).unwrap()
    }

    fn sym(n: usize) -> Ambient {
        Ambient::symmetric(n, &Caps::default()).unwrap()
    }

    #[test]
    fn closure_orders() {
        assert_eq!(close(&["(1 2)"], 3).order(), 2);
        assert_eq!(close(&["(1 2)", "(1 2 3)"], 3).order(), 6);
        assert_eq!(close(&["(1 4 7 6)(2 8 3 5)", "(2 5)(3 8)(4 6)"], 8).order(), 8);
        assert_eq!(close(&[], 4).order(), 1);
    }

    #[test]
    fn closure_cap_is_an_error() {
        let g = vec![p("(1 2)", 5), p("(1 2 3 4 5)", 5)];
        assert_eq!(
            Subgroup::close(&g, 5, 100),
            Err(GroupError::OrderCapExceeded { cap: 100 })
        );
    }

    #[test]
    fn membership_and_index() {
        let h = close(&["(1 2)"], 3);
        assert!(h.contains(&p("(1 2)", 3)));
        assert!(!h.contains(&p("(1 3)", 3)));
        assert_eq!(close(&["(1 2)", "(1 2 3 4)"], 4).order(), 24);
        assert_eq!(h.index_in(&sym(3)).unwrap(), 3);
        let k = Ambient::restricted(close(&["(1 2 3)"], 3));
        assert_eq!(h.index_in(&k), Err(GroupError::NotContained));
    }

    #[test]
    fn abelian_and_cyclic() {
        let klein = close(&["(1 2)", "(3 4)"], 4);
        assert!(klein.is_abelian());
        assert_eq!(klein.cyclic_generator(), None);
        let c = close(&["(1 2 3 4)(5 6)"], 6);
        assert_eq!(c.cyclic_generator(), Some(p("(1 2 3 4)(5 6)", 6)));
        let h1 = close(&["(1 4 7 6)(2 8 3 5)", "(2 5)(3 8)(4 6)"], 8);
        assert!(!h1.is_abelian());
    }

    #[test]
    fn sylow_examples() {
        let s4 = Subgroup::symmetric(4, 100).unwrap();
        let p4 = s4.sylow2();
        assert_eq!(p4.order(), 8);
        assert!(p4.is_subgroup_of(&s4));
        let k = close(&["(1 2 3 4)(5 6)", "(7 8 9)"], 10);
        assert_eq!(k.order(), 12);
        assert_eq!(k.sylow2(), close(&["(1 2 3 4)(5 6)"], 10));
        assert_eq!(close(&["(1 2 3)"], 3).sylow2().order(), 1);
    }

    #[test]
    fn normalizers() {
        let c3 = close(&["(1 2 3)"], 3);
        assert_eq!(normalizer_in(&c3, &sym(3)).unwrap().order(), 6);
        let h2 = close(&["(1 6)(2 4)(3 8)(5 7)", "(1 8 5 4)(2 7 3 6)"], 8);
        let n = normalizer_in(&h2, &sym(8)).unwrap();
        assert!(h2.is_subgroup_of(&n));
        for rep in [
            "(4 8)(6 7)",
            "(2 3)(6 7)",
            "(2 6)(3 7)(4 8)",
            "(2 7)(3 6)(4 8)",
            "(2 6 3 7)",
            "(2 7 3 6)",
        ] {
            let g = p(rep, 8);
            assert!(h2.normalized_by(&g), "{rep}");
            assert!(n.contains(&g), "{rep}");
        }
        // the normalizer is a group
        let regen = Subgroup::close(n.generators(), 8, 1 << 20).unwrap();
        assert_eq!(regen, n);
    }

    #[test]
    fn cosets_of_transposition_in_s3() {
        let h = close(&["(1 2)"], 3);
        assert_eq!(left_cosets(&h, &sym(3)).unwrap().len(), 3);
        let dcs = double_cosets(&h, &sym(3)).unwrap();
        assert_eq!(dcs.len(), 2);
        let sizes: Vec<u64> = dcs.iter().map(DoubleCoset::size).collect();
        assert_eq!(sizes, vec![2, 4]);
        let big = &dcs[1];
        assert!(big.self_inverse);
        assert_eq!(big.left_coset_count, 2);
        assert!(big.has_involution);
        assert!(big.members.contains(&p("(1 3)", 3).rank()));
    }

    #[test]
    fn klein_generator_double_coset() {
        let h = close(&["(1 2)(3 4)"], 4);
        let dcs = double_cosets(&h, &sym(4)).unwrap();
        let total: u64 = dcs.iter().map(DoubleCoset::size).sum();
        assert_eq!(total, 24);
        let want = {
            let mut v = vec![p("(1 3 2 4)", 4).rank(), p("(1 4 2 3)", 4).rank()];
            v.sort();
            v
        };
        let d = dcs.iter().find(|d| d.members == want).expect("double coset present");
        assert!(d.self_inverse);
        assert_eq!(d.left_coset_count, 1);
        assert!(!d.has_involution);
        assert_eq!(d.representative, p("(1 3 2 4)", 4));
    }

    #[test]
    fn normality_and_conjugates() {
        let a4 = close(&["(1 2 3)", "(2 3 4)"], 4);
        assert_eq!(a4.order(), 12);
        assert!(a4.is_normal_in(&sym(4)).unwrap());
        let t = close(&["(1 2)"], 3);
        assert!(!t.is_normal_in(&sym(3)).unwrap());
        assert_eq!(t.conjugate_by(&p("(2 3)", 3)), close(&["(1 3)"], 3));
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(all_subgroups(3).unwrap().len(), 6);
        assert_eq!(all_subgroups(4).unwrap().len(), 30);
    }

    #[test]
    fn d4_pair_isomorphic() {
        let h1 = close(&["(1 4 7 6)(2 8 3 5)", "(2 5)(3 8)(4 6)"], 8);
        let h2 = close(&["(1 6)(2 4)(3 8)(5 7)", "(1 8 5 4)(2 7 3 6)"], 8);
        let images = find_isomorphism(&h1, &h2).expect("both are dihedral of order 8");
        assert!(extends_to_isomorphism(&h1, &h2, &images));
        let c8 = close(&["(1 2 3 4 5 6 7 8)"], 8);
        assert!(find_isomorphism(&h1, &c8).is_none());
    }

    #[test]
    fn restricted_ambient_walk() {
        let s4 = Subgroup::symmetric(4, 100).unwrap();
        let h = close(&["(1 2)(3 4)"], 4);
        let full = double_cosets(&h, &sym(4)).unwrap();
        let restricted = double_cosets(&h, &Ambient::restricted(s4)).unwrap();
        let reps_a: Vec<_> = full.iter().map(|d| d.representative).collect();
        let reps_b: Vec<_> = restricted.iter().map(|d| d.representative).collect();
        assert_eq!(reps_a, reps_b);
    }
}
