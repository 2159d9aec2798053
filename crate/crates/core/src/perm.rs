//! Permutations of `{1, …, n}` stored as image arrays.
//!
//! Points are 1-based in cycle notation and 0-based internally. Composition
//! is right-to-left: `p.compose(&q)` applies `q` first, then `p`, so
//! `(p∘q)(i) = p(q(i))`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use thiserror::Error;

/// Hard upper bound on the degree, fixed by the inline image storage.
pub const MAX_DEGREE: usize = 32;

/// Default degree cap enforced by the command-line front end.
pub const DEFAULT_DEGREE_CAP: usize = 16;

/// Largest degree for which `n!` fits in a `u64` rank.
pub const MAX_RANK_DEGREE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} appears more than once")]
    DuplicatePoint(usize),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("degree {0} is outside the supported range 1..={MAX_DEGREE}")]
    BadDegree(usize),
    #[error("rank {index} out of range for degree {degree}")]
    RankOutOfRange { index: u64, degree: usize },
    #[error("image list is not a bijection")]
    NotBijection,
}

pub(crate) const FACTORIALS: [u64; MAX_RANK_DEGREE + 1] = {
    let mut table = [1u64; MAX_RANK_DEGREE + 1];
    let mut i = 1;
    while i <= MAX_RANK_DEGREE {
        table[i] = table[i - 1] * i as u64;
        i += 1;
    }
    table
};

/// `n!` for `n <= 20`.
pub fn factorial(n: usize) -> u64 {
    FACTORIALS[n]
}

/// A permutation of `degree` points.
///
/// Entries of `images` past `degree` always hold the identity so that the
/// derived equality and hashing only see the meaningful prefix.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Permutation {
    degree: u8,
    images: [u8; MAX_DEGREE],
}

const IDENTITY_IMAGES: [u8; MAX_DEGREE] = {
    let mut a = [0u8; MAX_DEGREE];
    let mut i = 0;
    while i < MAX_DEGREE {
        a[i] = i as u8;
        i += 1;
    }
    a
};

/// Parity of a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// Multiset of cycle lengths, fixed points counted as 1-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CycleType {
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn from_lengths(lengths: &[usize]) -> Self {
        let mut counts = BTreeMap::new();
        for &l in lengths {
            *counts.entry(l).or_insert(0) += 1;
        }
        CycleType { counts }
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn count(&self, length: usize) -> usize {
        self.counts.get(&length).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.counts.iter().map(|(l, c)| l * c).sum()
    }

    /// Cycle lengths in non-increasing order, fixed points included.
    pub fn lengths(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (&l, &c) in self.counts.iter().rev() {
            out.extend(std::iter::repeat_n(l, c));
        }
        out
    }

    /// Lengths of the non-trivial cycles, non-increasing.
    pub fn moved_lengths(&self) -> Vec<usize> {
        self.lengths().into_iter().filter(|&l| l > 1).collect()
    }

    /// Element order: lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.counts.keys().fold(1u64, |acc, &l| lcm(acc, l as u64))
    }

    /// Squares in `S_n` are exactly the cycle types where every even length
    /// occurs an even number of times.
    pub fn is_square_type(&self) -> bool {
        self.counts.iter().all(|(&l, &c)| l % 2 == 1 || c % 2 == 0)
    }

    pub fn parity(&self) -> Parity {
        let transpositions: usize = self.counts.iter().map(|(l, c)| (l - 1) * c).sum();
        if transpositions.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The permutation with this cycle type whose cycles occupy consecutive
    /// points, longest cycles first.
    pub fn representative(&self) -> Permutation {
        let n = self.degree();
        let mut cycles = Vec::new();
        let mut next = 0usize;
        for l in self.lengths() {
            cycles.push((next..next + l).collect::<Vec<_>>());
            next += l;
        }
        Permutation::from_cycles(n, &cycles).expect("consecutive cycles are valid")
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths().iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl Permutation {
    fn check_degree(n: usize) -> Result<(), PermError> {
        if n == 0 || n > MAX_DEGREE {
            Err(PermError::BadDegree(n))
        } else {
            Ok(())
        }
    }

    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&n), "degree {n} unsupported");
        Permutation {
            degree: n as u8,
            images: IDENTITY_IMAGES,
        }
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        Self::check_degree(n)?;
        let mut seen = 0u64;
        let mut arr = IDENTITY_IMAGES;
        for (i, &img) in images.iter().enumerate() {
            if img >= n || seen & (1 << img) != 0 {
                return Err(PermError::NotBijection);
            }
            seen |= 1 << img;
            arr[i] = img as u8;
        }
        Ok(Permutation {
            degree: n as u8,
            images: arr,
        })
    }

    /// Builds a permutation from 1-based images, as in `[2, 1, 3]`.
    pub fn from_images_one_based(images: &[usize]) -> Result<Self, PermError> {
        let zero: Vec<usize> = images
            .iter()
            .map(|&i| i.checked_sub(1).ok_or(PermError::NotBijection))
            .collect::<Result<_, _>>()?;
        Self::from_images(&zero)
    }

    /// Builds a permutation from disjoint cycles of 0-based points.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        Self::check_degree(n)?;
        let mut arr = IDENTITY_IMAGES;
        let mut seen = 0u64;
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt >= n {
                    return Err(PermError::PointOutOfRange {
                        point: pt + 1,
                        degree: n,
                    });
                }
                if seen & (1 << pt) != 0 {
                    return Err(PermError::DuplicatePoint(pt + 1));
                }
                seen |= 1 << pt;
                arr[pt] = cycle[(k + 1) % cycle.len()] as u8;
            }
        }
        Ok(Permutation {
            degree: n as u8,
            images: arr,
        })
    }

    /// Parses cycle notation such as `"(1 4 7 6)(2 8 3 5)"`, `"(1,2)"` or `"e"`.
    pub fn parse(text: &str, n: usize) -> Result<Self, PermError> {
        Self::check_degree(n)?;
        let cycles = parse_cycle_list(text)?;
        let zero: Vec<Vec<usize>> = cycles
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|p| {
                        if p == 0 || p > n {
                            Err(PermError::PointOutOfRange { point: p, degree: n })
                        } else {
                            Ok(p - 1)
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        Self::from_cycles(n, &zero)
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Image of the 0-based point `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// 0-based image list.
    pub fn images(&self) -> &[u8] {
        &self.images[..self.degree as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images == IDENTITY_IMAGES
    }

    /// `p∘q`: apply `q` first. Panics on degree mismatch; see [`try_compose`](Self::try_compose).
    #[inline]
    pub fn compose(&self, q: &Permutation) -> Permutation {
        assert_eq!(self.degree, q.degree, "degree mismatch in compose");
        let mut out = IDENTITY_IMAGES;
        let d = self.degree as usize;
        for (o, &qi) in out[..d].iter_mut().zip(&q.images[..d]) {
            *o = self.images[qi as usize];
        }
        Permutation {
            degree: self.degree,
            images: out,
        }
    }

    pub fn try_compose(&self, q: &Permutation) -> Result<Permutation, PermError> {
        if self.degree != q.degree {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: q.degree(),
            });
        }
        Ok(self.compose(q))
    }

    #[inline]
    pub fn inverse(&self) -> Permutation {
        let mut out = IDENTITY_IMAGES;
        for i in 0..self.degree as usize {
            out[self.images[i] as usize] = i as u8;
        }
        Permutation {
            degree: self.degree,
            images: out,
        }
    }

    /// `p^k`, negative exponents allowed.
    pub fn power(&self, k: i64) -> Permutation {
        let mut out = IDENTITY_IMAGES;
        for cycle in self.cycles_with_fixed() {
            let len = cycle.len() as i64;
            let shift = k.rem_euclid(len) as usize;
            for (idx, &pt) in cycle.iter().enumerate() {
                out[pt] = cycle[(idx + shift) % cycle.len()] as u8;
            }
        }
        Permutation {
            degree: self.degree,
            images: out,
        }
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn parity(&self) -> Parity {
        let moved: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if moved.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// All cycles including fixed points, each starting at its smallest
    /// point, ordered by that point.
    pub fn cycles_with_fixed(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = 0u64;
        let mut out = Vec::new();
        for start in 0..n {
            if seen & (1 << start) != 0 {
                continue;
            }
            let mut cycle = vec![start];
            seen |= 1 << start;
            let mut cur = self.apply(start);
            while cur != start {
                seen |= 1 << cur;
                cycle.push(cur);
                cur = self.apply(cur);
            }
            out.push(cycle);
        }
        out
    }

    /// Non-trivial cycles in canonical order (0-based points).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles_with_fixed().into_iter().filter(|c| c.len() > 1).collect()
    }

    pub fn cycle_type(&self) -> CycleType {
        let lengths: Vec<usize> = self.cycles_with_fixed().iter().map(Vec::len).collect();
        CycleType::from_lengths(&lengths)
    }

    pub fn is_involution(&self) -> bool {
        if self.is_identity() {
            return false;
        }
        (0..self.degree()).all(|i| self.apply(self.apply(i)) == i)
    }

    /// `p` is `e` or an involution.
    #[inline]
    pub fn squares_to_identity(&self) -> bool {
        (0..self.degree as usize).all(|i| self.images[self.images[i] as usize] as usize == i)
    }

    /// Order is a power of two (the identity counts, with order 1).
    pub fn is_two_element(&self) -> bool {
        self.order().is_power_of_two()
    }

    pub fn is_square(&self) -> bool {
        self.cycle_type().is_square_type()
    }

    /// One square root, if any. Odd cycles `c` map to `c^((l+1)/2)`; even
    /// cycles of equal length are paired in order of their smallest point
    /// and interleaved into one cycle of twice the length.
    pub fn square_root(&self) -> Option<Permutation> {
        if !self.is_square() {
            return None;
        }
        let mut by_len: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for c in self.cycles() {
            by_len.entry(c.len()).or_default().push(c);
        }
        let mut root_cycles = Vec::new();
        for (len, cycles) in by_len {
            if len % 2 == 1 {
                for c in cycles {
                    root_cycles.push(odd_cycle_root(&c));
                }
            } else {
                for pair in cycles.chunks(2) {
                    root_cycles.push(interleave(&pair[0], &pair[1], 0));
                }
            }
        }
        Some(Permutation::from_cycles(self.degree(), &root_cycles).expect("root cycles are disjoint"))
    }

    /// Enumerates square roots of `self`, stopping after `limit` results.
    ///
    /// Every root `y` arises by splitting the `l`-cycles of `self` into
    /// singletons (odd `l` only) and pairs; a singleton has exactly one root
    /// cycle and a pair has `l` interleavings.
    pub fn square_roots(&self, limit: usize) -> Vec<Permutation> {
        let mut by_len: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for c in self.cycles_with_fixed() {
            by_len.entry(c.len()).or_default().push(c);
        }
        let groups: Vec<Vec<Vec<usize>>> = by_len.into_values().collect();
        let mut search = RootSearch {
            n: self.degree(),
            groups: &groups,
            acc: Vec::new(),
            out: Vec::new(),
            limit,
        };
        search.next_group(0);
        search.out
    }

    /// `g p g⁻¹`, i.e. `p` with its points relabelled by `g`.
    pub fn conjugate(&self, g: &Permutation) -> Permutation {
        let mut out = IDENTITY_IMAGES;
        for i in 0..self.degree() {
            out[g.apply(i)] = g.images[self.apply(i)];
        }
        Permutation {
            degree: self.degree,
            images: out,
        }
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Lexicographic (Lehmer code) rank in `[0, n!)`. Panics for degree > 20.
    #[inline]
    pub fn rank(&self) -> u64 {
        let n = self.degree();
        assert!(n <= MAX_RANK_DEGREE, "rank needs degree <= {MAX_RANK_DEGREE}");
        let mut seen = 0u32;
        let mut r = 0u64;
        for i in 0..n {
            let v = self.images[i] as u32;
            let smaller_used = (seen & ((1u32 << v) - 1)).count_ones();
            let lehmer = v - smaller_used;
            r += lehmer as u64 * FACTORIALS[n - 1 - i];
            seen |= 1 << v;
        }
        r
    }

    pub fn unrank(index: u64, n: usize) -> Result<Permutation, PermError> {
        if n == 0 || n > MAX_RANK_DEGREE {
            return Err(PermError::BadDegree(n));
        }
        if index >= FACTORIALS[n] {
            return Err(PermError::RankOutOfRange { index, degree: n });
        }
        let mut remaining: Vec<u8> = (0..n as u8).collect();
        let mut arr = IDENTITY_IMAGES;
        let mut idx = index;
        for i in 0..n {
            let f = FACTORIALS[n - 1 - i];
            let digit = (idx / f) as usize;
            idx %= f;
            arr[i] = remaining.remove(digit);
        }
        Ok(Permutation {
            degree: n as u8,
            images: arr,
        })
    }

    /// Advances to the lexicographically next permutation; `false` when
    /// `self` was the last one (it is then left unchanged).
    pub fn next_lex(&mut self) -> bool {
        let n = self.degree();
        let a = &mut self.images[..n];
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && a[i - 1] >= a[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while a[j] <= a[i - 1] {
            j -= 1;
        }
        a.swap(i - 1, j);
        a[i..].reverse();
        true
    }

    /// The same permutation on `m >= n` points, fixing the new ones.
    pub fn extend_to(&self, m: usize) -> Result<Permutation, PermError> {
        if m < self.degree() || m > MAX_DEGREE {
            return Err(PermError::BadDegree(m));
        }
        Ok(Permutation {
            degree: m as u8,
            images: self.images,
        })
    }

    /// Canonical cycle notation; `"e"` for the identity.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "e".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            s.push_str(&pts.join(" "));
            s.push(')');
        }
        s
    }
}

fn odd_cycle_root(c: &[usize]) -> Vec<usize> {
    let l = c.len();
    let step = l.div_ceil(2);
    (0..l).map(|k| c[(k * step) % l]).collect()
}

/// `(a0 b_s a1 b_{s+1} …)` squares to `(a0 a1 …)(b_s b_{s+1} …)`.
fn interleave(a: &[usize], b: &[usize], offset: usize) -> Vec<usize> {
    let l = a.len();
    let mut out = Vec::with_capacity(2 * l);
    for k in 0..l {
        out.push(a[k]);
        out.push(b[(k + offset) % l]);
    }
    out
}

struct RootSearch<'a> {
    n: usize,
    groups: &'a [Vec<Vec<usize>>],
    acc: Vec<Vec<usize>>,
    out: Vec<Permutation>,
    limit: usize,
}

impl RootSearch<'_> {
    fn next_group(&mut self, gi: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        if gi == self.groups.len() {
            let root = Permutation::from_cycles(self.n, &self.acc).expect("disjoint root cycles");
            self.out.push(root);
            return;
        }
        let mut used = vec![false; self.groups[gi].len()];
        self.within_group(gi, &mut used);
    }

    fn within_group(&mut self, gi: usize, used: &mut [bool]) {
        if self.out.len() >= self.limit {
            return;
        }
        let Some(first) = used.iter().position(|u| !u) else {
            self.next_group(gi + 1);
            return;
        };
        let groups = self.groups;
        let cycles = &groups[gi];
        let len = cycles[first].len();
        used[first] = true;
        if len % 2 == 1 {
            self.acc.push(odd_cycle_root(&cycles[first]));
            self.within_group(gi, used);
            self.acc.pop();
        }
        for partner in first + 1..cycles.len() {
            if used[partner] {
                continue;
            }
            used[partner] = true;
            for offset in 0..len {
                self.acc.push(interleave(&cycles[first], &cycles[partner], offset));
                self.within_group(gi, used);
                self.acc.pop();
            }
            used[partner] = false;
        }
        used[first] = false;
    }
}

/// Parses a cycle list into 1-based point lists.
///
/// Grammar: `perm := "e" | "()" | cycle+`, `cycle := "(" point (sep point)* ")"`,
/// `sep := "," | " "+`, `point := [0-9]+`. Whitespace around the whole
/// string and between cycles is ignored.
fn parse_cycle_list(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let bytes = text.as_bytes();
    let trimmed = text.trim();
    if trimmed == "e" || trimmed == "()" {
        return Ok(Vec::new());
    }
    let err = |pos: usize, msg: &str| PermError::Syntax {
        pos,
        msg: msg.to_string(),
    };
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut cycles = Vec::new();
    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(err(pos, "empty permutation"));
    }
    while pos < bytes.len() {
        if bytes[pos] != b'(' {
            return Err(err(pos, "expected '('"));
        }
        pos += 1;
        let mut cycle = Vec::new();
        loop {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(err(pos, "expected a point"));
            }
            let point: usize = text[start..pos].parse().map_err(|_| err(start, "point too large"))?;
            cycle.push(point);
            match bytes.get(pos) {
                Some(b')') => {
                    pos += 1;
                    break;
                }
                Some(b',') => pos += 1,
                Some(b' ') => {
                    while pos < bytes.len() && bytes[pos] == b' ' {
                        pos += 1;
                    }
                }
                Some(_) => return Err(err(pos, "expected separator or ')'")),
                None => return Err(err(pos, "unterminated cycle")),
            }
        }
        cycles.push(cycle);
        skip_ws(&mut pos);
    }
    Ok(cycles)
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then lexicographic on images, which is rank order.
impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.images().cmp(other.images()))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[S{}]", self.to_cycle_string(), self.degree)
    }
}

impl Mul for Permutation {
    type Output = Permutation;
    fn mul(self, rhs: Permutation) -> Permutation {
        self.compose(&rhs)
    }
}

impl<'a> Mul<&'a Permutation> for &'a Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &'a Permutation) -> Permutation {
        self.compose(rhs)
    }
}

/// Parses `"<n>:<cycles>"`, e.g. `"4:(1 2)(3 4)"`.
impl FromStr for Permutation {
    type Err = PermError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, rest) = s.split_once(':').ok_or(PermError::Syntax {
            pos: 0,
            msg: "expected '<degree>:<cycles>'".into(),
        })?;
        let n: usize = n.trim().parse().map_err(|_| PermError::Syntax {
            pos: 0,
            msg: "bad degree".into(),
        })?;
        Permutation::parse(rest, n)
    }
}
