//! Inverse-closed left transversals.
//!
//! Left cosets become vertices. A coset holding some `t` with `t² = e` gets
//! a loop; cosets `C ≠ C'` are joined when some `r ∈ C` has `r⁻¹ ∈ C'`. A
//! transversal closed under inverses is exactly a choice, for every
//! vertex, of either its loop or one incident edge, with every vertex
//! covered once. Connected components are solved separately by a
//! backtracking search.

use crate::group::{Ambient, Subgroup};
use crate::perm::Permutation;

use super::PerfectError;

/// An inverse-closed left transversal of `H` in `G`, sorted by rank, or
/// `None` when none exists. Exceeding `budget` search nodes is an error,
/// distinct from `None`.
pub fn build_transversal(h: &Subgroup, g: &Ambient, budget: u64) -> Result<Option<Vec<Permutation>>, PerfectError> {
    let graph = CosetGraph::build(h, g)?;
    let mut choice: Vec<Option<Pick>> = vec![None; graph.len()];
    let mut nodes = 0u64;
    for comp in graph.components() {
        let mut solver = Solver {
            graph: &graph,
            vertices: &comp,
            covered: vec![false; comp.len()],
            local: comp.iter().enumerate().map(|(i, &v)| (v, i)).collect(),
            picks: Vec::new(),
            nodes: &mut nodes,
            budget,
        };
        match solver.search()? {
            true => {
                for (v, pick) in solver.picks {
                    choice[v as usize] = Some(pick);
                    if let Pick::Edge(u) = pick {
                        choice[u as usize] = Some(Pick::Edge(v));
                    }
                }
            }
            false => return Ok(None),
        }
    }

    let mut out = Vec::with_capacity(graph.len());
    for (c, pick) in choice.iter().enumerate() {
        let c = c as u32;
        match pick.expect("every coset covered") {
            Pick::Loop => {
                let members = graph.members(c);
                let t = members
                    .iter()
                    .copied()
                    .find(Permutation::is_identity)
                    .or_else(|| members.iter().copied().find(Permutation::squares_to_identity))
                    .expect("loop coset holds an involution");
                out.push(t);
            }
            Pick::Edge(u) if c < u => {
                let r = graph
                    .members(c)
                    .into_iter()
                    .find(|r| graph.coset_of_perm(&r.inverse()) == u)
                    .expect("edge has a witness");
                out.push(r);
                out.push(r.inverse());
            }
            Pick::Edge(_) => {}
        }
    }
    out.sort_unstable();
    Ok(Some(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pick {
    Loop,
    Edge(u32),
}

struct CosetGraph<'a> {
    h: &'a Subgroup,
    g: &'a Ambient,
    reps: Vec<Permutation>,
    coset_of: Vec<u32>,
    has_loop: Vec<bool>,
    adjacency: Vec<Vec<u32>>,
}

impl<'a> CosetGraph<'a> {
    fn build(h: &'a Subgroup, g: &'a Ambient) -> Result<Self, PerfectError> {
        // checks containment and degree
        h.index_in(g)?;
        let total = g.order() as usize;
        let mut coset_of = vec![u32::MAX; total];
        let mut reps = Vec::new();
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
                None => g.element(idx as u64),
            };
            if coset_of[idx] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for k in h.elements() {
                let i = g.index_of(&x.compose(k)).expect("closed under H");
                coset_of[i as usize] = id;
            }
        }
        let mut graph = CosetGraph {
            h,
            g,
            has_loop: vec![false; reps.len()],
            adjacency: vec![Vec::new(); reps.len()],
            reps,
            coset_of,
        };
        for c in 0..graph.reps.len() {
            let mut adj = Vec::new();
            for r in graph.members(c as u32) {
                if r.squares_to_identity() {
                    graph.has_loop[c] = true;
                }
                let other = graph.coset_of_perm(&r.inverse());
                if other != c as u32 {
                    adj.push(other);
                }
            }
            adj.sort_unstable();
            adj.dedup();
            graph.adjacency[c] = adj;
        }
        Ok(graph)
    }

    fn len(&self) -> usize {
        self.reps.len()
    }

    fn members(&self, c: u32) -> Vec<Permutation> {
        let x = self.reps[c as usize];
        let mut v: Vec<Permutation> = self.h.elements().iter().map(|k| x.compose(k)).collect();
        v.sort_unstable();
        v
    }

    fn coset_of_perm(&self, p: &Permutation) -> u32 {
        self.coset_of[self.g.index_of(p).expect("in G") as usize]
    }

    fn components(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(parent: &mut [u32], mut v: u32) -> u32 {
            while parent[v as usize] != v {
                parent[v as usize] = parent[parent[v as usize] as usize];
                v = parent[v as usize];
            }
            v
        }
        for v in 0..n as u32 {
            for &u in &self.adjacency[v as usize] {
                let (a, b) = (find(&mut parent, v), find(&mut parent, u));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
        let mut by_root: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        for v in 0..n as u32 {
            let r = find(&mut parent, v);
            by_root.entry(r).or_default().push(v);
        }
        by_root.into_values().collect()
    }
}

struct Solver<'g, 'b> {
    graph: &'g CosetGraph<'g>,
    vertices: &'g [u32],
    covered: Vec<bool>,
    local: std::collections::HashMap<u32, usize>,
    picks: Vec<(u32, Pick)>,
    nodes: &'b mut u64,
    budget: u64,
}

impl Solver<'_, '_> {
    fn options(&self, li: usize) -> usize {
        let v = self.vertices[li];
        let loops = usize::from(self.graph.has_loop[v as usize]);
        loops
            + self.graph.adjacency[v as usize]
                .iter()
                .filter(|u| !self.covered[self.local[u]])
                .count()
    }

    /// Some uncovered component has odd size and no loop, so no perfect
    /// cover of it exists.
    fn parity_obstruction(&self) -> bool {
        let m = self.vertices.len();
        let mut seen = vec![false; m];
        for start in 0..m {
            if self.covered[start] || seen[start] {
                continue;
            }
            let mut stack = vec![start];
            seen[start] = true;
            let mut size = 0usize;
            let mut any_loop = false;
            while let Some(li) = stack.pop() {
                size += 1;
                let v = self.vertices[li];
                any_loop |= self.graph.has_loop[v as usize];
                for u in &self.graph.adjacency[v as usize] {
                    let lu = self.local[u];
                    if !self.covered[lu] && !seen[lu] {
                        seen[lu] = true;
                        stack.push(lu);
                    }
                }
            }
            if size % 2 == 1 && !any_loop {
                return true;
            }
        }
        false
    }

    fn search(&mut self) -> Result<bool, PerfectError> {
        *self.nodes += 1;
        if *self.nodes > self.budget {
            return Err(PerfectError::BudgetExhausted { budget: self.budget });
        }
        let mut best: Option<(usize, usize)> = None;
        for li in 0..self.vertices.len() {
            if self.covered[li] {
                continue;
            }
            let opts = self.options(li);
            if best.is_none_or(|(_, b)| opts < b) {
                best = Some((li, opts));
            }
        }
        let Some((li, opts)) = best else {
            return Ok(true);
        };
        if opts == 0 || self.parity_obstruction() {
            return Ok(false);
        }
        let v = self.vertices[li];
        self.covered[li] = true;
        // H's own coset takes e; elsewhere pairs are tried before loops
        let has_loop = self.graph.has_loop[v as usize];
        if has_loop && v == 0 && self.try_pick(v, Pick::Loop)? {
            return Ok(true);
        }
        for &u in &self.graph.adjacency[v as usize] {
            let lu = self.local[&u];
            if self.covered[lu] {
                continue;
            }
            self.covered[lu] = true;
            self.picks.push((v, Pick::Edge(u)));
            if self.search()? {
                return Ok(true);
            }
            self.picks.pop();
            self.covered[lu] = false;
        }
        if has_loop && v != 0 && self.try_pick(v, Pick::Loop)? {
            return Ok(true);
        }
        self.covered[li] = false;
        Ok(false)
    }

    fn try_pick(&mut self, v: u32, pick: Pick) -> Result<bool, PerfectError> {
        self.picks.push((v, pick));
        if self.search()? {
            return Ok(true);
        }
        self.picks.pop();
        Ok(false)
    }
}
