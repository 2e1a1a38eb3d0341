//! (n,d)-types as bipartite graphs and the basic calculus on them:
//! refinement, compatibility, agreement, connectivity.
//!
//! A type is an n-tuple of nonempty subsets of the right vertex set
//! {1..d}, stored as bitmasks. Internally everything is 0-based; the
//! JSON layer converts to the 1-based convention used in interfaces.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Bitmask over right vertices. Bit `j` stands for right vertex `j` (0-based).
pub type RightSet = u32;

/// Full mask {0..d-1}.
pub fn full_mask(d: usize) -> RightSet {
    if d == 32 {
        u32::MAX
    } else {
        (1u32 << d) - 1
    }
}

/// Iterate the members of a mask in increasing order.
pub fn mask_iter(mask: RightSet) -> impl Iterator<Item = usize> {
    (0..32).filter(move |j| mask & (1 << j) != 0)
}

pub fn mask_from_iter<I: IntoIterator<Item = usize>>(iter: I) -> RightSet {
    let mut m = 0;
    for j in iter {
        m |= 1 << j;
    }
    m
}

/// A bipartite (n,d)-type: one right-vertex set per position.
///
/// Rows may be empty only when the value represents an auxiliary
/// subgraph (an intersection, or a facet candidate); proper types have
/// every row nonempty, which `is_proper_type` checks and `new` enforces.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BipartiteType {
    d: usize,
    rows: Vec<RightSet>,
}

impl BipartiteType {
    /// A proper type: every row nonempty, all bits below `d`.
    pub fn new(d: usize, rows: Vec<RightSet>) -> Result<Self> {
        let t = Self::new_allow_empty(d, rows)?;
        if let Some(i) = t.rows.iter().position(|&r| r == 0) {
            return Err(Error::InvalidType(format!("row {} is empty", i + 1)));
        }
        Ok(t)
    }

    /// A subgraph value that may have empty rows (intersections, facets).
    pub fn new_allow_empty(d: usize, rows: Vec<RightSet>) -> Result<Self> {
        if d == 0 || d > 32 {
            return Err(Error::InvalidType(format!("d = {} out of range 1..=32", d)));
        }
        if rows.is_empty() {
            return Err(Error::InvalidType("n must be at least 1".into()));
        }
        if let Some(i) = rows.iter().position(|&r| r & !full_mask(d) != 0) {
            return Err(Error::InvalidType(format!(
                "row {} has a vertex outside 1..={}",
                i + 1,
                d
            )));
        }
        Ok(BipartiteType { d, rows })
    }

    /// Build from 0-based element lists.
    pub fn from_rows(d: usize, rows: &[Vec<usize>]) -> Result<Self> {
        Self::new(d, rows.iter().map(|r| mask_from_iter(r.iter().copied())).collect())
    }

    /// The complete bipartite graph K_{n,d}.
    pub fn complete(n: usize, d: usize) -> Self {
        BipartiteType { d, rows: vec![full_mask(d); n] }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> RightSet {
        self.rows[i]
    }

    pub fn rows(&self) -> &[RightSet] {
        &self.rows
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() || self.d != other.d {
            return Err(Error::DimensionMismatch {
                n1: self.n(),
                d1: self.d,
                n2: other.n(),
                d2: other.d,
            });
        }
        Ok(())
    }

    pub fn is_proper_type(&self) -> bool {
        self.rows.iter().all(|&r| r != 0)
    }

    /// Edges as (position, right vertex), 0-based, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &r) in self.rows.iter().enumerate() {
            for j in mask_iter(r) {
                out.push((i, j));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i] & (1 << j) != 0
    }

    /// Union of all rows.
    pub fn covered_rights(&self) -> RightSet {
        self.rows.iter().fold(0, |a, &r| a | r)
    }

    /// Refinement by an ordered partition: each row is intersected with
    /// the earliest block it meets.
    pub fn refine(&self, p: &OrderedPartition) -> Self {
        debug_assert_eq!(self.d, p.d());
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                if r == 0 {
                    return 0;
                }
                for &b in p.blocks() {
                    if r & b != 0 {
                        return r & b;
                    }
                }
                unreachable!("partition blocks cover all right vertices")
            })
            .collect();
        BipartiteType { d: self.d, rows }
    }

    /// All refinements by total ordered partitions (permutations),
    /// deduplicated. Every result has singleton rows.
    pub fn total_refinements(&self) -> BTreeSet<Self> {
        let mut out = BTreeSet::new();
        let mut perm: Vec<usize> = (0..self.d).collect();
        self.total_refinements_rec(&mut perm, 0, &mut out);
        out
    }

    fn total_refinements_rec(&self, perm: &mut Vec<usize>, k: usize, out: &mut BTreeSet<Self>) {
        if k == perm.len() {
            let blocks = perm.iter().map(|&j| 1u32 << j).collect();
            let p = OrderedPartition { d: self.d, blocks };
            out.insert(self.refine(&p));
            return;
        }
        // If every row already meets the fixed prefix, the remaining order
        // is irrelevant; this keeps d = 9 instances cheap.
        let prefix: RightSet = perm[..k].iter().map(|&j| 1u32 << j).fold(0, |a, b| a | b);
        if self.rows.iter().all(|&r| r == 0 || r & prefix != 0) {
            let blocks = perm.iter().map(|&j| 1u32 << j).collect();
            let p = OrderedPartition { d: self.d, blocks };
            out.insert(self.refine(&p));
            return;
        }
        for t in k..perm.len() {
            perm.swap(k, t);
            self.total_refinements_rec(perm, k + 1, out);
            perm.swap(k, t);
        }
    }

    /// Rowwise union. Errors on shape mismatch.
    pub fn union_type(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(&a, &b)| a | b).collect();
        Ok(BipartiteType { d: self.d, rows })
    }

    /// Rowwise intersection; rows may become empty.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(&a, &b)| a & b).collect();
        Ok(BipartiteType { d: self.d, rows })
    }

    /// Rowwise containment.
    pub fn is_subgraph(&self, other: &Self) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.rows.iter().zip(&other.rows).all(|(&a, &b)| a & !b == 0))
    }

    /// Every right vertex covered by some row.
    pub fn is_spanning(&self) -> bool {
        self.covered_rights() == full_mask(self.d)
    }

    /// Exactly one connected component and no isolated right vertex.
    pub fn is_connected(&self) -> bool {
        let c = self.components();
        c.components.len() == 1 && c.isolated_right == 0
    }

    /// Connected components of the bipartite graph. Positions with empty
    /// rows form singleton components; untouched right vertices are
    /// reported in `isolated_right`.
    pub fn components(&self) -> ComponentDecomposition {
        let n = self.n();
        let mut pos_comp = vec![usize::MAX; n];
        let mut right_comp = vec![usize::MAX; self.d];
        let mut comps: Vec<Component> = Vec::new();
        for start in 0..n {
            if pos_comp[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut positions = Vec::new();
            let mut rights: RightSet = 0;
            let mut stack = vec![start];
            pos_comp[start] = id;
            while let Some(i) = stack.pop() {
                positions.push(i);
                for j in mask_iter(self.rows[i]) {
                    if right_comp[j] == usize::MAX {
                        right_comp[j] = id;
                        rights |= 1 << j;
                        for (i2, &r2) in self.rows.iter().enumerate() {
                            if r2 & (1 << j) != 0 && pos_comp[i2] == usize::MAX {
                                pos_comp[i2] = id;
                                stack.push(i2);
                            }
                        }
                    }
                }
            }
            positions.sort_unstable();
            comps.push(Component { positions, rights });
        }
        let isolated_right = full_mask(self.d) & !mask_from_iter((0..self.d).filter(|&j| right_comp[j] != usize::MAX));
        ComponentDecomposition { components: comps, isolated_right }
    }

    /// Compatibility: every closed walk in the union alternating between
    /// edges of `self` and edges of `other` lies in the intersection.
    ///
    /// Each edge of `self` is oriented left-to-right and each edge of
    /// `other` right-to-left (shared edges get both arcs); the pair is
    /// incompatible exactly when an unshared edge has both endpoints in
    /// one strongly connected component of the resulting digraph.
    pub fn is_compatible(&self, other: &Self) -> Result<bool> {
        Ok(self.compatibility_violation(other)?.is_none())
    }

    /// A closed alternating walk witnessing incompatibility, as an edge
    /// sequence, or `None` when compatible.
    pub fn compatibility_violation(&self, other: &Self) -> Result<Option<Vec<(usize, usize)>>> {
        self.same_shape(other)?;
        let n = self.n();
        let nodes = n + self.d;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        for i in 0..n {
            for j in mask_iter(self.rows[i]) {
                adj[i].push(n + j);
            }
            for j in mask_iter(other.rows[i]) {
                adj[n + j].push(i);
            }
        }
        let comp = tarjan_scc(&adj);
        for i in 0..n {
            let only_a = self.rows[i] & !other.rows[i];
            let only_b = other.rows[i] & !self.rows[i];
            for j in mask_iter(only_a | only_b) {
                if comp[i] != comp[n + j] {
                    continue;
                }
                // Recover a closed walk through the offending arc.
                let (from, to) = if only_a & (1 << j) != 0 { (n + j, i) } else { (i, n + j) };
                let path = digraph_path(&adj, from, to).expect("same SCC implies a path");
                let mut walk = vec![(i, j)];
                for w in path.windows(2) {
                    let (u, v) = (w[0], w[1]);
                    if u < n {
                        walk.push((u, v - n));
                    } else {
                        walk.push((v, u - n));
                    }
                }
                return Ok(Some(walk));
            }
        }
        Ok(None)
    }

    /// A and B agree on `j_set` at position `i`: the two intersections are
    /// equal or at least one is empty.
    pub fn agree_on(&self, other: &Self, j_set: RightSet, i: usize) -> Result<bool> {
        self.same_shape(other)?;
        if i >= self.n() {
            return Err(Error::PositionOutOfRange(i + 1, self.n()));
        }
        let a = self.rows[i] & j_set;
        let b = other.rows[i] & j_set;
        Ok(a == b || a == 0 || b == 0)
    }

    /// Check the agreement lemma against a compatible partner: for every
    /// connected component of the intersection with right set J and every
    /// position, A∩J and B∩J must not be nonempty and different. A
    /// nonempty result signals a bug or a precondition violation.
    pub fn agreement_lemma_check(&self, other: &Self) -> Result<Vec<AgreementViolation>> {
        if !self.is_compatible(other)? {
            return Err(Error::Precondition("agreement_lemma_check requires compatible types".into()));
        }
        let meet = self.intersection(other)?;
        let mut out = Vec::new();
        for comp in &meet.components().components {
            let j_set = comp.rights;
            if j_set == 0 {
                continue;
            }
            for i in 0..self.n() {
                if !self.agree_on(other, j_set, i)? {
                    out.push(AgreementViolation {
                        component_rights: j_set,
                        position: i,
                        a_part: self.rows[i] & j_set,
                        b_part: other.rows[i] & j_set,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Restriction to a position subset and right subset, keeping the
    /// ambient (n,d) shape: rows outside `positions` are emptied, rows
    /// inside are intersected with `rights`.
    pub fn restrict_masked(&self, positions: &[usize], rights: RightSet) -> Self {
        let mut rows = vec![0; self.n()];
        for &i in positions {
            rows[i] = self.rows[i] & rights;
        }
        BipartiteType { d: self.d, rows }
    }
}

impl fmt::Debug for BipartiteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            if r == 0 {
                write!(f, "-")?;
            }
            for j in mask_iter(r) {
                write!(f, "{}", j + 1)?;
            }
        }
        write!(f, ")")
    }
}

/// An agreement-lemma counterexample record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgreementViolation {
    pub component_rights: RightSet,
    pub position: usize,
    pub a_part: RightSet,
    pub b_part: RightSet,
}

/// An ordered set partition of the right vertex set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedPartition {
    d: usize,
    blocks: Vec<RightSet>,
}

impl OrderedPartition {
    pub fn new(d: usize, blocks: Vec<RightSet>) -> Result<Self> {
        if blocks.iter().any(|&b| b == 0) {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        let mut seen: RightSet = 0;
        for &b in &blocks {
            if b & seen != 0 {
                return Err(Error::InvalidPartition("blocks are not disjoint".into()));
            }
            seen |= b;
        }
        if seen != full_mask(d) {
            return Err(Error::InvalidPartition("blocks do not cover the right vertex set".into()));
        }
        Ok(OrderedPartition { d, blocks })
    }

    /// A total partition from a permutation of 0..d-1.
    pub fn total(d: usize, perm: &[usize]) -> Result<Self> {
        Self::new(d, perm.iter().map(|&j| 1u32 << j).collect())
    }

    /// The coarse two-block partition (first, rest).
    pub fn coarse(d: usize, first: RightSet) -> Result<Self> {
        let rest = full_mask(d) & !first;
        if rest == 0 {
            Self::new(d, vec![first])
        } else {
            Self::new(d, vec![first, rest])
        }
    }

    pub fn single_block(d: usize) -> Self {
        OrderedPartition { d, blocks: vec![full_mask(d)] }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn blocks(&self) -> &[RightSet] {
        &self.blocks
    }

    pub fn is_total(&self) -> bool {
        self.blocks.len() == self.d
    }

    pub fn is_coarse(&self) -> bool {
        self.blocks.len() == 2
    }

    /// Every ordered set partition of {0..d-1}. Fubini-number many; keep
    /// d small.
    pub fn enumerate_all(d: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut blocks = Vec::new();
        fn rec(d: usize, remaining: RightSet, blocks: &mut Vec<RightSet>, out: &mut Vec<OrderedPartition>) {
            if remaining == 0 {
                out.push(OrderedPartition { d, blocks: blocks.clone() });
                return;
            }
            // Iterate nonempty subsets of `remaining`.
            let mut s = remaining;
            loop {
                blocks.push(s);
                rec(d, remaining & !s, blocks, out);
                blocks.pop();
                s = (s - 1) & remaining;
                if s == 0 {
                    break;
                }
            }
        }
        rec(d, full_mask(d), &mut blocks, &mut out);
        out
    }

    /// All coarse (two-block) partitions, plus the single-block one when
    /// d = 1.
    pub fn enumerate_coarse(d: usize) -> Vec<Self> {
        let full = full_mask(d);
        let mut out = Vec::new();
        for first in 1..full {
            out.push(OrderedPartition { d, blocks: vec![first, full & !first] });
        }
        if out.is_empty() {
            out.push(Self::single_block(d));
        }
        out
    }
}

/// A connected component: its positions and its right vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub positions: Vec<usize>,
    pub rights: RightSet,
}

/// Decomposition of a bipartite graph into connected components, with
/// untouched right vertices listed separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub components: Vec<Component>,
    pub isolated_right: RightSet,
}

/// Tarjan's algorithm; returns the component id of each node.
fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<usize> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: usize,
        idx: Vec<Option<usize>>,
        low: Vec<usize>,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        comp: Vec<usize>,
        ncomp: usize,
    }
    fn connect(v: usize, st: &mut State) {
        st.idx[v] = Some(st.index);
        st.low[v] = st.index;
        st.index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for &w in st.adj[v].iter() {
            if st.idx[w].is_none() {
                connect(w, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.idx[w].unwrap());
            }
        }
        if st.low[v] == st.idx[v].unwrap() {
            loop {
                let w = st.stack.pop().unwrap();
                st.on_stack[w] = false;
                st.comp[w] = st.ncomp;
                if w == v {
                    break;
                }
            }
            st.ncomp += 1;
        }
    }
    let n = adj.len();
    let mut st = State {
        adj,
        index: 0,
        idx: vec![None; n],
        low: vec![0; n],
        stack: Vec::new(),
        on_stack: vec![false; n],
        comp: vec![0; n],
        ncomp: 0,
    };
    for v in 0..n {
        if st.idx[v].is_none() {
            connect(v, &mut st);
        }
    }
    st.comp
}

/// BFS path from `from` to `to` in a digraph, as a node sequence.
fn digraph_path(adj: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(from);
    prev[from] = from;
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut v = to;
            while v != from {
                v = prev[v];
                path.push(v);
            }
            path.reverse();
            return Some(path);
        }
        for &w in &adj[u] {
            if prev[w] == usize::MAX {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: usize, rows: &[&[usize]]) -> BipartiteType {
        // 1-based helper matching the paper's notation
        BipartiteType::from_rows(d, &rows.iter().map(|r| r.iter().map(|&j| j - 1).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    fn sec5_graph() -> BipartiteType {
        t(9, &[
            &[2, 9],
            &[1, 2, 3, 9],
            &[1, 2, 8],
            &[1, 2, 4, 6, 8],
            &[3, 4, 7],
            &[2, 4, 5],
            &[6, 7],
            &[2, 3, 5, 7],
            &[4, 5, 9],
        ])
    }

    #[test]
    fn refine_sec5_example() {
        let g = sec5_graph();
        // permutation 9,1,8,2,3,4,6,7,5 (grouped by generation level)
        let p = OrderedPartition::total(9, &[8, 0, 7, 1, 2, 3, 5, 6, 4]).unwrap();
        let expect = t(9, &[&[9], &[9], &[1], &[1], &[3], &[2], &[6], &[2], &[9]]);
        assert_eq!(g.refine(&p), expect);
    }

    #[test]
    fn refine_single_block_is_identity() {
        let g = sec5_graph();
        assert_eq!(g.refine(&OrderedPartition::single_block(9)), g);
    }

    #[test]
    fn refine_k22_first_block() {
        let a = BipartiteType::complete(2, 2);
        let p = OrderedPartition::total(2, &[0, 1]).unwrap();
        assert_eq!(a.refine(&p), t(2, &[&[1], &[1]]));
    }

    #[test]
    fn total_refinements_k22() {
        let g = BipartiteType::complete(2, 2);
        let refs = g.total_refinements();
        let expect: BTreeSet<_> = [t(2, &[&[1], &[1]]), t(2, &[&[2], &[2]])].into_iter().collect();
        assert_eq!(refs, expect);
    }

    #[test]
    fn total_refinements_single_edges() {
        let g = t(2, &[&[1], &[2]]);
        let refs = g.total_refinements();
        assert_eq!(refs.len(), 1);
        assert!(refs.contains(&g));
    }

    #[test]
    fn total_refinements_sec5_contains_example() {
        let g = sec5_graph();
        let refs = g.total_refinements();
        assert!(refs.contains(&t(9, &[&[9], &[9], &[1], &[1], &[3], &[2], &[6], &[2], &[9]])));
        assert!(refs.iter().all(|r| r.rows().iter().all(|row| row.count_ones() == 1)));
    }

    #[test]
    fn compatible_self() {
        let g = sec5_graph();
        assert!(g.is_compatible(&g).unwrap());
    }

    #[test]
    fn incompatible_crossing_singletons() {
        let a = t(2, &[&[1], &[2]]);
        let b = t(2, &[&[2], &[1]]);
        assert!(!a.is_compatible(&b).unwrap());
        let walk = a.compatibility_violation(&b).unwrap().unwrap();
        assert!(walk.len() >= 4);
    }

    #[test]
    fn incompatible_two_triangles() {
        let a = t(2, &[&[1, 2], &[1]]);
        let b = t(2, &[&[1], &[1, 2]]);
        assert!(!a.is_compatible(&b).unwrap());
    }

    #[test]
    fn agree_on_sec5_step3() {
        // Position 8, J = {2,3,5,7}: {5,7} vs {2,3} disagree.
        let a = t(9, &[&[1], &[1], &[1], &[1], &[1], &[1], &[1], &[5, 7], &[1]]);
        let b = t(9, &[&[1], &[1], &[1], &[1], &[1], &[1], &[1], &[2, 3], &[1]]);
        let j = mask_from_iter([1, 2, 4, 6]);
        assert!(!a.agree_on(&b, j, 7).unwrap());
        assert!(a.agree_on(&b, 0, 7).unwrap());
        assert!(a.agree_on(&a, j, 7).unwrap());
    }

    #[test]
    fn agreement_lemma_edgeless_intersection() {
        let a = t(2, &[&[1], &[1]]);
        let b = t(2, &[&[2], &[2]]);
        assert!(a.is_compatible(&b).unwrap());
        assert!(a.agreement_lemma_check(&b).unwrap().is_empty());
        assert!(a.agreement_lemma_check(&a).unwrap().is_empty());
    }

    #[test]
    fn components_basic() {
        let a = t(2, &[&[1], &[2]]);
        let c = a.components();
        assert_eq!(c.components.len(), 2);
        assert_eq!(c.isolated_right, 0);
        let conn = t(2, &[&[1, 2], &[2]]);
        assert!(conn.is_connected());
        assert!(conn.is_spanning());
    }

    #[test]
    fn components_sec5_step11() {
        // Remove positions {1,2,9} and right vertex 9 from the example A:
        // two components, one of them {3; 1,8}.
        let a = t(9, &[
            &[2, 9],
            &[1, 2],
            &[1, 8],
            &[2, 4, 6],
            &[3, 4],
            &[2, 4],
            &[6, 7],
            &[5, 7],
            &[5],
        ]);
        let rest = a.restrict_masked(&[2, 3, 4, 5, 6, 7], full_mask(9) & !mask_from_iter([8]));
        let comps: Vec<_> = rest
            .components()
            .components
            .into_iter()
            .filter(|c| c.rights != 0)
            .collect();
        assert_eq!(comps.len(), 2);
        assert!(comps
            .iter()
            .any(|c| c.positions == vec![2] && c.rights == mask_from_iter([0, 7])));
    }

    #[test]
    fn union_subgraph_spanning() {
        let a = t(2, &[&[1, 2], &[2]]);
        assert_eq!(a.union_type(&a).unwrap(), a);
        for p in OrderedPartition::enumerate_all(2) {
            assert!(a.refine(&p).is_subgraph(&a).unwrap());
        }
        assert!(a.is_connected());
        assert!(a.is_spanning());
    }

    #[test]
    fn ordered_partition_counts() {
        assert_eq!(OrderedPartition::enumerate_all(1).len(), 1);
        assert_eq!(OrderedPartition::enumerate_all(2).len(), 3);
        assert_eq!(OrderedPartition::enumerate_all(3).len(), 13);
        assert_eq!(OrderedPartition::enumerate_all(4).len(), 75);
    }

    #[test]
    fn refine_idempotent_and_coarse_composition() {
        // Refinement by an ordered partition equals composing its coarse
        // prefix splits; exhaustive for d <= 3 over a sample of types.
        for d in 1..=3usize {
            let g = BipartiteType::complete(2, d);
            for a in all_types(2, d) {
                for p in OrderedPartition::enumerate_all(d) {
                    let r = a.refine(&p);
                    assert_eq!(r.refine(&p), r, "idempotence");
                    let mut acc = a.clone();
                    let mut prefix: RightSet = 0;
                    for &b in p.blocks() {
                        prefix |= b;
                        if prefix != full_mask(d) {
                            acc = acc.refine(&OrderedPartition::coarse(d, prefix).unwrap());
                        }
                    }
                    assert_eq!(acc, r, "coarse composition for {:?} {:?}", a, p);
                }
            }
            let _ = g;
        }
    }

    #[test]
    fn compatibility_symmetric_and_restriction_stable() {
        for (n, d) in [(2usize, 2usize), (2, 3), (3, 2)] {
            let types = all_types(n, d);
            for a in &types {
                for b in &types {
                    let ab = a.is_compatible(b).unwrap();
                    assert_eq!(ab, b.is_compatible(a).unwrap());
                    if ab && n > 1 {
                        // restriction to a subset of positions preserves compatibility
                        let pos: Vec<usize> = (0..n - 1).collect();
                        let ar = a.restrict_masked(&pos, full_mask(d));
                        let br = b.restrict_masked(&pos, full_mask(d));
                        assert!(ar.is_compatible(&br).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn agreement_lemma_exhaustive_small() {
        for (n, d) in [(2usize, 2usize), (3, 2), (2, 3)] {
            let types = all_types(n, d);
            for a in &types {
                for b in &types {
                    if a.is_compatible(b).unwrap() {
                        assert!(a.agreement_lemma_check(b).unwrap().is_empty());
                    }
                }
            }
        }
    }

    pub fn all_types(n: usize, d: usize) -> Vec<BipartiteType> {
        let full = full_mask(d);
        let mut out = Vec::new();
        let mut rows = vec![1u32; n];
        loop {
            out.push(BipartiteType::new(d, rows.clone()).unwrap());
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                if rows[i] < full {
                    rows[i] += 1;
                    break;
                }
                rows[i] = 1;
                i += 1;
            }
        }
    }
}
