//! Exact-rational geometric ground truth: coordinates of the root
//! polytope Q_G, brute-force facet enumeration inside its affine hull,
//! face tests, and the graph-theoretic facet description.
//!
//! Everything in this module is exact; no floating point. Coordinates
//! are 0/1 and heights are small integers, so `Ratio<i128>` is ample.

use std::collections::BTreeSet;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::types::{full_mask, mask_iter, BipartiteType, RightSet};

pub type Rat = Ratio<i128>;

pub fn rat(n: i128) -> Rat {
    Ratio::from_integer(n)
}

/// A point with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint(pub Vec<Rat>);

/// A facet of Q_G as a supporting hyperplane in ambient coordinates:
/// normal · x >= offset for all vertices, with equality exactly on
/// `vertex_set` (vertices are named by their graph edges).
#[derive(Clone, Debug)]
pub struct SupportingFacet {
    pub normal: Vec<Rat>,
    pub offset: Rat,
    pub vertex_set: BTreeSet<(usize, usize)>,
}

/// One side of a facet split: positions and right vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FacetSplit {
    pub positions1: Vec<usize>,
    pub rights1: RightSet,
    pub positions2: Vec<usize>,
    pub rights2: RightSet,
}

/// A graph-theoretic facet: a maximal disconnected subgraph with two
/// connected components, plus the vertex split.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphFacet {
    pub subgraph: BipartiteType,
    pub split: FacetSplit,
}

/// Vertices of Q_G: edge (i, j) maps to e_i + e_{n+j} in R^{n+d},
/// in row-major edge order.
pub fn q_vertices(g: &BipartiteType) -> Vec<((usize, usize), RationalPoint)> {
    let n = g.n();
    let d = g.d();
    g.edges()
        .into_iter()
        .map(|(i, j)| {
            let mut c = vec![Rat::zero(); n + d];
            c[i] = Rat::one();
            c[n + j] = Rat::one();
            ((i, j), RationalPoint(c))
        })
        .collect()
}

/// Affine dimension of Q_G. Asserts the n+d-2 formula for connected
/// spanning graphs.
pub fn dim_q(g: &BipartiteType) -> usize {
    let verts = q_vertices(g);
    let dim = affine_dim(&verts.iter().map(|(_, p)| p.0.clone()).collect::<Vec<_>>());
    if g.is_connected() && g.is_spanning() {
        debug_assert_eq!(dim, g.n() + g.d() - 2);
    }
    dim
}

/// All facets of conv(q_vertices(G)) within its affine hull, by brute
/// force over vertex subsets. Desk scale only.
pub fn facets_geometric(g: &BipartiteType) -> Vec<SupportingFacet> {
    let verts = q_vertices(g);
    let points: Vec<Vec<Rat>> = verts.iter().map(|(_, p)| p.0.clone()).collect();
    let chart = AffineChart::build(&points);
    let dim = chart.dim();
    if dim == 0 {
        return Vec::new();
    }
    let coords: Vec<Vec<Rat>> = points.iter().map(|p| chart.coords(p)).collect();
    let m = coords.len();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    // Hyperplanes spanned by `dim` affinely independent vertices.
    for subset in subsets_of_size(m, dim) {
        let base = &coords[subset[0]];
        let diffs: Vec<Vec<Rat>> = subset[1..]
            .iter()
            .map(|&k| sub_vec(&coords[k], base))
            .collect();
        let ns = nullspace(&diffs, dim);
        if ns.len() != 1 {
            continue;
        }
        let normal = &ns[0];
        let offset = dot(normal, base);
        let mut sign = 0i32;
        let mut tight = Vec::new();
        let mut ok = true;
        for (k, c) in coords.iter().enumerate() {
            let v = dot(normal, c) - &offset;
            if v.is_zero() {
                tight.push(k);
            } else if v.is_positive() {
                if sign < 0 {
                    ok = false;
                    break;
                }
                sign = 1;
            } else {
                if sign > 0 {
                    ok = false;
                    break;
                }
                sign = -1;
            }
        }
        if !ok || sign == 0 {
            continue;
        }
        if affine_dim(&tight.iter().map(|&k| coords[k].clone()).collect::<Vec<_>>()) != dim - 1 {
            continue;
        }
        if !seen.insert(tight.clone()) {
            continue;
        }
        // Orient inward and lift the normal back to ambient coordinates.
        let normal: Vec<Rat> = if sign > 0 {
            normal.clone()
        } else {
            normal.iter().map(|x| -x).collect()
        };
        let ambient_normal = chart.lift_covector(&normal);
        let ambient_offset = dot(&ambient_normal, &points[tight[0]]);
        out.push(SupportingFacet {
            normal: ambient_normal,
            offset: ambient_offset,
            vertex_set: tight.iter().map(|&k| verts[k].0).collect(),
        });
    }
    out.sort_by(|a, b| a.vertex_set.cmp(&b.vertex_set));
    out
}

/// Facets of Q_G described combinatorially: maximal disconnected
/// subgraphs H with two connected components whose removed edges are all
/// of one crossing kind. Splits with both crossing kinds give interior
/// Q_H and are excluded.
pub fn facets_graphtheoretic(g: &BipartiteType) -> Vec<GraphFacet> {
    let n = g.n();
    let d = g.d();
    let mut out = Vec::new();
    if g.edge_count() <= 1 {
        return out;
    }
    // Fix position 0 on side 1 to enumerate each unordered split once.
    for pm in 0..(1usize << (n - 1)) {
        let pos1_mask = (pm << 1) | 1;
        for rm in 0..=full_mask(d) {
            let positions1: Vec<usize> = (0..n).filter(|&i| pos1_mask & (1 << i) != 0).collect();
            let positions2: Vec<usize> = (0..n).filter(|&i| pos1_mask & (1 << i) == 0).collect();
            let rights1 = rm;
            let rights2 = full_mask(d) & !rm;
            if positions2.is_empty() && rights2 == 0 {
                continue;
            }
            if !side_connected(g, &positions1, rights1) || !side_connected(g, &positions2, rights2) {
                continue;
            }
            // Crossing edges of each kind.
            let cross12 = positions1.iter().any(|&i| g.row(i) & rights2 != 0);
            let cross21 = positions2.iter().any(|&i| g.row(i) & rights1 != 0);
            if cross12 == cross21 {
                continue; // both kinds (interior) or none (impossible for connected G)
            }
            let mut rows = vec![0u32; n];
            for &i in &positions1 {
                rows[i] = g.row(i) & rights1;
            }
            for &i in &positions2 {
                rows[i] = g.row(i) & rights2;
            }
            let subgraph = BipartiteType::new_allow_empty(d, rows).expect("valid subgraph");
            out.push(GraphFacet {
                subgraph,
                split: FacetSplit { positions1, rights1, positions2, rights2 },
            });
        }
    }
    out.sort();
    out
}

/// A side (P, J) forms one connected component: every vertex present and
/// mutually reachable. A single vertex counts as connected.
fn side_connected(g: &BipartiteType, positions: &[usize], rights: RightSet) -> bool {
    match (positions.len(), rights.count_ones()) {
        (0, 0) => false,
        (0, r) => r == 1,
        (p, 0) => p == 1,
        _ => {
            if positions.iter().any(|&i| g.row(i) & rights == 0) {
                return false;
            }
            // BFS over the restricted graph.
            let mut seen_pos = vec![false; positions.len()];
            let mut seen_rights: RightSet = 0;
            let mut stack = vec![positions[0]];
            seen_pos[0] = true;
            while let Some(i) = stack.pop() {
                for j in mask_iter(g.row(i) & rights) {
                    if seen_rights & (1 << j) == 0 {
                        seen_rights |= 1 << j;
                        for (k, &i2) in positions.iter().enumerate() {
                            if !seen_pos[k] && g.row(i2) & (1 << j) != 0 {
                                seen_pos[k] = true;
                                stack.push(i2);
                            }
                        }
                    }
                }
            }
            seen_pos.iter().all(|&b| b) && seen_rights == rights
        }
    }
}

/// True iff conv(q_vertices(H)) is a face of conv(q_vertices(G)). Uses
/// the fact that every proper face is the intersection of the facets
/// containing it.
pub fn is_face_of_geometric(h: &BipartiteType, g: &BipartiteType) -> Result<bool> {
    if !h.is_subgraph(g)? {
        return Err(Error::Precondition("H must be a subgraph of G".into()));
    }
    let h_edges: BTreeSet<(usize, usize)> = h.edges().into_iter().collect();
    if h_edges.is_empty() {
        return Err(Error::Precondition("H must have at least one edge".into()));
    }
    let g_edges: BTreeSet<(usize, usize)> = g.edges().into_iter().collect();
    if h_edges == g_edges {
        return Ok(true); // improper face
    }
    let mut meet: Option<BTreeSet<(usize, usize)>> = None;
    for f in facets_geometric(g) {
        if h_edges.is_subset(&f.vertex_set) {
            meet = Some(match meet {
                None => f.vertex_set,
                Some(m) => m.intersection(&f.vertex_set).copied().collect(),
            });
        }
    }
    match meet {
        None => Ok(false), // smallest face containing H is all of Q_G
        Some(m) => Ok(m == h_edges),
    }
}

// ---------------------------------------------------------------------
// Exact linear algebra helpers.

pub(crate) fn sub_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Affine dimension of a point set.
pub fn affine_dim(points: &[Vec<Rat>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Vec<Rat>> = points[1..].iter().map(|p| sub_vec(p, &points[0])).collect();
    rank(&diffs)
}

/// Row rank by Gaussian elimination.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for c2 in c..cols {
                    let t = &m[r][c2] * &f;
                    m[i][c2] = &m[i][c2] - &t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of the right nullspace of a matrix with `cols` columns.
pub fn nullspace(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivot_col = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for c2 in 0..cols {
            m[r][c2] = &m[r][c2] / &pivot;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for c2 in 0..cols {
                    let t = &m[r][c2] * &f;
                    m[i][c2] = &m[i][c2] - &t;
                }
            }
        }
        pivot_col.push(c);
        r += 1;
    }
    let is_pivot: Vec<bool> = (0..cols).map(|c| pivot_col.contains(&c)).collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &pc) in pivot_col.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve A x = b for a unique solution; None if inconsistent or
/// underdetermined.
pub fn solve_unique(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    if rows == 0 {
        return None;
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut row = r.clone();
            row.push(v.clone());
            row
        })
        .collect();
    let mut pivot_col = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for c2 in 0..=cols {
            m[r][c2] = &m[r][c2] / &pivot;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for c2 in 0..=cols {
                    let t = &m[r][c2] * &f;
                    m[i][c2] = &m[i][c2] - &t;
                }
            }
        }
        pivot_col.push(c);
        r += 1;
    }
    if pivot_col.len() != cols {
        return None; // underdetermined
    }
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None; // inconsistent
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &pc) in pivot_col.iter().enumerate() {
        x[pc] = m[row][cols].clone();
    }
    Some(x)
}

/// An affine chart for the hull of a point set: an origin plus an
/// independent basis of difference vectors.
pub struct AffineChart {
    origin: Vec<Rat>,
    basis: Vec<Vec<Rat>>,
}

impl AffineChart {
    pub fn build(points: &[Vec<Rat>]) -> Self {
        let origin = points[0].clone();
        let mut basis: Vec<Vec<Rat>> = Vec::new();
        for p in &points[1..] {
            let v = sub_vec(p, &origin);
            let mut trial = basis.clone();
            trial.push(v.clone());
            if rank(&trial) > basis.len() {
                basis.push(v);
            }
        }
        AffineChart { origin, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a point lying in the affine hull.
    pub fn coords(&self, p: &[Rat]) -> Vec<Rat> {
        let rhs = sub_vec(p, &self.origin);
        let a: Vec<Vec<Rat>> = (0..self.origin.len())
            .map(|row| self.basis.iter().map(|b| b[row].clone()).collect())
            .collect();
        solve_unique(&a, &rhs).expect("point must lie in the affine hull")
    }

    /// Lift a covector expressed in chart coordinates to an ambient
    /// covector that restricts to it on the hull.
    pub fn lift_covector(&self, a: &[Rat]) -> Vec<Rat> {
        // g = B y with (B^T B) y = a keeps g inside the span of the basis.
        let k = self.basis.len();
        let gram: Vec<Vec<Rat>> = (0..k)
            .map(|i| (0..k).map(|j| dot(&self.basis[i], &self.basis[j])).collect())
            .collect();
        let y = solve_unique(&gram, a).expect("Gram matrix of a basis is invertible");
        let mut g = vec![Rat::zero(); self.origin.len()];
        for (yi, b) in y.iter().zip(&self.basis) {
            for (gc, bc) in g.iter_mut().zip(b) {
                *gc = &*gc + &(yi * bc);
            }
        }
        g
    }
}

/// All subsets of {0..m-1} of a given size.
pub fn subsets_of_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

/// Convex hull of 2-d points (monotone chain); returns hull vertices in
/// counterclockwise order. Collinear input returns its two extremes.
pub fn convex_hull_2d(points: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut pts: Vec<Vec<Rat>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &Vec<Rat>, a: &Vec<Rat>, b: &Vec<Rat>| -> Rat {
        (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
    };
    let mut lower: Vec<Vec<Rat>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<Rat>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the signed area of a counterclockwise polygon.
pub fn polygon_area_twice(hull: &[Vec<Rat>]) -> Rat {
    let mut acc = Rat::zero();
    let k = hull.len();
    if k < 3 {
        return acc;
    }
    for i in 0..k {
        let a = &hull[i];
        let b = &hull[(i + 1) % k];
        acc = acc + (&a[0] * &b[1] - &b[0] * &a[1]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: usize, rows: &[&[usize]]) -> BipartiteType {
        BipartiteType::from_rows(
            d,
            &rows.iter().map(|r| r.iter().map(|&j| j - 1).collect()).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn q_vertices_k11_and_k22() {
        let k11 = t(1, &[&[1]]);
        let v = q_vertices(&k11);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].1 .0, vec![rat(1), rat(1)]);

        let k22 = BipartiteType::complete(2, 2);
        let v = q_vertices(&k22);
        assert_eq!(v.len(), 4);
        assert_eq!(dim_q(&k22), 2);
    }

    #[test]
    fn q_knd_vertex_count() {
        let g = BipartiteType::complete(3, 3);
        assert_eq!(q_vertices(&g).len(), 9);
        assert_eq!(dim_q(&g), 4);
    }

    #[test]
    fn dim_q_small() {
        assert_eq!(dim_q(&t(1, &[&[1]])), 0);
        assert_eq!(dim_q(&t(3, &[&[1, 2, 3], &[3]])), 3);
        // spanning tree of K_{2,3}: a simplex
        let tree = t(3, &[&[1, 2], &[2, 3]]);
        assert_eq!(dim_q(&tree), 3);
        assert_eq!(q_vertices(&tree).len(), 4);
    }

    #[test]
    fn facets_geometric_k22_square() {
        let k22 = BipartiteType::complete(2, 2);
        let f = facets_geometric(&k22);
        assert_eq!(f.len(), 4);
        for facet in &f {
            assert_eq!(facet.vertex_set.len(), 2);
        }
    }

    #[test]
    fn facets_geometric_k23_prism() {
        let g = BipartiteType::complete(2, 3);
        let f = facets_geometric(&g);
        assert_eq!(f.len(), 5); // 2 triangles + 3 squares
        let mut sizes: Vec<usize> = f.iter().map(|x| x.vertex_set.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 3, 4, 4, 4]);
    }

    #[test]
    fn facets_graphtheoretic_k22() {
        let k22 = BipartiteType::complete(2, 2);
        let f = facets_graphtheoretic(&k22);
        assert_eq!(f.len(), 4);
        // one of them: component {1,2} x {1bar}, isolated {2bar}
        assert!(f.iter().any(|gf| {
            gf.subgraph.edges() == vec![(0, 0), (1, 0)]
        }));
    }

    #[test]
    fn facets_graphtheoretic_k1d() {
        for d in 2..=4usize {
            let g = BipartiteType::complete(1, d);
            assert_eq!(facets_graphtheoretic(&g).len(), d);
        }
    }

    #[test]
    fn facet_descriptions_agree_k22_k23() {
        for g in [BipartiteType::complete(2, 2), BipartiteType::complete(2, 3)] {
            let geo: BTreeSet<BTreeSet<(usize, usize)>> =
                facets_geometric(&g).into_iter().map(|f| f.vertex_set).collect();
            let gt: BTreeSet<BTreeSet<(usize, usize)>> = facets_graphtheoretic(&g)
                .into_iter()
                .map(|f| f.subgraph.edges().into_iter().collect())
                .collect();
            assert_eq!(geo, gt);
        }
    }

    #[test]
    fn face_tests() {
        let g = BipartiteType::complete(2, 3);
        assert!(is_face_of_geometric(&g, &g).unwrap());
        // an edge of the prism: both positions pick right vertex 1
        let edge = t(3, &[&[1], &[1]]);
        assert!(is_face_of_geometric(&edge, &g).unwrap());
        // a single vertex
        let single = BipartiteType::new_allow_empty(3, vec![1, 0]).unwrap();
        assert!(is_face_of_geometric(&single, &g).unwrap());
    }

    #[test]
    fn refinements_are_faces_k23_exhaustive() {
        // every refinement of G is a face, and conversely every
        // nonempty-rows face is a refinement
        let g = BipartiteType::complete(2, 3);
        let refinements: BTreeSet<BipartiteType> = crate::types::OrderedPartition::enumerate_all(3)
            .iter()
            .map(|p| g.refine(p))
            .collect();
        for r in &refinements {
            assert!(is_face_of_geometric(r, &g).unwrap(), "{:?}", r);
        }
        // a non-refinement subgraph with nonempty rows should not be a face
        let not_face = t(3, &[&[1, 2], &[2, 3]]);
        assert!(!is_face_of_geometric(&not_face, &g).unwrap());
    }

    #[test]
    fn hull_2d_and_area() {
        let square = vec![
            vec![rat(0), rat(0)],
            vec![rat(2), rat(0)],
            vec![rat(1), rat(1)],
            vec![rat(2), rat(2)],
            vec![rat(0), rat(2)],
        ];
        let hull = convex_hull_2d(&square);
        assert_eq!(hull.len(), 4);
        assert_eq!(polygon_area_twice(&hull), rat(8));
    }
}
