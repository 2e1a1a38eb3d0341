//! Regular subdivisions of Q_G from height functions, by exact
//! lower-hull computation, and seeded sampling of subdivisions.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    affine_dim, dot, q_vertices, rat, solve_unique, subsets_of_size, AffineChart, Rat,
};
use crate::subdivision::Subdivision;
use crate::types::BipartiteType;

/// A lifting height per edge of G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightFunction {
    heights: BTreeMap<(usize, usize), Rat>,
}

impl HeightFunction {
    pub fn new(heights: BTreeMap<(usize, usize), Rat>) -> Self {
        HeightFunction { heights }
    }

    pub fn zero(g: &BipartiteType) -> Self {
        HeightFunction { heights: g.edges().into_iter().map(|e| (e, Rat::zero())).collect() }
    }

    pub fn get(&self, edge: (usize, usize)) -> Option<&Rat> {
        self.heights.get(&edge)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rat)> {
        self.heights.iter()
    }

    /// The domain must be exactly E(G).
    pub fn check_domain(&self, g: &BipartiteType) -> Result<()> {
        let edges: BTreeSet<(usize, usize)> = g.edges().into_iter().collect();
        let dom: BTreeSet<(usize, usize)> = self.heights.keys().copied().collect();
        if edges != dom {
            return Err(Error::Precondition(format!(
                "height domain differs from the edge set: missing {:?}, extra {:?}",
                edges.difference(&dom).collect::<Vec<_>>(),
                dom.difference(&edges).collect::<Vec<_>>()
            )));
        }
        Ok(())
    }
}

/// The regular subdivision of Q_G induced by lifting each vertex to its
/// height and projecting the lower hull (minimal-height side) back down.
///
/// Cells are the maximal vertex sets on non-vertical lower supporting
/// hyperplanes. Degenerate heights are fine and give coarser cells;
/// h = 0 gives the trivial subdivision.
pub fn regular_subdivision(g: &BipartiteType, h: &HeightFunction) -> Result<Subdivision> {
    if !g.is_connected() || !g.is_spanning() {
        return Err(Error::NotConnected(format!("{:?}", g)));
    }
    h.check_domain(g)?;
    let verts = q_vertices(g);
    let points: Vec<Vec<Rat>> = verts.iter().map(|(_, p)| p.0.clone()).collect();
    let heights: Vec<Rat> = verts.iter().map(|(e, _)| h.get(*e).unwrap().clone()).collect();
    let chart = AffineChart::build(&points);
    let dim = chart.dim();
    let coords: Vec<Vec<Rat>> = points.iter().map(|p| chart.coords(p)).collect();
    let m = coords.len();
    let mut cells: BTreeSet<BipartiteType> = BTreeSet::new();
    if dim == 0 {
        return Subdivision::trivial(g.clone());
    }
    // A lower cell is the tight set of an affine functional a·x + c with
    // heights >= a·x + c everywhere; search functionals through dim+1
    // affinely independent lifted base points.
    for subset in subsets_of_size(m, dim + 1) {
        // rows: (x, 1) · (a, c) = height
        let a_mat: Vec<Vec<Rat>> = subset
            .iter()
            .map(|&k| {
                let mut row = coords[k].clone();
                row.push(rat(1));
                row
            })
            .collect();
        let b: Vec<Rat> = subset.iter().map(|&k| heights[k].clone()).collect();
        let Some(func) = solve_unique(&a_mat, &b) else { continue };
        let (a, c) = func.split_at(dim);
        let mut tight = Vec::new();
        let mut below = false;
        for k in 0..m {
            let v = &heights[k] - &(dot(a, &coords[k]) + &c[0]);
            if v.is_zero() {
                tight.push(k);
            } else if v < Rat::zero() {
                below = true;
                break;
            }
        }
        if below {
            continue;
        }
        if affine_dim(&tight.iter().map(|&k| coords[k].clone()).collect::<Vec<_>>()) != dim {
            continue;
        }
        let mut rows = vec![0u32; g.n()];
        for &k in &tight {
            let (i, j) = verts[k].0;
            rows[i] |= 1 << j;
        }
        cells.insert(BipartiteType::new(g.d(), rows)?);
    }
    if cells.is_empty() {
        // all lifted points on one affine functional: trivial subdivision
        return Subdivision::trivial(g.clone());
    }
    Subdivision::new(g.clone(), cells)
}

/// Deduplicated regular subdivisions from pseudo-random integer heights.
/// Deterministic given the seed; the height range grows with the trial
/// budget so coarse subdivisions stay reachable; the zero height function
/// (trivial subdivision) is always included.
pub fn sample_subdivisions(g: &BipartiteType, trials: usize, seed: u64) -> Result<Vec<Subdivision>> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let edges = g.edges();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: BTreeSet<BTreeSet<BipartiteType>> = BTreeSet::new();
    let mut out = Vec::new();
    for trial in 0..trials {
        let range = 2 + (trial as i128 / 8);
        let h = if trial == 0 {
            HeightFunction::zero(g)
        } else {
            HeightFunction::new(
                edges
                    .iter()
                    .map(|&e| (e, rat(rng.gen_range(0..=range))))
                    .collect(),
            )
        };
        let s = regular_subdivision(g, &h)?;
        if seen.insert(s.cells().clone()) {
            out.push(s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::{check_subdivision, is_triangulation};
    use crate::types::mask_from_iter;

    fn heights(pairs: &[((usize, usize), i128)]) -> HeightFunction {
        HeightFunction::new(pairs.iter().map(|&(e, v)| (e, rat(v))).collect())
    }

    #[test]
    fn square_diagonal_split() {
        let g = BipartiteType::complete(2, 2);
        let h = heights(&[((0, 0), 0), ((1, 1), 0), ((0, 1), 1), ((1, 0), 1)]);
        let s = regular_subdivision(&g, &h).unwrap();
        let expect: BTreeSet<BipartiteType> = [
            BipartiteType::new(2, vec![mask_from_iter([0, 1]), mask_from_iter([1])]).unwrap(),
            BipartiteType::new(2, vec![mask_from_iter([0]), mask_from_iter([0, 1])]).unwrap(),
        ]
        .into_iter()
        .collect();
        assert_eq!(s.cells(), &expect);
        assert!(is_triangulation(&s));
    }

    #[test]
    fn zero_heights_trivial() {
        for g in [BipartiteType::complete(2, 2), BipartiteType::complete(2, 3)] {
            let s = regular_subdivision(&g, &HeightFunction::zero(&g)).unwrap();
            assert_eq!(s.cells().len(), 1);
            assert!(s.cells().contains(&g));
        }
    }

    #[test]
    fn outputs_pass_check() {
        let g = BipartiteType::complete(2, 3);
        for s in sample_subdivisions(&g, 60, 7).unwrap() {
            let (ok, diag) = check_subdivision(&s);
            assert!(ok, "{:?}", diag);
        }
    }

    #[test]
    fn k22_three_subdivisions() {
        let g = BipartiteType::complete(2, 2);
        let subs = sample_subdivisions(&g, 200, 1).unwrap();
        assert_eq!(subs.len(), 3);
        assert_eq!(subs.iter().filter(|s| is_triangulation(s)).count(), 2);
    }

    #[test]
    fn deterministic_given_seed() {
        let g = BipartiteType::complete(2, 3);
        let a = sample_subdivisions(&g, 50, 42).unwrap();
        let b = sample_subdivisions(&g, 50, 42).unwrap();
        let ka: Vec<_> = a.iter().map(|s| s.cells().clone()).collect();
        let kb: Vec<_> = b.iter().map(|s| s.cells().clone()).collect();
        assert_eq!(ka, kb);
    }

    #[test]
    fn bad_domain_rejected() {
        let g = BipartiteType::complete(2, 2);
        let h = heights(&[((0, 0), 0)]);
        assert!(regular_subdivision(&g, &h).is_err());
    }

    #[test]
    fn single_edge_graph() {
        let g = BipartiteType::new(1, vec![1]).unwrap();
        let s = regular_subdivision(&g, &HeightFunction::zero(&g)).unwrap();
        assert_eq!(s.cells().len(), 1);
    }
}
