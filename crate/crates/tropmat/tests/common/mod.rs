//! Shared helpers for the integration tests: small builders, exhaustive
//! subgraph enumeration, seeded random structures, and an independent
//! brute-force compatibility oracle.
#![allow(dead_code)] // each test target uses a different subset

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tropmat::geometry::rat;
use tropmat::lifting::HeightFunction;
use tropmat::types::{mask_iter, BipartiteType, RightSet};

/// Build a type from 1-based right-vertex lists.
pub fn t(d: usize, rows: &[&[usize]]) -> BipartiteType {
    BipartiteType::from_rows(
        d,
        &rows.iter().map(|r| r.iter().map(|&j| j - 1).collect()).collect::<Vec<_>>(),
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All connected spanning subgraphs of `g` (with no empty row), by
/// exhaustive edge-subset enumeration. Keep the edge count small.
pub fn all_connected_spanning_subgraphs(g: &BipartiteType) -> Vec<BipartiteType> {
    let edges = g.edges();
    let mut out = Vec::new();
    'subset: for mask in 1u64..(1u64 << edges.len()) {
        let mut rows = vec![0 as RightSet; g.n()];
        for (k, &(i, j)) in edges.iter().enumerate() {
            if mask & (1 << k) != 0 {
                rows[i] |= 1 << j;
            }
        }
        if rows.iter().any(|&r| r == 0) {
            continue 'subset;
        }
        let cand = BipartiteType::new(g.d(), rows).unwrap();
        if cand.is_connected() && cand.is_spanning() {
            out.push(cand);
        }
    }
    out
}

/// All spanning trees of `g`: connected spanning subgraphs with exactly
/// n + d - 1 edges.
pub fn spanning_trees(g: &BipartiteType) -> Vec<BipartiteType> {
    let want = g.n() + g.d() - 1;
    all_connected_spanning_subgraphs(g)
        .into_iter()
        .filter(|s| s.edge_count() == want)
        .collect()
}

/// A seeded random connected spanning subgraph of K_{n,d}: keep each
/// edge with probability 2/3, retry until connected and spanning.
pub fn random_connected_spanning_subgraph(n: usize, d: usize, rng: &mut ChaCha8Rng) -> BipartiteType {
    loop {
        let rows: Vec<RightSet> = (0..n)
            .map(|_| {
                let mut m = 0;
                for j in 0..d {
                    if rng.gen_range(0..3) < 2 {
                        m |= 1 << j;
                    }
                }
                m
            })
            .collect();
        if rows.iter().any(|&r| r == 0) {
            continue;
        }
        let cand = BipartiteType::new(d, rows).unwrap();
        if cand.is_connected() && cand.is_spanning() {
            return cand;
        }
    }
}

/// A seeded random type: each row a uniform nonempty subset of the
/// right vertices.
pub fn random_type(n: usize, d: usize, rng: &mut ChaCha8Rng) -> BipartiteType {
    let rows: Vec<RightSet> = (0..n).map(|_| rng.gen_range(1..(1u32 << d))).collect();
    BipartiteType::new(d, rows).unwrap()
}

/// Seeded random integer heights on the edges of `g`.
pub fn random_heights(g: &BipartiteType, range: i128, rng: &mut ChaCha8Rng) -> HeightFunction {
    HeightFunction::new(
        g.edges().into_iter().map(|e| (e, rat(rng.gen_range(0..=range)))).collect(),
    )
}

/// Independent compatibility oracle: search for a closed walk
/// alternating between the two edge sets through an edge outside their
/// intersection, using transitive closure by iterated relaxation
/// (rather than the library's strongly-connected-components pass).
pub fn brute_force_compatible(a: &BipartiteType, b: &BipartiteType) -> bool {
    let n = a.n();
    let d = a.d();
    let nodes = n + d;
    // arc i -> n+j for j in A_i (walk takes an A-edge out of i), and
    // n+j -> i for j in B_i (walk takes a B-edge back to a position)
    let mut reach = vec![vec![false; nodes]; nodes];
    for i in 0..n {
        for j in mask_iter(a.row(i)) {
            reach[i][n + j] = true;
        }
        for j in mask_iter(b.row(i)) {
            reach[n + j][i] = true;
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for u in 0..nodes {
            for v in 0..nodes {
                if !reach[u][v] {
                    continue;
                }
                for w in 0..nodes {
                    if reach[v][w] && !reach[u][w] {
                        reach[u][w] = true;
                        changed = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in mask_iter(a.row(i) & !b.row(i)) {
            // the walk uses A-edge (i, j) and must close up: n+j back to i
            if reach[n + j][i] {
                return false;
            }
        }
        for j in mask_iter(b.row(i) & !a.row(i)) {
            if reach[i][n + j] {
                return false;
            }
        }
    }
    true
}

/// All (n,d)-types: every row independently a nonempty subset.
pub fn all_types(n: usize, d: usize) -> Vec<BipartiteType> {
    let row_choices: Vec<RightSet> = (1..(1u32 << d)).collect();
    let mut out = Vec::new();
    let mut rows = vec![0 as RightSet; n];
    fn rec(
        k: usize,
        n: usize,
        d: usize,
        choices: &[RightSet],
        rows: &mut Vec<RightSet>,
        out: &mut Vec<BipartiteType>,
    ) {
        if k == n {
            out.push(BipartiteType::new(d, rows.clone()).unwrap());
            return;
        }
        for &c in choices {
            rows[k] = c;
            rec(k + 1, n, d, choices, rows, out);
        }
    }
    rec(0, n, d, &row_choices, &mut rows, &mut out);
    out
}
