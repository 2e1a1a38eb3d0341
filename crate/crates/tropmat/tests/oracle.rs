//! Cross-checks against the exact-rational geometric oracle: face and
//! facet recognition, dimensions, and the slice-and-dilate view of
//! subdivisions as mixed subdivisions.

mod common;

use std::collections::BTreeSet;

use common::*;
use tropmat::geometry::{dim_q, facets_geometric, facets_graphtheoretic, is_face_of_geometric, q_vertices};
use tropmat::lifting::sample_subdivisions;
use tropmat::subdivision::{cayley_to_mixed, is_triangulation};
use tropmat::types::BipartiteType;

#[test]
fn q_dimensions_and_vertices() {
    for (n, d) in [(1, 1), (2, 2), (2, 3), (3, 3), (3, 4)] {
        let g = BipartiteType::complete(n, d);
        assert_eq!(q_vertices(&g).len(), n * d);
        assert_eq!(dim_q(&g), n + d - 2);
    }
}

#[test]
fn k23_has_five_facets() {
    let g = BipartiteType::complete(2, 3);
    let combinatorial = facets_graphtheoretic(&g);
    assert_eq!(combinatorial.len(), 5);
    assert_eq!(facets_geometric(&g).len(), 5);
    let c: BTreeSet<BTreeSet<(usize, usize)>> = combinatorial
        .into_iter()
        .map(|f| f.subgraph.edges().into_iter().collect())
        .collect();
    let e: BTreeSet<BTreeSet<(usize, usize)>> =
        facets_geometric(&g).into_iter().map(|f| f.vertex_set).collect();
    assert_eq!(c, e);
}

#[test]
fn face_recognition_on_the_square() {
    let g = BipartiteType::complete(2, 2);
    // the diagonal is not a face of the square
    let diagonal = BipartiteType::new_allow_empty(2, vec![0b01, 0b10]).unwrap();
    assert!(!is_face_of_geometric(&diagonal, &g).unwrap());
    // a boundary edge is
    let edge = BipartiteType::new_allow_empty(2, vec![0b11, 0b00]).unwrap();
    assert!(is_face_of_geometric(&edge, &g).unwrap());
    // every combinatorial facet is a geometric face
    for f in facets_graphtheoretic(&g) {
        assert!(is_face_of_geometric(&f.subgraph, &g).unwrap());
    }
}

#[test]
fn facets_are_faces_on_random_graphs() {
    let mut r = rng(11);
    for _ in 0..15 {
        let g = random_connected_spanning_subgraph(3, 3, &mut r);
        for f in facets_graphtheoretic(&g) {
            assert!(is_face_of_geometric(&f.subgraph, &g).unwrap(), "{:?} in {:?}", f.subgraph, g);
        }
    }
}

/// A mixed cell of a tree has exactly one Minkowski vertex per choice of
/// one right vertex per summand; a cell with a cycle collapses at least
/// two of those sums. So a subdivision is a triangulation exactly when
/// every mixed cell attains the full product count.
#[test]
fn fineness_is_tree_by_vertex_counts() {
    for g in [BipartiteType::complete(2, 3), BipartiteType::complete(3, 3)] {
        for s in sample_subdivisions(&g, 300, 5).unwrap() {
            let mixed = cayley_to_mixed(&s);
            let all_products_attained = mixed.iter().all(|mc| {
                let product: usize = mc.summands.iter().map(|m| m.count_ones() as usize).product();
                mc.vertices.len() == product
            });
            assert_eq!(is_triangulation(&s), all_products_attained, "{:?}", s.cells());
        }
    }
}

/// The mixed-cell vertices of each cell are exactly the sums of one
/// basis vector per summand over the cell's total refinements, all
/// summing to n across coordinates.
#[test]
fn mixed_vertices_are_refinement_sums() {
    let g = BipartiteType::complete(2, 3);
    for s in sample_subdivisions(&g, 100, 2).unwrap() {
        for (cell, mc) in s.cells().iter().zip(cayley_to_mixed(&s)) {
            assert_eq!(mc.summands, cell.rows().to_vec());
            for v in &mc.vertices {
                let total: tropmat::geometry::Rat = v.0.iter().sum();
                assert_eq!(total, tropmat::geometry::rat(g.n() as i128));
            }
            let expect: BTreeSet<Vec<tropmat::geometry::Rat>> = cell
                .total_refinements()
                .iter()
                .map(|t| {
                    let mut v = vec![tropmat::geometry::rat(0); g.d()];
                    for row in t.rows() {
                        let j = row.trailing_zeros() as usize;
                        v[j] = &v[j] + &tropmat::geometry::rat(1);
                    }
                    v
                })
                .collect();
            let got: BTreeSet<Vec<tropmat::geometry::Rat>> =
                mc.vertices.iter().map(|p| p.0.clone()).collect();
            assert_eq!(got, expect);
        }
    }
}
