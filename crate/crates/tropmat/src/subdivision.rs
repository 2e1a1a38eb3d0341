//! Graph-encoded subdivisions of Q_G: the validity checker, internal
//! facet pairing, face enumeration, the Cayley-trick view as mixed
//! cells, and both directions of the bijection with GTOMs.

use std::collections::BTreeSet;

use crate::axioms::{is_gtom_mode, CheckMode, Gtom};
use crate::error::{Error, Result};
use crate::geometry::{facets_graphtheoretic, GraphFacet, Rat, RationalPoint};
use crate::types::{BipartiteType, OrderedPartition};
use num_traits::{One, Zero};

/// A subdivision of Q_G encoded by its cell subgraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    ambient: BipartiteType,
    cells: BTreeSet<BipartiteType>,
}

impl Subdivision {
    /// Structural invariants only: cells are distinct connected spanning
    /// subgraphs of a connected spanning ambient. Whether the cells
    /// actually fit together is `check_subdivision`'s job.
    pub fn new(ambient: BipartiteType, cells: BTreeSet<BipartiteType>) -> Result<Self> {
        if !ambient.is_connected() || !ambient.is_spanning() {
            return Err(Error::NotConnected(format!("{:?}", ambient)));
        }
        if cells.is_empty() {
            return Err(Error::InvalidSubdivision("no cells".into()));
        }
        for c in &cells {
            if !c.is_subgraph(&ambient)? {
                return Err(Error::InvalidSubdivision(format!(
                    "cell {:?} is not a subgraph of the ambient graph",
                    c
                )));
            }
            if !c.is_connected() || !c.is_spanning() {
                return Err(Error::InvalidSubdivision(format!(
                    "cell {:?} is not connected and spanning (not full-dimensional)",
                    c
                )));
            }
        }
        Ok(Subdivision { ambient, cells })
    }

    pub fn trivial(ambient: BipartiteType) -> Result<Self> {
        let cells = [ambient.clone()].into_iter().collect();
        Self::new(ambient, cells)
    }

    pub fn ambient(&self) -> &BipartiteType {
        &self.ambient
    }

    pub fn cells(&self) -> &BTreeSet<BipartiteType> {
        &self.cells
    }
}

/// Why a cell collection fails to encode a subdivision.
#[derive(Clone, Debug, Default)]
pub struct SubdivisionDiagnostics {
    pub incompatible_pairs: Vec<(BipartiteType, BipartiteType)>,
    /// (cell, internal facet of that cell not contained in any other cell)
    pub unshared_facets: Vec<(BipartiteType, GraphFacet)>,
}

impl SubdivisionDiagnostics {
    pub fn ok(&self) -> bool {
        self.incompatible_pairs.is_empty() && self.unshared_facets.is_empty()
    }
}

/// The encoding criterion: all cell pairs compatible, and every facet of
/// every cell that is not on the boundary of Q_G (tested by containment
/// in an ambient facet subgraph) is contained in another cell.
pub fn check_subdivision(s: &Subdivision) -> (bool, SubdivisionDiagnostics) {
    let mut diag = SubdivisionDiagnostics::default();
    let cells: Vec<_> = s.cells().iter().collect();
    for (k, a) in cells.iter().enumerate() {
        for b in &cells[k + 1..] {
            if !a.is_compatible(b).expect("same shape") {
                diag.incompatible_pairs.push(((*a).clone(), (*b).clone()));
            }
        }
    }
    let ambient_facets: Vec<BipartiteType> = facets_graphtheoretic(s.ambient())
        .into_iter()
        .map(|f| f.subgraph)
        .collect();
    for cell in &cells {
        for facet in facets_graphtheoretic(cell) {
            let on_boundary = ambient_facets
                .iter()
                .any(|af| facet.subgraph.is_subgraph(af).expect("same shape"));
            if on_boundary {
                continue;
            }
            let shared = cells
                .iter()
                .any(|other| **other != **cell && facet.subgraph.is_subgraph(other).expect("same shape"));
            if !shared {
                diag.unshared_facets.push(((*cell).clone(), facet));
            }
        }
    }
    (diag.ok(), diag)
}

/// An internal facet together with its two incident cells: `connects12`
/// contains crossing edges between I1 and J̄2, `connects21` between I2
/// and J̄1.
#[derive(Clone, Debug)]
pub struct FacetPairing {
    pub facet: GraphFacet,
    pub connects12: BipartiteType,
    pub connects21: BipartiteType,
}

/// For every internal facet of a valid subdivision, the two incident
/// cells, checked to connect the split in opposite directions. An
/// inconsistency here signals a checker bug, not bad input.
pub fn internal_facet_pairing(s: &Subdivision) -> Result<Vec<FacetPairing>> {
    let (ok, _) = check_subdivision(s);
    if !ok {
        return Err(Error::Precondition("internal_facet_pairing requires a valid subdivision".into()));
    }
    let ambient_facets: Vec<BipartiteType> = facets_graphtheoretic(s.ambient())
        .into_iter()
        .map(|f| f.subgraph)
        .collect();
    let mut seen: BTreeSet<BipartiteType> = BTreeSet::new();
    let mut out = Vec::new();
    for cell in s.cells() {
        for facet in facets_graphtheoretic(cell) {
            if ambient_facets.iter().any(|af| facet.subgraph.is_subgraph(af).expect("same shape")) {
                continue;
            }
            if !seen.insert(facet.subgraph.clone()) {
                continue;
            }
            let incident: Vec<&BipartiteType> = s
                .cells()
                .iter()
                .filter(|c| facet.subgraph.is_subgraph(c).expect("same shape"))
                .collect();
            if incident.len() != 2 {
                return Err(Error::InvalidSubdivision(format!(
                    "internal facet {:?} incident to {} cells",
                    facet.subgraph,
                    incident.len()
                )));
            }
            let split = &facet.split;
            let connects_12 = |c: &BipartiteType| {
                split.positions1.iter().any(|&i| c.row(i) & split.rights2 != 0)
            };
            let connects_21 = |c: &BipartiteType| {
                split.positions2.iter().any(|&i| c.row(i) & split.rights1 != 0)
            };
            let pairing = match (
                connects_12(incident[0]),
                connects_21(incident[0]),
                connects_12(incident[1]),
                connects_21(incident[1]),
            ) {
                (true, false, false, true) => FacetPairing {
                    facet: facet.clone(),
                    connects12: incident[0].clone(),
                    connects21: incident[1].clone(),
                },
                (false, true, true, false) => FacetPairing {
                    facet: facet.clone(),
                    connects12: incident[1].clone(),
                    connects21: incident[0].clone(),
                },
                other => {
                    return Err(Error::InvalidSubdivision(format!(
                        "internal facet {:?} has connection pattern {:?}",
                        facet.subgraph, other
                    )))
                }
            };
            out.push(pairing);
        }
    }
    Ok(out)
}

/// All cells are simplices, i.e. spanning trees.
pub fn is_triangulation(s: &Subdivision) -> bool {
    let edges = s.ambient().n() + s.ambient().d() - 1;
    s.cells().iter().all(|c| c.edge_count() == edges)
}

/// How faces are enumerated: over all ordered partitions (Fubini-number
/// many, fine for small d) or as the closure under coarse two-block
/// splits (equivalent, and cheaper for large d).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceMode {
    AllPartitions,
    CoarseClosure,
}

/// The face set of the subdivision: the refinement-closure of the cells.
pub fn faces_of_subdivision(s: &Subdivision) -> BTreeSet<BipartiteType> {
    let mode = if s.ambient().d() <= 4 { FaceMode::AllPartitions } else { FaceMode::CoarseClosure };
    faces_of_subdivision_mode(s, mode)
}

pub fn faces_of_subdivision_mode(s: &Subdivision, mode: FaceMode) -> BTreeSet<BipartiteType> {
    refinement_closure(s.cells().iter().cloned(), s.ambient().d(), mode)
}

/// Closure of a type set under refinement. Every refinement is a
/// composition of coarse prefix splits, so the coarse-closure worklist
/// reaches the same set as expanding all ordered partitions.
pub fn refinement_closure(
    seed: impl IntoIterator<Item = BipartiteType>,
    d: usize,
    mode: FaceMode,
) -> BTreeSet<BipartiteType> {
    match mode {
        FaceMode::AllPartitions => {
            let partitions = OrderedPartition::enumerate_all(d);
            let mut out = BTreeSet::new();
            for t in seed {
                for p in &partitions {
                    out.insert(t.refine(p));
                }
            }
            out
        }
        FaceMode::CoarseClosure => {
            let splits = OrderedPartition::enumerate_coarse(d);
            let mut out: BTreeSet<BipartiteType> = seed.into_iter().collect();
            let mut work: Vec<BipartiteType> = out.iter().cloned().collect();
            while let Some(t) = work.pop() {
                for p in &splits {
                    let r = t.refine(p);
                    if out.insert(r.clone()) {
                        work.push(r);
                    }
                }
            }
            out
        }
    }
}

/// A cell of the induced mixed subdivision of nΔ^{d-1}: the Minkowski
/// sum of simplices Δ_{rows[i]}, with its vertex coordinates in d-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedCell {
    pub summands: Vec<crate::types::RightSet>,
    pub vertices: Vec<RationalPoint>,
}

/// The mixed cells obtained by slicing the subdivision of Q_G with
/// x_1 = … = x_n = 1/n and dilating by n. The vertices of the Minkowski
/// sum Σ_i Δ_{C_i} are exactly the sums Σ_i e_{j_i} over total
/// refinements of the cell.
pub fn cayley_to_mixed(s: &Subdivision) -> Vec<MixedCell> {
    let d = s.ambient().d();
    s.cells()
        .iter()
        .map(|cell| {
            let mut vertices: BTreeSet<Vec<Rat>> = BTreeSet::new();
            for t in cell.total_refinements() {
                let mut v = vec![Rat::zero(); d];
                for row in t.rows() {
                    let j = row.trailing_zeros() as usize;
                    v[j] = &v[j] + &Rat::one();
                }
                vertices.insert(v);
            }
            MixedCell {
                summands: cell.rows().to_vec(),
                vertices: vertices.into_iter().map(RationalPoint).collect(),
            }
        })
        .collect()
}

/// The GTOM of a subdivision: its face set over the same ambient graph.
pub fn subdiv_to_gtom(s: &Subdivision) -> Result<Gtom> {
    let (ok, diag) = check_subdivision(s);
    if !ok {
        return Err(Error::InvalidSubdivision(format!("{:?}", diag)));
    }
    let m = Gtom::new(s.ambient().clone(), faces_of_subdivision(s))?;
    debug_assert!(is_gtom_mode(&m, CheckMode::Fast).0, "face set of a valid subdivision must satisfy the axioms");
    Ok(m)
}

/// The subdivision encoded by a GTOM: its connected spanning types are
/// the cells.
pub fn gtom_to_subdiv(m: &Gtom) -> Result<Subdivision> {
    let (ok, reports) = is_gtom_mode(m, CheckMode::Fast);
    if !ok {
        let failing: Vec<&str> = reports.iter().filter(|r| !r.holds()).map(|r| r.axiom.name()).collect();
        return Err(Error::NotAGtom(failing.join(", ")));
    }
    let cells: BTreeSet<BipartiteType> = m
        .types()
        .iter()
        .filter(|t| t.is_connected() && t.is_spanning())
        .cloned()
        .collect();
    if cells.is_empty() {
        return Err(Error::InvalidSubdivision("no connected spanning types".into()));
    }
    let s = Subdivision::new(m.ambient().clone(), cells)?;
    debug_assert!(check_subdivision(&s).0, "cells of a GTOM must encode a subdivision");
    Ok(s)
}
