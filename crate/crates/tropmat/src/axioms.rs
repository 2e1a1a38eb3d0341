//! The GTOM container and verification of the five axioms (Subgraph,
//! Generalized Boundary, Surrounding, Comparability, Elimination), with
//! witness-producing diagnostics.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::types::{BipartiteType, OrderedPartition};

/// A candidate G-tropical oriented matroid: an ambient graph and a
/// finite set of types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gtom {
    ambient: BipartiteType,
    types: BTreeSet<BipartiteType>,
}

impl Gtom {
    pub fn new(ambient: BipartiteType, types: BTreeSet<BipartiteType>) -> Result<Self> {
        if !ambient.is_connected() || !ambient.is_spanning() {
            return Err(Error::NotConnected(format!("{:?}", ambient)));
        }
        for t in &types {
            ambient.same_shape(t)?;
            if !t.is_proper_type() {
                return Err(Error::InvalidType(format!("{:?} has an empty row", t)));
            }
        }
        Ok(Gtom { ambient, types })
    }

    pub fn ambient(&self) -> &BipartiteType {
        &self.ambient
    }

    pub fn types(&self) -> &BTreeSet<BipartiteType> {
        &self.types
    }

    pub fn contains(&self, t: &BipartiteType) -> bool {
        self.types.contains(t)
    }

    pub fn n(&self) -> usize {
        self.ambient.n()
    }

    pub fn d(&self) -> usize {
        self.ambient.d()
    }
}

/// Whether a check collects every witness or stops at the first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CheckMode {
    #[default]
    Full,
    Fast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    Subgraph,
    GeneralizedBoundary,
    Surrounding,
    Comparability,
    Elimination,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Subgraph => "subgraph",
            Axiom::GeneralizedBoundary => "generalized_boundary",
            Axiom::Surrounding => "surrounding",
            Axiom::Comparability => "comparability",
            Axiom::Elimination => "elimination",
        }
    }
}

/// A counterexample record for a failed axiom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Witness {
    /// A type uses an edge absent from the ambient graph.
    ExtraEdge { offender: BipartiteType, edge: (usize, usize) },
    /// A total refinement of the ambient graph is missing.
    MissingBoundary { refinement: BipartiteType },
    /// A refinement of a stored type is missing.
    MissingRefinement { offender: BipartiteType, partition: OrderedPartition, refinement: BipartiteType },
    /// Two stored types admit a closed alternating walk outside their
    /// intersection.
    IncompatiblePair { a: BipartiteType, b: BipartiteType, walk: Vec<(usize, usize)> },
    /// No eliminant exists for a pair at a position.
    MissingEliminant { a: BipartiteType, b: BipartiteType, position: usize },
}

/// Outcome of one axiom check; `holds()` iff there are no witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub witnesses: Vec<Witness>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Each type must be a subgraph of the ambient graph.
pub fn check_subgraph(m: &Gtom) -> AxiomReport {
    check_subgraph_mode(m, CheckMode::Full)
}

pub fn check_subgraph_mode(m: &Gtom, mode: CheckMode) -> AxiomReport {
    let mut witnesses = Vec::new();
    'outer: for t in m.types() {
        for (i, j) in t.edges() {
            if !m.ambient().has_edge(i, j) {
                witnesses.push(Witness::ExtraEdge { offender: t.clone(), edge: (i, j) });
                if mode == CheckMode::Fast {
                    break 'outer;
                }
                break;
            }
        }
    }
    AxiomReport { axiom: Axiom::Subgraph, witnesses }
}

/// Every total refinement of the ambient graph must be a type.
pub fn check_generalized_boundary(m: &Gtom) -> AxiomReport {
    check_generalized_boundary_mode(m, CheckMode::Full)
}

pub fn check_generalized_boundary_mode(m: &Gtom, mode: CheckMode) -> AxiomReport {
    let mut witnesses = Vec::new();
    for r in m.ambient().total_refinements() {
        if !m.contains(&r) {
            witnesses.push(Witness::MissingBoundary { refinement: r });
            if mode == CheckMode::Fast {
                break;
            }
        }
    }
    AxiomReport { axiom: Axiom::GeneralizedBoundary, witnesses }
}

/// Closure under refinements, verified via coarse two-block partitions.
/// Coarse closure implies full closure since any refinement is a
/// composition of coarse prefix splits; `check_surrounding_exhaustive`
/// runs the all-ordered-partitions form for cross-checking at small d.
pub fn check_surrounding(m: &Gtom) -> AxiomReport {
    check_surrounding_mode(m, CheckMode::Full)
}

pub fn check_surrounding_mode(m: &Gtom, mode: CheckMode) -> AxiomReport {
    surrounding_with(m, &OrderedPartition::enumerate_coarse(m.d()), mode)
}

pub fn check_surrounding_exhaustive(m: &Gtom) -> AxiomReport {
    surrounding_with(m, &OrderedPartition::enumerate_all(m.d()), CheckMode::Full)
}

fn surrounding_with(m: &Gtom, partitions: &[OrderedPartition], mode: CheckMode) -> AxiomReport {
    let mut witnesses = Vec::new();
    'outer: for t in m.types() {
        for p in partitions {
            let r = t.refine(p);
            if !m.contains(&r) {
                witnesses.push(Witness::MissingRefinement {
                    offender: t.clone(),
                    partition: p.clone(),
                    refinement: r,
                });
                if mode == CheckMode::Fast {
                    break 'outer;
                }
            }
        }
    }
    AxiomReport { axiom: Axiom::Surrounding, witnesses }
}

/// Pairwise compatibility of all stored types.
pub fn check_comparability(m: &Gtom) -> AxiomReport {
    check_comparability_mode(m, CheckMode::Full)
}

pub fn check_comparability_mode(m: &Gtom, mode: CheckMode) -> AxiomReport {
    let mut witnesses = Vec::new();
    let types: Vec<_> = m.types().iter().collect();
    'outer: for (k, a) in types.iter().enumerate() {
        for b in &types[k + 1..] {
            if let Some(walk) = a.compatibility_violation(b).expect("same shape") {
                witnesses.push(Witness::IncompatiblePair {
                    a: (*a).clone(),
                    b: (*b).clone(),
                    walk,
                });
                if mode == CheckMode::Fast {
                    break 'outer;
                }
            }
        }
    }
    AxiomReport { axiom: Axiom::Comparability, witnesses }
}

/// All types C of the collection obtained by eliminating between A and B
/// at position i: C_i = A_i ∪ B_i and every other row is one of the two
/// rows or their union.
pub fn eliminants(
    m: &Gtom,
    a: &BipartiteType,
    b: &BipartiteType,
    i: usize,
) -> Result<BTreeSet<BipartiteType>> {
    if !m.contains(a) || !m.contains(b) {
        return Err(Error::NotAMember);
    }
    if i >= m.n() {
        return Err(Error::PositionOutOfRange(i + 1, m.n()));
    }
    Ok(eliminant_candidates(m, a, b, i))
}

/// Same search without the membership precondition; used internally where
/// A and B are known to be in the collection.
pub(crate) fn eliminant_candidates(
    m: &Gtom,
    a: &BipartiteType,
    b: &BipartiteType,
    i: usize,
) -> BTreeSet<BipartiteType> {
    let n = m.n();
    // Distinct row choices per position; when the product is small,
    // enumerate candidates and test membership, otherwise scan the set.
    let mut choices: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut product: u64 = 1;
    for i2 in 0..n {
        let mut c = vec![a.row(i2) | b.row(i2)];
        if i2 != i {
            for r in [a.row(i2), b.row(i2)] {
                if !c.contains(&r) {
                    c.push(r);
                }
            }
        }
        product = product.saturating_mul(c.len() as u64);
        choices.push(c);
    }
    let mut out = BTreeSet::new();
    if product <= 20_000 {
        let mut rows = vec![0u32; n];
        enumerate_candidates(&choices, 0, &mut rows, &mut |rows| {
            if let Ok(c) = BipartiteType::new(m.d(), rows.to_vec()) {
                if m.contains(&c) {
                    out.insert(c);
                }
            }
        });
    } else {
        for c in m.types() {
            if is_eliminant(a, b, i, c) {
                out.insert(c.clone());
            }
        }
    }
    out
}

fn enumerate_candidates(choices: &[Vec<u32>], i: usize, rows: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if i == choices.len() {
        f(rows);
        return;
    }
    for &r in &choices[i] {
        rows[i] = r;
        enumerate_candidates(choices, i + 1, rows, f);
    }
}

/// Row conditions of the elimination axiom, without any membership test.
pub fn is_eliminant(a: &BipartiteType, b: &BipartiteType, i: usize, c: &BipartiteType) -> bool {
    if c.row(i) != a.row(i) | b.row(i) {
        return false;
    }
    (0..a.n()).all(|i2| {
        let r = c.row(i2);
        r == a.row(i2) || r == b.row(i2) || r == a.row(i2) | b.row(i2)
    })
}

/// Elimination axiom: an eliminant exists for every pair and position.
pub fn check_elimination(m: &Gtom) -> AxiomReport {
    check_elimination_mode(m, CheckMode::Full)
}

pub fn check_elimination_mode(m: &Gtom, mode: CheckMode) -> AxiomReport {
    let mut witnesses = Vec::new();
    let types: Vec<_> = m.types().iter().collect();
    'outer: for a in &types {
        for b in &types {
            for i in 0..m.n() {
                if eliminant_candidates(m, a, b, i).is_empty() {
                    witnesses.push(Witness::MissingEliminant {
                        a: (*a).clone(),
                        b: (*b).clone(),
                        position: i,
                    });
                    if mode == CheckMode::Fast {
                        break 'outer;
                    }
                }
            }
        }
    }
    AxiomReport { axiom: Axiom::Elimination, witnesses }
}

/// Conjunction of the five axiom checks; all reports are returned.
pub fn is_gtom(m: &Gtom) -> (bool, Vec<AxiomReport>) {
    is_gtom_mode(m, CheckMode::Full)
}

pub fn is_gtom_mode(m: &Gtom, mode: CheckMode) -> (bool, Vec<AxiomReport>) {
    let reports = vec![
        check_subgraph_mode(m, mode),
        check_generalized_boundary_mode(m, mode),
        check_surrounding_mode(m, mode),
        check_comparability_mode(m, mode),
        check_elimination_mode(m, mode),
    ];
    let ok = reports.iter().all(|r| r.holds());
    (ok, reports)
}
