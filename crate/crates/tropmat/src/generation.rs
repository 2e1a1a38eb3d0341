//! Constructive machinery: generating a connected type from boundary
//! types by a series of eliminations (with a replayable certificate),
//! extending any type to a connected one, and producing the two cells
//! flanking an internal facet.

use std::collections::{BTreeMap, BTreeSet};

use crate::axioms::{eliminant_candidates, is_eliminant, Gtom};
use crate::error::{Error, Result};
use crate::geometry::{facets_graphtheoretic, FacetSplit};
use crate::types::{full_mask, mask_iter, BipartiteType, OrderedPartition, RightSet};

/// One level of the position labeling: the agreeing positions (empty at
/// level 0), the opposing positions, and the level's right set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub agreeing: Vec<usize>,
    pub opposing: Vec<usize>,
    pub rights: RightSet,
}

/// The outcome of labeling the active positions for one new right
/// vertex (or right set) against a prefix of already-processed rights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    /// The root position: an active position joining the new right set
    /// to the earlier prefix.
    pub root: usize,
    /// Positions whose row meets the prefix, in increasing order.
    pub active: Vec<usize>,
    /// Level 0 holds the new right set with its opposing positions;
    /// later levels hold one component each.
    pub levels: Vec<Level>,
    /// Prefix rights not assigned to any level.
    pub uncovered: RightSet,
    /// The right-vertex prefix the labeling works inside.
    pub universe: RightSet,
    /// The active positions reordered: root first, every prefix
    /// connected, level-k opposing and level-(k+1) agreeing positions
    /// after all level-k agreeing positions (k >= 1).
    pub position_order: Vec<usize>,
}

/// One elimination: `result` is an eliminant of `left` and `right` at
/// `position`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationStep {
    pub left: BipartiteType,
    pub right: BipartiteType,
    pub position: usize,
    pub result: BipartiteType,
}

/// A replayable derivation of a target type from boundary types.
/// `leaves` is the multiset of boundary types used, in discovery order;
/// each step's inputs are leaves or earlier results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationCertificate {
    pub target: BipartiteType,
    pub steps: Vec<EliminationStep>,
    pub leaves: Vec<BipartiteType>,
}

#[derive(Default)]
struct Recorder {
    steps: Vec<EliminationStep>,
    leaves: Vec<BipartiteType>,
}

/// An ordering of the right vertices of a connected type such that every
/// prefix induces a connected subgraph once the later rights are deleted.
/// Computed by reverse deletion, removing the largest right vertex whose
/// removal keeps the rest connected.
pub fn component_coherent_order(a: &BipartiteType) -> Result<Vec<usize>> {
    if !a.is_connected() {
        return Err(Error::NotConnected(format!("{:?}", a)));
    }
    let rows: BTreeMap<usize, RightSet> = (0..a.n()).map(|i| (i, a.row(i))).collect();
    view_coherent_order(&rows, a.covered_rights())
}

/// Whether `order` is a valid output of `component_coherent_order`-style
/// ordering for `a`: a permutation of the covered rights with every
/// prefix-induced subgraph connected.
pub fn is_coherent_order(a: &BipartiteType, order: &[usize]) -> bool {
    let covered = a.covered_rights();
    let mask: RightSet = order.iter().fold(0, |m, &j| m | (1 << j));
    if mask != covered || order.len() != covered.count_ones() as usize {
        return false;
    }
    let rows: BTreeMap<usize, RightSet> = (0..a.n()).map(|i| (i, a.row(i))).collect();
    let mut prefix: RightSet = 0;
    for &j in order {
        prefix |= 1 << j;
        if !view_connected(&rows, prefix) {
            return false;
        }
    }
    true
}

/// Connected components of `rows` masked to `rights`; positions whose
/// masked row is empty are skipped. Sorted by smallest position.
fn masked_components(rows: &BTreeMap<usize, RightSet>, rights: RightSet) -> Vec<(Vec<usize>, RightSet)> {
    let mut comps: Vec<(Vec<usize>, RightSet)> = Vec::new();
    for (&i, &row) in rows {
        let r = row & rights;
        if r == 0 {
            continue;
        }
        let mut merged = (vec![i], r);
        let mut rest = Vec::new();
        for c in comps.drain(..) {
            if c.1 & merged.1 != 0 {
                merged.0.extend(c.0);
                merged.1 |= c.1;
            } else {
                rest.push(c);
            }
        }
        rest.push(merged);
        comps = rest;
    }
    // Merging by pairwise right-set overlap may need several passes.
    loop {
        let mut changed = false;
        let mut out: Vec<(Vec<usize>, RightSet)> = Vec::new();
        for c in comps.drain(..) {
            if let Some(t) = out.iter_mut().find(|t| t.1 & c.1 != 0) {
                t.0.extend(c.0);
                t.1 |= c.1;
                changed = true;
            } else {
                out.push(c);
            }
        }
        comps = out;
        if !changed {
            break;
        }
    }
    for c in &mut comps {
        c.0.sort_unstable();
        c.0.dedup();
    }
    comps.sort_by_key(|c| c.0[0]);
    comps
}

/// One rights-bearing component covering all of `rights`.
fn view_connected(rows: &BTreeMap<usize, RightSet>, rights: RightSet) -> bool {
    let comps = masked_components(rows, rights);
    comps.len() == 1 && comps[0].1 == rights
}

/// Coherent ordering of `rights` for the graph given by `rows`.
fn view_coherent_order(rows: &BTreeMap<usize, RightSet>, rights: RightSet) -> Result<Vec<usize>> {
    let mut cur = rights;
    let mut removed = Vec::new();
    while cur.count_ones() > 1 {
        let mut found = None;
        for j in mask_iter(cur).collect::<Vec<_>>().into_iter().rev() {
            if view_connected(rows, cur & !(1 << j)) {
                found = Some(j);
                break;
            }
        }
        let Some(j) = found else {
            return Err(Error::Generation("no coherent right-vertex ordering exists".into()));
        };
        removed.push(j);
        cur &= !(1 << j);
    }
    let mut order: Vec<usize> = mask_iter(cur).collect();
    order.extend(removed.into_iter().rev());
    Ok(order)
}

/// The earliest element of `mask` in the ordering `order`.
fn earliest_in(order: &[usize], mask: RightSet) -> Option<usize> {
    order.iter().copied().find(|&j| mask & (1 << j) != 0)
}

struct CoreLabeling {
    active: Vec<usize>,
    levels: Vec<Level>,
    uncovered: RightSet,
}

/// Levels of the labeling: level 0 is `j0` with the positions seeing it
/// in `g`; each later level takes one residual component of `rows`
/// inside `universe`, preferring components connected back to the used
/// rights through labeled positions (smallest position breaks ties),
/// and marks the unlabeled positions seeing its rights as opposing.
fn core_labeling(
    g: &BipartiteType,
    rows: &BTreeMap<usize, RightSet>,
    view: RightSet,
    universe: RightSet,
    j0: RightSet,
) -> Result<CoreLabeling> {
    let active: Vec<usize> = rows
        .iter()
        .filter(|(_, &r)| r & universe != 0)
        .map(|(&i, _)| i)
        .collect();
    let opposing0: Vec<usize> = active
        .iter()
        .copied()
        .filter(|&i| g.row(i) & view & j0 != 0)
        .collect();
    let mut labeled: BTreeSet<usize> = opposing0.iter().copied().collect();
    let mut used = j0;
    let mut levels = vec![Level { agreeing: Vec::new(), opposing: opposing0, rights: j0 }];
    loop {
        let unlabeled: Vec<usize> = active.iter().copied().filter(|i| !labeled.contains(i)).collect();
        if unlabeled.is_empty() {
            break;
        }
        let residual = universe & !used;
        let sub_rows: BTreeMap<usize, RightSet> =
            unlabeled.iter().map(|&i| (i, rows[&i] & universe)).collect();
        let comps = masked_components(&sub_rows, residual);
        if comps.is_empty() {
            return Err(Error::Generation(
                "labeling stuck: an unlabeled active position has no residual rights".into(),
            ));
        }
        let reached = reachable_rights(g, rows, view, universe, &labeled, used);
        let pick = comps
            .iter()
            .find(|c| c.1 & reached != 0)
            .unwrap_or(&comps[0])
            .clone();
        let (agreeing, jk) = pick;
        let opposing: Vec<usize> = unlabeled
            .iter()
            .copied()
            .filter(|&i| !agreeing.contains(&i) && g.row(i) & view & jk != 0)
            .collect();
        labeled.extend(agreeing.iter().copied());
        labeled.extend(opposing.iter().copied());
        used |= jk;
        levels.push(Level { agreeing, opposing, rights: jk });
    }
    Ok(CoreLabeling { active, levels, uncovered: universe & !used })
}

/// Rights reachable from the used rights through labeled positions:
/// edges are the labeled positions' rows (inside `universe`) plus the
/// ambient edges from labeled positions to used rights.
fn reachable_rights(
    g: &BipartiteType,
    rows: &BTreeMap<usize, RightSet>,
    view: RightSet,
    universe: RightSet,
    labeled: &BTreeSet<usize>,
    used: RightSet,
) -> RightSet {
    let mut reached_r = used;
    let mut reached_p: BTreeSet<usize> = BTreeSet::new();
    loop {
        let mut changed = false;
        for &i in labeled {
            if reached_p.contains(&i) {
                continue;
            }
            let adj = (rows[&i] & universe) | (g.row(i) & view & used);
            if adj & reached_r != 0 {
                reached_p.insert(i);
                let new = rows[&i] & universe & !reached_r;
                if new != 0 {
                    reached_r |= new;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    reached_r
}

/// Position labeling for the prefix `1..=j` of the right vertices (in
/// the current ordering), with the new right being `j`. `a` is the goal
/// type and `prior` the type already generated for the prefix `1..j`.
pub fn label_positions(
    g: &BipartiteType,
    a: &BipartiteType,
    j: usize,
    prior: &BipartiteType,
) -> Result<Labeling> {
    g.same_shape(a)?;
    g.same_shape(prior)?;
    if j < 2 || j > g.d() {
        return Err(Error::Precondition(format!("prefix length {} out of range 2..={}", j, g.d())));
    }
    let universe: RightSet = (1u32 << j) - 1;
    let j0: RightSet = 1 << (j - 1);
    let view = full_mask(g.d());
    let rows: BTreeMap<usize, RightSet> = (0..a.n()).map(|i| (i, a.row(i))).collect();
    let masked: BTreeMap<usize, RightSet> = rows.iter().map(|(&i, &r)| (i, r & universe)).collect();
    if !view_connected(&masked, universe) {
        return Err(Error::Generation(format!(
            "coherence assumption violated: the first {} right vertices are not in one component",
            j
        )));
    }
    let root = (0..a.n())
        .find(|&i| a.row(i) & j0 != 0 && a.row(i) & (universe & !j0) != 0)
        .ok_or_else(|| Error::Generation("no valid root position".into()))?;
    let core = core_labeling(g, &rows, view, universe, j0)?;
    for (k, lvl) in core.levels.iter().enumerate().skip(1) {
        for &i in &lvl.agreeing {
            let pr = prior.row(i);
            if pr == 0 || pr & !lvl.rights != 0 {
                return Err(Error::Generation(format!(
                    "prior row {} at agreeing position {} is not a nonempty subset of level {} rights",
                    pr,
                    i + 1,
                    k
                )));
            }
        }
    }
    let position_order = order_positions(&core, &rows, universe, root)?;
    Ok(Labeling {
        root,
        active: core.active,
        levels: core.levels,
        uncovered: core.uncovered,
        universe,
        position_order,
    })
}

/// Greedy ordering of the active positions: root first; each next
/// position must share a prefix right with the ones placed so far and
/// respect the level constraints; smallest index breaks ties.
fn order_positions(
    core: &CoreLabeling,
    rows: &BTreeMap<usize, RightSet>,
    universe: RightSet,
    root: usize,
) -> Result<Vec<usize>> {
    // (level, is_agreeing) per active position
    let mut kind: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
    for (k, lvl) in core.levels.iter().enumerate() {
        for &i in &lvl.agreeing {
            kind.insert(i, (k, true));
        }
        for &i in &lvl.opposing {
            kind.insert(i, (k, false));
        }
    }
    let mut placed = vec![root];
    let mut placed_set: BTreeSet<usize> = [root].into();
    let mut touched = rows[&root] & universe;
    let mut agree_left: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, lvl) in core.levels.iter().enumerate() {
        agree_left.insert(k, lvl.agreeing.iter().filter(|&&i| i != root).count());
    }
    while placed.len() < core.active.len() {
        let cand = core.active.iter().copied().find(|&i| {
            if placed_set.contains(&i) || rows[&i] & universe & touched == 0 {
                return false;
            }
            let (k, agreeing) = kind[&i];
            if agreeing {
                k < 2 || agree_left[&(k - 1)] == 0
            } else {
                k == 0 || agree_left[&k] == 0
            }
        });
        let Some(i) = cand else {
            return Err(Error::Generation("cannot order the active positions".into()));
        };
        placed.push(i);
        placed_set.insert(i);
        touched |= rows[&i] & universe;
        let (k, agreeing) = kind[&i];
        if agreeing {
            *agree_left.get_mut(&k).unwrap() -= 1;
        }
    }
    Ok(placed)
}

/// One block of the chained generation: generate the `target` rows
/// inside the rights of group `group`.
struct ChainBlock {
    group: usize,
    target: BTreeMap<usize, RightSet>,
}

type Leaf<'a> = &'a mut dyn FnMut(&mut Recorder, &[usize]) -> Result<BipartiteType>;

/// Process the blocks from last to first; with no blocks left,
/// concatenate the per-group orders (unordered groups ascending) and
/// hand the total order to `leaf`.
fn run_chain(
    m: &Gtom,
    groups: &[RightSet],
    blocks: &[ChainBlock],
    orders: &mut Vec<Option<Vec<usize>>>,
    leaf: Leaf,
    rec: &mut Recorder,
) -> Result<BipartiteType> {
    let Some((blk, rest)) = blocks.split_last() else {
        let mut order = Vec::new();
        for (gi, &grp) in groups.iter().enumerate() {
            match &orders[gi] {
                Some(o) => order.extend_from_slice(o),
                None => order.extend(mask_iter(grp)),
            }
        }
        return leaf(rec, &order);
    };
    let gi = blk.group;
    let mut inner = |rec: &mut Recorder, pi: &[usize]| -> Result<BipartiteType> {
        orders[gi] = Some(pi.to_vec());
        let r = run_chain(m, groups, rest, orders, leaf, rec);
        orders[gi] = None;
        r
    };
    generate_in_view(m, groups[gi], &blk.target, &mut inner, rec)
}

fn view_equal(w: &BipartiteType, target: &BTreeMap<usize, RightSet>, view: RightSet) -> bool {
    target.iter().all(|(&i, &tv)| w.row(i) & view == tv)
}

/// Generate, inside the rights of `view`, a type whose rows at the
/// target positions match `target`, by working along a coherent order of
/// the view and eliminating at a root position each round. `leaf`
/// supplies the type corresponding to any total order of the view.
fn generate_in_view(
    m: &Gtom,
    view: RightSet,
    target: &BTreeMap<usize, RightSet>,
    leaf: Leaf,
    rec: &mut Recorder,
) -> Result<BipartiteType> {
    let g = m.ambient();
    let sigma = view_coherent_order(target, view)?;
    let r = sigma.len();
    let mut w = leaf(rec, &sigma)?;
    for jj in 2..=r {
        if view_equal(&w, target, view) {
            break;
        }
        let jbit: RightSet = 1 << sigma[jj - 1];
        let p_prev: RightSet = sigma[..jj - 1].iter().fold(0, |m2, &x| m2 | (1 << x));
        let pj = p_prev | jbit;
        let root = target
            .iter()
            .find(|(_, &tv)| tv & jbit != 0 && tv & p_prev != 0)
            .map(|(&i, _)| i)
            .ok_or_else(|| {
                Error::Generation(format!("no root position for right vertex {}", sigma[jj - 1] + 1))
            })?;
        let core = core_labeling(g, target, view, pj, jbit)?;
        let mut groups = vec![jbit];
        for lvl in &core.levels[1..] {
            groups.push(lvl.rights);
        }
        if core.uncovered != 0 {
            groups.push(core.uncovered);
        }
        for &x in &sigma[jj..] {
            groups.push(1 << x);
        }
        let mut blocks = Vec::new();
        for (k, lvl) in core.levels.iter().enumerate().skip(1) {
            let mut btarget = BTreeMap::new();
            for &i in &lvl.agreeing {
                let wr = w.row(i) & view;
                if wr == 0 || wr & !lvl.rights != 0 {
                    return Err(Error::Generation(format!(
                        "agreeing position {} carries row outside its level {} rights",
                        i + 1,
                        k
                    )));
                }
                btarget.insert(i, wr);
            }
            blocks.push(ChainBlock { group: k, target: btarget });
        }
        blocks.reverse();
        let mut orders: Vec<Option<Vec<usize>>> = vec![None; groups.len()];
        let b = run_chain(m, &groups, &blocks, &mut orders, leaf, rec)?;
        validate_b(&core.levels, &w, &b, view)?;
        let chosen = eliminant_candidates(m, &w, &b, root)
            .into_iter()
            .find(|c| bullets_ok(c, target, g, view, pj, &sigma))
            .ok_or_else(|| {
                Error::Generation(format!(
                    "no admissible eliminant between {:?} and {:?} at position {}",
                    w,
                    b,
                    root + 1
                ))
            })?;
        rec.steps.push(EliminationStep {
            left: w.clone(),
            right: b,
            position: root,
            result: chosen.clone(),
        });
        w = chosen;
    }
    if !view_equal(&w, target, view) {
        return Err(Error::Generation(format!(
            "generated {:?} does not match the goal on its right set",
            w
        )));
    }
    Ok(w)
}

/// The three per-position invariants a partial result must satisfy
/// against the goal, restricted to the view and prefix `pj`.
fn bullets_ok(
    c: &BipartiteType,
    target: &BTreeMap<usize, RightSet>,
    g: &BipartiteType,
    view: RightSet,
    pj: RightSet,
    sigma: &[usize],
) -> bool {
    target.iter().all(|(&i, &tv)| {
        let cv = c.row(i) & view;
        let gv = g.row(i) & view;
        if gv & pj == 0 {
            match earliest_in(sigma, gv) {
                Some(j) => cv == 1 << j,
                None => false,
            }
        } else if tv & pj == 0 {
            cv != 0 && cv & !pj == 0
        } else {
            cv == tv & pj
        }
    })
}

/// The structural claims about a chained-generation result: agreeing
/// rows equal the prior's, opposing rows are nonempty subsets of their
/// level rights disjoint from the prior's (unless level 0 and equal).
fn validate_b(levels: &[Level], prior: &BipartiteType, b: &BipartiteType, view: RightSet) -> Result<()> {
    for (k, lvl) in levels.iter().enumerate() {
        for &i in &lvl.agreeing {
            if b.row(i) & view != prior.row(i) & view {
                return Err(Error::Generation(format!(
                    "agreeing position {} of {:?} differs from the prior type",
                    i + 1,
                    b
                )));
            }
        }
        for &i in &lvl.opposing {
            let bv = b.row(i) & view;
            let pv = prior.row(i) & view;
            if bv == 0 || bv & !lvl.rights != 0 {
                return Err(Error::Generation(format!(
                    "opposing position {} of {:?} is not a nonempty subset of its level {} rights",
                    i + 1,
                    b,
                    k
                )));
            }
            if bv & pv != 0 && !(k == 0 && bv == pv) {
                return Err(Error::Generation(format!(
                    "opposing position {} of {:?} overlaps the prior type",
                    i + 1,
                    b
                )));
            }
        }
    }
    Ok(())
}

fn boundary_leaf<'a>(m: &'a Gtom) -> impl FnMut(&mut Recorder, &[usize]) -> Result<BipartiteType> + 'a {
    move |rec: &mut Recorder, order: &[usize]| {
        let p = OrderedPartition::total(m.d(), order)?;
        let t = m.ambient().refine(&p);
        if !m.contains(&t) {
            return Err(Error::Generation(format!(
                "required boundary type {:?} is not in the collection",
                t
            )));
        }
        rec.leaves.push(t.clone());
        Ok(t)
    }
}

/// Derive `a` from boundary types by eliminations, returning a
/// replayable certificate. `a` must be a connected member of `m`.
pub fn generate_type(m: &Gtom, a: &BipartiteType) -> Result<EliminationCertificate> {
    if !m.contains(a) {
        return Err(Error::NotAMember);
    }
    // Boundary types need no eliminations (and may leave right vertices
    // uncovered, so this precedes the connectivity requirement).
    if m.ambient().total_refinements().contains(a) {
        return Ok(EliminationCertificate { target: a.clone(), steps: Vec::new(), leaves: vec![a.clone()] });
    }
    if !a.is_connected() {
        return Err(Error::NotConnected(format!("{:?}", a)));
    }
    let mut rec = Recorder::default();
    let target: BTreeMap<usize, RightSet> = (0..a.n()).map(|i| (i, a.row(i))).collect();
    let mut leaf = boundary_leaf(m);
    let w = generate_in_view(m, full_mask(m.d()), &target, &mut leaf, &mut rec)?;
    debug_assert_eq!(&w, a);
    Ok(EliminationCertificate { target: a.clone(), steps: rec.steps, leaves: rec.leaves })
}

/// Build the flank type B for one labeling round: agreeing rows are the
/// prior's, opposing rows live inside their level rights. Produced by
/// chained generation over the block order (new right | level rights …
/// | uncovered | remaining rights), seeded by boundary types.
pub fn build_b(
    m: &Gtom,
    a: &BipartiteType,
    labeling: &Labeling,
    prior: &BipartiteType,
) -> Result<(BipartiteType, EliminationCertificate)> {
    m.ambient().same_shape(a)?;
    m.ambient().same_shape(prior)?;
    let view = full_mask(m.d());
    let j0 = labeling.levels[0].rights;
    let mut groups = vec![j0];
    for lvl in &labeling.levels[1..] {
        groups.push(lvl.rights);
    }
    if labeling.uncovered != 0 {
        groups.push(labeling.uncovered);
    }
    for x in mask_iter(view & !labeling.universe) {
        groups.push(1 << x);
    }
    let mut blocks = Vec::new();
    for (k, lvl) in labeling.levels.iter().enumerate().skip(1) {
        let mut btarget = BTreeMap::new();
        for &i in &lvl.agreeing {
            let pr = prior.row(i);
            if pr == 0 || pr & !lvl.rights != 0 {
                return Err(Error::Generation(format!(
                    "prior row at agreeing position {} is not a nonempty subset of level {} rights",
                    i + 1,
                    k
                )));
            }
            btarget.insert(i, pr);
        }
        blocks.push(ChainBlock { group: k, target: btarget });
    }
    blocks.reverse();
    let mut rec = Recorder::default();
    let mut leaf = boundary_leaf(m);
    let mut orders: Vec<Option<Vec<usize>>> = vec![None; groups.len()];
    let b = run_chain(m, &groups, &blocks, &mut orders, &mut leaf, &mut rec)?;
    validate_b(&labeling.levels, prior, &b, view)?;
    let cert = EliminationCertificate { target: b.clone(), steps: rec.steps, leaves: rec.leaves };
    Ok((b, cert))
}

/// One strict-growth round: given a member `a` with a connected
/// component on `comp_positions` / `comp_rights`, produce a member
/// strictly containing `a` that joins the component to the rest. The
/// flank type agrees with `a` on the component, then the good/bad
/// elimination loop runs until strict containment.
fn strict_extension(
    m: &Gtom,
    a: &BipartiteType,
    comp_positions: &[usize],
    comp_rights: RightSet,
) -> Result<BipartiteType> {
    let g = m.ambient();
    let n = m.n();
    let view = full_mask(m.d());
    let in_comp: Vec<bool> = {
        let mut v = vec![false; n];
        for &i in comp_positions {
            v[i] = true;
        }
        v
    };
    let rows: BTreeMap<usize, RightSet> =
        (0..n).filter(|&i| !in_comp[i]).map(|i| (i, a.row(i))).collect();
    if rows.is_empty() {
        return Err(Error::Generation("no positions outside the component".into()));
    }
    let core = core_labeling(g, &rows, view, view, comp_rights)?;
    let root = *core.levels[0].opposing.first().ok_or_else(|| {
        Error::Generation("no outside position sees the component's rights in the ambient graph".into())
    })?;
    let mut groups = vec![comp_rights];
    for lvl in &core.levels[1..] {
        groups.push(lvl.rights);
    }
    if core.uncovered != 0 {
        groups.push(core.uncovered);
    }
    let mut blocks = Vec::new();
    for (k, lvl) in core.levels.iter().enumerate().skip(1) {
        let mut btarget = BTreeMap::new();
        for &i in &lvl.agreeing {
            let pr = a.row(i);
            if pr == 0 || pr & !lvl.rights != 0 {
                return Err(Error::Generation(format!(
                    "row at agreeing position {} is not a nonempty subset of level {} rights",
                    i + 1,
                    k
                )));
            }
            btarget.insert(i, pr);
        }
        blocks.push(ChainBlock { group: k, target: btarget });
    }
    blocks.reverse();
    if !comp_positions.is_empty() {
        let btarget: BTreeMap<usize, RightSet> =
            comp_positions.iter().map(|&i| (i, a.row(i) & comp_rights)).collect();
        blocks.push(ChainBlock { group: 0, target: btarget });
    }
    let mut rec = Recorder::default();
    let mut leaf = boundary_leaf(m);
    let mut orders: Vec<Option<Vec<usize>>> = vec![None; groups.len()];
    let mut b = run_chain(m, &groups, &blocks, &mut orders, &mut leaf, &mut rec)?;
    for &i in comp_positions {
        if b.row(i) != a.row(i) {
            return Err(Error::Generation(format!(
                "flank type {:?} differs from the input on the kept component",
                b
            )));
        }
    }
    validate_b(&core.levels, a, &b, view)?;
    // Good/bad loop: eliminate at a bad (disjoint) position until b
    // contains a, strictly somewhere.
    let mut prev_bad = usize::MAX;
    let mut first = true;
    loop {
        let mut bads = Vec::new();
        let mut very = false;
        for i in 0..n {
            let av = a.row(i);
            let bv = b.row(i);
            if av & bv == 0 {
                bads.push(i);
            } else if av & !bv == 0 {
                very |= bv != av;
            } else {
                return Err(Error::Generation(format!(
                    "position {} is neither good nor bad between {:?} and {:?}",
                    i + 1,
                    a,
                    b
                )));
            }
        }
        if bads.is_empty() {
            if very {
                return Ok(b);
            }
            return Err(Error::Generation("extension did not strictly grow the type".into()));
        }
        if bads.len() >= prev_bad {
            return Err(Error::Generation("bad position count did not decrease".into()));
        }
        prev_bad = bads.len();
        let pos = if first && bads.contains(&root) { root } else { bads[0] };
        first = false;
        b = eliminant_candidates(m, a, &b, pos).into_iter().next().ok_or_else(|| {
            Error::Generation(format!(
                "no eliminant between {:?} and {:?} at position {}",
                a,
                b,
                pos + 1
            ))
        })?;
    }
}

/// A connected member of `m` containing `a` rowwise. Repeatedly picks a
/// component (or an uncovered right vertex) that the ambient graph joins
/// to the outside and grows strictly until connected.
pub fn extend_to_connected(m: &Gtom, a: &BipartiteType) -> Result<BipartiteType> {
    if !m.contains(a) {
        return Err(Error::NotAMember);
    }
    let g = m.ambient();
    let mut cur = a.clone();
    while !cur.is_connected() {
        let decomp = cur.components();
        let mut cands: Vec<(RightSet, Vec<usize>)> = decomp
            .components
            .iter()
            .filter(|c| c.rights != 0)
            .map(|c| (c.rights, c.positions.clone()))
            .collect();
        for j in mask_iter(decomp.isolated_right) {
            cands.push((1 << j, Vec::new()));
        }
        cands.sort();
        let pick = cands
            .into_iter()
            .find(|(rights, positions)| {
                (0..m.n()).any(|i| !positions.contains(&i) && g.row(i) & rights != 0)
            })
            .ok_or_else(|| {
                Error::Generation("no component can be joined to the rest via the ambient graph".into())
            })?;
        cur = strict_extension(m, &cur, &pick.1, pick.0)?;
    }
    Ok(cur)
}

/// The two distinct connected members flanking an internal facet `h`
/// with the given component split: the first connects side-1 positions
/// to side-2 rights, the second the other way around.
pub fn facet_sharing_witnesses(
    m: &Gtom,
    h: &BipartiteType,
    split: &FacetSplit,
) -> Result<(BipartiteType, BipartiteType)> {
    if !m.contains(h) {
        return Err(Error::NotAMember);
    }
    let g = m.ambient();
    for &i in &split.positions1 {
        if h.row(i) & split.rights2 != 0 {
            return Err(Error::Precondition("split does not separate the facet's components".into()));
        }
    }
    for &i in &split.positions2 {
        if h.row(i) & split.rights1 != 0 {
            return Err(Error::Precondition("split does not separate the facet's components".into()));
        }
    }
    for f in facets_graphtheoretic(g) {
        if h.is_subgraph(&f.subgraph)? {
            return Err(Error::Precondition(
                "the facet lies in a boundary facet of the ambient polytope".into(),
            ));
        }
    }
    let cross12 = split.positions1.iter().any(|&i| g.row(i) & split.rights2 != 0);
    let cross21 = split.positions2.iter().any(|&i| g.row(i) & split.rights1 != 0);
    if !cross12 || !cross21 {
        return Err(Error::Precondition(
            "the ambient graph lacks a crossing edge for one side of the split".into(),
        ));
    }
    let e1 = strict_extension(m, h, &split.positions2, split.rights2)?;
    let h1 = extend_to_connected(m, &e1)?;
    let e2 = strict_extension(m, h, &split.positions1, split.rights1)?;
    let h2 = extend_to_connected(m, &e2)?;
    let ok1 = h.is_subgraph(&h1)?
        && h1.is_connected()
        && split.positions1.iter().any(|&i| h1.row(i) & split.rights2 != 0);
    let ok2 = h.is_subgraph(&h2)?
        && h2.is_connected()
        && split.positions2.iter().any(|&i| h2.row(i) & split.rights1 != 0);
    if !ok1 || !ok2 || h1 == h2 {
        return Err(Error::NoWitness(format!(
            "no pair of distinct connected types flanks {:?}",
            h
        )));
    }
    Ok((h1, h2))
}

/// Replay a certificate against `m`: every leaf must be a boundary type
/// of the collection, every step a valid elimination between available
/// types, and the final result the target.
pub fn verify_certificate(m: &Gtom, cert: &EliminationCertificate) -> Result<()> {
    let boundary = m.ambient().total_refinements();
    let mut avail: BTreeSet<BipartiteType> = BTreeSet::new();
    for leaf in &cert.leaves {
        if !boundary.contains(leaf) {
            return Err(Error::Generation(format!(
                "leaf {:?} is not a total refinement of the ambient graph",
                leaf
            )));
        }
        if !m.contains(leaf) {
            return Err(Error::Generation(format!("leaf {:?} is not in the collection", leaf)));
        }
        avail.insert(leaf.clone());
    }
    for step in &cert.steps {
        if !avail.contains(&step.left) || !avail.contains(&step.right) {
            return Err(Error::Generation("a step uses an unavailable type".into()));
        }
        if step.position >= m.n() {
            return Err(Error::PositionOutOfRange(step.position + 1, m.n()));
        }
        if !is_eliminant(&step.left, &step.right, step.position, &step.result) {
            return Err(Error::Generation(format!(
                "step result {:?} is not an eliminant of its inputs",
                step.result
            )));
        }
        if !m.contains(&step.result) {
            return Err(Error::Generation(format!(
                "step result {:?} is not in the collection",
                step.result
            )));
        }
        avail.insert(step.result.clone());
    }
    let final_ok = match cert.steps.last() {
        Some(s) => s.result == cert.target,
        None => avail.contains(&cert.target),
    };
    if !final_ok {
        return Err(Error::Generation("certificate does not end at its target".into()));
    }
    Ok(())
}
