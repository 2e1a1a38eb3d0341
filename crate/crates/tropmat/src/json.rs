//! JSON encoding of every interface object, with 1-based indices and
//! "p/q" strings for exact rationals, plus schema-checked parsing that
//! reports errors with JSON-pointer paths.

use serde_json::{json, Map, Value};
use std::collections::{BTreeMap, BTreeSet};

use crate::axioms::{AxiomReport, Gtom, Witness};
use crate::error::{Error, Result};
use crate::generation::{EliminationCertificate, Labeling};
use crate::geometry::{FacetSplit, GraphFacet, Rat};
use crate::lifting::HeightFunction;
use crate::subdivision::{MixedCell, Subdivision, SubdivisionDiagnostics};
use crate::types::{mask_iter, BipartiteType, RightSet};

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(path, format!("missing field \"{}\"", key)))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(path, "expected a nonnegative integer"))
}

/// Serialize an exact rational as a reduced "p/q" string.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse "p/q" (or a bare integer "p") into an exact rational.
pub fn rat_from_string(s: &str, path: &str) -> Result<Rat> {
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: i128 = num.trim().parse().map_err(|_| schema(path, "bad rational numerator"))?;
    let q: i128 = den.trim().parse().map_err(|_| schema(path, "bad rational denominator"))?;
    if q == 0 {
        return Err(schema(path, "zero denominator"));
    }
    Ok(Rat::new(p, q))
}

fn rows_to_json(t: &BipartiteType) -> Value {
    Value::Array(
        t.rows()
            .iter()
            .map(|&r| Value::Array(mask_iter(r).map(|j| json!(j + 1)).collect()))
            .collect(),
    )
}

/// `{"n": …, "d": …, "rows": [[1-based right indices]…]}`.
pub fn graph_to_json(t: &BipartiteType) -> Value {
    json!({ "n": t.n(), "d": t.d(), "rows": rows_to_json(t) })
}

/// Parse a type/graph object; every row must be nonempty.
pub fn graph_from_json(v: &Value, path: &str) -> Result<BipartiteType> {
    let obj = as_object(v, path)?;
    let n = as_usize(get(obj, "n", path)?, &format!("{}/n", path))?;
    let d = as_usize(get(obj, "d", path)?, &format!("{}/d", path))?;
    if d == 0 || d > 32 {
        return Err(schema(&format!("{}/d", path), "d must be in 1..=32"));
    }
    let rows_path = format!("{}/rows", path);
    let rows_v = as_array(get(obj, "rows", path)?, &rows_path)?;
    if rows_v.len() != n {
        return Err(schema(&rows_path, format!("expected {} rows, found {}", n, rows_v.len())));
    }
    let mut rows: Vec<RightSet> = Vec::with_capacity(n);
    for (i, rv) in rows_v.iter().enumerate() {
        let row_path = format!("{}/{}", rows_path, i);
        let elems = as_array(rv, &row_path)?;
        let mut mask: RightSet = 0;
        for (k, ev) in elems.iter().enumerate() {
            let el_path = format!("{}/{}", row_path, k);
            let j = as_usize(ev, &el_path)?;
            if j < 1 || j > d {
                return Err(schema(&el_path, format!("right vertex {} outside 1..={}", j, d)));
            }
            mask |= 1 << (j - 1);
        }
        if mask == 0 {
            return Err(schema(&row_path, "row must be nonempty"));
        }
        rows.push(mask);
    }
    BipartiteType::new(d, rows).map_err(|e| schema(path, e.to_string()))
}

/// `{"ambient": <graph>, "types": [<graph>…]}`.
pub fn gtom_to_json(m: &Gtom) -> Value {
    json!({
        "ambient": graph_to_json(m.ambient()),
        "types": m.types().iter().map(graph_to_json).collect::<Vec<_>>(),
    })
}

pub fn gtom_from_json(v: &Value) -> Result<Gtom> {
    let obj = as_object(v, "")?;
    let ambient = graph_from_json(get(obj, "ambient", "")?, "/ambient")?;
    let types_v = as_array(get(obj, "types", "")?, "/types")?;
    let mut types = BTreeSet::new();
    for (i, tv) in types_v.iter().enumerate() {
        types.insert(graph_from_json(tv, &format!("/types/{}", i))?);
    }
    Gtom::new(ambient, types).map_err(|e| schema("", e.to_string()))
}

/// `{"ambient": <graph>, "cells": [<graph>…]}`.
pub fn subdivision_to_json(s: &Subdivision) -> Value {
    json!({
        "ambient": graph_to_json(s.ambient()),
        "cells": s.cells().iter().map(graph_to_json).collect::<Vec<_>>(),
    })
}

pub fn subdivision_from_json(v: &Value) -> Result<Subdivision> {
    let obj = as_object(v, "")?;
    let ambient = graph_from_json(get(obj, "ambient", "")?, "/ambient")?;
    let cells_v = as_array(get(obj, "cells", "")?, "/cells")?;
    let mut cells = BTreeSet::new();
    for (i, cv) in cells_v.iter().enumerate() {
        cells.insert(graph_from_json(cv, &format!("/cells/{}", i))?);
    }
    Subdivision::new(ambient, cells).map_err(|e| schema("", e.to_string()))
}

/// `{"edges": [[i, j]…], "values": ["p/q"…]}` with 1-based endpoints.
pub fn heights_to_json(h: &HeightFunction) -> Value {
    let mut edges = Vec::new();
    let mut values = Vec::new();
    for (&(i, j), r) in h.entries() {
        edges.push(json!([i + 1, j + 1]));
        values.push(json!(rat_to_string(r)));
    }
    json!({ "edges": edges, "values": values })
}

pub fn heights_from_json(v: &Value) -> Result<HeightFunction> {
    let obj = as_object(v, "")?;
    let edges_v = as_array(get(obj, "edges", "")?, "/edges")?;
    let values_v = as_array(get(obj, "values", "")?, "/values")?;
    if edges_v.len() != values_v.len() {
        return Err(schema("/values", "values must match edges in length"));
    }
    let mut heights = BTreeMap::new();
    for (k, (ev, hv)) in edges_v.iter().zip(values_v).enumerate() {
        let e_path = format!("/edges/{}", k);
        let pair = as_array(ev, &e_path)?;
        if pair.len() != 2 {
            return Err(schema(&e_path, "an edge is a pair [i, j]"));
        }
        let i = as_usize(&pair[0], &format!("{}/0", e_path))?;
        let j = as_usize(&pair[1], &format!("{}/1", e_path))?;
        if i < 1 || j < 1 {
            return Err(schema(&e_path, "edge endpoints are 1-based"));
        }
        let v_path = format!("/values/{}", k);
        let s = hv.as_str().ok_or_else(|| schema(&v_path, "expected a \"p/q\" string"))?;
        let r = rat_from_string(s, &v_path)?;
        if heights.insert((i - 1, j - 1), r).is_some() {
            return Err(schema(&e_path, "duplicate edge"));
        }
    }
    Ok(HeightFunction::new(heights))
}

fn rights_to_json(mask: RightSet) -> Value {
    Value::Array(mask_iter(mask).map(|j| json!(j + 1)).collect())
}

fn positions_to_json(positions: &[usize]) -> Value {
    Value::Array(positions.iter().map(|&i| json!(i + 1)).collect())
}

fn split_to_json(s: &FacetSplit) -> Value {
    json!({
        "positions1": positions_to_json(&s.positions1),
        "rights1": rights_to_json(s.rights1),
        "positions2": positions_to_json(&s.positions2),
        "rights2": rights_to_json(s.rights2),
    })
}

/// A facet subgraph (rows may be empty) with its vertex split.
pub fn facet_to_json(f: &GraphFacet) -> Value {
    json!({ "subgraph": graph_to_json(&f.subgraph), "split": split_to_json(&f.split) })
}

fn edge_to_json(e: (usize, usize)) -> Value {
    json!([e.0 + 1, e.1 + 1])
}

fn witness_to_json(w: &Witness) -> Value {
    match w {
        Witness::ExtraEdge { offender, edge } => json!({
            "kind": "extra_edge",
            "offender": graph_to_json(offender),
            "edge": edge_to_json(*edge),
        }),
        Witness::MissingBoundary { refinement } => json!({
            "kind": "missing_boundary",
            "refinement": graph_to_json(refinement),
        }),
        Witness::MissingRefinement { offender, partition, refinement } => json!({
            "kind": "missing_refinement",
            "offender": graph_to_json(offender),
            "partition": partition.blocks().iter().map(|&b| rights_to_json(b)).collect::<Vec<_>>(),
            "refinement": graph_to_json(refinement),
        }),
        Witness::IncompatiblePair { a, b, walk } => json!({
            "kind": "incompatible_pair",
            "a": graph_to_json(a),
            "b": graph_to_json(b),
            "walk": walk.iter().map(|&e| edge_to_json(e)).collect::<Vec<_>>(),
        }),
        Witness::MissingEliminant { a, b, position } => json!({
            "kind": "missing_eliminant",
            "a": graph_to_json(a),
            "b": graph_to_json(b),
            "position": position + 1,
        }),
    }
}

/// One entry per axiom: `{"axiom": name, "holds": bool, "witnesses": […]}`.
pub fn reports_to_json(reports: &[AxiomReport]) -> Value {
    Value::Array(
        reports
            .iter()
            .map(|r| {
                json!({
                    "axiom": r.axiom.name(),
                    "holds": r.holds(),
                    "witnesses": r.witnesses.iter().map(witness_to_json).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn diagnostics_to_json(d: &SubdivisionDiagnostics) -> Value {
    json!({
        "incompatible_pairs": d
            .incompatible_pairs
            .iter()
            .map(|(a, b)| json!({ "a": graph_to_json(a), "b": graph_to_json(b) }))
            .collect::<Vec<_>>(),
        "unshared_facets": d
            .unshared_facets
            .iter()
            .map(|(cell, f)| json!({ "cell": graph_to_json(cell), "facet": facet_to_json(f) }))
            .collect::<Vec<_>>(),
    })
}

pub fn certificate_to_json(c: &EliminationCertificate) -> Value {
    json!({
        "target": graph_to_json(&c.target),
        "steps": c
            .steps
            .iter()
            .map(|s| {
                json!({
                    "left": graph_to_json(&s.left),
                    "right": graph_to_json(&s.right),
                    "position": s.position + 1,
                    "result": graph_to_json(&s.result),
                })
            })
            .collect::<Vec<_>>(),
        "leaves": c.leaves.iter().map(graph_to_json).collect::<Vec<_>>(),
    })
}

pub fn labeling_to_json(l: &Labeling) -> Value {
    json!({
        "root": l.root + 1,
        "active": positions_to_json(&l.active),
        "levels": l
            .levels
            .iter()
            .map(|lv| {
                json!({
                    "agreeing": positions_to_json(&lv.agreeing),
                    "opposing": positions_to_json(&lv.opposing),
                    "rights": rights_to_json(lv.rights),
                })
            })
            .collect::<Vec<_>>(),
        "uncovered": rights_to_json(l.uncovered),
        "position_order": positions_to_json(&l.position_order),
    })
}

/// `{"summands": [[int…]…], "vertices": [["p/q"…]…]}` per cell.
pub fn mixed_cells_to_json(cells: &[MixedCell]) -> Value {
    Value::Array(
        cells
            .iter()
            .map(|c| {
                json!({
                    "summands": c.summands.iter().map(|&m| rights_to_json(m)).collect::<Vec<_>>(),
                    "vertices": c
                        .vertices
                        .iter()
                        .map(|p| Value::Array(p.0.iter().map(|r| json!(rat_to_string(r))).collect()))
                        .collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}
