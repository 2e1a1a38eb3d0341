//! Deterministic SVG rendering of the mixed subdivision of nΔ^{d-1}
//! for d ∈ {2, 3}, with an optional dashed overlay of the dual
//! arrangement (barycenters joined across shared internal walls, rays
//! through boundary walls).

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::geometry::{convex_hull_2d, facets_graphtheoretic, Rat};
use crate::subdivision::{cayley_to_mixed, internal_facet_pairing, Subdivision};
use crate::types::BipartiteType;

/// Rendering options; `scale` is pixels per coordinate unit.
#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub scale: f64,
    pub show_dual: bool,
    pub labels: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { scale: 120.0, show_dual: false, labels: false }
    }
}

const MARGIN: f64 = 40.0;
const SQRT3_HALF: f64 = 0.866_025_403_784_438_6;
const FILLS: [&str; 6] = ["#cfe8ff", "#ffe3cf", "#d6f5d6", "#f5d6f0", "#fff3b0", "#d9d9f3"];

fn fmt(x: f64) -> String {
    let r = (x * 1000.0).round() / 1000.0;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{:.3}", r)
}

fn rat_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(0.0) / r.denom().to_f64().unwrap_or(1.0)
}

/// Planar coordinates of a mixed-subdivision point: the simplex
/// (x_1 + … + x_d = n) drawn as a segment (d = 2) or an equilateral
/// triangle (d = 3).
fn project(x: &[Rat], d: usize) -> (f64, f64) {
    match d {
        2 => (rat_f64(&x[1]), 0.0),
        3 => {
            let u = rat_f64(&x[1]) + rat_f64(&x[2]) / 2.0;
            let v = rat_f64(&x[2]) * SQRT3_HALF;
            (u, v)
        }
        _ => unreachable!("projection is defined for d in {{2, 3}}"),
    }
}

/// Exact pre-projection used for hull ordering: an affine image of the
/// planar embedding, so the hull order carries over.
fn project_exact(x: &[Rat], d: usize) -> Vec<Rat> {
    match d {
        2 => vec![x[1].clone(), Rat::new(0, 1)],
        3 => vec![&x[1] + &(&x[2] / Rat::new(2, 1)), x[2].clone()],
        _ => unreachable!(),
    }
}

struct Canvas {
    scale: f64,
    height: f64,
}

impl Canvas {
    fn place(&self, (u, v): (f64, f64)) -> (f64, f64) {
        (MARGIN + u * self.scale, MARGIN + self.height - v * self.scale)
    }
}

/// Vertices a mixed cell shares with one of its walls: the points of
/// the total refinements that fit inside the wall's subgraph.
fn wall_points(cell: &BipartiteType, wall: &BipartiteType) -> Vec<Vec<Rat>> {
    let d = cell.d();
    let mut out = Vec::new();
    for t in cell.total_refinements() {
        if t.is_subgraph(wall).unwrap_or(false) {
            let mut v = vec![Rat::new(0, 1); d];
            for row in t.rows() {
                let j = row.trailing_zeros() as usize;
                v[j] = &v[j] + &Rat::new(1, 1);
            }
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out.sort();
    out
}

fn barycenter(points: &[(f64, f64)]) -> (f64, f64) {
    let k = points.len() as f64;
    let (su, sv) = points.iter().fold((0.0, 0.0), |(a, b), &(u, v)| (a + u, b + v));
    (su / k, sv / k)
}

/// Render the mixed subdivision as an SVG 1.1 document. Output is
/// byte-identical for identical input and spec.
pub fn render_mixed(s: &Subdivision, spec: &RenderSpec) -> Result<String> {
    let d = s.ambient().d();
    if d != 2 && d != 3 {
        return Err(Error::RenderDimension(d));
    }
    if !(spec.scale > 0.0) {
        return Err(Error::Precondition("scale must be positive".into()));
    }
    if s.cells().is_empty() {
        return Err(Error::Precondition("nothing to render: empty cell list".into()));
    }
    let n = s.ambient().n() as f64;
    let canvas = Canvas { scale: spec.scale, height: if d == 3 { n * SQRT3_HALF * spec.scale } else { 24.0 } };
    let width = n * spec.scale + 2.0 * MARGIN;
    let height = canvas.height + 2.0 * MARGIN;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        fmt(width),
        fmt(height),
        fmt(width),
        fmt(height)
    ));
    let cells: Vec<&BipartiteType> = s.cells().iter().collect();
    let mixed = cayley_to_mixed(s);
    // per cell: projected vertices in hull order, and the barycenter
    let mut polys: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut centers: Vec<(f64, f64)> = Vec::new();
    for mc in &mixed {
        let exact: Vec<Vec<Rat>> = mc.vertices.iter().map(|p| project_exact(&p.0, d)).collect();
        let hull = convex_hull_2d(&exact);
        let pts: Vec<(f64, f64)> = if hull.len() >= 3 {
            hull.iter().map(|q| (rat_f64(&q[0]), rat_f64(&q[1]) * SQRT3_HALF)).collect()
        } else {
            let mut e = exact.clone();
            e.sort();
            e.dedup();
            e.iter().map(|q| (rat_f64(&q[0]), rat_f64(&q[1]) * SQRT3_HALF)).collect()
        };
        let placed: Vec<(f64, f64)> = pts.iter().map(|&p| canvas.place(p)).collect();
        centers.push(barycenter(&placed));
        polys.push(placed);
    }
    for (k, poly) in polys.iter().enumerate() {
        if poly.len() >= 3 {
            let points: Vec<String> = poly.iter().map(|&(x, y)| format!("{},{}", fmt(x), fmt(y))).collect();
            out.push_str(&format!(
                "  <polygon points=\"{}\" fill=\"{}\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n",
                points.join(" "),
                FILLS[k % FILLS.len()]
            ));
        } else if poly.len() == 2 {
            out.push_str(&format!(
                "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\" stroke-width=\"3\"/>\n",
                fmt(poly[0].0),
                fmt(poly[0].1),
                fmt(poly[1].0),
                fmt(poly[1].1)
            ));
            for &(x, y) in poly {
                out.push_str(&format!(
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#000000\"/>\n",
                    fmt(x),
                    fmt(y)
                ));
            }
        } else if poly.len() == 1 {
            out.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#000000\"/>\n",
                fmt(poly[0].0),
                fmt(poly[0].1)
            ));
        }
    }
    if spec.show_dual {
        render_dual(s, &cells, &centers, &canvas, d, &mut out)?;
    }
    if spec.labels {
        for (k, cell) in cells.iter().enumerate() {
            let (x, y) = centers[k];
            out.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">{:?}</text>\n",
                fmt(x),
                fmt(y - 6.0),
                cell
            ));
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Dashed dual sketch: a segment between the barycenters of the two
/// cells meeting at each internal wall, and a ray from a cell's
/// barycenter out through each of its boundary walls.
fn render_dual(
    s: &Subdivision,
    cells: &[&BipartiteType],
    centers: &[(f64, f64)],
    canvas: &Canvas,
    d: usize,
    out: &mut String,
) -> Result<()> {
    let dash = "stroke=\"#cc0000\" stroke-width=\"1.2\" stroke-dasharray=\"6,4\"";
    let index_of = |t: &BipartiteType| cells.iter().position(|c| *c == t).expect("cell present");
    for pairing in internal_facet_pairing(s)? {
        let a = centers[index_of(&pairing.connects12)];
        let b = centers[index_of(&pairing.connects21)];
        out.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {}/>\n",
            fmt(a.0),
            fmt(a.1),
            fmt(b.0),
            fmt(b.1),
            dash
        ));
    }
    let ambient_facets = facets_graphtheoretic(s.ambient());
    for (k, cell) in cells.iter().enumerate() {
        for wall in facets_graphtheoretic(cell) {
            let boundary = ambient_facets
                .iter()
                .any(|af| wall.subgraph.is_subgraph(&af.subgraph).unwrap_or(false));
            if !boundary {
                continue;
            }
            let pts = wall_points(cell, &wall.subgraph);
            if pts.is_empty() {
                continue;
            }
            let placed: Vec<(f64, f64)> =
                pts.iter().map(|p| canvas.place(project(p, d))).collect();
            let fb = barycenter(&placed);
            let cb = centers[k];
            let (dx, dy) = (fb.0 - cb.0, fb.1 - cb.1);
            let end = (cb.0 + 2.0 * dx, cb.1 + 2.0 * dy);
            out.push_str(&format!(
                "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {}/>\n",
                fmt(cb.0),
                fmt(cb.1),
                fmt(end.0),
                fmt(end.1),
                dash
            ));
        }
    }
    Ok(())
}
