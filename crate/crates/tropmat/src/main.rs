//! Batch front end: reads JSON files, dispatches to the library, and
//! writes JSON/text reports or SVG. Exit codes: 0 = success / check
//! holds, 1 = well-formed input failing a check (diagnostics on
//! stdout), 2 = malformed input or violated precondition.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropmat::axioms::is_gtom;
use tropmat::error::Error;
use tropmat::generation::{
    component_coherent_order, extend_to_connected, generate_type, label_positions, Labeling,
};
use tropmat::geometry::facets_graphtheoretic;
use tropmat::json::{
    certificate_to_json, diagnostics_to_json, facet_to_json, graph_from_json, graph_to_json,
    gtom_from_json, gtom_to_json, heights_from_json, labeling_to_json, mixed_cells_to_json,
    reports_to_json, subdivision_from_json, subdivision_to_json,
};
use tropmat::lifting::{regular_subdivision, sample_subdivisions};
use tropmat::render::{render_mixed, RenderSpec};
use tropmat::subdivision::{
    cayley_to_mixed, check_subdivision, faces_of_subdivision, gtom_to_subdiv, is_triangulation,
    subdiv_to_gtom,
};
use tropmat::types::{mask_iter, BipartiteType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(name = "tropmat", version, about = "Type collections over bipartite graphs and subdivisions of their root polytopes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format for reports and data.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Seed for all pseudo-random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the five axioms on a type collection.
    CheckGtom { file: PathBuf },
    /// Check that a cell collection encodes a subdivision.
    CheckSubdiv { file: PathBuf },
    /// The type collection of a subdivision (its face set).
    ToGtom { file: PathBuf },
    /// The subdivision encoded by a type collection.
    ToSubdiv { file: PathBuf },
    /// All faces of a subdivision.
    Faces { file: PathBuf },
    /// The facet subgraphs of the root polytope of a graph.
    Facets { file: PathBuf },
    /// The regular subdivision of a graph under a height function.
    Regular {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        heights: PathBuf,
    },
    /// Sample distinct regular subdivisions from random heights.
    Sample {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Derive a connected member type from boundary types by
    /// eliminations; emits a replayable certificate.
    Generate {
        #[arg(long)]
        gtom: PathBuf,
        #[arg(long = "type")]
        type_file: PathBuf,
        /// Also print the per-right-vertex labeling tables.
        #[arg(long)]
        trace: bool,
    },
    /// Extend a member type to a connected member type.
    Extend {
        #[arg(long)]
        gtom: PathBuf,
        #[arg(long = "type")]
        type_file: PathBuf,
    },
    /// The mixed cells of a subdivision under the Cayley trick.
    Cayley { file: PathBuf },
    /// Render the mixed subdivision as SVG (d = 2 or 3).
    Render {
        file: PathBuf,
        /// Overlay the dual arrangement, dashed.
        #[arg(long)]
        dual: bool,
        /// Draw cell labels.
        #[arg(long)]
        labels: bool,
        #[arg(long, default_value_t = 120.0)]
        scale: f64,
        /// Output path; stdout if omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Schema { .. }
        | Error::Precondition(_)
        | Error::InvalidType(_)
        | Error::InvalidPartition(_)
        | Error::DimensionMismatch { .. }
        | Error::PositionOutOfRange(..)
        | Error::NotConnected(_)
        | Error::RenderDimension(_) => 2,
        _ => 1,
    }
}

fn load_value(path: &PathBuf) -> Result<Value, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Schema { path: path.display().to_string(), message: e.to_string() })?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Schema { path: path.display().to_string(), message: e.to_string() })
}

fn emit(format: Format, v: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(v).expect("serializable")),
        Format::Text => println!("{}", serde_json::to_string_pretty(v).expect("serializable")),
    }
}

fn set_text(mask: u32) -> String {
    let parts: Vec<String> = mask_iter(mask).map(|j| format!("{}", j + 1)).collect();
    format!("{{{}}}", parts.join(","))
}

fn pos_text(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|&i| format!("{}", i + 1)).collect();
    format!("{{{}}}", parts.join(","))
}

fn print_labeling_text(j: usize, l: &Labeling) {
    println!("new right vertex {} (prefix 1..={})", j, j);
    println!("  root position: {}", l.root + 1);
    for (k, lvl) in l.levels.iter().enumerate() {
        println!(
            "  level {}: agreeing {} opposing {} rights {}",
            k,
            pos_text(&lvl.agreeing),
            pos_text(&lvl.opposing),
            set_text(lvl.rights)
        );
    }
    println!("  uncovered rights: {}", set_text(l.uncovered));
    println!("  position order: {}", pos_text(&l.position_order));
}

/// Relabel the right vertices so `perm[k]` becomes right vertex `k`.
fn permute_rights(t: &BipartiteType, perm: &[usize]) -> Result<BipartiteType, Error> {
    let rows: Vec<u32> = t
        .rows()
        .iter()
        .map(|&row| {
            perm.iter()
                .enumerate()
                .filter(|&(_, &old)| row & (1 << old) != 0)
                .fold(0u32, |m, (k, _)| m | (1 << k))
        })
        .collect();
    BipartiteType::new(perm.len(), rows)
}

/// Per-right-vertex labeling tables along a coherent ordering of the
/// target's right vertices, using the target restricted to each prefix
/// as the prior.
fn print_trace(g: &BipartiteType, a: &BipartiteType, format: Format) -> Result<(), Error> {
    let order = component_coherent_order(a)?;
    println!(
        "coherent right-vertex order: {}",
        order.iter().map(|&j| format!("{}", j + 1)).collect::<Vec<_>>().join(" ")
    );
    let gp = permute_rights(g, &order)?;
    let ap = permute_rights(a, &order)?;
    for j in 2..=order.len() {
        let universe = (1u32 << j) - 1;
        let prior_rows: Vec<u32> = ap.rows().iter().map(|&r| r & universe).collect();
        let prior = BipartiteType::new_allow_empty(order.len(), prior_rows)?;
        match label_positions(&gp, &ap, j, &prior) {
            Ok(l) => match format {
                Format::Text => print_labeling_text(j, &l),
                Format::Json => emit(format, &json!({ "prefix": j, "labeling": labeling_to_json(&l) })),
            },
            Err(e) => println!("prefix {}: labeling unavailable ({})", j, e),
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::CheckGtom { file } => {
            let m = gtom_from_json(&load_value(&file)?)?;
            let (ok, reports) = is_gtom(&m);
            match cli.format {
                Format::Json => emit(Format::Json, &json!({ "holds": ok, "axioms": reports_to_json(&reports) })),
                Format::Text => {
                    for r in &reports {
                        println!(
                            "{}: {}{}",
                            r.axiom.name(),
                            if r.holds() { "holds" } else { "FAILS" },
                            if r.holds() { String::new() } else { format!(" ({} witnesses)", r.witnesses.len()) }
                        );
                    }
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::CheckSubdiv { file } => {
            let s = subdivision_from_json(&load_value(&file)?)?;
            let (ok, diag) = check_subdivision(&s);
            match cli.format {
                Format::Json => emit(
                    Format::Json,
                    &json!({ "ok": ok, "triangulation": ok && is_triangulation(&s), "diagnostics": diagnostics_to_json(&diag) }),
                ),
                Format::Text => {
                    if ok {
                        println!(
                            "valid subdivision with {} cells{}",
                            s.cells().len(),
                            if is_triangulation(&s) { " (triangulation)" } else { "" }
                        );
                    } else {
                        println!(
                            "NOT a subdivision: {} incompatible pairs, {} unshared internal facets",
                            diag.incompatible_pairs.len(),
                            diag.unshared_facets.len()
                        );
                    }
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::ToGtom { file } => {
            let s = subdivision_from_json(&load_value(&file)?)?;
            let m = subdiv_to_gtom(&s)?;
            emit(cli.format, &gtom_to_json(&m));
            Ok(0)
        }
        Cmd::ToSubdiv { file } => {
            let m = gtom_from_json(&load_value(&file)?)?;
            let s = gtom_to_subdiv(&m)?;
            emit(cli.format, &subdivision_to_json(&s));
            Ok(0)
        }
        Cmd::Faces { file } => {
            let s = subdivision_from_json(&load_value(&file)?)?;
            let faces: Vec<Value> = faces_of_subdivision(&s).iter().map(graph_to_json).collect();
            emit(cli.format, &Value::Array(faces));
            Ok(0)
        }
        Cmd::Facets { file } => {
            let g = graph_from_json(&load_value(&file)?, "")?;
            let facets: Vec<Value> = facets_graphtheoretic(&g).iter().map(facet_to_json).collect();
            emit(cli.format, &Value::Array(facets));
            Ok(0)
        }
        Cmd::Regular { graph, heights } => {
            let g = graph_from_json(&load_value(&graph)?, "")?;
            let h = heights_from_json(&load_value(&heights)?)?;
            let s = regular_subdivision(&g, &h)?;
            emit(cli.format, &subdivision_to_json(&s));
            Ok(0)
        }
        Cmd::Sample { graph, trials } => {
            let g = graph_from_json(&load_value(&graph)?, "")?;
            let subs = sample_subdivisions(&g, trials, cli.seed)?;
            let arr: Vec<Value> = subs.iter().map(subdivision_to_json).collect();
            emit(cli.format, &Value::Array(arr));
            Ok(0)
        }
        Cmd::Generate { gtom, type_file, trace } => {
            let m = gtom_from_json(&load_value(&gtom)?)?;
            let a = graph_from_json(&load_value(&type_file)?, "")?;
            if trace && a.is_connected() {
                print_trace(m.ambient(), &a, cli.format)?;
            }
            let cert = generate_type(&m, &a)?;
            emit(cli.format, &certificate_to_json(&cert));
            Ok(0)
        }
        Cmd::Extend { gtom, type_file } => {
            let m = gtom_from_json(&load_value(&gtom)?)?;
            let a = graph_from_json(&load_value(&type_file)?, "")?;
            let c = extend_to_connected(&m, &a)?;
            emit(cli.format, &graph_to_json(&c));
            Ok(0)
        }
        Cmd::Cayley { file } => {
            let s = subdivision_from_json(&load_value(&file)?)?;
            emit(cli.format, &mixed_cells_to_json(&cayley_to_mixed(&s)));
            Ok(0)
        }
        Cmd::Render { file, dual, labels, scale, out } => {
            let s = subdivision_from_json(&load_value(&file)?)?;
            let spec = RenderSpec { scale, show_dual: dual, labels };
            let svg = render_mixed(&s, &spec)?;
            match out {
                Some(path) => fs::write(&path, svg).map_err(|e| Error::Precondition(e.to_string()))?,
                None => print!("{}", svg),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = exit_code(&e);
            if code == 1 {
                match format {
                    Format::Json => println!("{}", json!({ "error": e.to_string() })),
                    Format::Text => println!("error: {}", e),
                }
            } else {
                eprintln!("error: {}", e);
            }
            ExitCode::from(code)
        }
    }
}
