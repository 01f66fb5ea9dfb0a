//! The `build` and `homology` subcommands.

use clap::ValueEnum;
use serde_json::{json, Value};

use mwd_core::chains::{betti, integer_homology};
use mwd_core::prodcomplex::{dowker_product, ProdComplex, ProdSimplex};
use mwd_core::relation::{IndexSet, Relation};
use mwd_core::simplicial::{
    classic_dowker, cuboid, multiway_dowker, simplexify, SimplicialComplex,
};
use mwd_core::Error as CoreError;

use crate::util::{
    axis_dims, axis_labels, cell_cap, emit, load_relation, resolve_axis, usage, Failure,
};
use crate::{BuildArgs, HomologyArgs};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// Product-level Dowker complex: maximal boxes inside the relation.
    Dowker,
    /// Dowkerian quotient of the product complex along the given axes.
    Quotient,
    /// Simplexification of the product complex, vertices = tuples.
    Cuboid,
    /// Multiway Dowker complex of one kept-or-deleted axis (--axis).
    MultiwayDowker,
    /// Classic Dowker complex of a binary relation (--side).
    ClassicDowker,
    /// Simplexification of the product complex or of a quotient (--axis).
    Simp,
}

impl Construction {
    fn name(self) -> &'static str {
        match self {
            Construction::Dowker => "dowker",
            Construction::Quotient => "quotient",
            Construction::Cuboid => "cuboid",
            Construction::MultiwayDowker => "multiway-dowker",
            Construction::ClassicDowker => "classic-dowker",
            Construction::Simp => "simp",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Side {
    First,
    Second,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Field {
    F2,
    Z,
}

pub enum Built {
    Product(ProdComplex),
    Simplicial(SimplicialComplex),
}

/// Applies the selected construction, validating the axis selection.
pub fn construct(
    r: &Relation,
    construction: Construction,
    axis_sel: &[String],
    side: Side,
) -> Result<Built, Failure> {
    let axes: Vec<usize> =
        axis_sel.iter().map(|s| resolve_axis(r, s)).collect::<Result<_, _>>()?;
    let need_no_axis = |what: &str| {
        if axes.is_empty() {
            Ok(())
        } else {
            Err(usage(format!("{what} does not take --axis")))
        }
    };
    match construction {
        Construction::Dowker => {
            need_no_axis("--construction dowker")?;
            Ok(Built::Product(dowker_product(r)))
        }
        Construction::Quotient => {
            if axes.is_empty() {
                return Err(usage("--construction quotient needs at least one --axis"));
            }
            Ok(Built::Product(dowker_product(r).iterated_quotient(&axes)?))
        }
        Construction::Cuboid => {
            need_no_axis("--construction cuboid")?;
            Ok(Built::Simplicial(cuboid(r)))
        }
        Construction::MultiwayDowker => {
            let [k] = axes[..] else {
                return Err(usage("--construction multiway-dowker needs exactly one --axis"));
            };
            Ok(Built::Simplicial(multiway_dowker(r, k)?))
        }
        Construction::ClassicDowker => {
            need_no_axis("--construction classic-dowker")?;
            let side = match side {
                Side::First => 0,
                Side::Second => 1,
            };
            Ok(Built::Simplicial(classic_dowker(r, side)?))
        }
        Construction::Simp => {
            let p = if axes.is_empty() {
                dowker_product(r)
            } else {
                dowker_product(r).iterated_quotient(&axes)?
            };
            Ok(Built::Simplicial(simplexify(&p)))
        }
    }
}

fn set_label(atoms: &[u32], axis: &IndexSet) -> String {
    let parts: Vec<&str> = atoms.iter().map(|&x| axis.elements[x as usize].as_str()).collect();
    format!("{{{}}}", parts.join(","))
}

fn box_label(b: &ProdSimplex, axes: &[IndexSet]) -> String {
    let parts: Vec<String> =
        b.parts.iter().zip(axes).map(|(p, a)| set_label(p, a)).collect();
    format!("({})", parts.join(" x "))
}

fn face_label(face: &[u32], s: &SimplicialComplex) -> String {
    let parts: Vec<String> =
        face.iter().map(|&v| s.universe().vertex_label(v)).collect();
    format!("{{{}}}", parts.join(", "))
}

const PRETTY_FACE_LIMIT: usize = 60;

/// JSON description + pretty lines for a built complex's maximal faces.
fn describe(built: &Built, cap: usize) -> Result<(Value, Vec<String>), Failure> {
    match built {
        Built::Product(p) => {
            if p.maximal().len() > cap {
                return Err(CoreError::CellBudget { cap }.into());
            }
            let mut boxes: Vec<&ProdSimplex> = p.maximal().iter().collect();
            boxes.sort_by_key(|b| (b.dim(), b.parts.clone()));
            let report = json!({
                "axes": axis_labels(p.axes()),
                "dims": axis_dims(p.axes()),
                "kind": "product",
                "maximal": boxes.iter().map(|b| json!(b.parts)).collect::<Vec<_>>(),
                "maximal_count": boxes.len(),
                "top_dimension": boxes.last().map(|b| b.dim()),
            });
            let mut lines =
                vec![format!("product complex, {} maximal boxes", boxes.len())];
            for b in boxes.iter().take(PRETTY_FACE_LIMIT) {
                lines.push(format!("  dim {}  {}", b.dim(), box_label(b, p.axes())));
            }
            if boxes.len() > PRETTY_FACE_LIMIT {
                lines.push(format!("  ... and {} more", boxes.len() - PRETTY_FACE_LIMIT));
            }
            Ok((report, lines))
        }
        Built::Simplicial(s) => {
            if s.maximal().len() > cap {
                return Err(CoreError::CellBudget { cap }.into());
            }
            let u = s.universe();
            let faces: Vec<Value> = s
                .maximal()
                .iter()
                .map(|f| json!(f.iter().map(|&v| u.unflat(v)).collect::<Vec<_>>()))
                .collect();
            let report = json!({
                "axes": axis_labels(&u.axes),
                "dims": axis_dims(&u.axes),
                "kind": "simplicial",
                "maximal": faces,
                "maximal_count": s.maximal().len(),
                "top_dimension": s.maximal().last().map(|f| f.len() - 1),
                "vertex_count": s.vertices().len(),
            });
            let mut lines = vec![format!(
                "simplicial complex, {} vertices, {} maximal faces",
                s.vertices().len(),
                s.maximal().len()
            )];
            for f in s.maximal().iter().take(PRETTY_FACE_LIMIT) {
                lines.push(format!("  dim {}  {}", f.len() - 1, face_label(f, s)));
            }
            if s.maximal().len() > PRETTY_FACE_LIMIT {
                lines.push(format!(
                    "  ... and {} more",
                    s.maximal().len() - PRETTY_FACE_LIMIT
                ));
            }
            Ok((report, lines))
        }
    }
}

fn merge(report: Value, extra: Vec<(&str, Value)>) -> Value {
    let mut map = match report {
        Value::Object(m) => m,
        _ => unreachable!("reports are objects"),
    };
    for (k, v) in extra {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

pub fn cmd_build(args: &BuildArgs) -> Result<(), Failure> {
    let cap = cell_cap()?;
    let parsed = load_relation(&args.common.input, args.common.format)?;
    let r = parsed.support();
    let built = construct(&r, args.construction, &args.axes, args.side)?;
    let (report, lines) = describe(&built, cap)?;
    let report = merge(
        report,
        vec![
            ("construction", json!(args.construction.name())),
            ("selected_axes", json!(args.axes)),
            ("input_dims", json!(r.dims())),
        ],
    );
    if args.common.pretty {
        for l in &lines {
            eprintln!("{l}");
        }
    }
    emit(args.common.output.as_deref(), &report)
}

fn torsion_label(rank: usize, torsion: &[i64]) -> String {
    let mut parts = Vec::new();
    if rank > 0 {
        parts.push(if rank == 1 { "Z".to_string() } else { format!("Z^{rank}") });
    }
    for t in torsion {
        parts.push(format!("Z/{t}"));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

pub fn cmd_homology(args: &HomologyArgs) -> Result<(), Failure> {
    let cap = cell_cap()?;
    let b = &args.build;
    let d_max = b.common.d_max;
    let parsed = load_relation(&b.common.input, b.common.format)?;
    let r = parsed.support();
    let built = construct(&r, b.construction, &b.axes, b.side)?;

    let base = vec![
        ("construction", json!(b.construction.name())),
        ("selected_axes", json!(b.axes)),
        ("d_max", json!(d_max)),
        ("input_dims", json!(r.dims())),
    ];
    let (report, lines) = match args.field {
        Field::F2 => {
            let c = match &built {
                Built::Product(p) => p.try_cellular_chain_complex(d_max, cap)?,
                Built::Simplicial(s) => s.try_chain_complex(d_max, cap)?,
            };
            let bv = betti(&c, false);
            let line = format!(
                "betti = ({})  [{} cells through degree {}]",
                bv.iter().map(usize::to_string).collect::<Vec<_>>().join(", "),
                c.total_cells(),
                d_max + 1,
            );
            let report = merge(
                json!({"betti": bv, "cells": c.total_cells(), "field": "F2"}),
                base,
            );
            (report, vec![line])
        }
        Field::Z => {
            // Integer chains need honest simplices; a product complex is
            // simplexified first, which does not change its homology.
            let (s, via_simp) = match built {
                Built::Product(p) => (simplexify(&p), true),
                Built::Simplicial(s) => (s, false),
            };
            s.try_faces_up_to(d_max + 1, cap)?;
            let groups = integer_homology(&s.integer_boundaries(d_max)?)?;
            let mut lines = Vec::new();
            for (d, (rank, torsion)) in groups.iter().enumerate() {
                lines.push(format!("H_{d} = {}", torsion_label(*rank, torsion)));
            }
            let report = merge(
                json!({
                    "field": "Z",
                    "homology": groups
                        .iter()
                        .map(|(rank, torsion)| json!({"rank": rank, "torsion": torsion}))
                        .collect::<Vec<_>>(),
                    "via_simplexification": via_simp,
                }),
                base,
            );
            (report, lines)
        }
    };
    if b.common.pretty {
        for l in &lines {
            eprintln!("{l}");
        }
    }
    emit(b.common.output.as_deref(), &report)
}
