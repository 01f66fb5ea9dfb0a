//! The `persist`, `ternary`, and `cofiber` subcommands.

use rayon::prelude::*;
use serde_json::{json, Value};

use mwd_core::persistence::{
    diagrams_equal, persistence_diagram, try_filtered_cuboid, try_filtered_multiway_dowker,
    PersistenceDiagram,
};
use mwd_core::relation::{FilteredRelation, Relation};
use mwd_core::ternary::{
    self, subcomplex_inclusions, try_build_atlas, try_natural_transformations, ArrowKind,
    NaturalTransformation, TernaryAtlas,
};

use crate::util::{
    axis_labels, cell_cap, emit, input_error, load_relation, resolve_axis, usage, verification,
    with_pool, Failure,
};
use crate::{CofiberArgs, PersistArgs, TernaryArgs};

fn bars_json(d: &PersistenceDiagram) -> Value {
    let mut dims = serde_json::Map::new();
    for (dim, bars) in d.bars.iter().enumerate() {
        let rows: Vec<Value> = bars
            .iter()
            .map(|&(b, death)| {
                json!([b, if death.is_finite() { json!(death) } else { Value::Null }])
            })
            .collect();
        dims.insert(dim.to_string(), Value::Array(rows));
    }
    Value::Object(dims)
}

enum DiagramTask {
    Base,
    Axis(usize),
}

fn diagram_of(
    fr: &FilteredRelation,
    task: &DiagramTask,
    d_max: usize,
    cap: usize,
) -> Result<PersistenceDiagram, Failure> {
    let fc = match task {
        DiagramTask::Base => try_filtered_cuboid(fr, d_max, cap)?,
        DiagramTask::Axis(k) => try_filtered_multiway_dowker(fr, *k, d_max, cap)?,
    };
    Ok(persistence_diagram(&fc)?)
}

pub fn cmd_persist(args: &PersistArgs) -> Result<(), Failure> {
    let cap = cell_cap()?;
    let d_max = args.common.d_max;
    let parsed = load_relation(&args.common.input, args.common.format)?;
    let fr = parsed
        .filtered()
        .ok_or_else(|| {
            input_error("persist needs filtration values (add a value column to each tuple)")
        })?
        .clone();
    let r = fr.support();

    let mut tasks = vec![(String::from("base"), DiagramTask::Base)];
    if args.axis == "all" {
        if r.arity() >= 2 {
            for k in 0..r.arity() {
                tasks.push((
                    format!("axis/{}", r.axes()[k].label),
                    DiagramTask::Axis(k),
                ));
            }
        }
    } else {
        let k = resolve_axis(&r, &args.axis)?;
        if r.arity() < 2 {
            return Err(usage("axis filtrations need a relation of arity at least 2"));
        }
        tasks.push((format!("axis/{}", r.axes()[k].label), DiagramTask::Axis(k)));
    }

    let diagrams: Vec<PersistenceDiagram> = with_pool(args.common.jobs, || {
        tasks
            .par_iter()
            .map(|(_, t)| diagram_of(&fr, t, d_max, cap))
            .collect::<Result<_, Failure>>()
    })??;
    let all_equal = diagrams.iter().all(|d| diagrams_equal(&diagrams[0], d));

    if args.common.pretty {
        for ((name, _), d) in tasks.iter().zip(&diagrams) {
            let finite = d.total_bars() - d.infinite_bar_counts().iter().sum::<usize>();
            eprintln!(
                "{name}: {} bars ({} finite), infinite per degree {:?}",
                d.total_bars(),
                finite,
                d.infinite_bar_counts()
            );
        }
        eprintln!("all diagrams equal: {all_equal}");
    }

    let report = json!({
        "all_equal": all_equal,
        "axes": axis_labels(r.axes()),
        "d_max": d_max,
        "diagrams": tasks
            .iter()
            .zip(&diagrams)
            .map(|((name, _), d)| json!({"bars": bars_json(d), "filtration": name}))
            .collect::<Vec<_>>(),
        "dims": r.dims(),
    });
    emit(args.common.output.as_deref(), &report)?;
    if !all_equal {
        return Err(verification("persistence diagrams differ across filtrations"));
    }
    Ok(())
}

fn kind_name(kind: ArrowKind) -> &'static str {
    match kind {
        ArrowKind::TopQuotient => "top-quotient",
        ArrowKind::MidMap => "mid-map",
        ArrowKind::Composite => "composite",
    }
}

fn transformation_json(atlas: &TernaryAtlas, nt: &NaturalTransformation) -> Value {
    let name_of = |i: usize| atlas.complexes[i].name.clone();
    json!({
        "alt_agrees": nt.alt_agrees,
        "kind": kind_name(nt.kind),
        "les_exact": nt.les_exact,
        "name": nt.name,
        "pair": [name_of(nt.pair.0), name_of(nt.pair.1)],
        "relative_betti": nt.relative_betti,
        "routes_agree": nt.routes_agree,
        "source_class": atlas.classes[nt.source_class].name,
        "target_class": atlas.classes[nt.target_class].name,
        "verified": nt.verified(),
    })
}

pub fn cmd_ternary(args: &TernaryArgs) -> Result<(), Failure> {
    let cap = cell_cap()?;
    let parsed = load_relation(&args.common.input, args.common.format)?;
    let r = parsed.support();
    let atlas = try_build_atlas(&r, args.common.d_max, cap)?;
    let inclusions = subcomplex_inclusions(&atlas)?;
    let nts = with_pool(args.common.jobs, || try_natural_transformations(&atlas, cap))??;
    let verified = nts.iter().all(NaturalTransformation::verified);

    if args.common.pretty {
        for (i, class) in atlas.classes.iter().enumerate() {
            let members: Vec<&str> =
                class.members.iter().map(|&m| atlas.complexes[m].name.as_str()).collect();
            eprintln!(
                "class {i} {}: betti {:?} [{}]",
                class.name,
                class.betti,
                members.join(", ")
            );
        }
        for nt in &nts {
            eprintln!(
                "{} {}  relative betti {:?}",
                if nt.verified() { "PASS" } else { "FAIL" },
                nt.name,
                nt.relative_betti
            );
        }
    }

    let report = json!({
        "axes": axis_labels(r.axes()),
        "classes": atlas.classes.iter().map(|c| json!({
            "betti": c.betti,
            "members": c.members.iter().map(|&m| atlas.complexes[m].name.clone()).collect::<Vec<_>>(),
            "name": c.name,
        })).collect::<Vec<_>>(),
        "complexes": atlas.complexes.iter().map(|e| json!({
            "betti": e.betti,
            "block": e.block,
            "class": atlas.classes[e.class].name,
            "name": e.name,
        })).collect::<Vec<_>>(),
        "counts": {
            "classes": atlas.classes.len(),
            "complexes": atlas.complexes.len(),
            "inclusions": inclusions.len(),
            "transformations": nts.len(),
        },
        "d_max": args.common.d_max,
        "dims": r.dims(),
        "inclusions": inclusions.iter().map(|inc| json!({
            "block": inc.block,
            "sub": atlas.complexes[inc.sub].name,
            "sup": atlas.complexes[inc.sup].name,
        })).collect::<Vec<_>>(),
        "transformations": nts.iter().map(|nt| transformation_json(&atlas, nt)).collect::<Vec<_>>(),
        "verified": verified,
    });
    emit(args.common.output.as_deref(), &report)?;
    if !verified {
        return Err(verification("some natural transformations failed verification"));
    }
    Ok(())
}

/// Parses `--map`: two axes as `VF`, `V,F`, or `0,2`.
fn parse_map(map: &str, r: &Relation) -> Result<(usize, usize), Failure> {
    let parts: Vec<String> = if map.contains(',') {
        map.split(',').map(|p| p.trim().to_string()).collect()
    } else if map.chars().count() == 2 {
        map.chars().map(String::from).collect()
    } else {
        return Err(usage(format!("--map {map:?}: expected two axes, e.g. VF or V,F")));
    };
    if parts.len() != 2 {
        return Err(usage(format!("--map {map:?}: expected exactly two axes")));
    }
    let a = resolve_axis(r, &parts[0])?;
    let b = resolve_axis(r, &parts[1])?;
    if a == b {
        return Err(usage("--map needs two distinct axes"));
    }
    Ok((a.min(b), a.max(b)))
}

pub fn cmd_cofiber(args: &CofiberArgs) -> Result<(), Failure> {
    let cap = cell_cap()?;
    let parsed = load_relation(&args.common.input, args.common.format)?;
    let r = parsed.support();
    if r.arity() != 3 {
        return Err(usage(format!(
            "cofiber needs a ternary relation, got arity {}",
            r.arity()
        )));
    }
    let pair = parse_map(&args.map, &r)?;
    let p_idx = ternary::PROJECTION_PAIRS
        .iter()
        .position(|&q| q == pair)
        .expect("sorted distinct pair is a projection pair");

    let atlas = try_build_atlas(&r, args.common.d_max, cap)?;
    let nts = with_pool(args.common.jobs, || try_natural_transformations(&atlas, cap))??;
    let nt = nts
        .iter()
        .find(|nt| nt.kind == ArrowKind::Composite && nt.pair.0 == ternary::RECT_PROJ[p_idx])
        .expect("every projection pair has a composite transformation");

    if args.common.pretty {
        eprintln!(
            "{}: relative betti {:?} ({})",
            nt.name,
            nt.relative_betti,
            if nt.verified() { "verified" } else { "FAILED" }
        );
    }
    let report = json!({
        "axes_kept": [r.axes()[pair.0].label, r.axes()[pair.1].label],
        "kind": kind_name(nt.kind),
        "les_exact": nt.les_exact,
        "name": nt.name,
        "pair": [
            atlas.complexes[nt.pair.0].name,
            atlas.complexes[nt.pair.1].name,
        ],
        "relative_betti": nt.relative_betti,
        "routes_agree": nt.routes_agree,
        "verified": nt.verified(),
    });
    emit(args.common.output.as_deref(), &report)?;
    if !nt.verified() {
        return Err(verification("cofiber transformation failed verification"));
    }
    Ok(())
}
