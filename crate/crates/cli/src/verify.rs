//! The `verify` subcommand: runs every mechanically checkable consequence of
//! the quotient/squashing/rebracketing/persistence theorems on a relation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use mwd_core::chains::{betti, is_quasi_iso, ChainComplex, F2Matrix};
use mwd_core::persistence::{
    diagrams_equal, persistence_diagram, try_filtered_cuboid, try_filtered_multiway_dowker,
};
use mwd_core::prodcomplex::{dowker_product, quotient_chain_map};
use mwd_core::relation::{random_filtered_relation, ParsedRelation};
use mwd_core::simplicial::{classic_dowker, simplexify, simplicial_quotient_map};

use crate::util::{cell_cap, emit, load_relation, usage, verification, Failure};
use crate::VerifyArgs;

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

impl Check {
    fn json(&self) -> Value {
        json!({"check": self.name, "detail": self.detail, "pass": self.pass})
    }
}

/// Appends an isolated spurious vertex to a chain complex. Used by
/// `--inject-fault`: the corrupted complex has one extra component, so any
/// Betti comparison against the honest complex must fail.
fn add_phantom_vertex(c: &ChainComplex) -> ChainComplex {
    let mut boundaries = c.boundaries.clone();
    let n0 = boundaries[0].ncols();
    boundaries[0] = F2Matrix::zeros(boundaries[0].nrows(), n0 + 1);
    if let Some(d1) = boundaries.get_mut(1) {
        let mut grown = F2Matrix::zeros(n0 + 1, d1.ncols());
        for col in 0..d1.ncols() {
            for row in 0..n0 {
                if d1.get(row, col) {
                    grown.set(row, col, true);
                }
            }
        }
        *d1 = grown;
    }
    let mut labels = c.labels.clone();
    labels[0].push("phantom".to_string());
    ChainComplex::new(boundaries, labels).expect("an isolated vertex keeps the complex valid")
}

/// Runs the full invariant suite on one (possibly filtered) relation.
pub fn run_suite(
    parsed: &ParsedRelation,
    d_max: usize,
    cap: usize,
    fault: bool,
) -> Result<Vec<Check>, Failure> {
    let r = parsed.support();
    let m = r.arity();
    let label = |k: usize| r.axes()[k].label.clone();
    let p = dowker_product(&r);
    let mut checks = Vec::new();

    // Every single-axis quotient map is a quasi-isomorphism, at the
    // product-cell level and again after simplexification.
    if m >= 2 {
        for k in 0..m {
            let (a, b, f) = quotient_chain_map(&p, k, d_max, cap)?;
            let pass = f.is_chain_map(&a, &b) && is_quasi_iso(&f, &a, &b)?;
            checks.push(Check {
                name: format!("quotient-quasi-iso/cellular/{}", label(k)),
                pass,
                detail: json!({
                    "axis": k,
                    "source_cells": a.total_cells(),
                    "target_cells": b.total_cells(),
                }),
            });
        }
        for k in 0..m {
            let (src, dst, phi) = simplicial_quotient_map(&r, k)?;
            let (a, b, f) = phi.chain_map(&src, &dst, d_max, cap)?;
            let pass = f.is_chain_map(&a, &b) && is_quasi_iso(&f, &a, &b)?;
            checks.push(Check {
                name: format!("quotient-quasi-iso/simplicial/{}", label(k)),
                pass,
                detail: json!({
                    "axis": k,
                    "source_cells": a.total_cells(),
                    "target_cells": b.total_cells(),
                }),
            });
        }
    }

    // Simplexification preserves Betti numbers, for the full complex and
    // for every single-axis quotient.
    {
        let mut targets = vec![("full".to_string(), p.clone())];
        if m >= 2 {
            for k in 0..m {
                targets.push((label(k), p.quotient(k)?));
            }
        }
        for (i, (which, q)) in targets.into_iter().enumerate() {
            let cellular = betti(&q.try_cellular_chain_complex(d_max, cap)?, false);
            let mut simp_cc = simplexify(&q).try_chain_complex(d_max, cap)?;
            let corrupted = fault && i == 0;
            if corrupted {
                simp_cc = add_phantom_vertex(&simp_cc);
            }
            let simplicial = betti(&simp_cc, false);
            checks.push(Check {
                name: format!("squash-betti/{which}"),
                pass: cellular == simplicial,
                detail: json!({
                    "cellular": cellular,
                    "corrupted": corrupted,
                    "simplicial": simplicial,
                }),
            });
        }
    }

    // Ternary relations: the double quotient equals the classic Dowker
    // complex of the rebracketed binary relation, on the nose.
    if m == 3 {
        for (x, drop) in [[1usize, 2], [0, 2], [0, 1]].iter().enumerate() {
            let iterated = simplexify(&p.iterated_quotient(drop)?);
            let classic = classic_dowker(&r.rebracket(x)?, 0)?;
            let pass = iterated.maximal() == classic.maximal();
            checks.push(Check {
                name: format!("rebracket-equality/{}", label(x)),
                pass,
                detail: json!({"axis": x, "maximal_faces": classic.maximal().len()}),
            });
        }
    }

    // Filtered relations: all per-axis persistence diagrams agree with the
    // base filtration's diagram.
    if let Some(fr) = parsed.filtered() {
        if m >= 2 {
            let base = persistence_diagram(&try_filtered_cuboid(fr, d_max, cap)?)?;
            for k in 0..m {
                let dk =
                    persistence_diagram(&try_filtered_multiway_dowker(fr, k, d_max, cap)?)?;
                checks.push(Check {
                    name: format!("persistence-equality/{}", label(k)),
                    pass: diagrams_equal(&base, &dk),
                    detail: json!({
                        "axis": k,
                        "bars_base": base.total_bars(),
                        "bars_quotient": dk.total_bars(),
                    }),
                });
            }
        }
    }

    Ok(checks)
}

fn tally(checks: &[Check]) -> (usize, usize) {
    let passed = checks.iter().filter(|c| c.pass).count();
    (passed, checks.len() - passed)
}

fn parse_dims(s: &str) -> Result<Vec<usize>, Failure> {
    let dims: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| usage(format!("bad --dims {s:?}"))))
        .collect::<Result<_, _>>()?;
    if dims.is_empty() || dims.iter().any(|&d| d == 0) {
        return Err(usage("--dims needs positive axis sizes"));
    }
    Ok(dims)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    if args.d_max < 1 {
        return Err(usage("--d-max must be at least 1"));
    }
    if args.jobs < 1 {
        return Err(usage("--jobs must be at least 1"));
    }
    let cap = cell_cap()?;

    let (report, failed, total) = match (&args.input, args.random) {
        (Some(path), None) => {
            let parsed = load_relation(path, args.format)?;
            let checks = run_suite(&parsed, args.d_max, cap, args.inject_fault)?;
            let (passed, failed) = tally(&checks);
            if args.pretty {
                for c in &checks {
                    eprintln!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
                }
            }
            let r = parsed.support();
            let report = json!({
                "checks": checks.iter().map(Check::json).collect::<Vec<_>>(),
                "failed": failed,
                "mode": "file",
                "passed": passed,
                "relation": {"arity": r.arity(), "dims": r.dims(), "tuples": r.len()},
            });
            (report, failed, checks.len())
        }
        (None, Some(n)) => {
            if n == 0 {
                return Err(usage("--random needs at least one instance"));
            }
            let dims = parse_dims(args.dims.as_deref().expect("clap enforces --dims"))?;
            if !(0.0..=1.0).contains(&args.density) {
                return Err(usage("--density must lie in [0, 1]"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let instances: Vec<_> = (0..n)
                .map(|_| random_filtered_relation(&dims, args.density, &mut rng))
                .collect();
            let results: Vec<Vec<Check>> = crate::util::with_pool(args.jobs, || {
                instances
                    .par_iter()
                    .map(|fr| {
                        run_suite(
                            &ParsedRelation::Filtered(fr.clone()),
                            args.d_max,
                            cap,
                            args.inject_fault,
                        )
                    })
                    .collect::<Result<_, Failure>>()
            })??;
            let mut instance_reports = Vec::new();
            let (mut passed_total, mut failed_total) = (0, 0);
            for (i, checks) in results.iter().enumerate() {
                let (passed, failed) = tally(checks);
                passed_total += passed;
                failed_total += failed;
                if args.pretty {
                    eprintln!("instance {i}: {passed}/{} passed", checks.len());
                    for c in checks.iter().filter(|c| !c.pass) {
                        eprintln!("  FAIL {}", c.name);
                    }
                }
                instance_reports.push(json!({
                    "checks": checks.iter().map(Check::json).collect::<Vec<_>>(),
                    "failed": failed,
                    "index": i,
                    "passed": passed,
                    "tuples": instances[i].len(),
                }));
            }
            let report = json!({
                "count": n,
                "density": args.density,
                "dims": dims,
                "failed": failed_total,
                "instances": instance_reports,
                "mode": "random",
                "passed": passed_total,
                "seed": args.seed,
            });
            (report, failed_total, passed_total + failed_total)
        }
        _ => unreachable!("clap enforces exactly one of input/--random"),
    };

    emit(args.output.as_deref(), &report)?;
    if failed > 0 {
        return Err(verification(format!("{failed} of {total} checks failed")));
    }
    Ok(())
}
