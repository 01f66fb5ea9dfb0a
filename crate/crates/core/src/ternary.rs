//! The ternary atlas: for a relation R ⊆ I×J×K, the twenty-two simplicial
//! complexes its Dowker constructions produce, grouped into seven
//! homotopy-type classes; the fifteen generic subcomplex inclusions; and the
//! twelve natural transformations between the classes, each verified through
//! its subcomplex realization (relative homology, long-exact-sequence rank
//! audit, and agreement of alternative realizations).

use crate::chains::{betti, induced_map_rank, relative_betti, BettiVector};
use crate::prodcomplex::dowker_product;
use crate::relation::Relation;
use crate::simplicial::{
    classic_dowker, cuboid, multiway_dowker, simplexify, subcomplex_selection,
    SimplicialComplex, SimplicialMap, Universe,
};
use crate::{Error, Result};

/// The two axes other than `x`, in order.
fn others(x: usize) -> (usize, usize) {
    match x {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Axis pairs of the three binary projections, in canonical order.
pub const PROJECTION_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// One of the twenty-two complexes, tagged with its homotopy-type class and
/// its vertex-set block.
#[derive(Clone, Debug)]
pub struct ComplexEntry {
    pub name: String,
    pub class: usize,
    pub block: String,
    pub first_in_block: bool,
    pub complex: SimplicialComplex,
    pub betti: BettiVector,
}

#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub name: String,
    pub betti: BettiVector,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TernaryAtlas {
    pub relation: Relation,
    pub d_max: usize,
    pub complexes: Vec<ComplexEntry>,
    pub classes: Vec<ClassEntry>,
}

/// Fixed indices into `TernaryAtlas::complexes`.
pub const CUBOID: usize = 0;
pub const RECT_BRACKET: [usize; 3] = [1, 2, 3]; // rect(R_(YZ)), kept axis 0,1,2
pub const QUOTIENT: [usize; 3] = [4, 5, 6]; // Dowker_{/I}, Dowker_{/J}, Dowker_{/K}
pub const DOWKER_KEPT: [usize; 3] = [7, 8, 9]; // Dowker_X(R_(YZ))
pub const DOWKER_MERGED: [usize; 3] = [10, 11, 12]; // Dowker_{YxZ}(R_(YZ))
pub const RECT_PROJ: [usize; 3] = [13, 14, 15]; // rect(R_XY) per PROJECTION_PAIRS
pub const DOWKER_PROJ: [[usize; 2]; 3] = [[16, 17], [18, 19], [20, 21]]; // per pair, per side

fn entry(
    name: String,
    class: usize,
    block: String,
    first_in_block: bool,
    complex: SimplicialComplex,
    d_max: usize,
    cap: usize,
) -> Result<ComplexEntry> {
    let b = betti(&complex.try_chain_complex(d_max, cap)?, false);
    Ok(ComplexEntry { name, class, block, first_in_block, complex, betti: b })
}

/// Build all twenty-two complexes, verify the three iterated-quotient
/// equalities literally, and check Betti agreement within each of the seven
/// classes. Betti vectors cover degrees 0..=d_max.
pub fn build_atlas(r: &Relation, d_max: usize) -> Result<TernaryAtlas> {
    try_build_atlas(r, d_max, usize::MAX)
}

pub fn try_build_atlas(r: &Relation, d_max: usize, cap: usize) -> Result<TernaryAtlas> {
    if r.arity() != 3 {
        return Err(Error::ArityMismatch { expected: 3, got: r.arity() });
    }
    let l: Vec<String> = r.axes().iter().map(|a| a.label.clone()).collect();
    let sizes = r.dims();
    let canonical = Universe::new(r.axes().to_vec());
    let block3 = format!("{}x{}x{}", l[0], l[1], l[2]);
    let block2 = |a: usize, b: usize| format!("{}x{}", l[a], l[b]);

    let mut v: Vec<ComplexEntry> = Vec::with_capacity(22);
    v.push(entry("cuboid(R)".into(), 0, block3.clone(), true, cuboid(r), d_max, cap)?);
    for x in 0..3 {
        let (y, z) = others(x);
        let rect = cuboid(&r.rebracket(x)?);
        // Transport (kept atom, merged atom) vertices onto I×J×K.
        let sz = sizes[z] as u32;
        let relabeled = rect.relabel(canonical.clone(), |t| {
            let mut out = vec![0; 3];
            out[x] = t[0];
            out[y] = t[1] / sz;
            out[z] = t[1] % sz;
            out
        })?;
        v.push(entry(
            format!("rect(R_({}{}))", l[y], l[z]),
            1 + x,
            block3.clone(),
            false,
            relabeled,
            d_max,
            cap,
        )?);
    }
    for x in 0..3 {
        let (y, z) = others(x);
        v.push(entry(
            format!("Dowker_{{/{}}}(R)", l[x]),
            0,
            block2(y, z),
            true,
            multiway_dowker(r, x)?,
            d_max,
            cap,
        )?);
    }
    for x in 0..3 {
        let (y, z) = others(x);
        v.push(entry(
            format!("Dowker_{{{}}}(R_({}{}))", l[x], l[y], l[z]),
            1 + x,
            l[x].clone(),
            true,
            classic_dowker(&r.rebracket(x)?, 0)?,
            d_max,
            cap,
        )?);
    }
    for x in 0..3 {
        let (y, z) = others(x);
        v.push(entry(
            format!("Dowker_{{{}x{}}}(R_({}{}))", l[y], l[z], l[y], l[z]),
            1 + x,
            block2(y, z),
            false,
            classic_dowker(&r.rebracket(x)?, 1)?,
            d_max,
            cap,
        )?);
    }
    for (p, &(a, b)) in PROJECTION_PAIRS.iter().enumerate() {
        let w = 3 - a - b;
        let pr = r.project(&[w])?;
        v.push(entry(
            format!("rect(R_{}{})", l[a], l[b]),
            4 + p,
            block2(a, b),
            false,
            cuboid(&pr),
            d_max,
            cap,
        )?);
    }
    for (p, &(a, b)) in PROJECTION_PAIRS.iter().enumerate() {
        let w = 3 - a - b;
        let pr = r.project(&[w])?;
        for (side, vertex_axis) in [(0, a), (1, b)] {
            v.push(entry(
                format!("Dowker_{{{}}}(R_{}{})", l[vertex_axis], l[a], l[b]),
                4 + p,
                l[vertex_axis].clone(),
                false,
                classic_dowker(&pr, side)?,
                d_max,
                cap,
            )?);
        }
    }
    debug_assert_eq!(v.len(), 22);

    // The iterated Dowkerian quotient equals the classic Dowker complex of
    // the rebracketed relation, as a literal complex.
    let p = dowker_product(r);
    for x in 0..3 {
        let (y, z) = others(x);
        let iterated = simplexify(&p.iterated_quotient(&[y, z])?);
        if iterated.maximal() != v[DOWKER_KEPT[x]].complex.maximal() {
            return Err(Error::Atlas(format!(
                "dowker(R)/({},{}) differs from {}",
                l[y],
                l[z],
                v[DOWKER_KEPT[x]].name
            )));
        }
    }

    let class_names = vec![
        "dowker(R)".to_string(),
        format!("dowker(R)/({},{})", l[1], l[2]),
        format!("dowker(R)/({},{})", l[0], l[2]),
        format!("dowker(R)/({},{})", l[0], l[1]),
        format!("dowker(R_{}{})", l[0], l[1]),
        format!("dowker(R_{}{})", l[0], l[2]),
        format!("dowker(R_{}{})", l[1], l[2]),
    ];
    let mut classes = Vec::with_capacity(7);
    for (ci, name) in class_names.into_iter().enumerate() {
        let members: Vec<usize> =
            v.iter().enumerate().filter(|(_, e)| e.class == ci).map(|(i, _)| i).collect();
        let b0 = v[members[0]].betti.clone();
        for &m in &members[1..] {
            if v[m].betti != b0 {
                return Err(Error::Atlas(format!(
                    "class {name} inconsistent: {} has β={:?} but {} has β={:?}",
                    v[members[0]].name, b0, v[m].name, v[m].betti
                )));
            }
        }
        classes.push(ClassEntry { name, betti: b0, members });
    }

    Ok(TernaryAtlas { relation: r.clone(), d_max, complexes: v, classes })
}

/// A verified subcomplex inclusion within one vertex-set block.
#[derive(Clone, Debug)]
pub struct Inclusion {
    pub sub: usize,
    pub sup: usize,
    pub block: String,
}

/// The fifteen generic inclusions: in each vertex-set block, the first
/// entry is a subcomplex of every other entry. Errors on any violation.
pub fn subcomplex_inclusions(atlas: &TernaryAtlas) -> Result<Vec<Inclusion>> {
    let pairs: [(usize, usize); 15] = [
        (CUBOID, RECT_BRACKET[0]),
        (CUBOID, RECT_BRACKET[1]),
        (CUBOID, RECT_BRACKET[2]),
        (QUOTIENT[0], DOWKER_MERGED[0]),
        (QUOTIENT[0], RECT_PROJ[2]),
        (QUOTIENT[1], DOWKER_MERGED[1]),
        (QUOTIENT[1], RECT_PROJ[1]),
        (QUOTIENT[2], DOWKER_MERGED[2]),
        (QUOTIENT[2], RECT_PROJ[0]),
        (DOWKER_KEPT[0], DOWKER_PROJ[0][0]),
        (DOWKER_KEPT[0], DOWKER_PROJ[1][0]),
        (DOWKER_KEPT[1], DOWKER_PROJ[0][1]),
        (DOWKER_KEPT[1], DOWKER_PROJ[2][0]),
        (DOWKER_KEPT[2], DOWKER_PROJ[1][1]),
        (DOWKER_KEPT[2], DOWKER_PROJ[2][1]),
    ];
    let mut out = Vec::with_capacity(pairs.len());
    for (sub, sup) in pairs {
        let (s, t) = (&atlas.complexes[sub], &atlas.complexes[sup]);
        if !s.complex.is_subcomplex_of(&t.complex) {
            return Err(Error::Atlas(format!("{} is not a subcomplex of {}", s.name, t.name)));
        }
        out.push(Inclusion { sub, sup, block: s.block.clone() });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrowKind {
    /// dowker(R) → dowker(R)/(Y,Z): iterated Dowkerian quotient.
    TopQuotient,
    /// dowker(R)/(Y,Z) → dowker(R_XY): drop the bracketed witness pair.
    MidMap,
    /// dowker(R) → dowker(R_XY): the diagonal composite.
    Composite,
}

/// One of the twelve natural transformations, verified through its
/// subcomplex realization.
#[derive(Clone, Debug)]
pub struct NaturalTransformation {
    pub name: String,
    pub kind: ArrowKind,
    pub source_class: usize,
    pub target_class: usize,
    /// (ambient complex, subcomplex) indices into the atlas.
    pub pair: (usize, usize),
    pub relative_betti: BettiVector,
    /// Rank identity β_d(K,L) = corank H_d(i) + ker H_{d−1}(i) in every
    /// degree, for the inclusion i : L ↪ K (and for the alternative pair
    /// when there is one).
    pub les_exact: bool,
    /// Second subcomplex realization of the same arrow, when the atlas has
    /// one (top quotients only).
    pub alt_pair: Option<(usize, usize)>,
    pub alt_relative_betti: Option<BettiVector>,
    pub alt_agrees: bool,
    /// Rank of the induced map H_d for every realization route of this
    /// arrow (inclusions and vertex projections).
    pub induced_rank_routes: Vec<Vec<usize>>,
    pub routes_agree: bool,
}

impl NaturalTransformation {
    pub fn verified(&self) -> bool {
        self.les_exact && self.alt_agrees && self.routes_agree
    }
}

/// Relative homology of a subcomplex pair, the induced homology ranks of
/// the inclusion, and the long-exact-sequence rank audit.
fn relative_pair(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    d_max: usize,
    cap: usize,
) -> Result<(BettiVector, Vec<usize>, bool)> {
    let kc = k.try_chain_complex(d_max, cap)?;
    let sel = subcomplex_selection(k, l, d_max + 1, cap)?;
    let rel = relative_betti(&kc, &sel)?;
    let inc = SimplicialMap::identity(k.universe().vertex_count());
    let (lc, kc2, f) = inc.chain_map(l, k, d_max, cap)?;
    if let Some(d) = f.commutation_failure(&lc, &kc2) {
        return Err(Error::NotChainMap { degree: d });
    }
    let bk = betti(&kc2, false);
    let bl = betti(&lc, false);
    let ranks: Vec<usize> =
        (0..=d_max).map(|d| induced_map_rank(&f, &lc, &kc2, d)).collect();
    let mut exact = true;
    for d in 0..=d_max {
        let corank = bk[d] - ranks[d];
        let kernel = if d == 0 { 0 } else { bl[d - 1] - ranks[d - 1] };
        if rel[d] != corank + kernel {
            exact = false;
        }
    }
    Ok((rel, ranks, exact))
}

/// Relative Betti numbers of a subcomplex pair (K, L) on a shared vertex
/// numbering, degrees 0..=d_max.
pub fn relative_homology(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    d_max: usize,
    cap: usize,
) -> Result<BettiVector> {
    Ok(relative_pair(k, l, d_max, cap)?.0)
}

/// Verify β_d(K,L) = corank H_d(i) + ker H_{d−1}(i) in all degrees ≤ d_max.
pub fn les_check(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    d_max: usize,
    cap: usize,
) -> Result<bool> {
    Ok(relative_pair(k, l, d_max, cap)?.2)
}

/// The rank identity on the three pairwise inclusions of a nested triple
/// M ⊆ L ⊆ K.
pub fn les_check_triple(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    m: &SimplicialComplex,
    d_max: usize,
    cap: usize,
) -> Result<bool> {
    Ok(les_check(k, l, d_max, cap)?
        && les_check(k, m, d_max, cap)?
        && les_check(l, m, d_max, cap)?)
}

/// Induced homology ranks of an arbitrary simplicial map realization.
fn map_ranks(
    src: &SimplicialComplex,
    dst: &SimplicialComplex,
    map: &SimplicialMap,
    d_max: usize,
    cap: usize,
) -> Result<Vec<usize>> {
    let (a, b, f) = map.chain_map(src, dst, d_max, cap)?;
    if let Some(d) = f.commutation_failure(&a, &b) {
        return Err(Error::NotChainMap { degree: d });
    }
    Ok((0..=d_max).map(|d| induced_map_rank(&f, &a, &b, d)).collect())
}

/// Realize and verify the twelve natural transformations: three iterated
/// quotients, six mid-level maps, three composites.
pub fn natural_transformations(atlas: &TernaryAtlas) -> Result<Vec<NaturalTransformation>> {
    try_natural_transformations(atlas, usize::MAX)
}

pub fn try_natural_transformations(
    atlas: &TernaryAtlas,
    cap: usize,
) -> Result<Vec<NaturalTransformation>> {
    let d_max = atlas.d_max;
    let c = &atlas.complexes;
    let sizes = atlas.relation.dims();
    let mut out = Vec::with_capacity(12);

    for x in 0..3 {
        let (y, z) = others(x);
        let (rel, inc_ranks, les) =
            relative_pair(&c[RECT_BRACKET[x]].complex, &c[CUBOID].complex, d_max, cap)?;
        let (alt_rel, alt_ranks, alt_les) =
            relative_pair(&c[DOWKER_MERGED[x]].complex, &c[QUOTIENT[x]].complex, d_max, cap)?;
        // Vertex-projection realizations out of cuboid(R).
        let to_kept = SimplicialMap::new(
            c[CUBOID].complex.universe(),
            c[DOWKER_KEPT[x]].complex.universe(),
            |t| vec![t[x]],
        );
        let kept_ranks =
            map_ranks(&c[CUBOID].complex, &c[DOWKER_KEPT[x]].complex, &to_kept, d_max, cap)?;
        let sz = sizes[z] as u32;
        let to_merged = SimplicialMap::new(
            c[CUBOID].complex.universe(),
            c[DOWKER_MERGED[x]].complex.universe(),
            |t| vec![t[y] * sz + t[z]],
        );
        let merged_ranks =
            map_ranks(&c[CUBOID].complex, &c[DOWKER_MERGED[x]].complex, &to_merged, d_max, cap)?;
        let routes = vec![inc_ranks, alt_ranks, kept_ranks, merged_ranks];
        let routes_agree = routes.windows(2).all(|w| w[0] == w[1]);
        out.push(NaturalTransformation {
            name: format!("{} -> {}", atlas.classes[0].name, atlas.classes[1 + x].name),
            kind: ArrowKind::TopQuotient,
            source_class: 0,
            target_class: 1 + x,
            pair: (RECT_BRACKET[x], CUBOID),
            relative_betti: rel.clone(),
            les_exact: les && alt_les,
            alt_pair: Some((DOWKER_MERGED[x], QUOTIENT[x])),
            alt_agrees: rel == alt_rel,
            alt_relative_betti: Some(alt_rel),
            induced_rank_routes: routes,
            routes_agree,
        });
    }

    for x in 0..3 {
        for (p, &(a, b)) in PROJECTION_PAIRS.iter().enumerate() {
            if a != x && b != x {
                continue;
            }
            let side = usize::from(b == x);
            let ambient = DOWKER_PROJ[p][side];
            let (rel, inc_ranks, les) =
                relative_pair(&c[ambient].complex, &c[DOWKER_KEPT[x]].complex, d_max, cap)?;
            out.push(NaturalTransformation {
                name: format!("{} -> {}", atlas.classes[1 + x].name, atlas.classes[4 + p].name),
                kind: ArrowKind::MidMap,
                source_class: 1 + x,
                target_class: 4 + p,
                pair: (ambient, DOWKER_KEPT[x]),
                relative_betti: rel,
                les_exact: les,
                alt_pair: None,
                alt_relative_betti: None,
                alt_agrees: true,
                induced_rank_routes: vec![inc_ranks],
                routes_agree: true,
            });
        }
    }

    for (p, &(a, b)) in PROJECTION_PAIRS.iter().enumerate() {
        let w = 3 - a - b;
        let (rel, inc_ranks, les) =
            relative_pair(&c[RECT_PROJ[p]].complex, &c[QUOTIENT[w]].complex, d_max, cap)?;
        let proj = SimplicialMap::new(
            c[CUBOID].complex.universe(),
            c[RECT_PROJ[p]].complex.universe(),
            |t| vec![t[a], t[b]],
        );
        let proj_ranks =
            map_ranks(&c[CUBOID].complex, &c[RECT_PROJ[p]].complex, &proj, d_max, cap)?;
        let routes = vec![inc_ranks, proj_ranks];
        let routes_agree = routes.windows(2).all(|w| w[0] == w[1]);
        out.push(NaturalTransformation {
            name: format!("{} -> {}", atlas.classes[0].name, atlas.classes[4 + p].name),
            kind: ArrowKind::Composite,
            source_class: 0,
            target_class: 4 + p,
            pair: (RECT_PROJ[p], QUOTIENT[w]),
            relative_betti: rel,
            les_exact: les,
            alt_pair: None,
            alt_relative_betti: None,
            alt_agrees: true,
            induced_rank_routes: routes,
            routes_agree,
        });
    }

    Ok(out)
}
