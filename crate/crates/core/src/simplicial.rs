//! Simplicial complexes on product vertex universes: simplexifications of
//! prod-complexes, cuboid complexes, multiway Dowker complexes, classic
//! binary Dowker complexes, and the simplicial maps between them (with
//! chain-level realizations).

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use crate::chains::{ChainComplex, ChainMap, F2Matrix, IntMatrix};
use crate::prodcomplex::{dowker_product, ProdComplex};
use crate::relation::{IndexSet, Relation, Tuple};
use crate::{Error, Result};

/// A vertex universe: the product of one or more axes. Vertices are tuples
/// of atoms, flattened mixed-radix with the first axis most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    pub axes: Vec<IndexSet>,
}

impl Universe {
    pub fn new(axes: Vec<IndexSet>) -> Self {
        assert!(!axes.is_empty());
        Universe { axes }
    }

    pub fn vertex_count(&self) -> usize {
        self.axes.iter().map(IndexSet::len).product()
    }

    pub fn flat(&self, t: &[u32]) -> u32 {
        debug_assert_eq!(t.len(), self.axes.len());
        let mut v = 0u32;
        for (x, a) in t.iter().zip(&self.axes) {
            v = v * a.len() as u32 + x;
        }
        v
    }

    pub fn unflat(&self, mut v: u32) -> Tuple {
        let mut t = vec![0u32; self.axes.len()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            t[k] = v % a.len() as u32;
            v /= a.len() as u32;
        }
        t
    }

    pub fn vertex_label(&self, v: u32) -> String {
        let t = self.unflat(v);
        if self.axes.len() == 1 {
            return self.axes[0].elements[t[0] as usize].clone();
        }
        let parts: Vec<&str> =
            t.iter().zip(&self.axes).map(|(&x, a)| a.elements[x as usize].as_str()).collect();
        format!("({})", parts.join(","))
    }
}

/// Sorted vertex list of a simplex.
pub type Face = Vec<u32>;

fn face_label(f: &[u32]) -> String {
    format!("{{{}}}", f.iter().map(u32::to_string).join(","))
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// A simplicial complex stored as the antichain of its maximal faces, in
/// canonical (dimension, lexicographic) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    universe: Universe,
    maximal: Vec<Face>,
}

impl SimplicialComplex {
    pub fn new(universe: Universe, faces: Vec<Face>) -> Result<Self> {
        let n = universe.vertex_count() as u32;
        let mut set: BTreeSet<Face> = BTreeSet::new();
        for mut f in faces {
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                return Err(Error::Shape("faces must be nonempty".into()));
            }
            if let Some(&v) = f.iter().find(|&&v| v >= n) {
                return Err(Error::Shape(format!("vertex {v} outside the universe")));
            }
            set.insert(f);
        }
        let faces: Vec<Face> = set.into_iter().collect();
        let mut maximal: Vec<Face> = faces
            .iter()
            .filter(|f| !faces.iter().any(|g| g.len() > f.len() && is_subset(f, g)))
            .cloned()
            .collect();
        maximal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(SimplicialComplex { universe, maximal })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn maximal(&self) -> &[Face] {
        &self.maximal
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    /// Top simplex dimension.
    pub fn dimension(&self) -> Option<usize> {
        self.maximal.last().map(|f| f.len() - 1)
    }

    pub fn contains(&self, face: &[u32]) -> bool {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.dedup();
        !f.is_empty() && self.maximal.iter().any(|m| is_subset(&f, m))
    }

    /// Vertices present in the complex, sorted.
    pub fn vertices(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.maximal.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// Whether every face of `self` is a face of `other`. Universes must
    /// have the same vertex count.
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.universe.vertex_count() == other.universe.vertex_count()
            && self.maximal.iter().all(|f| other.contains(f))
    }

    /// All faces of dimension ≤ `d` in canonical order.
    pub fn faces_up_to(&self, d: usize) -> Vec<Face> {
        self.try_faces_up_to(d, usize::MAX).expect("uncapped")
    }

    pub fn try_faces_up_to(&self, d: usize, cap: usize) -> Result<Vec<Face>> {
        let mut out: BTreeSet<Face> = BTreeSet::new();
        for m in &self.maximal {
            for size in 1..=m.len().min(d + 1) {
                for f in m.iter().copied().combinations(size) {
                    out.insert(f);
                    if out.len() > cap {
                        return Err(Error::CellBudget { cap });
                    }
                }
            }
        }
        let mut faces: Vec<Face> = out.into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(faces)
    }

    /// Simplicial chain complex tracking degrees 0..=d_max+1; Betti numbers
    /// are reliable through degree d_max.
    pub fn chain_complex(&self, d_max: usize) -> ChainComplex {
        self.try_chain_complex(d_max, usize::MAX).expect("uncapped")
    }

    pub fn try_chain_complex(&self, d_max: usize, cap: usize) -> Result<ChainComplex> {
        let groups = self.face_groups(d_max + 1, cap)?;
        chain_complex_from_groups(&groups)
    }

    /// Faces grouped by dimension 0..=top.
    pub(crate) fn face_groups(&self, top: usize, cap: usize) -> Result<Vec<Vec<Face>>> {
        let mut groups: Vec<Vec<Face>> = vec![Vec::new(); top + 1];
        for f in self.try_faces_up_to(top, cap)? {
            groups[f.len() - 1].push(f);
        }
        Ok(groups)
    }

    /// Signed boundary matrices over ℤ for degrees 0..=d_max+1, for exact
    /// torsion cross-checks.
    pub fn integer_boundaries(&self, d_max: usize) -> Result<Vec<IntMatrix>> {
        let groups = self.face_groups(d_max + 1, usize::MAX)?;
        let index: Vec<HashMap<&Face, usize>> =
            groups.iter().map(|g| g.iter().enumerate().map(|(i, f)| (f, i)).collect()).collect();
        let mut out = Vec::with_capacity(groups.len());
        for d in 0..groups.len() {
            let rows = if d == 0 { 0 } else { groups[d - 1].len() };
            let mut m = IntMatrix::zeros(rows, groups[d].len());
            if d > 0 {
                for (j, f) in groups[d].iter().enumerate() {
                    for skip in 0..f.len() {
                        let facet: Face = f
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v)
                            .collect();
                        let r = index[d - 1][&facet];
                        m.set(r, j, if skip % 2 == 0 { 1 } else { -1 });
                    }
                }
            }
            out.push(m);
        }
        Ok(out)
    }

    /// Transport across a vertex bijection into another universe.
    pub fn relabel(
        &self,
        target: Universe,
        vertex_fn: impl Fn(&[u32]) -> Tuple,
    ) -> Result<SimplicialComplex> {
        let faces = self
            .maximal
            .iter()
            .map(|f| {
                f.iter().map(|&v| target.flat(&vertex_fn(&self.universe.unflat(v)))).collect()
            })
            .collect();
        SimplicialComplex::new(target, faces)
    }
}

fn chain_complex_from_groups(groups: &[Vec<Face>]) -> Result<ChainComplex> {
    let top = groups.len() - 1;
    let index: Vec<HashMap<&Face, usize>> =
        groups.iter().map(|g| g.iter().enumerate().map(|(i, f)| (f, i)).collect()).collect();
    let mut boundaries = Vec::with_capacity(top + 1);
    let mut labels = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let rows = if d == 0 { 0 } else { groups[d - 1].len() };
        let mut m = F2Matrix::zeros(rows, groups[d].len());
        if d > 0 {
            for (j, f) in groups[d].iter().enumerate() {
                for skip in 0..f.len() {
                    let facet: Face =
                        f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                    let r = *index[d - 1].get(&facet).ok_or_else(|| {
                        Error::Shape(format!("missing facet {} of {}", face_label(&facet), face_label(f)))
                    })?;
                    m.set(r, j, true);
                }
            }
        }
        labels.push(groups[d].iter().map(|f| face_label(f)).collect());
        boundaries.push(m);
    }
    ChainComplex::new(boundaries, labels)
}

/// Positions of the faces of `l` within the face enumeration of `k`
/// (for relative homology). Errors if some face of `l` is missing from `k`.
pub fn subcomplex_selection(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    top: usize,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let k_groups = k.face_groups(top, cap)?;
    let index: Vec<HashMap<&Face, usize>> =
        k_groups.iter().map(|g| g.iter().enumerate().map(|(i, f)| (f, i)).collect()).collect();
    let mut selection = vec![Vec::new(); top + 1];
    for f in l.try_faces_up_to(top, cap)? {
        let d = f.len() - 1;
        let i = *index[d]
            .get(&f)
            .ok_or_else(|| Error::NotSubcomplex(format!("face {} not in the pair's total complex", face_label(&f))))?;
        selection[d].push(i);
    }
    Ok(selection)
}

/// Simplexification: the simplicial complex whose faces are the vertex
/// subsets of boxes. Maximal boxes map to maximal faces.
pub fn simplexify(p: &ProdComplex) -> SimplicialComplex {
    let universe = Universe::new(p.axes().to_vec());
    let faces = p
        .maximal()
        .iter()
        .map(|b| b.vertices().iter().map(|t| universe.flat(t)).collect())
        .collect();
    SimplicialComplex::new(universe, faces).expect("box vertices lie in the universe")
}

/// The cuboid complex of a relation: simp(dowker(R)). Membership is
/// equivalent to the projection-box test: ρ ∈ cuboid(R) iff
/// proj₁ρ × … × proj_mρ ⊆ R.
pub fn cuboid(r: &Relation) -> SimplicialComplex {
    simplexify(&dowker_product(r))
}

/// The multiway Dowker complex on the axes other than `k`:
/// simp(dowker(R)/I_k), equally the union over atoms i of axis `k` of the
/// cuboid complexes of the slices R_i.
pub fn multiway_dowker(r: &Relation, k: usize) -> Result<SimplicialComplex> {
    Ok(simplexify(&dowker_product(r).quotient(k)?))
}

/// Classic binary Dowker complex with vertices on `side` (0 or 1) and
/// witnesses on the other axis.
pub fn classic_dowker(r: &Relation, side: usize) -> Result<SimplicialComplex> {
    if r.arity() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: r.arity() });
    }
    if side > 1 {
        return Err(Error::AxisOutOfRange { axis: side, arity: 2 });
    }
    let witness = 1 - side;
    let universe = Universe::new(vec![r.axes()[side].clone()]);
    let mut faces = Vec::new();
    for w in 0..r.axes()[witness].len() as u32 {
        let face: Face =
            r.tuples().iter().filter(|t| t[witness] == w).map(|t| t[side]).collect();
        if !face.is_empty() {
            faces.push(face);
        }
    }
    SimplicialComplex::new(universe, faces)
}

/// A simplicial map given by a total vertex function between universes.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    vertex_map: Vec<u32>,
}

impl SimplicialMap {
    pub fn new(source: &Universe, target: &Universe, f: impl Fn(&[u32]) -> Tuple) -> Self {
        let vertex_map = (0..source.vertex_count() as u32)
            .map(|v| target.flat(&f(&source.unflat(v))))
            .collect();
        SimplicialMap { vertex_map }
    }

    /// Identity on flat vertex ids, for inclusions of complexes whose
    /// universes share a vertex numbering.
    pub fn identity(n: usize) -> Self {
        SimplicialMap { vertex_map: (0..n as u32).collect() }
    }

    pub fn vertex(&self, v: u32) -> u32 {
        self.vertex_map[v as usize]
    }

    /// Image of a face (sorted, deduplicated).
    pub fn image(&self, face: &[u32]) -> Face {
        let set: BTreeSet<u32> = face.iter().map(|&v| self.vertex(v)).collect();
        set.into_iter().collect()
    }

    /// Compose with `other` (self after other... `self ∘ first`).
    pub fn compose_after(&self, first: &SimplicialMap) -> SimplicialMap {
        SimplicialMap { vertex_map: first.vertex_map.iter().map(|&v| self.vertex(v)).collect() }
    }

    /// Every face of `src` must land in `dst`.
    pub fn is_simplicial(&self, src: &SimplicialComplex, dst: &SimplicialComplex) -> bool {
        src.maximal().iter().all(|f| dst.contains(&self.image(f)))
    }

    /// The F₂ chain map: a face maps to its image when the vertex function
    /// is injective on it, and to zero otherwise. Returns source and target
    /// chain complexes together with the map. Errors if the map is not
    /// simplicial on the enumerated faces.
    pub fn chain_map(
        &self,
        src: &SimplicialComplex,
        dst: &SimplicialComplex,
        d_max: usize,
        cap: usize,
    ) -> Result<(ChainComplex, ChainComplex, ChainMap)> {
        let top = d_max + 1;
        let src_groups = src.face_groups(top, cap)?;
        let dst_groups = dst.face_groups(top, cap)?;
        let source = chain_complex_from_groups(&src_groups)?;
        let target = chain_complex_from_groups(&dst_groups)?;
        let dst_index: Vec<HashMap<&Face, usize>> = dst_groups
            .iter()
            .map(|g| g.iter().enumerate().map(|(i, f)| (f, i)).collect())
            .collect();
        let mut maps = Vec::with_capacity(top + 1);
        for d in 0..=top {
            let mut m = F2Matrix::zeros(dst_groups[d].len(), src_groups[d].len());
            for (j, f) in src_groups[d].iter().enumerate() {
                let image = self.image(f);
                if image.len() != f.len() {
                    continue; // collapsed: zero over F₂
                }
                let r = *dst_index[d].get(&image).ok_or_else(|| {
                    Error::NotSimplicial(format!("image {} is not a face of the target", face_label(&image)))
                })?;
                m.set(r, j, true);
            }
            maps.push(m);
        }
        Ok((source, target, ChainMap { maps }))
    }
}

/// The coordinate-deletion simplicial map cuboid(R) → Dowker_{/I_k}(R),
/// together with its source and target.
pub fn simplicial_quotient_map(
    r: &Relation,
    k: usize,
) -> Result<(SimplicialComplex, SimplicialComplex, SimplicialMap)> {
    let src = cuboid(r);
    let dst = multiway_dowker(r, k)?;
    let map = SimplicialMap::new(src.universe(), dst.universe(), |t| {
        t.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).collect()
    });
    Ok((src, dst, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::chains::{betti, integer_homology, is_quasi_iso};
    use crate::prodcomplex::ProdSimplex;
    use crate::relation::{lex_tuples, random_relation, Relation};
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn simplexify_full_box_is_a_simplex() {
        let r = Relation::from_dims(&[2, 2], lex_tuples(&[2, 2])).unwrap();
        let s = cuboid(&r);
        assert_eq!(s.maximal().len(), 1);
        assert_eq!(s.maximal()[0], vec![0, 1, 2, 3]);
        assert_eq!(betti(&s.chain_complex(2), false), vec![1, 0, 0]);
    }

    #[test]
    fn simplexify_is_identity_on_single_axis_complexes() {
        let r = Relation::from_dims(&[5], vec![vec![0], vec![2], vec![4]]).unwrap();
        let p = dowker_product(&r);
        let s = simplexify(&p);
        assert_eq!(s.maximal(), &[vec![0, 2, 4]]);
    }

    #[test]
    fn hexagon_cuboid_is_a_circle() {
        let s = cuboid(&catalog::hexagon());
        assert_eq!(s.maximal().len(), 6);
        assert!(s.maximal().iter().all(|f| f.len() == 2));
        assert_eq!(betti(&s.chain_complex(2), false), vec![1, 1, 0]);
    }

    #[test]
    fn cuboid_membership_is_the_projection_box_test() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let r = random_relation(&[3, 3], 0.5, &mut rng);
            let s = cuboid(&r);
            let u = s.universe();
            assert_eq!(u.vertex_count(), 9);
            for mask in 1u32..512 {
                let face: Face = (0..9).filter(|&v| mask >> v & 1 == 1).collect();
                let tuples: Vec<Tuple> = face.iter().map(|&v| u.unflat(v)).collect();
                let proj0: BTreeSet<u32> = tuples.iter().map(|t| t[0]).collect();
                let proj1: BTreeSet<u32> = tuples.iter().map(|t| t[1]).collect();
                let naive = proj0
                    .iter()
                    .all(|&a| proj1.iter().all(|&b| r.contains(&[a, b])));
                assert_eq!(s.contains(&face), naive);
            }
        }
    }

    #[test]
    fn multiway_dowker_is_the_union_of_slice_cuboids() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let r = random_relation(&[2, 3, 2], 0.5, &mut rng);
            for k in 0..3 {
                let mwd = multiway_dowker(&r, k).unwrap();
                let mut union_faces: Vec<Face> = Vec::new();
                for a in 0..r.axis(k).len() as u32 {
                    let slice = r.slice(k, a).unwrap();
                    let sc = cuboid(&slice);
                    // Slice cuboids share the universe of the quotient.
                    assert_eq!(sc.universe(), mwd.universe());
                    union_faces.extend(sc.maximal().iter().cloned());
                }
                let union =
                    SimplicialComplex::new(mwd.universe().clone(), union_faces).unwrap();
                assert_eq!(union.maximal(), mwd.maximal());
            }
        }
    }

    #[test]
    fn classic_dowker_agrees_with_multiway_on_binary_relations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let r = random_relation(&[4, 3], 0.5, &mut rng);
            let left = classic_dowker(&r, 0).unwrap();
            let right = multiway_dowker(&r, 1).unwrap();
            assert_eq!(left.maximal(), right.maximal());
            let left2 = classic_dowker(&r, 1).unwrap();
            let right2 = multiway_dowker(&r, 0).unwrap();
            assert_eq!(left2.maximal(), right2.maximal());
        }
    }

    #[test]
    fn vertex_simplex_incidence_recovers_the_complex() {
        // S a complex on I, J its simplices, R = {(i,σ) : i ∈ σ}: the
        // Dowker complex on I is S itself.
        let simplices: Vec<Vec<u32>> =
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]];
        let tuples = simplices
            .iter()
            .enumerate()
            .flat_map(|(j, s)| s.iter().map(move |&i| vec![i, j as u32]))
            .collect();
        let r = Relation::from_dims(&[3, 6], tuples).unwrap();
        let d = classic_dowker(&r, 0).unwrap();
        assert_eq!(d.maximal(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn cube_face_dowker_is_an_octahedron() {
        let d = classic_dowker(&catalog::cube_vertex_face(), 1).unwrap();
        assert_eq!(d.maximal().len(), 8);
        assert!(d.maximal().iter().all(|f| f.len() == 3));
        assert_eq!(betti(&d.chain_complex(2), false), vec![1, 0, 1]);
    }

    #[test]
    fn face_counts_of_a_full_simplex() {
        let r = Relation::from_dims(&[4], (0..4).map(|i| vec![i]).collect()).unwrap();
        let s = cuboid(&r);
        assert_eq!(s.faces_up_to(0).len(), 4);
        assert_eq!(s.faces_up_to(1).len(), 4 + 6);
        assert_eq!(s.faces_up_to(2).len(), 4 + 6 + 4);
        assert_eq!(s.faces_up_to(3).len(), 15);
    }

    #[test]
    fn quotient_map_is_simplicial_and_quasi_iso_on_hexagon() {
        let r = catalog::hexagon();
        for k in 0..3 {
            let (src, dst, map) = simplicial_quotient_map(&r, k).unwrap();
            assert!(map.is_simplicial(&src, &dst));
            let (a, b, f) = map.chain_map(&src, &dst, 2, usize::MAX).unwrap();
            assert!(f.is_chain_map(&a, &b));
            assert!(is_quasi_iso(&f, &a, &b).unwrap());
        }
    }

    #[test]
    fn quotient_map_hits_every_target_face() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let r = random_relation(&[2, 2, 3], 0.6, &mut rng);
            for k in 0..3 {
                let (src, dst, _map) = simplicial_quotient_map(&r, k).unwrap();
                for zeta in dst.maximal() {
                    // A maximal target face lifts along some witness atom.
                    let found = (0..r.axis(k).len() as u32).any(|a| {
                        let lift: Face = zeta
                            .iter()
                            .map(|&v| {
                                let mut t = dst.universe().unflat(v);
                                t.insert(k, a);
                                src.universe().flat(&t)
                            })
                            .collect();
                        src.contains(&lift)
                    });
                    assert!(found, "unliftable face {zeta:?}");
                }
            }
        }
    }

    #[test]
    fn collapsing_chain_map_kills_collapsed_faces() {
        // Project an edge onto a vertex: the edge maps to zero, endpoints
        // both to the vertex.
        let src =
            SimplicialComplex::new(Universe::new(vec![IndexSet::numbered("I", 2)]), vec![vec![0, 1]])
                .unwrap();
        let dst =
            SimplicialComplex::new(Universe::new(vec![IndexSet::numbered("J", 1)]), vec![vec![0]])
                .unwrap();
        let map = SimplicialMap::new(src.universe(), dst.universe(), |_| vec![0]);
        let (a, b, f) = map.chain_map(&src, &dst, 1, usize::MAX).unwrap();
        assert!(f.is_chain_map(&a, &b));
        assert!(f.maps[1].is_zero());
        assert!(is_quasi_iso(&f, &a, &b).unwrap()); // both contractible
    }

    #[test]
    fn chain_maps_compose_functorially() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let r = random_relation(&[2, 2, 2], 0.7, &mut rng);
        // cuboid(R) → Dowker_{/0}(R) → (delete the next axis too): the
        // composite of the chain maps equals the chain map of the composite.
        let (src, mid, f1) = simplicial_quotient_map(&r, 0).unwrap();
        let p = dowker_product(&r);
        let dst = simplexify(&p.iterated_quotient(&[0, 1]).unwrap());
        let f2 = SimplicialMap::new(mid.universe(), dst.universe(), |t| vec![t[1]]);
        let composite = f2.compose_after(&f1);
        let (a, b, m1) = f1.chain_map(&src, &mid, 2, usize::MAX).unwrap();
        let (b2, c, m2) = f2.chain_map(&mid, &dst, 2, usize::MAX).unwrap();
        let (a3, c3, m12) = composite.chain_map(&src, &dst, 2, usize::MAX).unwrap();
        assert_eq!(b.dim(0), b2.dim(0));
        assert_eq!(a.dim(1), a3.dim(1));
        assert_eq!(c.dim(1), c3.dim(1));
        for d in 0..m12.maps.len() {
            assert_eq!(m2.maps[d].mul(&m1.maps[d]), m12.maps[d], "degree {d}");
        }
    }

    #[test]
    fn naturality_square_commutes_matrixwise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            // A relation morphism: componentwise maps with image(R) ⊆ S.
            let r = random_relation(&[2, 2, 2], 0.5, &mut rng);
            use rand::Rng;
            let dims_s = [2usize, 3, 2];
            let fs: Vec<Vec<u32>> = dims_s
                .iter()
                .zip(r.dims())
                .map(|(&n_s, n_r)| {
                    (0..n_r).map(|_| rng.random_range(0..n_s as u32)).collect()
                })
                .collect();
            let mut s_tuples: BTreeSet<Tuple> = r
                .tuples()
                .iter()
                .map(|t| t.iter().enumerate().map(|(k, &x)| fs[k][x as usize]).collect())
                .collect();
            s_tuples.extend(
                lex_tuples(&dims_s).into_iter().filter(|_| rng.random::<f64>() < 0.2),
            );
            let s = Relation::from_dims(&dims_s, s_tuples.into_iter().collect()).unwrap();

            let k = 1usize;
            let (cub_r, mwd_r, quo_r) = simplicial_quotient_map(&r, k).unwrap();
            let (cub_s, mwd_s, quo_s) = simplicial_quotient_map(&s, k).unwrap();
            let top_map = SimplicialMap::new(cub_r.universe(), cub_s.universe(), |t| {
                t.iter().enumerate().map(|(k, &x)| fs[k][x as usize]).collect()
            });
            let bottom_map = SimplicialMap::new(mwd_r.universe(), mwd_s.universe(), |t| {
                t.iter()
                    .zip(fs.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, f)| f))
                    .map(|(&x, f)| f[x as usize])
                    .collect()
            });
            assert!(top_map.is_simplicial(&cub_r, &cub_s));
            assert!(bottom_map.is_simplicial(&mwd_r, &mwd_s));

            // Both composites around the square are the chain map of the
            // same diagonal vertex function: compare them matrix by matrix.
            let (_, _, m_quo_r) = quo_r.chain_map(&cub_r, &mwd_r, 2, usize::MAX).unwrap();
            let (_, _, m_quo_s) = quo_s.chain_map(&cub_s, &mwd_s, 2, usize::MAX).unwrap();
            let (_, _, m_top) = top_map.chain_map(&cub_r, &cub_s, 2, usize::MAX).unwrap();
            let (_, _, m_bottom) = bottom_map.chain_map(&mwd_r, &mwd_s, 2, usize::MAX).unwrap();
            for d in 0..m_top.maps.len() {
                assert_eq!(
                    m_quo_s.maps[d].mul(&m_top.maps[d]),
                    m_bottom.maps[d].mul(&m_quo_r.maps[d]),
                    "degree {d}"
                );
            }
        }
    }

    #[test]
    fn projective_plane_torsion_is_invisible_over_f2() {
        // Minimal 6-vertex triangulation of the projective plane.
        let triangles: Vec<Face> = vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 1, 5],
            vec![0, 4, 5],
            vec![0, 3, 4],
            vec![1, 2, 4],
            vec![1, 3, 4],
            vec![1, 3, 5],
            vec![2, 3, 5],
            vec![2, 4, 5],
        ];
        let s = SimplicialComplex::new(Universe::new(vec![IndexSet::numbered("V", 6)]), triangles)
            .unwrap();
        assert_eq!(betti(&s.chain_complex(2), false), vec![1, 1, 1]);
        let z = integer_homology(&s.integer_boundaries(2).unwrap()).unwrap();
        assert_eq!(z[0], (1, vec![]));
        assert_eq!(z[1], (0, vec![2]));
        assert_eq!(z[2], (0, vec![]));
    }

    #[test]
    fn relabel_transports_faces() {
        let r = catalog::hexagon();
        let b = r.rebracket(0).unwrap();
        let rect = cuboid(&b);
        // (i, jk) ↦ (i, j, k): same flat index by construction.
        let target = Universe::new(r.axes().to_vec());
        let jk = r.axes()[2].len() as u32;
        let relabeled = rect
            .relabel(target, |t| vec![t[0], t[1] / jk, t[1] % jk])
            .unwrap();
        let direct = cuboid(&r);
        assert_eq!(relabeled.universe(), direct.universe());
        // rect(R_(JK)) contains the cuboid complex.
        assert!(direct.is_subcomplex_of(&relabeled));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn squashing_preserves_betti(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = random_relation(&[2, 3, 2], 0.5, &mut rng);
            let p = dowker_product(&r);
            let cell = betti(&p.cellular_chain_complex(2), false);
            let simp = betti(&simplexify(&p).chain_complex(2), false);
            prop_assert_eq!(cell, simp);
        }

        #[test]
        fn simp_membership_criterion(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = random_relation(&[2, 2, 2], 0.6, &mut rng);
            let p = dowker_product(&r);
            let s = simplexify(&p);
            let u = s.universe();
            // ρ ∈ simp(P) iff the tuple of projections is a box of P.
            for mask in 1u32..256 {
                let face: Face = (0..8).filter(|&v| mask >> v & 1 == 1).collect();
                let mut parts: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); 3];
                for &v in &face {
                    for (k, &x) in u.unflat(v).iter().enumerate() {
                        parts[k].insert(x);
                    }
                }
                let bx = ProdSimplex::new(parts.into_iter().map(|s| s.into_iter().collect()).collect()).unwrap();
                prop_assert_eq!(s.contains(&face), p.contains(&bx));
            }
        }
    }
}
