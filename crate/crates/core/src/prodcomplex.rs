//! Prod-complexes: down-closed families of boxes over a product of index
//! sets, stored by their maximal elements. Provides the Dowker relational
//! product of a relation, Dowkerian quotients, cell enumeration, and the
//! cellular F₂ chain complex with its quotient chain maps.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;

use crate::chains::{ChainComplex, ChainMap, F2Matrix};
use crate::relation::{IndexSet, Relation, Tuple};
use crate::{Error, Result};

/// A box: one nonempty, sorted atom set per axis. Dimension is
/// Σ_k (|σ_k| − 1). Boxes are ordered by (dimension, parts) so cell
/// enumerations are canonical.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProdSimplex {
    pub parts: Vec<Vec<u32>>,
}

impl ProdSimplex {
    pub fn new(mut parts: Vec<Vec<u32>>) -> Result<Self> {
        for p in &mut parts {
            p.sort_unstable();
            p.dedup();
            if p.is_empty() {
                return Err(Error::Shape("box parts must be nonempty".into()));
            }
        }
        Ok(ProdSimplex { parts })
    }

    pub fn singleton(t: &[u32]) -> Self {
        ProdSimplex { parts: t.iter().map(|&a| vec![a]).collect() }
    }

    pub fn order(&self) -> usize {
        self.parts.len()
    }

    pub fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.len() - 1).sum()
    }

    /// Componentwise inclusion of sorted parts.
    pub fn leq(&self, other: &ProdSimplex) -> bool {
        self.parts.len() == other.parts.len()
            && self
                .parts
                .iter()
                .zip(&other.parts)
                .all(|(a, b)| a.iter().all(|x| b.binary_search(x).is_ok()))
    }

    /// Number of vertices of the underlying product set.
    pub fn vertex_count(&self) -> usize {
        self.parts.iter().map(Vec::len).product()
    }

    /// The product σ₁ × … × σ_m in lexicographic order.
    pub fn vertices(&self) -> Vec<Tuple> {
        let mut out = vec![Tuple::new()];
        for p in &self.parts {
            let mut next = Vec::with_capacity(out.len() * p.len());
            for t in &out {
                for &a in p {
                    let mut t = t.clone();
                    t.push(a);
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }

    /// Drop the k-th part.
    fn delete_part(&self, k: usize) -> ProdSimplex {
        ProdSimplex {
            parts: self
                .parts
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, p)| p.clone())
                .collect(),
        }
    }

    pub fn label(&self) -> String {
        self.parts
            .iter()
            .map(|p| format!("{{{}}}", p.iter().map(u32::to_string).join(",")))
            .join("x")
    }
}

impl PartialOrd for ProdSimplex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProdSimplex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dim().cmp(&other.dim()).then_with(|| self.parts.cmp(&other.parts))
    }
}

/// Runs `f` on every tuple of the product of `parts`, stopping at the first
/// `false`. Returns whether all tuples passed.
fn all_product_tuples(parts: &[&[u32]], mut f: impl FnMut(&[u32]) -> bool) -> bool {
    let mut idx = vec![0usize; parts.len()];
    let mut t: Vec<u32> = parts.iter().map(|p| p[0]).collect();
    loop {
        if !f(&t) {
            return false;
        }
        let mut k = parts.len();
        loop {
            if k == 0 {
                return true;
            }
            k -= 1;
            if idx[k] + 1 < parts[k].len() {
                idx[k] += 1;
                t[k] = parts[k][idx[k]];
                break;
            }
            idx[k] = 0;
            t[k] = parts[k][0];
        }
    }
}

/// Keep only the maximal boxes of a family (and dedupe).
fn maximalize(boxes: BTreeSet<ProdSimplex>) -> Vec<ProdSimplex> {
    let boxes: Vec<ProdSimplex> = boxes.into_iter().collect();
    let mut keep = Vec::new();
    'outer: for (i, b) in boxes.iter().enumerate() {
        for (j, other) in boxes.iter().enumerate() {
            if i != j && b.leq(other) && !(other.leq(b) && j < i) {
                continue 'outer;
            }
        }
        keep.push(b.clone());
    }
    keep
}

/// A prod-complex over named axes, stored as the antichain of its maximal
/// boxes in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProdComplex {
    axes: Vec<IndexSet>,
    maximal: Vec<ProdSimplex>,
}

impl ProdComplex {
    /// Builds from any generating family: validates ranges, then keeps the
    /// maximal boxes.
    pub fn new(axes: Vec<IndexSet>, boxes: Vec<ProdSimplex>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Shape("a prod-complex needs at least one axis".into()));
        }
        for b in &boxes {
            if b.order() != axes.len() {
                return Err(Error::ArityMismatch { expected: axes.len(), got: b.order() });
            }
            for (k, p) in b.parts.iter().enumerate() {
                if p.is_empty() {
                    return Err(Error::Shape("box parts must be nonempty".into()));
                }
                for &a in p {
                    if a as usize >= axes[k].len() {
                        return Err(Error::AtomOutOfRange { axis: k, atom: a, size: axes[k].len() });
                    }
                }
            }
        }
        let maximal = maximalize(boxes.into_iter().collect());
        Ok(ProdComplex { axes, maximal })
    }

    pub fn axes(&self) -> &[IndexSet] {
        &self.axes
    }

    pub fn arity(&self) -> usize {
        self.axes.len()
    }

    pub fn maximal(&self) -> &[ProdSimplex] {
        &self.maximal
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    /// Down-set membership: below some maximal box.
    pub fn contains(&self, b: &ProdSimplex) -> bool {
        self.maximal.iter().any(|m| b.leq(m))
    }

    /// Dowkerian quotient: delete the k-th part of every box and
    /// re-maximalize.
    pub fn quotient(&self, k: usize) -> Result<ProdComplex> {
        self.iterated_quotient(&[k])
    }

    /// Delete several parts at once (axes named by their original indices).
    /// Deleting in any order, or all at once, yields the same complex.
    pub fn iterated_quotient(&self, ks: &[usize]) -> Result<ProdComplex> {
        let dropped: BTreeSet<usize> = ks.iter().copied().collect();
        for &k in ks {
            if k >= self.arity() {
                return Err(Error::AxisOutOfRange { axis: k, arity: self.arity() });
            }
        }
        if dropped.len() >= self.arity() {
            return Err(Error::Shape("quotient must leave at least one axis".into()));
        }
        let axes: Vec<IndexSet> = self
            .axes
            .iter()
            .enumerate()
            .filter(|(i, _)| !dropped.contains(i))
            .map(|(_, a)| a.clone())
            .collect();
        let boxes: BTreeSet<ProdSimplex> = self
            .maximal
            .iter()
            .map(|b| ProdSimplex {
                parts: b
                    .parts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !dropped.contains(i))
                    .map(|(_, p)| p.clone())
                    .collect(),
            })
            .collect();
        Ok(ProdComplex { axes, maximal: maximalize(boxes) })
    }

    /// All cells of dimension ≤ `d` in canonical order.
    pub fn cells_up_to(&self, d: usize) -> Vec<ProdSimplex> {
        self.try_cells_up_to(d, usize::MAX).expect("uncapped")
    }

    /// Capped version; errors with `Error::CellBudget` past `cap` cells.
    pub fn try_cells_up_to(&self, d: usize, cap: usize) -> Result<Vec<ProdSimplex>> {
        let mut out: BTreeSet<ProdSimplex> = BTreeSet::new();
        let mut acc: Vec<Vec<u32>> = Vec::new();
        for b in &self.maximal {
            collect_subboxes(&b.parts, 0, d, &mut acc, &mut out, cap)?;
        }
        Ok(out.into_iter().collect())
    }

    /// Cellular chain complex tracking degrees 0..=d_max+1, so Betti
    /// numbers are reliable through degree d_max.
    pub fn cellular_chain_complex(&self, d_max: usize) -> ChainComplex {
        self.try_cellular_chain_complex(d_max, usize::MAX).expect("uncapped")
    }

    pub fn try_cellular_chain_complex(&self, d_max: usize, cap: usize) -> Result<ChainComplex> {
        let groups = self.cell_groups(d_max + 1, cap)?;
        chain_complex_from_groups(&groups)
    }

    /// Cells grouped by dimension 0..=top.
    fn cell_groups(&self, top: usize, cap: usize) -> Result<Vec<Vec<ProdSimplex>>> {
        let cells = self.try_cells_up_to(top, cap)?;
        let mut groups: Vec<Vec<ProdSimplex>> = vec![Vec::new(); top + 1];
        for c in cells {
            groups[c.dim()].push(c);
        }
        Ok(groups)
    }
}

fn collect_subboxes(
    parts: &[Vec<u32>],
    k: usize,
    budget: usize,
    acc: &mut Vec<Vec<u32>>,
    out: &mut BTreeSet<ProdSimplex>,
    cap: usize,
) -> Result<()> {
    if k == parts.len() {
        out.insert(ProdSimplex { parts: acc.clone() });
        if out.len() > cap {
            return Err(Error::CellBudget { cap });
        }
        return Ok(());
    }
    let max_size = parts[k].len().min(budget + 1);
    for size in 1..=max_size {
        for subset in parts[k].iter().copied().combinations(size) {
            acc.push(subset);
            collect_subboxes(parts, k + 1, budget - (size - 1), acc, out, cap)?;
            acc.pop();
        }
    }
    Ok(())
}

/// Boundary by the Leibniz rule (signs vanish over F₂): facets of one part
/// at a time.
fn chain_complex_from_groups(groups: &[Vec<ProdSimplex>]) -> Result<ChainComplex> {
    let top = groups.len() - 1;
    let index: Vec<HashMap<&ProdSimplex, usize>> = groups
        .iter()
        .map(|g| g.iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();
    let mut boundaries = Vec::with_capacity(top + 1);
    let mut labels = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let rows = if d == 0 { 0 } else { groups[d - 1].len() };
        let mut m = F2Matrix::zeros(rows, groups[d].len());
        if d > 0 {
            for (j, cell) in groups[d].iter().enumerate() {
                let mut facet = cell.clone();
                for k in 0..cell.order() {
                    if cell.parts[k].len() < 2 {
                        continue;
                    }
                    for drop in 0..cell.parts[k].len() {
                        facet.parts[k] = cell.parts[k].clone();
                        facet.parts[k].remove(drop);
                        let r = *index[d - 1].get(&facet).ok_or_else(|| {
                            Error::Shape(format!("missing facet {} of {}", facet.label(), cell.label()))
                        })?;
                        m.set(r, j, true);
                    }
                    facet.parts[k] = cell.parts[k].clone();
                }
            }
        }
        labels.push(groups[d].iter().map(ProdSimplex::label).collect());
        boundaries.push(m);
    }
    ChainComplex::new(boundaries, labels)
}

/// The Dowker relational product: the largest prod-complex whose boxes'
/// vertex sets lie inside `r`. Found by depth-first box growth from each
/// tuple, with a visited set for deduplication; a box with no one-atom
/// extension is maximal.
pub fn dowker_product(r: &Relation) -> ProdComplex {
    let tuples: HashSet<&[u32]> = r.tuples().iter().map(Vec::as_slice).collect();
    let dims = r.dims();
    let mut visited: HashSet<ProdSimplex> = HashSet::new();
    let mut maximal: BTreeSet<ProdSimplex> = BTreeSet::new();
    let mut stack: Vec<ProdSimplex> =
        r.tuples().iter().map(|t| ProdSimplex::singleton(t)).collect();
    while let Some(b) = stack.pop() {
        if !visited.insert(b.clone()) {
            continue;
        }
        let exts = extensions(&b, &dims, &tuples);
        if exts.is_empty() {
            maximal.insert(b);
            continue;
        }
        for (k, a) in exts {
            let mut nb = b.clone();
            let pos = nb.parts[k].binary_search(&a).unwrap_err();
            nb.parts[k].insert(pos, a);
            stack.push(nb);
        }
    }
    let maximal: Vec<ProdSimplex> = maximal.into_iter().collect();
    debug_assert!(maximal.iter().tuple_combinations().all(|(a, b)| !a.leq(b) && !b.leq(a)));
    ProdComplex { axes: r.axes().to_vec(), maximal }
}

/// Atoms that can be added to one part of `b` while keeping the box inside
/// the relation.
fn extensions(b: &ProdSimplex, dims: &[usize], tuples: &HashSet<&[u32]>) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for k in 0..b.order() {
        for a in 0..dims[k] as u32 {
            if b.parts[k].binary_search(&a).is_ok() {
                continue;
            }
            // Only the new tuples (k-th coordinate pinned to `a`) need
            // checking.
            let fixed = [a];
            let parts: Vec<&[u32]> = b
                .parts
                .iter()
                .enumerate()
                .map(|(i, p)| if i == k { &fixed[..] } else { p.as_slice() })
                .collect();
            if all_product_tuples(&parts, |t| tuples.contains(t)) {
                out.push((k, a));
            }
        }
    }
    out
}

/// The cellular chain map of the quotient deleting axis `k`: a cell maps to
/// its deleted-part cell when its k-th part is a single atom, and to zero
/// otherwise. Returns the two chain complexes and the map between them.
pub fn quotient_chain_map(
    p: &ProdComplex,
    k: usize,
    d_max: usize,
    cap: usize,
) -> Result<(ChainComplex, ChainComplex, ChainMap)> {
    let q = p.quotient(k)?;
    let top = d_max + 1;
    let p_groups = p.cell_groups(top, cap)?;
    let q_groups = q.cell_groups(top, cap)?;
    let source = chain_complex_from_groups(&p_groups)?;
    let target = chain_complex_from_groups(&q_groups)?;
    let q_index: Vec<HashMap<&ProdSimplex, usize>> = q_groups
        .iter()
        .map(|g| g.iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();
    let mut maps = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let mut m = F2Matrix::zeros(q_groups[d].len(), p_groups[d].len());
        for (j, cell) in p_groups[d].iter().enumerate() {
            if cell.parts[k].len() != 1 {
                continue;
            }
            let image = cell.delete_part(k);
            let r = *q_index[d].get(&image).ok_or_else(|| {
                Error::Shape(format!("quotient image {} missing", image.label()))
            })?;
            m.set(r, j, true);
        }
        maps.push(m);
    }
    Ok((source, target, ChainMap { maps }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::chains::{betti, is_quasi_iso};
    use crate::relation::{lex_tuples, random_relation, Relation};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn naive_box_in_relation(b: &ProdSimplex, r: &Relation) -> bool {
        b.vertices().iter().all(|t| r.contains(t))
    }

    /// Every candidate box over the axes, sizes bounded by the axis sizes.
    fn all_candidate_boxes(dims: &[usize]) -> Vec<ProdSimplex> {
        let mut parts_per_axis: Vec<Vec<Vec<u32>>> = Vec::new();
        for &n in dims {
            let atoms: Vec<u32> = (0..n as u32).collect();
            let mut subsets = Vec::new();
            for size in 1..=n {
                subsets.extend(atoms.iter().copied().combinations(size));
            }
            parts_per_axis.push(subsets);
        }
        let mut out = vec![Vec::new()];
        for axis_subsets in &parts_per_axis {
            let mut next = Vec::new();
            for partial in &out {
                for s in axis_subsets {
                    let mut p: Vec<Vec<u32>> = partial.clone();
                    p.push(s.clone());
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(|parts| ProdSimplex { parts }).collect()
    }

    #[test]
    fn hexagon_is_a_six_cycle() {
        let p = dowker_product(&catalog::hexagon());
        assert_eq!(p.maximal().len(), 6);
        assert!(p.maximal().iter().all(|b| b.dim() == 1));
        let c = p.cellular_chain_complex(2);
        assert_eq!(c.dim(0), 6);
        assert_eq!(c.dim(1), 6);
        assert_eq!(betti(&c, false), vec![1, 1, 0]);
    }

    #[test]
    fn hexagon_quotients() {
        let p = dowker_product(&catalog::hexagon());
        for k in 0..3 {
            let q = p.quotient(k).unwrap();
            assert_eq!(q.arity(), 2);
            let c = q.cellular_chain_complex(2);
            assert_eq!(betti(&c, false), vec![1, 1, 0], "quotient by axis {k}");
        }
        for ks in [[0, 1], [0, 2], [1, 2]] {
            let q = p.iterated_quotient(&ks).unwrap();
            let c = q.cellular_chain_complex(2);
            assert_eq!(betti(&c, false), vec![1, 0, 0], "iterated quotient {ks:?}");
        }
    }

    #[test]
    fn full_binary_relation_is_one_box() {
        let r = Relation::from_dims(&[2, 2], lex_tuples(&[2, 2])).unwrap();
        let p = dowker_product(&r);
        assert_eq!(p.maximal().len(), 1);
        assert_eq!(p.maximal()[0].parts, vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(p.cells_up_to(2).len(), 9);
        let c = p.cellular_chain_complex(2);
        assert_eq!(betti(&c, false), vec![1, 0, 0]);
    }

    #[test]
    fn empty_and_singleton_relations() {
        let empty = Relation::from_dims(&[2, 2], vec![]).unwrap();
        let p = dowker_product(&empty);
        assert!(p.is_empty());
        assert_eq!(betti(&p.cellular_chain_complex(1), false), vec![0, 0]);

        let single = Relation::from_dims(&[2, 2], vec![vec![1, 0]]).unwrap();
        let p = dowker_product(&single);
        assert_eq!(p.maximal().len(), 1);
        assert_eq!(p.maximal()[0].dim(), 0);
    }

    #[test]
    fn unary_relation_gives_a_simplex() {
        let r = Relation::from_dims(&[4], vec![vec![0], vec![1], vec![3]]).unwrap();
        let p = dowker_product(&r);
        assert_eq!(p.maximal().len(), 1);
        assert_eq!(p.maximal()[0].parts, vec![vec![0, 1, 3]]);
        assert_eq!(betti(&p.cellular_chain_complex(2), false), vec![1, 0, 0]);
    }

    #[test]
    fn cells_up_to_zero_lists_relation_tuples() {
        let r = catalog::hexagon();
        let p = dowker_product(&r);
        let verts = p.cells_up_to(0);
        assert_eq!(verts.len(), r.len());
        for v in verts {
            assert!(r.contains(&v.parts.iter().map(|p| p[0]).collect::<Vec<_>>()));
        }
    }

    #[test]
    fn cell_budget_is_enforced() {
        let r = Relation::from_dims(&[3, 3], lex_tuples(&[3, 3])).unwrap();
        let p = dowker_product(&r);
        assert!(matches!(p.try_cells_up_to(4, 10), Err(Error::CellBudget { cap: 10 })));
    }

    #[test]
    fn two_factor_collapse() {
        // dowker(R₁ × R₂) / (axes of R₂) = dowker(R₁).
        let r1 = Relation::from_dims(&[2, 3], vec![vec![0, 0], vec![0, 1], vec![1, 2]]).unwrap();
        let r2 = Relation::from_dims(&[2, 2], vec![vec![0, 0], vec![1, 1], vec![1, 0]]).unwrap();
        let p = dowker_product(&r1.product(&r2).unwrap());
        let collapsed = p.iterated_quotient(&[2, 3]).unwrap();
        assert_eq!(collapsed.maximal(), dowker_product(&r1).maximal());
    }

    #[test]
    fn quotient_map_on_hexagon_is_quasi_iso() {
        let p = dowker_product(&catalog::hexagon());
        for k in 0..3 {
            let (src, dst, f) = quotient_chain_map(&p, k, 2, usize::MAX).unwrap();
            assert!(f.is_chain_map(&src, &dst));
            assert!(is_quasi_iso(&f, &src, &dst).unwrap(), "axis {k}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn dowker_boxes_are_maximal_and_cover(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = random_relation(&[3, 3, 2], 0.45, &mut rng);
            let p = dowker_product(&r);
            let tuples: HashSet<&[u32]> = r.tuples().iter().map(Vec::as_slice).collect();
            let dims = r.dims();
            for b in p.maximal() {
                prop_assert!(naive_box_in_relation(b, &r));
                prop_assert!(extensions(b, &dims, &tuples).is_empty());
            }
            for t in r.tuples() {
                prop_assert!(p.contains(&ProdSimplex::singleton(t)));
            }
        }

        #[test]
        fn membership_matches_brute_force(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = random_relation(&[2, 2, 2], 0.55, &mut rng);
            let p = dowker_product(&r);
            for b in all_candidate_boxes(&r.dims()) {
                prop_assert_eq!(p.contains(&b), naive_box_in_relation(&b, &r));
            }
        }

        #[test]
        fn iterated_quotients_commute(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = random_relation(&[2, 3, 2], 0.5, &mut rng);
            let p = dowker_product(&r);
            if p.is_empty() { return Ok(()); }
            let joint = p.iterated_quotient(&[0, 2]).unwrap();
            // Sequential in both orders; indices shift after the first deletion.
            let a = p.quotient(0).unwrap().quotient(1).unwrap();
            let b = p.quotient(2).unwrap().quotient(0).unwrap();
            prop_assert_eq!(joint.maximal(), a.maximal());
            prop_assert_eq!(joint.maximal(), b.maximal());
        }

        #[test]
        fn quotient_chain_maps_commute_with_boundaries(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = random_relation(&[3, 2, 2], 0.5, &mut rng);
            let p = dowker_product(&r);
            if p.is_empty() { return Ok(()); }
            for k in 0..3 {
                let (src, dst, f) = quotient_chain_map(&p, k, 2, usize::MAX).unwrap();
                prop_assert!(f.is_chain_map(&src, &dst));
            }
        }
    }
}
