//! Filtered complexes and persistence diagrams over F₂.
//!
//! A filtered relation induces a filtered cuboid complex (a simplex enters
//! when the last tuple of its projection box does) and, per axis, a filtered
//! multiway Dowker complex (a simplex enters when the first witness atom has
//! its whole box present). Diagrams are computed by standard column
//! reduction; zero-length bars are dropped.

use std::cmp::Ordering;
use std::collections::HashMap;

use itertools::Itertools;

use crate::chains::Bits;
use crate::relation::FilteredRelation;
use crate::simplicial::{cuboid, multiway_dowker, Face, Universe};
use crate::{Error, Result};

/// Simplicial complex with a filtration value per cell. Cells are sorted by
/// (value, dimension, vertex list); every facet precedes its cofaces.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    d_max: usize,
    universe: Option<Universe>,
    faces: Vec<Face>,
    values: Vec<f64>,
    facets: Vec<Vec<usize>>,
}

impl FilteredComplex {
    /// Build from explicit (face, value) pairs. The face list must be closed
    /// under taking facets, and values must be monotone along inclusions.
    pub fn from_faces(mut cells: Vec<(Face, f64)>, d_max: usize) -> Result<FilteredComplex> {
        for (f, _) in &mut cells {
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                return Err(Error::Shape("faces must be nonempty".into()));
            }
        }
        cells.sort_by(|a, b| {
            a.1.total_cmp(&b.1).then_with(|| a.0.len().cmp(&b.0.len())).then_with(|| a.0.cmp(&b.0))
        });
        let index: HashMap<&Face, usize> =
            cells.iter().enumerate().map(|(i, (f, _))| (f, i)).collect();
        if index.len() != cells.len() {
            return Err(Error::Shape("duplicate face in filtered complex".into()));
        }
        let mut facets = Vec::with_capacity(cells.len());
        for (i, (f, v)) in cells.iter().enumerate() {
            let mut fs = Vec::new();
            if f.len() > 1 {
                for skip in 0..f.len() {
                    let facet: Face = f
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != skip)
                        .map(|(_, &x)| x)
                        .collect();
                    let j = *index.get(&facet).ok_or_else(|| {
                        Error::Shape(format!("face list not closed: missing facet of {f:?}"))
                    })?;
                    if cells[j].1 > *v {
                        return Err(Error::NotMonotone(format!(
                            "facet {facet:?} at {} enters after {f:?} at {v}",
                            cells[j].1
                        )));
                    }
                    debug_assert!(j < i);
                    fs.push(j);
                }
                fs.sort_unstable();
            }
            facets.push(fs);
        }
        let (faces, values) = cells.into_iter().unzip();
        Ok(FilteredComplex { d_max, universe: None, faces, values, facets })
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn universe(&self) -> Option<&Universe> {
        self.universe.as_ref()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self, i: usize) -> usize {
        self.faces[i].len() - 1
    }

    /// Faces present at threshold `t`, in canonical (dimension, lex) order.
    pub fn sublevel_faces(&self, t: f64) -> Vec<Face> {
        let mut out: Vec<Face> = self
            .faces
            .iter()
            .zip(&self.values)
            .take_while(|&(_, v)| *v <= t)
            .map(|(f, _)| f.clone())
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn monotone_violation(&self) -> Option<String> {
        for (i, fs) in self.facets.iter().enumerate() {
            for &j in fs {
                if self.values[j] > self.values[i] {
                    return Some(format!(
                        "cell {:?} at {} has facet {:?} at {}",
                        self.faces[i], self.values[i], self.faces[j], self.values[j]
                    ));
                }
            }
        }
        None
    }
}

fn filtered_from_complex(
    s: &crate::simplicial::SimplicialComplex,
    d_max: usize,
    cap: usize,
    value: impl Fn(&Face) -> f64,
) -> Result<FilteredComplex> {
    let faces = s.try_faces_up_to(d_max + 1, cap)?;
    let cells: Vec<(Face, f64)> = faces.into_iter().map(|f| (f.clone(), value(&f))).collect();
    let mut fc = FilteredComplex::from_faces(cells, d_max)?;
    fc.universe = Some(s.universe().clone());
    Ok(fc)
}

/// The box spanned by a face: per-axis sorted projections.
fn face_box(u: &Universe, face: &[u32]) -> Vec<Vec<u32>> {
    let m = u.axes.len();
    let mut parts = vec![Vec::new(); m];
    for &v in face {
        for (k, x) in u.unflat(v).into_iter().enumerate() {
            parts[k].push(x);
        }
    }
    for p in &mut parts {
        p.sort_unstable();
        p.dedup();
    }
    parts
}

/// Filtered cuboid complex: a simplex enters at the largest value over its
/// projection box.
pub fn filtered_cuboid(fr: &FilteredRelation, d_max: usize) -> Result<FilteredComplex> {
    try_filtered_cuboid(fr, d_max, usize::MAX)
}

pub fn try_filtered_cuboid(
    fr: &FilteredRelation,
    d_max: usize,
    cap: usize,
) -> Result<FilteredComplex> {
    let s = cuboid(&fr.support());
    let u = s.universe().clone();
    filtered_from_complex(&s, d_max, cap, |face| {
        face_box(&u, face)
            .into_iter()
            .multi_cartesian_product()
            .map(|t| fr.value(&t).expect("box of a cuboid face lies in the support"))
            .fold(f64::NEG_INFINITY, f64::max)
    })
}

/// Filtered multiway Dowker complex on the axes other than `k`: a simplex
/// enters at the smallest over witness atoms of the largest value over the
/// witnessed box.
pub fn filtered_multiway_dowker(
    fr: &FilteredRelation,
    k: usize,
    d_max: usize,
) -> Result<FilteredComplex> {
    try_filtered_multiway_dowker(fr, k, d_max, usize::MAX)
}

pub fn try_filtered_multiway_dowker(
    fr: &FilteredRelation,
    k: usize,
    d_max: usize,
    cap: usize,
) -> Result<FilteredComplex> {
    if fr.arity() < 2 {
        return Err(Error::Shape("multiway Dowker filtration needs arity at least 2".into()));
    }
    if k >= fr.arity() {
        return Err(Error::AxisOutOfRange { axis: k, arity: fr.arity() });
    }
    let s = multiway_dowker(&fr.support(), k)?;
    let u = s.universe().clone();
    let witnesses = fr.axes()[k].len() as u32;
    filtered_from_complex(&s, d_max, cap, |face| {
        let parts = face_box(&u, face);
        (0..witnesses)
            .filter_map(|a| {
                let mut worst = f64::NEG_INFINITY;
                for t in parts.iter().cloned().multi_cartesian_product() {
                    let mut full = t;
                    full.insert(k, a);
                    match fr.value(&full) {
                        Some(v) => worst = worst.max(v),
                        None => return None,
                    }
                }
                Some(worst)
            })
            .fold(f64::INFINITY, f64::min)
    })
}

/// Per-dimension multiset of (birth, death) pairs; `f64::INFINITY` marks an
/// essential class. Bars within a dimension are sorted by (birth, death).
#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceDiagram {
    pub bars: Vec<Vec<(f64, f64)>>,
}

impl PersistenceDiagram {
    pub fn dimensions(&self) -> usize {
        self.bars.len()
    }

    pub fn total_bars(&self) -> usize {
        self.bars.iter().map(Vec::len).sum()
    }

    pub fn infinite_bar_counts(&self) -> Vec<usize> {
        self.bars
            .iter()
            .map(|bs| bs.iter().filter(|b| b.1.is_infinite()).count())
            .collect()
    }
}

/// Standard column reduction. Bars are reported for dimensions 0..=d_max;
/// zero-length pairs are dropped.
pub fn persistence_diagram(fc: &FilteredComplex) -> Result<PersistenceDiagram> {
    if let Some(msg) = fc.monotone_violation() {
        return Err(Error::NotMonotone(msg));
    }
    let n = fc.len();
    let mut cols: Vec<Bits> = fc
        .facets
        .iter()
        .map(|fs| Bits::from_indices(n, fs))
        .collect();
    let mut pivot_owner: Vec<Option<usize>> = vec![None; n];
    let mut bars: Vec<Vec<(f64, f64)>> = vec![Vec::new(); fc.d_max + 1];
    let mut destroyed = vec![false; n];
    for j in 0..n {
        while let Some(low) = cols[j].last_one() {
            match pivot_owner[low] {
                Some(owner) => {
                    let (a, b) = cols.split_at_mut(j);
                    b[0].xor_assign(&a[owner]);
                }
                None => {
                    pivot_owner[low] = Some(j);
                    destroyed[low] = true;
                    let d = fc.dim(low);
                    let (birth, death) = (fc.values[low], fc.values[j]);
                    if death > birth && d <= fc.d_max {
                        bars[d].push((birth, death));
                    }
                    break;
                }
            }
        }
    }
    for j in 0..n {
        // A cell whose column vanishes creates a class; if nothing ever
        // destroys it, the class is essential.
        if cols[j].is_zero() && !destroyed[j] {
            let d = fc.dim(j);
            if d <= fc.d_max {
                bars[d].push((fc.values[j], f64::INFINITY));
            }
        }
    }
    for bs in &mut bars {
        bs.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.total_cmp(&b.1)));
    }
    Ok(PersistenceDiagram { bars })
}

/// Exact multiset equality per dimension (missing dimensions count as empty).
pub fn diagrams_equal(a: &PersistenceDiagram, b: &PersistenceDiagram) -> bool {
    let dims = a.bars.len().max(b.bars.len());
    let empty: Vec<(f64, f64)> = Vec::new();
    (0..dims).all(|d| {
        let x = a.bars.get(d).unwrap_or(&empty);
        let y = b.bars.get(d).unwrap_or(&empty);
        x.len() == y.len()
            && x.iter().zip(y).all(|(p, q)| {
                p.0.total_cmp(&q.0) == Ordering::Equal && p.1.total_cmp(&q.1) == Ordering::Equal
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::chains::betti;
    use crate::relation::{random_filtered_relation, FilteredRelation, IndexSet};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn filtered_hexagon() -> FilteredRelation {
        let h = catalog::hexagon();
        let entries = h.tuples().iter().map(|t| (t.clone(), 0.0)).collect();
        FilteredRelation::new(h.axes().to_vec(), entries).unwrap()
    }

    #[test]
    fn single_vertex_gives_one_infinite_bar() {
        let fr = FilteredRelation::new(
            vec![IndexSet::numbered("I", 1)],
            vec![(vec![0], 2.5)],
        )
        .unwrap();
        let fc = filtered_cuboid(&fr, 1).unwrap();
        let d = persistence_diagram(&fc).unwrap();
        assert_eq!(d.bars[0], vec![(2.5, f64::INFINITY)]);
        assert!(d.bars[1].is_empty());
    }

    #[test]
    fn two_vertices_joined_by_a_later_edge() {
        let fc = FilteredComplex::from_faces(
            vec![(vec![0], 0.0), (vec![1], 0.0), (vec![0, 1], 1.0)],
            1,
        )
        .unwrap();
        let d = persistence_diagram(&fc).unwrap();
        assert_eq!(d.bars[0], vec![(0.0, 1.0), (0.0, f64::INFINITY)]);
        assert!(d.bars[1].is_empty());
    }

    #[test]
    fn hexagon_at_level_zero_has_an_essential_cycle() {
        let fc = filtered_cuboid(&filtered_hexagon(), 2).unwrap();
        let d = persistence_diagram(&fc).unwrap();
        assert_eq!(d.bars[1], vec![(0.0, f64::INFINITY)]);
        assert_eq!(d.bars[0], vec![(0.0, f64::INFINITY)]);
    }

    #[test]
    fn constant_values_put_every_cell_at_one_level() {
        let fc = filtered_cuboid(&filtered_hexagon(), 2).unwrap();
        assert!(fc.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn absent_tuples_exclude_faces_entirely() {
        // 2×1 with one pair absent: no edge between the two vertices ever.
        let fr = FilteredRelation::new(
            vec![IndexSet::numbered("I", 2), IndexSet::numbered("J", 1)],
            vec![(vec![0, 0], 0.0)],
        )
        .unwrap();
        let fc = filtered_cuboid(&fr, 1).unwrap();
        assert_eq!(fc.faces(), &[vec![0]]);
    }

    #[test]
    fn cuboid_values_match_max_over_box_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let fr = random_filtered_relation(&[2, 2, 2], 0.7, &mut rng);
            let fc = filtered_cuboid(&fr, 2).unwrap();
            let u = fc.universe().unwrap();
            for (f, &v) in fc.faces().iter().zip(fc.values()) {
                let naive = face_box(u, f)
                    .into_iter()
                    .multi_cartesian_product()
                    .map(|t| fr.value(&t).unwrap())
                    .fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(v, naive);
            }
        }
    }

    #[test]
    fn binary_filtration_matches_the_classic_column_formula() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let fr = random_filtered_relation(&[4, 3], 0.6, &mut rng);
            let fc = filtered_multiway_dowker(&fr, 1, 1).unwrap();
            for (f, &v) in fc.faces().iter().zip(fc.values()) {
                // min over witness column j of max over σ×{j}.
                let naive = (0..3u32)
                    .filter_map(|j| {
                        f.iter()
                            .map(|&i| fr.value(&[i, j]))
                            .try_fold(f64::NEG_INFINITY, |acc, v| v.map(|v| acc.max(v)))
                    })
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(v, naive);
            }
        }
    }

    #[test]
    fn values_match_recompute_per_threshold() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..5 {
            let fr = random_filtered_relation(&[2, 3, 2], 0.6, &mut rng);
            for k in 0..3 {
                let fc = filtered_multiway_dowker(&fr, k, 2).unwrap();
                for t in fr.critical_values() {
                    let direct = multiway_dowker(&fr.sublevel(t), k).unwrap();
                    let direct_faces = direct.faces_up_to(3);
                    assert_eq!(fc.sublevel_faces(t), direct_faces, "axis {k}, t {t}");
                }
            }
        }
    }

    #[test]
    fn non_monotone_input_is_rejected() {
        let err = FilteredComplex::from_faces(
            vec![(vec![0], 1.0), (vec![1], 0.0), (vec![0, 1], 0.5)],
            1,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotMonotone(_)));
    }

    #[test]
    fn missing_facets_are_rejected() {
        let err =
            FilteredComplex::from_faces(vec![(vec![0], 0.0), (vec![0, 1], 1.0)], 1).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn diagram_equality_is_exact() {
        let fc = filtered_cuboid(&filtered_hexagon(), 2).unwrap();
        let d = persistence_diagram(&fc).unwrap();
        assert!(diagrams_equal(&d, &d));
        let mut shifted = d.clone();
        shifted.bars[1][0].0 += 1e-12;
        assert!(!diagrams_equal(&d, &shifted));
    }

    #[test]
    fn budget_is_enforced() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let fr = random_filtered_relation(&[3, 3], 1.0, &mut rng);
        let err = try_filtered_cuboid(&fr, 3, 10).unwrap_err();
        assert!(matches!(err, Error::CellBudget { cap: 10 }));
    }

    #[test]
    fn four_diagrams_agree_on_a_small_filtered_relation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..5 {
            let fr = random_filtered_relation(&[3, 3, 3], 0.5, &mut rng);
            let base =
                persistence_diagram(&filtered_cuboid(&fr, 2).unwrap()).unwrap();
            for k in 0..3 {
                let dk =
                    persistence_diagram(&filtered_multiway_dowker(&fr, k, 2).unwrap()).unwrap();
                assert!(diagrams_equal(&base, &dk), "axis {k}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn generated_filtrations_are_monotone(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let fr = random_filtered_relation(&[2, 3, 2], 0.6, &mut rng);
            let fc = filtered_cuboid(&fr, 2).unwrap();
            prop_assert!(fc.monotone_violation().is_none());
            for k in 0..3 {
                let fk = filtered_multiway_dowker(&fr, k, 2).unwrap();
                prop_assert!(fk.monotone_violation().is_none());
            }
        }

        #[test]
        fn sublevels_of_the_filtered_cuboid_are_cuboids_of_sublevels(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let fr = random_filtered_relation(&[2, 2, 3], 0.6, &mut rng);
            let fc = filtered_cuboid(&fr, 2).unwrap();
            for t in fr.critical_values() {
                let direct = cuboid(&fr.sublevel(t));
                prop_assert_eq!(fc.sublevel_faces(t), direct.faces_up_to(3));
            }
        }

        #[test]
        fn infinite_bars_count_final_betti(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let fr = random_filtered_relation(&[3, 3], 0.6, &mut rng);
            let fc = filtered_cuboid(&fr, 1).unwrap();
            let d = persistence_diagram(&fc).unwrap();
            let final_betti = if fr.is_empty() {
                vec![0, 0]
            } else {
                betti(&cuboid(&fr.support()).chain_complex(1), false)
            };
            prop_assert_eq!(d.infinite_bar_counts(), final_betti);
        }

        #[test]
        fn births_never_exceed_deaths(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let fr = random_filtered_relation(&[2, 2, 2], 0.7, &mut rng);
            let fc = filtered_multiway_dowker(&fr, 0, 2).unwrap();
            let d = persistence_diagram(&fc).unwrap();
            for bs in &d.bars {
                for &(b, dth) in bs {
                    prop_assert!(b < dth);
                }
            }
        }
    }
}
