//! Built-in example relations used across tests and shipped as data files:
//! a six-tuple 2×2×2 relation whose relational product is a hexagon, the
//! cube's vertex–face incidence, the cube's flag relation, and a small
//! binary example. Cube combinatorics are derived by direct enumeration of
//! the cube's incidence poset.

use crate::relation::{IndexSet, Relation};

/// Six of the eight cells of a 2×2×2 array; the relational product is a
/// six-cycle (one box-edge per tuple pair that shares two coordinates).
pub fn hexagon() -> Relation {
    Relation::from_dims(
        &[2, 2, 2],
        vec![
            vec![0, 0, 0],
            vec![0, 0, 1],
            vec![0, 1, 1],
            vec![1, 0, 0],
            vec![1, 1, 0],
            vec![1, 1, 1],
        ],
    )
    .expect("hexagon tuples are in range")
}

/// Combinatorics of the 3-cube. Vertex `v` has coordinates
/// `(v&1, v>>1&1, v>>2&1)`; edges are vertex pairs differing in one
/// coordinate; faces fix one coordinate.
pub struct CubeModel {
    /// Vertex pairs, sorted; edge ids index this list.
    pub edges: Vec<[u32; 2]>,
    /// Vertex sets, sorted; face ids index this list (axis-major: x=0,
    /// x=1, y=0, y=1, z=0, z=1).
    pub faces: Vec<Vec<u32>>,
}

impl CubeModel {
    pub fn new() -> Self {
        let coord = |v: u32, axis: usize| v >> axis & 1;
        let mut edges = Vec::new();
        for u in 0..8u32 {
            for v in u + 1..8 {
                if (u ^ v).count_ones() == 1 {
                    edges.push([u, v]);
                }
            }
        }
        let mut faces = Vec::new();
        for axis in 0..3 {
            for value in 0..2 {
                faces.push((0..8).filter(|&v| coord(v, axis) == value).collect());
            }
        }
        assert_eq!(edges.len(), 12);
        assert_eq!(faces.len(), 6);
        CubeModel { edges, faces }
    }

    pub fn vertex_in_face(&self, v: u32, f: usize) -> bool {
        self.faces[f].contains(&v)
    }

    pub fn edge_in_face(&self, e: usize, f: usize) -> bool {
        self.edges[e].iter().all(|&v| self.vertex_in_face(v, f))
    }

    fn vertex_axis(&self, n: usize) -> IndexSet {
        IndexSet { label: "V".into(), elements: (0..n).map(|v| format!("v{v}")).collect() }
    }

    fn edge_axis(&self) -> IndexSet {
        IndexSet {
            label: "E".into(),
            elements: self.edges.iter().map(|[u, v]| format!("e{u}{v}")).collect(),
        }
    }

    fn face_axis(&self) -> IndexSet {
        let names = ["x0", "x1", "y0", "y1", "z0", "z1"];
        IndexSet { label: "F".into(), elements: names.iter().map(|s| s.to_string()).collect() }
    }
}

impl Default for CubeModel {
    fn default() -> Self {
        CubeModel::new()
    }
}

/// Vertex–face incidence of the cube: 24 pairs.
pub fn cube_vertex_face() -> Relation {
    let cube = CubeModel::new();
    let mut tuples = Vec::new();
    for v in 0..8u32 {
        for f in 0..6 {
            if cube.vertex_in_face(v, f) {
                tuples.push(vec![v, f as u32]);
            }
        }
    }
    Relation::new(vec![cube.vertex_axis(8), cube.face_axis()], tuples)
        .expect("cube incidences are in range")
}

/// Flags of the cube: triples (v, e, f) with v ∈ e ⊂ f; 48 of them.
pub fn cube_flag() -> Relation {
    let cube = CubeModel::new();
    let mut tuples = Vec::new();
    for (e, ends) in cube.edges.iter().enumerate() {
        for f in 0..6 {
            if cube.edge_in_face(e, f) {
                for &v in ends {
                    tuples.push(vec![v, e as u32, f as u32]);
                }
            }
        }
    }
    Relation::new(vec![cube.vertex_axis(8), cube.edge_axis(), cube.face_axis()], tuples)
        .expect("cube incidences are in range")
}

/// A 3×3 binary relation whose two Dowker complexes are both hollow
/// triangles (circles).
pub fn fig2() -> Relation {
    let axes = vec![
        IndexSet { label: "I".into(), elements: vec!["r".into(), "g".into(), "b".into()] },
        IndexSet { label: "J".into(), elements: vec!["x".into(), "y".into(), "z".into()] },
    ];
    Relation::new(
        axes,
        vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 1], vec![0, 2], vec![2, 2]],
    )
    .expect("fig2 tuples are in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_counts() {
        assert_eq!(cube_vertex_face().len(), 24);
        let flags = cube_flag();
        assert_eq!(flags.len(), 48);
        // Every flag projects to an incident (vertex, face) pair.
        let vf = flags.project(&[1]).unwrap();
        assert_eq!(vf.tuples(), cube_vertex_face().tuples());
    }

    #[test]
    fn cube_edge_face_incidences() {
        let cube = CubeModel::new();
        for e in 0..12 {
            assert_eq!((0..6).filter(|&f| cube.edge_in_face(e, f)).count(), 2);
        }
        for f in 0..6 {
            assert_eq!((0..12).filter(|&e| cube.edge_in_face(e, f)).count(), 4);
        }
    }

    #[test]
    fn hexagon_has_six_tuples() {
        assert_eq!(hexagon().len(), 6);
    }
}
