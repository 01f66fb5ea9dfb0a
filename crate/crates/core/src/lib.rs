//! Multiway Dowker complexes over finite relations.
//!
//! A relation `R ⊆ I₁ × … × I_m` determines a family of complexes: the
//! relational product `dowker(R)` (a prod-complex of boxes), its Dowkerian
//! quotients, and their simplexifications (cuboid and multiway Dowker
//! complexes). This crate builds all of them, computes F₂ homology and
//! persistence, and mechanically checks the comparison maps between them
//! (quotient chain maps, mapping cones, the ternary atlas of complexes on a
//! three-axis relation).

pub mod catalog;
pub mod chains;
pub mod persistence;
pub mod prodcomplex;
pub mod relation;
pub mod simplicial;
pub mod ternary;

pub use chains::{betti, BettiVector, ChainComplex, ChainMap, F2Matrix};
pub use prodcomplex::{ProdComplex, ProdSimplex};
pub use relation::{FilteredRelation, IndexSet, Relation};
pub use simplicial::{SimplicialComplex, SimplicialMap, Universe};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("bad JSON relation: {0}")]
    Json(String),
    #[error("axis {axis} out of range for arity {arity}")]
    AxisOutOfRange { axis: usize, arity: usize },
    #[error("atom {atom} out of range on axis {axis} (size {size})")]
    AtomOutOfRange { axis: usize, atom: u32, size: usize },
    #[error("duplicate tuple {0}")]
    DuplicateTuple(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("cell budget exceeded (cap {cap})")]
    CellBudget { cap: usize },
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("not a chain map: boundary square fails in degree {degree}")]
    NotChainMap { degree: usize },
    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),
    #[error("filtration is not monotone: {0}")]
    NotMonotone(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("atlas check failed: {0}")]
    Atlas(String),
}

pub type Result<T> = std::result::Result<T, Error>;
