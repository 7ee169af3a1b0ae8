//! Symplectic incidence geometries over small prime fields.
//!
//! The crate builds the geometry of subspaces of a symplectic space whose
//! radical has dimension at most one, the residue geometry `Pi(p, H)` of a
//! point, the double cover of that residue in the `n = 6, q = 2` case, and
//! the slim matrix amalgam of `Sp(V)`. Each construction comes with the
//! checks needed to certify its claimed properties on concrete instances.

pub mod amalgam;
pub mod bitset;
pub mod cover;
pub mod field;
pub mod geometry;
pub mod groups;
pub mod homotopy;
pub mod linalg;
pub mod symplectic;

pub use bitset::BitSet;
pub use field::{FieldElement, PrimeField};
pub use linalg::{Matrix, Subspace, Vector};
pub use symplectic::{HyperbolicBasis, SymplecticSpace};

/// Errors raised by constructions whose preconditions fail.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unsupported field size {0}; expected one of 2, 3, 5, 7")]
    UnsupportedField(u8),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("radical of the ambient form has dimension {0}; at most 1 is allowed")]
    RadicalTooLarge(usize),
    #[error("form matrix is not alternating")]
    NotAlternating,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hyperbolic bases have incompatible profiles")]
    IncompatibleProfiles,
    #[error("object list is not a flag")]
    NotAFlag,
    #[error("geometry is disconnected")]
    Disconnected,
    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("generators do not generate the group")]
    NotGenerating,
    #[error("amalgam defect: {0}")]
    AmalgamDefect(String),
    #[error("cover defect: {0}")]
    CoverDefect(String),
    #[error("invalid subgroup indices: {0}")]
    InvalidIndices(String),
}

pub type Result<T> = std::result::Result<T, Error>;
